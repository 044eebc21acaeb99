#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "number_format.hpp"
#include "tsarm/miner.hpp"

namespace tsarm {

namespace {

std::string fixed(double v, int places = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

const std::string& name_of(int feature, const std::vector<std::string>& names) {
  if (feature < 0 || feature >= static_cast<int>(names.size()))
    throw std::out_of_range("feature index " + std::to_string(feature) + " has no name");
  return names[static_cast<std::size_t>(feature)];
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return !text.empty() && ec == std::errc{} && ptr == end;
}

std::vector<AttributeCondition> parse_conditions(const std::string& text, const std::vector<std::string>& names) {
  std::vector<AttributeCondition> out;
  for (const auto& item : split(text, '&')) {
    const auto open = item.find('['), semi = item.find(';'), close = item.find(']');
    if (open == std::string::npos || semi == std::string::npos || close != item.size() - 1 || semi < open)
      throw std::invalid_argument("malformed condition '" + item + "'");
    const std::string name = item.substr(0, open);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::invalid_argument("unknown feature '" + name + "'");
    AttributeCondition c;
    c.feature = static_cast<int>(it - names.begin());
    if (!parse_number(item.substr(open + 1, semi - open - 1), c.lo) ||
        !parse_number(item.substr(semi + 1, close - semi - 1), c.hi))
      throw std::invalid_argument("non-numeric bound in '" + item + "'");
    out.push_back(c);
  }
  if (out.empty()) throw std::invalid_argument("empty condition list");
  return out;
}

}  // namespace

std::string format_conditions(std::span<const AttributeCondition> conditions, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    const auto& c = conditions[i];
    if (i) out += '&';
    out += name_of(c.feature, names) + '[' + detail::shortest(c.lo) + ';' + detail::shortest(c.hi) + ']';
  }
  return out;
}

std::string format_rule(const Rule& rule, const RuleMetrics& m, const std::vector<std::string>& names) {
  auto side = [&](const std::vector<AttributeCondition>& conditions) {
    std::string out;
    for (std::size_t i = 0; i < conditions.size(); ++i) {
      const auto& c = conditions[i];
      if (i) out += " AND ";
      out += name_of(c.feature, names) + " ∈ [" + fixed(c.lo) + ", " + fixed(c.hi) + "]";
    }
    return out;
  };
  return "IF " + side(rule.antecedent) + " THEN " + side(rule.consequent) + " @ Δt=[" +
         std::to_string(rule.window.t1) + "," + std::to_string(rule.window.t2) + "] | supp=" + fixed(m.support) +
         " conf=" + fixed(m.confidence) + " incl=" + fixed(m.inclusion) + " ampl=" + fixed(m.amplitude) +
         " fit=" + fixed(m.fitness);
}

std::vector<RuleRow> rule_rows(const MiningResult& result) {
  std::vector<RuleRow> rows;
  for (const auto& run : result.runs)
    for (const auto& [key, entry] : run.archive.by_key())
      rows.push_back({std::string(algorithm_name(result.algorithm)), run.run, entry});
  return rows;
}

void write_rules_csv(std::span<const RuleRow> rows, const std::vector<std::string>& names,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kRulesCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& r = row.entry.rule;
    const auto& m = row.entry.metrics;
    out << row.algorithm << ',' << row.run << ',' << format_conditions(r.antecedent, names) << ','
        << format_conditions(r.consequent, names) << ',' << r.window.t1 << ',' << r.window.t2 << ','
        << detail::shortest(m.support) << ',' << detail::shortest(m.confidence) << ','
        << detail::shortest(m.inclusion) << ',' << detail::shortest(m.amplitude) << ','
        << detail::shortest(m.fitness) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<RuleRow> read_rules_csv(const std::filesystem::path& path, const std::vector<std::string>& names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 1;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(in, line)) fail("missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRulesCsvHeader) fail(std::string("malformed header, expected '") + kRulesCsvHeader + "'");

  std::vector<RuleRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) fail("expected 11 fields, found " + std::to_string(f.size()));
    RuleRow row;
    row.algorithm = f[0];
    auto& r = row.entry.rule;
    auto& m = row.entry.metrics;
    try {
      r.antecedent = parse_conditions(f[2], names);
      r.consequent = parse_conditions(f[3], names);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (!parse_number(f[1], row.run) || !parse_number(f[4], r.window.t1) || !parse_number(f[5], r.window.t2) ||
        !parse_number(f[6], m.support) || !parse_number(f[7], m.confidence) || !parse_number(f[8], m.inclusion) ||
        !parse_number(f[9], m.amplitude) || !parse_number(f[10], m.fitness))
      fail("non-numeric field");
    if (r.window.t1 < 1 || r.window.t1 > r.window.t2) fail("invalid window");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_report_table(std::span<const LabeledReport> rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %6s %6s %6s %6s %7s %7s %10s %10s\n", "Algorithm", "supp", "conf", "incl",
                "ampl", "antlen", "conlen", "Numrules", "Intervals");
  out += buf;
  for (const auto& [label, r] : rows) {
    std::snprintf(buf, sizeof buf, "%-10s %6.2f %6.2f %6.2f %6.2f %7.2f %7.2f %10.1f %9.0f%%\n", label.c_str(),
                  r.mean_support, r.mean_confidence, r.mean_inclusion, r.mean_amplitude, r.mean_antlen,
                  r.mean_conlen, r.numrules, 100.0 * r.interval_coverage);
    out += buf;
  }
  return out;
}

std::string format_report_csv(std::span<const LabeledReport> rows) {
  std::string out = "label,supp,conf,incl,ampl,antlen,conlen,numrules,intervals\n";
  for (const auto& [label, r] : rows)
    out += label + ',' + detail::shortest(r.mean_support) + ',' + detail::shortest(r.mean_confidence) + ',' +
           detail::shortest(r.mean_inclusion) + ',' + detail::shortest(r.mean_amplitude) + ',' +
           detail::shortest(r.mean_antlen) + ',' + detail::shortest(r.mean_conlen) + ',' +
           detail::shortest(r.numrules) + ',' + detail::shortest(r.interval_coverage) + '\n';
  return out;
}

}  // namespace tsarm
