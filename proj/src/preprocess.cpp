#include "tsarm/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "number_format.hpp"

namespace tsarm {

namespace {

constexpr int kSecondsPerDay = 86400;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && !text.empty();
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void PreprocessConfig::validate() const {
  if (frame_duration_seconds <= 0 || kSecondsPerDay % frame_duration_seconds != 0)
    throw std::invalid_argument("frame_duration_seconds: must be a positive divisor of 86400");
  if (K < 1) throw std::invalid_argument("K (classes): must be >= 1");
  if (min_records_per_frame < 0)
    throw std::invalid_argument("min_records_per_frame: must be >= 0");
}

Date parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_number(text.substr(0, 4), y) || !parse_number(text.substr(5, 2), m) ||
      !parse_number(text.substr(8, 2), d))
    throw std::invalid_argument("date '" + std::string(text) + "' is not YYYY-MM-DD");
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) throw std::invalid_argument("date '" + std::string(text) + "' does not exist");
  return date;
}

int timestamp_of(int hh, int mm, int ss) {
  if (hh < 0 || hh >= 24 || mm < 0 || mm >= 60 || ss < 0 || ss >= 60)
    throw std::invalid_argument("time component out of range");
  return hh * 3600 + mm * 60 + ss;
}

int timestamp_of(std::string_view hhmmss) {
  hhmmss = trim(hhmmss);
  int hh = 0, mm = 0, ss = 0;
  if (hhmmss.size() != 8 || hhmmss[2] != ':' || hhmmss[5] != ':' ||
      !parse_number(hhmmss.substr(0, 2), hh) || !parse_number(hhmmss.substr(3, 2), mm) ||
      !parse_number(hhmmss.substr(6, 2), ss))
    throw std::invalid_argument("time '" + std::string(hhmmss) + "' is not HH:MM:SS");
  try {
    return timestamp_of(hh, mm, ss);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("time '" + std::string(hhmmss) + "' is out of range");
  }
}

int class_of(int timestamp, int K) {
  if (timestamp < 0 || timestamp >= kSecondsPerDay) throw std::invalid_argument("timestamp out of range");
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  return static_cast<int>(static_cast<long long>(timestamp) * K / kSecondsPerDay) + 1;
}

int sequence_of(const Date& date, const Date& start) {
  const auto diff = (std::chrono::sys_days{date} - std::chrono::sys_days{start}).count();
  if (diff < 0)
    throw std::invalid_argument("date " + format_date(date) + " precedes start date " + format_date(start));
  return static_cast<int>(diff);
}

std::vector<SensorRecord> parse_sensor_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) fail_at(source, lineno, "missing header");
  if (trim(line) != kSensorCsvHeader)
    fail_at(source, lineno, std::string("malformed header, expected '") + kSensorCsvHeader + "'");

  std::vector<SensorRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 7)
      fail_at(source, lineno, "expected 7 fields, found " + std::to_string(fields.size()));
    SensorRecord r;
    r.measuring_point = std::string(trim(fields[0]));
    if (!parse_number(fields[1], r.light)) fail_at(source, lineno, "non-numeric light");
    if (!parse_number(fields[2], r.temperature)) fail_at(source, lineno, "non-numeric temperature");
    if (!parse_number(fields[3], r.humidity)) fail_at(source, lineno, "non-numeric humidity");
    if (!parse_number(fields[4], r.moisture)) fail_at(source, lineno, "non-numeric moisture");
    try {
      r.date = parse_date(fields[5]);
      r.time = timestamp_of(fields[6]);
    } catch (const std::invalid_argument& e) {
      fail_at(source, lineno, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<SensorRecord> parse_sensor_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_sensor_csv(in, path.string());
}

Transaction extract_features(std::span<const SensorRecord> frame, const PreprocessConfig& config,
                             const Date& start_date) {
  if (frame.empty()) throw std::invalid_argument("extract_features: empty frame");
  for (const auto& r : frame)
    if (r.date != frame.front().date) throw std::invalid_argument("extract_features: frame mixes dates");

  Transaction t;
  auto reduce = [&](Indicator indicator, auto&& get) {
    double lo = get(frame.front()), hi = lo, sum = 0.0;
    for (const auto& r : frame) {
      const double v = get(r);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    // Rounding in the sum can push a constant signal's mean one ulp
    // outside [min, max].
    const double avg = std::clamp(sum / static_cast<double>(frame.size()), lo, hi);
    t.features(feature_index(indicator, Modifier::kAvg)) = avg;
    t.features(feature_index(indicator, Modifier::kMax)) = hi;
    t.features(feature_index(indicator, Modifier::kMin)) = lo;
    t.features(feature_index(indicator, Modifier::kDif)) = get(frame.back()) - get(frame.front());
  };
  reduce(Indicator::kTemperature, [](const SensorRecord& r) { return r.temperature; });
  reduce(Indicator::kHumidity, [](const SensorRecord& r) { return r.humidity; });
  reduce(Indicator::kMoisture, [](const SensorRecord& r) { return static_cast<double>(r.moisture); });
  reduce(Indicator::kLight, [](const SensorRecord& r) { return r.light; });

  t.sequence = sequence_of(frame.front().date, start_date);
  t.klass = class_of(frame.front().time, config.K);
  return t;
}

TransactionDatabase build_database(std::span<const SensorRecord> records,
                                   const PreprocessConfig& config) {
  config.validate();
  if (records.empty()) throw std::invalid_argument("build_database: no records");

  const Date start = records.front().date;
  std::vector<Transaction> transactions;

  std::size_t begin = 0;
  long long prev_key = -1;
  auto key_of = [&](const SensorRecord& r) {
    return static_cast<long long>(sequence_of(r.date, start)) * (kSecondsPerDay / config.frame_duration_seconds) +
           r.time / config.frame_duration_seconds;
  };
  auto flush = [&](std::size_t end) {
    if (end > begin && static_cast<int>(end - begin) >= config.min_records_per_frame)
      transactions.push_back(extract_features(records.subspan(begin, end - begin), config, start));
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const long long key = key_of(records[i]);
    if (key < prev_key) throw std::invalid_argument("build_database: records are not chronologically ordered");
    if (key != prev_key) {
      flush(i);
      begin = i;
      prev_key = key;
    }
  }
  flush(records.size());
  if (transactions.empty()) throw std::invalid_argument("build_database: no frame has enough records");

  const auto n = static_cast<Eigen::Index>(transactions.size());
  MatrixX<double> features(n, kNumFeatures);
  Eigen::VectorXi sequence(n), klass(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& t = transactions[static_cast<std::size_t>(i)];
    features.row(i).head<kNumSensedFeatures>() = t.features.transpose();
    features(i, kSequenceFeature) = t.sequence;
    features(i, kClassFeature) = t.klass;
    sequence(i) = t.sequence;
    klass(i) = t.klass;
  }
  return TransactionDatabase(std::move(features), {kFeatureNames.begin(), kFeatureNames.end()},
                             std::move(sequence), std::move(klass), config.K);
}

TransactionDatabase::TransactionDatabase(MatrixX<double> features, std::vector<std::string> feature_names,
                                         Eigen::VectorXi sequence, Eigen::VectorXi klass, int K)
    : features_(std::move(features)),
      names_(std::move(feature_names)),
      sequence_(std::move(sequence)),
      klass_(std::move(klass)),
      K_(K) {
  if (features_.rows() == 0) throw std::invalid_argument("TransactionDatabase: no transactions");
  if (features_.cols() == 0) throw std::invalid_argument("TransactionDatabase: no features");
  if (static_cast<Eigen::Index>(names_.size()) != features_.cols())
    throw std::invalid_argument("TransactionDatabase: feature name count does not match columns");
  if (sequence_.size() != features_.rows() || klass_.size() != features_.rows())
    throw std::invalid_argument("TransactionDatabase: label vectors do not match rows");
  if (K_ < 1) throw std::invalid_argument("TransactionDatabase: K must be >= 1");
  if (!features_.allFinite()) throw std::invalid_argument("TransactionDatabase: non-finite feature value");
  if ((klass_.array() < 1).any() || (klass_.array() > K_).any())
    throw std::invalid_argument("TransactionDatabase: CLASS outside [1, K]");
  if ((sequence_.array() < 0).any()) throw std::invalid_argument("TransactionDatabase: negative SEQUENCE");

  domain_lo_ = features_.colwise().minCoeff().transpose();
  domain_hi_ = features_.colwise().maxCoeff().transpose();

  std::map<int, int> dense;
  for (Eigen::Index i = 0; i < sequence_.size(); ++i) dense.emplace(sequence_(i), 0);
  int next = 0;
  for (auto& [seq, idx] : dense) idx = next++;
  n_sequences_ = next;
  day_.resize(sequence_.size());
  for (Eigen::Index i = 0; i < sequence_.size(); ++i) day_(i) = dense.at(sequence_(i));
}

int TransactionDatabase::find_feature(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

void write_transactions_csv(const TransactionDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const auto& names = db.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  const bool has_labels = db.find_feature("SEQUENCE") >= 0 && db.find_feature("CLASS") >= 0;
  if (!has_labels) out << ",SEQUENCE,CLASS";
  out << '\n';
  for (Eigen::Index i = 0; i < db.rows(); ++i) {
    for (int j = 0; j < db.num_features(); ++j) out << (j ? "," : "") << detail::shortest(db.value(i, j));
    if (!has_labels) out << ',' << db.sequence(i) << ',' << db.klass(i);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_metadata(const TransactionDatabase& db, const std::filesystem::path& path) {
  nlohmann::ordered_json meta;
  meta["feature_names"] = db.feature_names();
  meta["domain_lo"] = std::vector<double>(db.domain_lo().begin(), db.domain_lo().end());
  meta["domain_hi"] = std::vector<double>(db.domain_hi().begin(), db.domain_hi().end());
  meta["K"] = db.K();
  meta["n_sequences"] = db.n_sequences();
  meta["n_transactions"] = db.rows();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << meta.dump(2) << '\n';
}

std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".meta.json");
}

TransactionDatabase read_database(const std::filesystem::path& csv_path,
                                  const std::filesystem::path& metadata_path) {
  std::ifstream meta_in(metadata_path, std::ios::binary);
  if (!meta_in) throw std::runtime_error("cannot open '" + metadata_path.string() + "'");
  int K = 0;
  try {
    K = nlohmann::json::parse(meta_in).at("K").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(metadata_path.string() + ": " + e.what());
  }

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + csv_path.string() + "'");
  const std::string source = csv_path.string();
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) fail_at(source, lineno, "missing header");
  std::vector<std::string> names;
  for (auto f : split(trim(line), ',')) names.emplace_back(trim(f));
  const auto seq_col = std::find(names.begin(), names.end(), "SEQUENCE") - names.begin();
  const auto cls_col = std::find(names.begin(), names.end(), "CLASS") - names.begin();
  if (seq_col == static_cast<long>(names.size()) || cls_col == static_cast<long>(names.size()))
    fail_at(source, lineno, "header lacks SEQUENCE or CLASS column");

  std::vector<double> values;
  std::vector<int> seqs, classes;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != names.size())
      fail_at(source, lineno, "expected " + std::to_string(names.size()) + " fields");
    for (std::size_t j = 0; j < fields.size(); ++j) {
      double v = 0.0;
      if (!parse_number(fields[j], v)) fail_at(source, lineno, "non-numeric value in column " + names[j]);
      values.push_back(v);
    }
    seqs.push_back(static_cast<int>(values[values.size() - names.size() + static_cast<std::size_t>(seq_col)]));
    classes.push_back(static_cast<int>(values[values.size() - names.size() + static_cast<std::size_t>(cls_col)]));
  }
  const auto n = static_cast<Eigen::Index>(seqs.size());
  const auto m = static_cast<Eigen::Index>(names.size());
  MatrixX<double> features =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(), n, m);
  return TransactionDatabase(std::move(features), std::move(names),
                             Eigen::Map<const Eigen::VectorXi>(seqs.data(), n),
                             Eigen::Map<const Eigen::VectorXi>(classes.data(), n), K);
}

}  // namespace tsarm
