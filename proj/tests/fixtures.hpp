#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "tsarm/measures.hpp"

namespace tsarm::testing {

/// Five days x 24 hourly classes (120 transactions) with columns
/// MIN_TEMPERATURE, MAX_TEMPERATURE, AVG_HUMIDITY.
///  - days 1 and 3, class 13: MIN 18.5, MAX 19.5 (inside [18, 20])
///  - day 2, class 15: MIN 18.5, MAX 19.5 (outside the [12, 14] window)
///  - day 4, class 12: MIN 19.0, MAX 22.0 (only MIN inside [18, 20])
///  - everything else: MIN 24.0, MAX 26.0; domain spans [10, 30]
inline TransactionDatabase worked_example_db() {
  MatrixX<double> f(120, 3);
  Eigen::VectorXi seq(120), cls(120);
  for (int day = 0; day < 5; ++day)
    for (int c = 1; c <= 24; ++c) {
      const int i = day * 24 + (c - 1);
      seq(i) = day;
      cls(i) = c;
      f(i, 0) = 24.0;
      f(i, 1) = 26.0;
      f(i, 2) = 50.0 + c;
      if ((day == 1 || day == 3) && c == 13) f(i, 0) = 18.5, f(i, 1) = 19.5;
      if (day == 2 && c == 15) f(i, 0) = 18.5, f(i, 1) = 19.5;
      if (day == 4 && c == 12) f(i, 0) = 19.0, f(i, 1) = 22.0;
    }
  // pin both temperature domains to [10, 30], away from the window
  f(0, 0) = 10.0, f(1, 0) = 30.0;
  f(0, 1) = 10.0, f(119, 1) = 30.0;
  return TransactionDatabase(f, {"MIN_TEMPERATURE", "MAX_TEMPERATURE", "AVG_HUMIDITY"}, seq, cls, 24);
}

/// X = {MIN_TEMPERATURE in [18, 20]}, Y = {MAX_TEMPERATURE in [18, 20]}, window [12, 14].
inline Rule worked_example_rule() {
  Rule r;
  r.antecedent = {{0, 18.0, 20.0}};
  r.consequent = {{1, 18.0, 20.0}};
  r.window = {12, 14};
  return r;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("tsarm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tsarm::testing
