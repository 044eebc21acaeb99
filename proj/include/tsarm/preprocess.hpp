#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsarm/datagen.hpp"
#include "tsarm/types.hpp"

namespace tsarm {

enum class Indicator { kTemperature = 0, kHumidity = 1, kMoisture = 2, kLight = 3 };
enum class Modifier { kAvg = 0, kMax = 1, kMin = 2, kDif = 3 };

inline constexpr int kNumSensedFeatures = 16;
inline constexpr int kSequenceFeature = 16;
inline constexpr int kClassFeature = 17;
inline constexpr int kNumFeatures = 18;

/// Column of a compound feature in the transaction layout.
constexpr int feature_index(Indicator indicator, Modifier modifier) {
  return 4 * static_cast<int>(indicator) + static_cast<int>(modifier);
}

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "AVG_TEMPERATURE", "MAX_TEMPERATURE", "MIN_TEMPERATURE", "DIF_TEMPERATURE",
    "AVG_HUMIDITY",    "MAX_HUMIDITY",    "MIN_HUMIDITY",    "DIF_HUMIDITY",
    "AVG_MOISTURE",    "MAX_MOISTURE",    "MIN_MOISTURE",    "DIF_MOISTURE",
    "AVG_LIGHT",       "MAX_LIGHT",       "MIN_LIGHT",       "DIF_LIGHT",
    "SEQUENCE",        "CLASS"};

struct PreprocessConfig {
  int frame_duration_seconds = 3600;
  int K = 24;  // time-of-day classes
  int min_records_per_frame = 1;

  void validate() const;
};

/// One time frame reduced to its compound features.
struct Transaction {
  Eigen::Matrix<double, kNumSensedFeatures, 1> features =
      Eigen::Matrix<double, kNumSensedFeatures, 1>::Zero();
  int sequence = 0;
  int klass = 1;

  double operator()(Indicator i, Modifier m) const { return features(feature_index(i, m)); }
};

/// Immutable N x M feature matrix with per-transaction day (SEQUENCE) and
/// time-of-day class (CLASS) labels and per-feature observed domains.
///
/// The layout produced by build_database() has M = 18 with SEQUENCE and CLASS
/// stored as the last two feature columns. Hand-built databases may use any M.
class TransactionDatabase {
 public:
  TransactionDatabase(MatrixX<double> features, std::vector<std::string> feature_names,
                      Eigen::VectorXi sequence, Eigen::VectorXi klass, int K);

  Eigen::Index rows() const { return features_.rows(); }
  Eigen::Index cols() const { return features_.cols(); }
  int num_features() const { return static_cast<int>(features_.cols()); }

  const MatrixX<double>& features() const { return features_; }
  double value(Eigen::Index row, int feature) const { return features_(row, feature); }
  const std::vector<std::string>& feature_names() const { return names_; }

  int sequence(Eigen::Index row) const { return sequence_(row); }
  int klass(Eigen::Index row) const { return klass_(row); }
  /// Dense index in [0, n_sequences) of the row's SEQUENCE value.
  int day(Eigen::Index row) const { return day_(row); }

  const VectorX<double>& domain_lo() const { return domain_lo_; }
  const VectorX<double>& domain_hi() const { return domain_hi_; }

  int K() const { return K_; }
  int n_sequences() const { return n_sequences_; }

  /// Column index of `name`, or -1.
  int find_feature(std::string_view name) const;

 private:
  MatrixX<double> features_;
  std::vector<std::string> names_;
  Eigen::VectorXi sequence_, klass_, day_;
  VectorX<double> domain_lo_, domain_hi_;
  int K_;
  int n_sequences_ = 0;
};

std::vector<SensorRecord> parse_sensor_csv(const std::filesystem::path& path);
std::vector<SensorRecord> parse_sensor_csv(std::istream& in, const std::string& source);

/// YYYY-MM-DD; throws std::invalid_argument on malformed or nonexistent dates.
Date parse_date(std::string_view text);

/// hh:mm:ss -> seconds since midnight. Throws on out-of-range components.
int timestamp_of(int hh, int mm, int ss);
int timestamp_of(std::string_view hhmmss);

/// floor(timestamp / 86400 * K) + 1, evaluated in exact integer arithmetic.
int class_of(int timestamp, int K);

/// Whole days from `start` to `date`. Throws if `date` precedes `start`.
int sequence_of(const Date& date, const Date& start);

Transaction extract_features(std::span<const SensorRecord> frame, const PreprocessConfig& config,
                             const Date& start_date);

/// Partitions chronologically ordered records into midnight-aligned frames and
/// reduces each frame to one transaction. SEQUENCE counts from the first
/// record's date.
TransactionDatabase build_database(std::span<const SensorRecord> records,
                                   const PreprocessConfig& config);

/// Transactions CSV (kFeatureNames column order) plus a JSON sidecar with domain
/// bounds, K and n_sequences.
void write_transactions_csv(const TransactionDatabase& db, const std::filesystem::path& path);
void write_metadata(const TransactionDatabase& db, const std::filesystem::path& path);
TransactionDatabase read_database(const std::filesystem::path& csv_path,
                                  const std::filesystem::path& metadata_path);

/// `<csv>.meta.json`
std::filesystem::path metadata_path_for(const std::filesystem::path& csv_path);

}  // namespace tsarm
