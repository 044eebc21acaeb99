#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tsarm {

using Date = std::chrono::year_month_day;

/// One raw telemetry tuple as delivered by a measuring point.
struct SensorRecord {
  std::string measuring_point = "n1";
  double light = 0.0;        // lux, [0, 100000]
  double temperature = 0.0;  // degrees Celsius, [-40, 80]
  double humidity = 0.0;     // percent RH, [0, 100]
  int moisture = 0;          // raw sensor units, [0, 2300]
  Date date{};
  int time = 0;  // seconds since midnight, [0, 86399]

  bool operator==(const SensorRecord&) const = default;
};

namespace sensor_range {
inline constexpr double kLightMin = 0.0, kLightMax = 100000.0;
inline constexpr double kTemperatureMin = -40.0, kTemperatureMax = 80.0;
inline constexpr double kHumidityMin = 0.0, kHumidityMax = 100.0;
inline constexpr int kMoistureMin = 0, kMoistureMax = 2300;
}  // namespace sensor_range

struct GenConfig {
  int days = 14;
  double cadence_seconds = 5.0;
  Date start_date = std::chrono::year{2022} / 9 / 15;
  std::uint64_t seed = 0;
  double drop_rate = 0.0;
  std::string measuring_point = "n1";
  // Hours of the day during which the light curve is positive.
  double sunrise_hour = 6.0;
  double daylength_hours = 12.0;
  // Soil is re-wetted every `irrigation_period_days` at `irrigation_hour`.
  int irrigation_period_days = 3;
  double irrigation_hour = 8.0;

  void validate() const;
};

/// Synthetic telemetry for `config.days` days, sorted by (date, time).
/// Identical configs produce identical sequences.
std::vector<SensorRecord> generate(const GenConfig& config);

/// True when `seconds_of_day` falls outside the configured daylight window.
bool is_night(const GenConfig& config, int seconds_of_day);

std::string format_date(const Date& date);
std::string format_time(int seconds_of_day);

inline constexpr const char* kSensorCsvHeader =
    "mp,light,temperature,humidity,moisture,date,time";

void write_csv(std::span<const SensorRecord> records,
               const std::filesystem::path& path);

}  // namespace tsarm
