#include "tsarm/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "number_format.hpp"
#include "tsarm/random.hpp"

namespace tsarm {

namespace {

constexpr double kSecondsPerDay = 86400.0;

// Nearest double to the value rounded at one decimal place.
double round_tenth(double value) { return std::round(value * 10.0) / 10.0; }

// Per-day weather drawn once so that all records of a day share it.
struct DayWeather {
  double light_peak;       // lux at solar noon
  double temperature_base;
  double humidity_offset;
};

}  // namespace

void GenConfig::validate() const {
  if (days < 1) throw std::invalid_argument("days: must be >= 1");
  if (!(cadence_seconds > 0.0)) throw std::invalid_argument("cadence_seconds: must be > 0");
  if (!(drop_rate >= 0.0 && drop_rate < 1.0))
    throw std::invalid_argument("drop_rate: must lie in [0, 1)");
  if (!start_date.ok()) throw std::invalid_argument("start_date: not a valid calendar date");
  if (!(daylength_hours > 0.0 && daylength_hours <= 24.0))
    throw std::invalid_argument("daylength_hours: must lie in (0, 24]");
  if (!(sunrise_hour >= 0.0 && sunrise_hour + daylength_hours <= 24.0))
    throw std::invalid_argument("sunrise_hour: daylight window must fit inside one day");
  if (irrigation_period_days < 1)
    throw std::invalid_argument("irrigation_period_days: must be >= 1");
}

bool is_night(const GenConfig& config, int seconds_of_day) {
  const double hours = seconds_of_day / 3600.0;
  return hours <= config.sunrise_hour ||
         hours >= config.sunrise_hour + config.daylength_hours;
}

std::vector<SensorRecord> generate(const GenConfig& config) {
  config.validate();
  using namespace sensor_range;

  Rng rng(config.seed);

  std::vector<DayWeather> weather(static_cast<std::size_t>(config.days));
  for (auto& day : weather) {
    day.light_peak = rng.uniform(20000.0, 65000.0);
    day.temperature_base = rng.uniform(19.0, 25.0);
    day.humidity_offset = rng.uniform(-5.0, 5.0);
  }

  constexpr double kWet = 2100.0, kDry = 900.0, kDecaySeconds = 2.0 * kSecondsPerDay;
  const double irrigation_period = config.irrigation_period_days * kSecondsPerDay;
  const double irrigation_offset = config.irrigation_hour * 3600.0;

  const auto total = static_cast<std::int64_t>(
      std::floor(config.days * kSecondsPerDay / config.cadence_seconds));
  const std::chrono::sys_days start{config.start_date};

  std::vector<SensorRecord> records;
  records.reserve(static_cast<std::size_t>(total));
  for (std::int64_t k = 0; k < total; ++k) {
    const double elapsed = static_cast<double>(k) * config.cadence_seconds;
    const auto day = static_cast<std::int64_t>(std::floor(elapsed / kSecondsPerDay));
    const int tod = static_cast<int>(std::floor(elapsed - static_cast<double>(day) * kSecondsPerDay));
    const double hours = tod / 3600.0;
    const DayWeather& w = weather[static_cast<std::size_t>(day)];

    // Draw every variate before the drop decision so dropping records
    // does not shift the stream of the records that survive.
    const double light_jitter = rng.uniform(-0.05, 0.05);
    const double temperature_noise = rng.uniform(-0.5, 0.5);
    const double humidity_noise = rng.uniform(-2.0, 2.0);
    const double moisture_noise = rng.uniform(-5.0, 5.0);
    const bool dropped = config.drop_rate > 0.0 && rng.bernoulli(config.drop_rate);
    if (dropped) continue;

    SensorRecord r;
    r.measuring_point = config.measuring_point;
    r.date = std::chrono::year_month_day{start + std::chrono::days{day}};
    r.time = tod;

    if (!is_night(config, tod)) {
      const double phase = std::numbers::pi * (hours - config.sunrise_hour) / config.daylength_hours;
      const double clean = std::max(0.0, w.light_peak * std::sin(phase));
      r.light = std::clamp(std::round(clean * (1.0 + light_jitter)), kLightMin, kLightMax);
    }

    // Warmest mid-afternoon, coldest before dawn.
    const double diurnal = 4.0 * std::sin(2.0 * std::numbers::pi * (hours - 9.0) / 24.0);
    r.temperature = std::clamp(round_tenth(w.temperature_base + diurnal + temperature_noise),
                               kTemperatureMin, kTemperatureMax);
    r.humidity = std::clamp(round_tenth(60.0 + w.humidity_offset - 2.5 * diurnal + humidity_noise),
                            kHumidityMin, kHumidityMax);

    // Time since the latest irrigation event at or before now; the series
    // starts as if one happened a full period before the first event.
    double since = std::fmod(elapsed - irrigation_offset, irrigation_period);
    if (since < 0.0) since += irrigation_period;
    const double moisture = kDry + (kWet - kDry) * std::exp(-since / kDecaySeconds);
    r.moisture = std::clamp(static_cast<int>(std::lround(moisture + moisture_noise)),
                            kMoistureMin, kMoistureMax);

    records.push_back(std::move(r));
  }
  return records;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::string format_time(int seconds_of_day) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds_of_day / 3600,
                (seconds_of_day / 60) % 60, seconds_of_day % 60);
  return buf;
}

void write_csv(std::span<const SensorRecord> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kSensorCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.measuring_point << ',' << detail::shortest(r.light) << ','
        << detail::shortest(r.temperature) << ',' << detail::shortest(r.humidity) << ','
        << r.moisture << ',' << format_date(r.date) << ',' << format_time(r.time) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace tsarm
