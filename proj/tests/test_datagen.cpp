#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tsarm/datagen.hpp"
#include "tsarm/preprocess.hpp"

using namespace tsarm;
using namespace tsarm::testing;

TEST_SUITE("datagen") {
  TEST_CASE("one day at 5 s cadence has 17280 records in (date, time) order") {
    GenConfig g;
    g.days = 1;
    const auto records = generate(g);
    CHECK(records.size() == 17280);
    for (std::size_t i = 1; i < records.size(); ++i)
      REQUIRE(std::pair(std::chrono::sys_days{records[i - 1].date}, records[i - 1].time) <
              std::pair(std::chrono::sys_days{records[i].date}, records[i].time));
  }

  TEST_CASE("record count follows floor(days * 86400 / cadence)") {
    GenConfig g;
    g.days = 2;
    g.cadence_seconds = 7.0;
    CHECK(generate(g).size() == static_cast<std::size_t>(2 * 86400 / 7));
  }

  TEST_CASE("fourteen days with ~3.3% loss is close to the collected 233,980 records") {
    GenConfig g;
    g.days = 14;
    g.drop_rate = 0.033;
    g.seed = 42;
    const auto n = static_cast<double>(generate(g).size());
    CHECK(std::abs(n - 233980.0) / 233980.0 < 0.005);
  }

  TEST_CASE("identical seeds give identical output, different seeds differ") {
    GenConfig g;
    g.days = 2;
    g.seed = 99;
    g.drop_rate = 0.01;
    CHECK(generate(g) == generate(g));
    auto other = g;
    other.seed = 100;
    CHECK_FALSE(generate(g) == generate(other));
  }

  TEST_CASE("values stay inside sensor ranges; nights are dark") {
    using namespace sensor_range;
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 12345ull}) {
      GenConfig g;
      g.days = 4;
      g.seed = seed;
      g.drop_rate = 0.05;
      bool saw_daylight = false;
      for (const auto& r : generate(g)) {
        REQUIRE(r.light >= kLightMin);
        REQUIRE(r.light <= kLightMax);
        REQUIRE(r.temperature >= kTemperatureMin);
        REQUIRE(r.temperature <= kTemperatureMax);
        REQUIRE(r.humidity >= kHumidityMin);
        REQUIRE(r.humidity <= kHumidityMax);
        REQUIRE(r.moisture >= kMoistureMin);
        REQUIRE(r.moisture <= kMoistureMax);
        if (is_night(g, r.time)) REQUIRE(r.light == 0.0);
        saw_daylight = saw_daylight || r.light > 1000.0;
      }
      CHECK(saw_daylight);
    }
  }

  TEST_CASE("moisture decays between irrigation events and jumps at them") {
    GenConfig g;
    g.days = 4;
    g.irrigation_period_days = 3;
    const auto records = generate(g);
    const auto at = [&](int day, int hour) {
      return records[static_cast<std::size_t>(day * 17280 + hour * 720)].moisture;
    };
    CHECK(at(1, 8) > at(2, 8));  // decaying
    CHECK(at(3, 9) > at(3, 7) + 300);  // re-wetted at 08:00 on day 3
  }

  TEST_CASE("config validation") {
    GenConfig g;
    g.days = 0;
    CHECK_THROWS_WITH_AS(generate(g), doctest::Contains("days"), std::invalid_argument);
    g = {};
    g.cadence_seconds = 0;
    CHECK_THROWS_AS(generate(g), std::invalid_argument);
    g = {};
    g.drop_rate = 1.0;
    CHECK_THROWS_AS(generate(g), std::invalid_argument);
  }

  TEST_CASE("write_csv") {
    TempDir dir;
    write_csv({}, dir / "empty.csv");
    CHECK(slurp(dir / "empty.csv") == "mp,light,temperature,humidity,moisture,date,time\n");

    SensorRecord r;
    r.light = 12.5;
    r.temperature = 24.7;
    r.humidity = 57.9;
    r.moisture = 1995;
    r.date = std::chrono::year{2022} / 9 / 15;
    r.time = 4;
    write_csv(std::vector{r}, dir / "one.csv");
    CHECK(slurp(dir / "one.csv") ==
          "mp,light,temperature,humidity,moisture,date,time\nn1,12.5,24.7,57.9,1995,2022-09-15,00:00:04\n");

    CHECK_THROWS_AS(write_csv({}, dir / "missing" / "x.csv"), std::runtime_error);
  }

  TEST_CASE("write then parse is the identity") {
    GenConfig g;
    g.days = 2;
    g.seed = 17;
    g.drop_rate = 0.02;
    const auto records = generate(g);
    TempDir dir;
    write_csv(records, dir / "raw.csv");
    CHECK(parse_sensor_csv(dir / "raw.csv") == records);
  }
}
