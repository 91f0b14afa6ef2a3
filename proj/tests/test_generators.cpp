#include <catch2/catch_amalgamated.hpp>

#include "trg/generators.hpp"
#include "trg/stream_algebra.hpp"
#include "trg/stream_io.hpp"

using namespace trg;

TEST_CASE("random waypoint generator") {
  RwpConfig base;
  base.nodes = 2;
  base.width = 10;
  base.height = 10;
  base.speed_min = 1;
  base.speed_max = 2;
  base.range = 20;  // beyond the area diagonal: always connected
  base.beacon_period = 1;
  base.duration = 50;
  base.warmup = 10;
  base.seed = 5;

  SECTION("nodes always in range give one full-length edge") {
    EventStream s = generate_rwp(base);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0] == Event{0, EventType::up, 0, 1});
    CHECK(s.events[1] == Event{50, EventType::down, 0, 1});
  }
  SECTION("nodes never in range give an empty stream") {
    RwpConfig cfg = base;
    cfg.width = 1000;
    cfg.height = 500;
    cfg.range = 1e-6;
    CHECK(generate_rwp(cfg).events.empty());
  }
  SECTION("output is regular, canonical, and deterministic per seed") {
    RwpConfig cfg;
    cfg.nodes = 20;
    cfg.width = 200;
    cfg.height = 100;
    cfg.speed_min = 3;
    cfg.speed_max = 7;
    cfg.range = 30;
    cfg.beacon_period = 2;
    cfg.duration = 300;
    cfg.warmup = 50;
    cfg.seed = 42;
    EventStream s = generate_rwp(cfg);
    CHECK_FALSE(s.events.empty());
    CHECK(validate_regularity(s).ok());
    CHECK(parse_stream(serialize_stream(s)) == s);
    CHECK(serialize_stream(generate_rwp(cfg)) == serialize_stream(s));
    cfg.seed = 43;
    CHECK(serialize_stream(generate_rwp(cfg)) != serialize_stream(s));

    // Beacon sampling: presence changes only at beacon instants.
    for (const Event& e : s.events) CHECK(e.t % cfg.beacon_period == 0);
  }
  SECTION("degenerate configs are rejected") {
    RwpConfig cfg = base;
    cfg.nodes = 0;
    CHECK_THROWS_AS(generate_rwp(cfg), StreamError);
    cfg = base;
    cfg.width = 0;
    CHECK_THROWS_AS(generate_rwp(cfg), StreamError);
    cfg = base;
    cfg.speed_min = 0;
    CHECK_THROWS_AS(generate_rwp(cfg), StreamError);
  }
}

TEST_CASE("markov edge generator") {
  SECTION("zero up-rate from the all-down start stays empty") {
    MarkovEdgeConfig cfg{4, 0.0, 0.5, 200, 1, 1, 9};
    CHECK(generate_markov(cfg).events.empty());
  }
  SECTION("up-rate one and down-rate zero fill everything after epoch 0") {
    MarkovEdgeConfig cfg{3, 1.0, 0.0, 50, 1, 1, 9};
    EventStream s = generate_markov(cfg);
    REQUIRE(s.events.size() == 6);  // three pairs, one interval each
    for (const auto& [key, ivs] : to_intervals(s)) {
      REQUIRE(ivs.size() == 1);
      CHECK(ivs[0].up == 1);
      CHECK(ivs[0].down == 50);
    }
  }
  SECTION("empirical up-fraction approaches the stationary value") {
    MarkovEdgeConfig cfg{6, 0.2, 0.3, 10000, 1, 1, 123};
    EventStream s = generate_markov(cfg);
    REQUIRE(validate_regularity(s).ok());
    double up_epochs = 0;
    for (const auto& [key, ivs] : to_intervals(s))
      for (const Interval& iv : ivs) up_epochs += double(iv.down - iv.up);
    double fraction = up_epochs / (15.0 * 10000.0);
    // Stationary value 0.4; 3 sigma with the binomial bound over 150k
    // dependent samples.
    double sigma = std::sqrt(0.4 * 0.6 / (15.0 * 10000.0));
    CHECK(fraction == Catch::Approx(0.4).margin(3 * sigma));
  }
  SECTION("deterministic per seed") {
    MarkovEdgeConfig cfg{5, 0.3, 0.4, 500, 1, 1, 77};
    EventStream a = generate_markov(cfg);
    EventStream b = generate_markov(cfg);
    CHECK(serialize_stream(a) == serialize_stream(b));
    CHECK(validate_regularity(a).ok());
  }
  SECTION("rates outside [0,1] are rejected") {
    MarkovEdgeConfig cfg{4, 1.5, 0.5, 100, 1, 1, 1};
    CHECK_THROWS_AS(generate_markov(cfg), StreamError);
  }
}

TEST_CASE("key=value config parsing") {
  auto kv = parse_kv_config("nodes=20\n# comment\nup_rate=0.25\n");
  CHECK(kv.at("nodes") == "20");
  CHECK(kv.at("up_rate") == "0.25");
  CHECK_THROWS_AS(parse_kv_config("bad line\n"), ParseError);
}
