#include <catch2/catch_amalgamated.hpp>

#include "support/random_streams.hpp"
#include "trg/stream.hpp"
#include "trg/stream_algebra.hpp"
#include "trg/stream_io.hpp"

using namespace trg;

namespace {

EventStream reach_stream(VertexId n, Time horizon, Time tau,
                         std::vector<Event> events) {
  EventStream s;
  s.kind = StreamKind::reach;
  s.eta = 1;
  s.tau = tau;
  s.nodes = n;
  s.horizon = horizon;
  s.events = std::move(events);
  return s;
}

}  // namespace

TEST_CASE("parse minimal contact stream") {
  std::string text =
      "trg-stream v1\n"
      "kind contact\n"
      "eta 1\n"
      "tau 1\n"
      "nodes 2\n"
      "horizon 5\n"
      "0 UP 0 1\n"
      "3 DOWN 0 1\n";
  EventStream s = parse_stream(text);
  CHECK(s.kind == StreamKind::contact);
  CHECK(s.eta == 1);
  CHECK(s.tau == 1);
  CHECK(s.nodes == 2);
  CHECK(s.horizon == 5);
  REQUIRE(s.events.size() == 2);
  CHECK(s.events[0] == Event{0, EventType::up, 0, 1});
  CHECK(s.events[1] == Event{3, EventType::down, 0, 1});

  // Edge present at instants 0..2 and the open epochs between, absent at 3.
  CHECK(snapshot_at(s, {0, false}).arcs.size() == 1);
  CHECK(snapshot_at(s, {2, true}).arcs.size() == 1);
  CHECK(snapshot_at(s, {3, false}).arcs.empty());

  CHECK(serialize_stream(s) == text);
  CHECK(parse_stream(serialize_stream(s)) == s);
}

TEST_CASE("parse errors carry line numbers") {
  std::string header =
      "trg-stream v1\nkind contact\neta 1\ntau 1\nnodes 2\nhorizon 5\n";

  SECTION("down without up") {
    try {
      parse_stream(header + "3 DOWN 0 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == "DownWithoutUp");
      CHECK(e.line() == 7);
    }
  }
  SECTION("unsorted events") {
    try {
      parse_stream(header + "2 UP 0 1\n3 DOWN 0 1\n1 UP 0 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == "UnsortedEvents");
      CHECK(e.line() == 9);
    }
  }
  SECTION("vertex out of range") {
    CHECK_THROWS_MATCHES(parse_stream(header + "0 UP 0 2\n"), ParseError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("line 7")));
  }
  SECTION("non-integer time") {
    try {
      parse_stream(header + "x UP 0 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == "NonIntegerValue");
    }
  }
  SECTION("malformed header") {
    CHECK_THROWS_AS(parse_stream("trg-stream v2\n"), ParseError);
    CHECK_THROWS_AS(parse_stream(header.substr(0, header.size() - 10)),
                    ParseError);
  }
  SECTION("contact requires u < v") {
    CHECK_THROWS_AS(parse_stream(header + "0 UP 1 0\n1 DOWN 1 0\n"),
                    ParseError);
  }
  SECTION("zero-length contact interval") {
    try {
      parse_stream(header + "2 UP 0 1\n2 DOWN 0 1\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.code() == "ZeroLengthContact");
    }
  }
  SECTION("unclosed interval") {
    CHECK_THROWS_AS(parse_stream(header + "0 UP 0 1\n"), ParseError);
  }
}

TEST_CASE("import merges touching intervals and rejects bad ones") {
  SECTION("single interval, half-open semantics") {
    EventStream s = import_contact_trace({{0, 1, 10, 13}}, 1, 1, 2);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0].t == 10);
    CHECK(s.events[1].t == 13);
    CHECK(snapshot_at(s, {10, false}).arcs.size() == 1);
    CHECK(snapshot_at(s, {11, false}).arcs.size() == 1);
    CHECK(snapshot_at(s, {12, false}).arcs.size() == 1);
    CHECK(snapshot_at(s, {12, true}).arcs.size() == 1);
    CHECK(snapshot_at(s, {13, false}).arcs.empty());
  }
  SECTION("touching intervals merge") {
    EventStream s = import_contact_trace({{0, 1, 0, 2}, {0, 1, 2, 4}}, 1, 1, 2);
    REQUIRE(s.events.size() == 2);
    CHECK(s.events[0] == Event{0, EventType::up, 0, 1});
    CHECK(s.events[1] == Event{4, EventType::down, 0, 1});
  }
  SECTION("zero-length interval rejected") {
    CHECK_THROWS_MATCHES(import_contact_trace({{0, 1, 5, 5}}, 1, 1, 2),
                         StreamError,
                         Catch::Matchers::Predicate<StreamError>(
                             [](const StreamError& e) {
                               return e.code() == "ZeroLengthContact";
                             }));
  }
  SECTION("overlapping intervals rejected") {
    CHECK_THROWS_AS(import_contact_trace({{0, 1, 0, 3}, {0, 1, 2, 5}}, 1, 1, 2),
                    StreamError);
  }
  SECTION("times scaled by eta") {
    EventStream s = import_contact_trace({{0, 1, 20, 60}}, 20, 1, 2);
    CHECK(s.events[0].t == 1);
    CHECK(s.events[1].t == 3);
    CHECK(s.horizon == 3);
    CHECK_THROWS_AS(import_contact_trace({{0, 1, 15, 60}}, 20, 1, 2),
                    StreamError);
  }
}

TEST_CASE("csv interval import") {
  auto intervals = parse_interval_csv("u,v,up,down\n0,1,10,13\n2,3,0,5\n");
  REQUIRE(intervals.size() == 2);
  CHECK(intervals[1].v == 3);
  CHECK_THROWS_AS(parse_interval_csv("a,b\n"), ParseError);
  CHECK_THROWS_AS(parse_interval_csv("u,v,up,down\n0,1,x,13\n"), ParseError);
}

TEST_CASE("ephemeral reach arcs") {
  EventStream s = reach_stream(2, 6, 1,
                               {{4, EventType::up, 0, 1},
                                {4, EventType::down, 0, 1}});
  CHECK(validate_regularity(s).ok());
  CHECK(snapshot_at(s, {4, false}).arcs.size() == 1);
  CHECK(snapshot_at(s, {4, true}).arcs.empty());
  CHECK(snapshot_at(s, {3, true}).arcs.empty());
}

TEST_CASE("snapshot of empty stream") {
  EventStream s;
  s.nodes = 3;
  s.horizon = 4;
  for (Time a = 0; a <= 4; ++a) CHECK(snapshot_at(s, {a, false}).arcs.empty());
  CHECK_THROWS_AS(snapshot_at(s, {5, false}), StreamError);
  CHECK_THROWS_AS(snapshot_at(s, {4, true}), StreamError);
}

TEST_CASE("stream set algebra") {
  EventStream a = reach_stream(3, 6, 1,
                               {{0, EventType::up, 0, 1},
                                {2, EventType::down, 0, 1}});
  EventStream b = reach_stream(3, 6, 1,
                               {{2, EventType::up, 0, 1},
                                {5, EventType::down, 0, 1}});
  EventStream empty = reach_stream(3, 6, 1, {});

  SECTION("lattice identities") {
    CHECK(stream_union(a, empty) == a);
    CHECK(stream_intersection(a, a) == a);
    CHECK(stream_subset(empty, a));
    CHECK(stream_subset(a, stream_union(a, b)));
    CHECK(stream_subset(stream_intersection(a, b), a));
  }
  SECTION("interval algebra on touching closed intervals") {
    EventStream u = stream_union(a, b);
    REQUIRE(u.events.size() == 2);
    CHECK(u.events[0].t == 0);
    CHECK(u.events[1].t == 5);
    EventStream i = stream_intersection(a, b);
    REQUIRE(i.events.size() == 2);
    CHECK(i.events[0] == Event{2, EventType::up, 0, 1});
    CHECK(i.events[1] == Event{2, EventType::down, 0, 1});
  }
  SECTION("metadata mismatch rejected") {
    EventStream other = a;
    other.nodes = 4;
    CHECK_THROWS_AS(stream_union(a, other), StreamError);
  }
  SECTION("two ephemerals versus a closed interval") {
    EventStream two = reach_stream(3, 6, 1,
                                   {{3, EventType::up, 0, 1},
                                    {3, EventType::down, 0, 1},
                                    {4, EventType::up, 0, 1},
                                    {4, EventType::down, 0, 1}});
    EventStream closed = reach_stream(3, 6, 1,
                                      {{3, EventType::up, 0, 1},
                                       {4, EventType::down, 0, 1}});
    CHECK(stream_subset(two, closed));
    CHECK_FALSE(stream_subset(closed, two));
    // Cross-check via grid snapshots at {3, 3.5, 4}.
    for (SamplePoint p : {SamplePoint{3, false}, SamplePoint{3, true},
                          SamplePoint{4, false}}) {
      auto at = [&](const EventStream& s) { return snapshot_at(s, p).arcs; };
      auto a2 = at(two), b2 = at(closed);
      CHECK(std::includes(b2.begin(), b2.end(), a2.begin(), a2.end()));
    }
  }
}

TEST_CASE("validate_regularity flags hand-built violations") {
  SECTION("down before up") {
    EventStream s = reach_stream(2, 5, 1,
                                 {{1, EventType::down, 0, 1},
                                  {2, EventType::up, 0, 1},
                                  {3, EventType::down, 0, 1}});
    auto report = validate_regularity(s);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].rule == "DownWithoutUp");
  }
  SECTION("out of order") {
    EventStream s = reach_stream(2, 5, 1,
                                 {{3, EventType::up, 0, 1},
                                  {1, EventType::down, 0, 1}});
    auto report = validate_regularity(s);
    REQUIRE_FALSE(report.ok());
    CHECK(report.violations[0].rule == "UnsortedEvents");
  }
  SECTION("import output is clean") {
    EventStream s = import_contact_trace({{0, 1, 0, 4}, {1, 2, 2, 6}}, 1, 1, 3);
    CHECK(validate_regularity(s).ok());
  }
}

TEST_CASE("random streams: round-trip, regularity, grid reconstruction") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    EventStream s = testsupport::random_contact_stream(seed, 5, 25, 1 + seed % 3);
    CAPTURE(seed);
    REQUIRE(validate_regularity(s).ok());
    CHECK(parse_stream(serialize_stream(s)) == s);
    // Grid samples fully determine a regular stream.
    CHECK(assemble_from_grid(s) == s);

    EventStream r = testsupport::random_reach_stream(seed, 5, 25, 1);
    REQUIRE(validate_regularity(r).ok());
    CHECK(parse_stream(serialize_stream(r)) == r);
    CHECK(assemble_from_grid(r) == r);

    // Q(k) is contained in P(k) on every epoch.
    sweep_grid(r, [&, prev = ArcSet{}](SamplePoint p, const ArcSet& set) mutable {
      if (p.open)
        for (ArcKey k : set) CHECK(prev.count(k));
      else
        prev = set;
    });
  }
}

TEST_CASE("random stream pairs: union/intersection/subset laws") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EventStream a = testsupport::random_reach_stream(seed * 2 + 1, 4, 20, 1);
    EventStream b = testsupport::random_reach_stream(seed * 2 + 2, 4, 20, 1);
    CAPTURE(seed);
    EventStream u = stream_union(a, b);
    EventStream i = stream_intersection(a, b);
    CHECK(validate_regularity(u).ok());
    CHECK(validate_regularity(i).ok());
    CHECK(stream_subset(a, u));
    CHECK(stream_subset(b, u));
    CHECK(stream_subset(i, a));
    CHECK(stream_subset(i, b));

    // Pointwise agreement with per-sample set operations.
    auto grid_a = testsupport::sample_full_grid(a);
    auto grid_b = testsupport::sample_full_grid(b);
    auto grid_u = testsupport::sample_full_grid(u);
    auto grid_i = testsupport::sample_full_grid(i);
    REQUIRE(grid_a.size() == grid_u.size());
    for (std::size_t g = 0; g < grid_a.size(); ++g) {
      std::vector<ArcKey> want;
      std::set_union(grid_a[g].begin(), grid_a[g].end(), grid_b[g].begin(),
                     grid_b[g].end(), std::back_inserter(want));
      CHECK(grid_u[g] == want);
      want.clear();
      std::set_intersection(grid_a[g].begin(), grid_a[g].end(),
                            grid_b[g].begin(), grid_b[g].end(),
                            std::back_inserter(want));
      CHECK(grid_i[g] == want);
    }
  }
}
