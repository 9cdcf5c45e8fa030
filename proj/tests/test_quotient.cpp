#include <doctest.h>

#include "support.hpp"

using namespace golsynth;

namespace {

struct Loaded {
  std::shared_ptr<Problem> problem;
  Arena arena;
  explicit Loaded(std::shared_ptr<Problem> p) : problem(p), arena(p, testing::options_of(*p)) {}
};

Loaded seeded(const std::string& a, const std::string& b) {
  return Loaded(parse_problem(testing::parts_instance(testing::PartsVariant::seeded, 1, true, {a, b})));
}

}  // namespace

TEST_CASE("canonical forms ignore the names of anonymous objects") {
  Loaded x = seeded("#0", "#1");
  Loaded y = seeded("#4", "#2");
  ArenaState qx = x.arena.initial_state();
  ArenaState qy = y.arena.initial_state();
  CHECK(serialize(x.arena, qx) != serialize(y.arena, qy));
  CanonicalForm fx = canonicalize(x.arena, qx);
  CanonicalForm fy = canonicalize(y.arena, qy);
  CHECK(fx.text == fy.text);
  CHECK(fx.renaming.size() == 2);
  auto h = isomorphic(y.arena, qy, rename(qy, {{anonymous(4), anonymous(7)}, {anonymous(2), anonymous(9)}}));
  REQUIRE(h);
  CHECK(h->at(anonymous(4)) == anonymous(7));
}

TEST_CASE("pinned objects keep their identity") {
  Loaded x = seeded("#0", "#1");
  ArenaState q = x.arena.initial_state();
  ArenaState swapped = rename(q, {{anonymous(0), anonymous(1)}, {anonymous(1), anonymous(0)}});
  CHECK(canonicalize(x.arena, q).text == canonicalize(x.arena, swapped).text);
  CHECK(canonicalize(x.arena, q, {anonymous(0), anonymous(1)}).text !=
        canonicalize(x.arena, swapped, {anonymous(0), anonymous(1)}).text);
}

TEST_CASE("non-isomorphic states are told apart") {
  Loaded x = seeded("#0", "#1");
  Loaded same = seeded("#0", "#0");
  CHECK_FALSE(isomorphic(x.arena, x.arena.initial_state(), same.arena.initial_state()));
}

TEST_CASE("micro quotient has six states") {
  Loaded m(testing::bundled("micro.gsp"));
  FiniteArena fa = build_finite_arena(m.arena);
  CHECK(fa.size() == 6);
  CHECK(fa.edge_count() == 6);
  CHECK(fa.initial == 0);
  CHECK(fa.find(fa.forms[3]) == 3);
  CHECK(fa.find("no such form") == -1);
  CHECK(fa.successor_lists()[0] == std::vector<int>{1});
}

TEST_CASE("quotient is no larger than the concrete arena") {
  for (int pool = 1; pool <= 3; ++pool) {
    auto p = parse_problem(testing::parts_instance(testing::PartsVariant::base, pool, true));
    Arena arena(p, testing::options_of(*p));
    FiniteArena q = build_finite_arena(arena);
    FiniteArena c = build_finite_arena(arena, {.concrete = true});
    INFO("pool " << pool);
    CHECK(q.size() == 8);
    CHECK(c.size() >= q.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(q.find(canonicalize(arena, c.states[i]).text) >= 0);
  }
}

TEST_CASE("unbounded growth reports the offending trace") {
  Loaded u(testing::bundled("parts-unbounded.gsp"));
  std::string first, second;
  for (std::string* out : {&first, &second}) {
    try {
      build_finite_arena(u.arena);
      FAIL("expected BoundExceeded");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BoundExceeded);
      *out = e.what();
    }
  }
  CHECK(first == second);
  CHECK(first.find("exceeds bound 3") != std::string::npos);
  CHECK(first.find("T-MOVE {Proc(#0)}") != std::string::npos);
  CHECK(first.find("T-MOVE {Proc(#3)}") != std::string::npos);
  CHECK(first.find("offending state") != std::string::npos);
}

TEST_CASE("the tracker follows concrete runs") {
  Loaded l(parse_problem(testing::parts_instance(testing::PartsVariant::base, 2, true)));
  FiniteArena fa = build_finite_arena(l.arena);
  ArenaState q = l.arena.initial_state();
  PBisimTracker t(l.arena, q);
  for (int i = 0; i < 12; ++i) {
    auto moves = l.arena.successors(q);
    REQUIRE_FALSE(moves.empty());
    q = moves[static_cast<std::size_t>(i) % moves.size()].next;
    t.step(q, canonicalize(l.arena, q).text);
  }
  CHECK(t.checks() > 0);
  CHECK(t.concrete() == q);
  CHECK(fa.find(canonicalize(l.arena, t.abstract()).text) >= 0);
}

TEST_CASE("a step to the wrong quotient state breaks the bisimulation") {
  Loaded m(testing::bundled("micro.gsp"));
  FiniteArena fa = build_finite_arena(m.arena);
  ArenaState q0 = m.arena.initial_state();
  PBisimTracker t(m.arena, q0);
  ArenaState q1 = m.arena.successors(q0)[0].next;
  try {
    t.step(q1, fa.forms[3]);
    FAIL("expected BisimulationBroken");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BisimulationBroken);
  }
}

TEST_CASE("dump output is deterministic") {
  Loaded a(testing::bundled("parts.gsp"));
  Loaded b(testing::bundled("parts.gsp"));
  std::string da = dump(a.arena, build_finite_arena(a.arena));
  std::string db = dump(b.arena, build_finite_arena(b.arena));
  CHECK(da == db);
  CHECK(da.rfind("arena states 8", 0) == 0);
}
