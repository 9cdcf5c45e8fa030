#include <doctest.h>

#include <deque>
#include <random>
#include <unordered_set>

#include "compare.hpp"
#include "golsynth/frontend.hpp"
#include "golog_oracle.hpp"

using namespace golsynth;

namespace {

struct Loaded {
  std::shared_ptr<Problem> problem;
  Configuration initial;

  explicit Loaded(const std::string& text) : problem(parse_problem(text)) {
    initial = Configuration{problem->resources.at(0), {}, problem->system_theory->initial()};
  }

  TransContext ctx() const { return TransContext(*problem->system_theory); }
  std::vector<Step> trans() const { return golsynth::trans(*problem->pool, initial, ctx()); }
  std::string text(const CompoundAction& a) const { return problem->sig->action_text(a); }
};

std::string with_program(const std::string& program, const std::string& init = "(P o2)") {
  oracle::World w;
  std::string s = oracle::problem_text(std::make_shared<oracle::Prog>(), w);
  std::size_t at = s.find("(resource R1 nil)");
  s.replace(at, std::string("(resource R1 nil)").size(), "(init system " + init + ")\n  (resource R1 " + program + ")");
  return s;
}

}  // namespace

TEST_CASE("library and reference interpreter agree on random programs") {
  std::mt19937_64 rng(20261015);
  for (int i = 0; i < 160; ++i) {
    auto g = i < 80 ? oracle::generate(rng, 4) : oracle::generate_live(rng, 4, 3);
    std::string text = oracle::problem_text(g.program, g.initial);
    Loaded l(text);
    std::string expected = oracle::tree(g.program, g.initial, 3);
    std::string actual = oracle::library_tree(*l.problem->pool, l.initial, l.ctx(), 3);
    INFO(oracle::program_text(g.program));
    REQUIRE(actual == expected);
  }
}

TEST_CASE("synchronized steps are checked once on the union") {
  // a(o1) alone is possible; b(o2) alone is possible; together fine.
  Loaded ok(with_program("(sync (a o1) (b o2))"));
  auto steps = ok.trans();
  REQUIRE(steps.size() == 1);
  CHECK(ok.text(steps[0].action) == "{a(o1),b(o2)}");
  // a(o2) is impossible alone, but b(o2) ||| a(o2) hits the joint axiom.
  Loaded blocked(with_program("(sync (a o2) (b o2))"));
  CHECK(blocked.trans().empty());
  // Interleaving performs each action on its own.
  Loaded inter(with_program("(conc (a o1) (b o2))"));
  CHECK(inter.trans().size() == 2);
}

TEST_CASE("tests have no transitions and gate finality") {
  Loaded t(with_program("(test (P o2))"));
  CHECK(t.trans().empty());
  CHECK(final(*t.problem->pool, t.initial, t.ctx()));
  Loaded f(with_program("(test (P o1))"));
  CHECK_FALSE(final(*f.problem->pool, f.initial, f.ctx()));
  Loaded s(with_program("(star (a o1))"));
  CHECK(final(*s.problem->pool, s.initial, s.ctx()));
}

TEST_CASE("pick variables bind through the environment") {
  Loaded l(with_program("(pick (?x obj) (seq (a ?x) (b ?x)))"));
  auto steps = l.trans();
  // a(o2) is impossible since P(o2) holds.
  REQUIRE(steps.size() == 2);
  for (const auto& s : steps) {
    CHECK(s.next.env.size() == 1);
    auto next = trans(*l.problem->pool, s.next, l.ctx());
    REQUIRE(next.size() == 1);
    CHECK(next[0].action.members()[0].args == s.action.members()[0].args);
  }
}

TEST_CASE("fresh anonymous candidates avoid known objects") {
  auto p = parse_problem(R"(
(problem open
  (sort part () open)
  (fluent system held (part))
  (action system grab (part))
  (init system (held #0))
  (resource R1 (pick ?x (grab ?x)))
  (target nil)))");
  TransContext ctx(*p->system_theory);
  ctx.anon_pool = 2;
  ctx.known_anon = {anonymous(1)};
  Configuration c{p->resources[0], {}, p->system_theory->initial()};
  int var = p->pool->node(p->resources[0]).var;
  auto cands = pick_candidates(*p->sig, var, {}, c.world, ctx);
  CHECK(cands == std::vector<Object>{anonymous(0), anonymous(1), anonymous(2), anonymous(3)});
}

TEST_CASE("reachable counters stay inside the syntactic closure") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    auto g = oracle::generate(rng, 4);
    Loaded l(oracle::problem_text(g.program, g.initial));
    ProgramPool& pool = *l.problem->pool;
    int root = l.initial.counter;
    auto closure = syntactic_closure(pool, root);
    CHECK(closure.size() <= closure_bound(pool, root));
    std::unordered_set<std::size_t> seen;
    std::deque<Configuration> queue{l.initial};
    std::size_t visited = 0;
    while (!queue.empty() && visited < 500) {
      Configuration c = std::move(queue.front());
      queue.pop_front();
      ++visited;
      REQUIRE(closure.contains(c.counter));
      for (auto& s : trans(pool, c, l.ctx()))
        if (seen.insert(config_hash(s.next)).second) queue.push_back(std::move(s.next));
    }
  }
}

TEST_CASE("do_reachable lists the worlds of complete executions") {
  Loaded l(with_program("(seq (choice (a o1) (a o3)) (b o2))"));
  auto worlds = do_reachable(*l.problem->pool, l.initial, l.ctx());
  REQUIRE(worlds.size() == 2);
  std::vector<std::string> texts;
  for (const auto& w : worlds) texts.push_back(world_text(w, *l.problem->sig));
  std::sort(texts.begin(), texts.end());
  CHECK(texts == std::vector<std::string>{"(P o1)", "(P o3)"});
}

TEST_CASE("hash-consing shares structurally equal programs") {
  Loaded l(with_program("(seq (a o1) (a o1))"));
  ProgramPool& pool = *l.problem->pool;
  int a = pool.node(l.initial.counter).a;
  CHECK(pool.seq(a, a) == l.initial.counter);
  CHECK(pool.text(l.initial.counter) == "(seq (a o1) (a o1))");
}

TEST_CASE("unassigned pick variables are reported") {
  Loaded l(with_program("(pick (?x obj) (a ?x))"));
  int body = l.problem->pool->node(l.initial.counter).a;
  Configuration inner{body, {}, l.initial.world};
  try {
    trans(*l.problem->pool, inner, l.ctx());
    FAIL("expected UnresolvedPickVariable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnresolvedPickVariable);
  }
}
