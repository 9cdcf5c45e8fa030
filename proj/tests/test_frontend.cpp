#include <doctest.h>

#include <filesystem>

#include "support.hpp"

using namespace golsynth;

namespace {

const char* kBad = R"(
(problem bad
  (sort part (p))
  (fluent system done (part))
  (action system a (part))
  (action target A (part))
  (poss (a ?x) (and turnT (done ?x)))
  (ssa (done ?x) (pos (in (zap ?x))))
  (resource R1 (star (pick ?x (a ?x))))
  (target (star (A p)))
  (map (A ?p) (a ?q))))";

std::string minimal(const std::string& extra_resource, const std::string& map = "(map (A ?p) (a ?p))") {
  return R"(
(problem tiny
  (sort part (p q))
  (fluent system done (part))
  (action system a (part))
  (action target A (part))
  (ssa (done ?x) (pos (in (a ?x))))
  (resource R1 )" +
         extra_resource + R"()
  (target (star (pick ?x (A ?x))))
  )" + map + ")";
}

bool has(const std::vector<Diagnostic>& ds, ErrorKind k, int line) {
  for (const auto& d : ds)
    if (d.kind == k && d.span.line == line) return true;
  return false;
}

}  // namespace

TEST_CASE("bundled problems load") {
  auto micro = testing::bundled("micro.gsp");
  CHECK(micro->name == "micro");
  CHECK(micro->resources.size() == 2);
  CHECK(micro->mappings.actions().size() == 1);
  CHECK(micro->config.strict_obs);
  auto cell = testing::bundled("cell.gsp");
  CHECK(cell->resources.size() == 5);
  CHECK(cell->mappings.actions().size() == 7);
  CHECK(cell->mappings.observations().size() == 1);
  CHECK_FALSE(cell->config.strict_obs);
  auto parts = testing::bundled("parts.gsp");
  CHECK(parts->config.bound == 6);
  CHECK(parts->config.anon_pool == 1);
  CHECK(parts->sig->sort_is_open(parts->sig->find_sort("part")));
}

TEST_CASE("every problem is collected with its location") {
  try {
    parse_problem(kBad, "bad.gsp");
    FAIL("expected ProblemErrors");
  } catch (const ProblemErrors& e) {
    const auto& ds = e.diagnostics();
    CHECK(has(ds, ErrorKind::UndeclaredSymbol, 7));
    CHECK(has(ds, ErrorKind::UndeclaredAction, 8));
    CHECK(has(ds, ErrorKind::UnboundVariable, 11));
    std::string what = e.what();
    CHECK(what.find("bad.gsp:7:") != std::string::npos);
    CHECK(what.find("turnT") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry positions") {
  std::vector<Diagnostic> ds;
  // The comment hides the closing parenthesis, so both lists stay open.
  auto forms = read_sexprs("(a b ; comment )\n (c", ds);
  REQUIRE(ds.size() == 2);
  CHECK(ds[0].kind == ErrorKind::SyntaxError);
  CHECK(ds[0].span.line + ds[1].span.line == 3);
  ds.clear();
  read_sexprs("(a))", ds);
  CHECK(ds.size() == 1);
  ds.clear();
  forms = read_sexprs("; only a comment\n(x (y z)) w", ds);
  CHECK(ds.empty());
  REQUIRE(forms.size() == 2);
  CHECK(to_text(forms[0]) == "(x (y z))");
  CHECK(forms[0][1].span.line == 2);
  CHECK(forms[1].is("w"));
  CHECK(format({ErrorKind::SyntaxError, {3, 4}, "oops"}, "f.gsp") == "f.gsp:3:4: SyntaxError: oops");
}

TEST_CASE("printing and reparsing is a fixpoint") {
  for (const auto& entry : std::filesystem::directory_iterator(GOLSYNTH_PROBLEMS_DIR)) {
    INFO(entry.path().string());
    ProblemAst a = parse_ast(read_file(entry.path().string()));
    std::string printed = print(a);
    ProblemAst b = parse_ast(printed);
    CHECK(a == b);
    CHECK(print(b) == printed);
    auto p = parse_problem(printed);
    CHECK(p->digest == load_problem(entry.path().string())->digest);
  }
  for (const auto& inst : testing::parts_family()) {
    ProblemAst a = parse_ast(inst.text);
    CHECK(parse_ast(print(a)) == a);
  }
}

TEST_CASE("if and while are desugared") {
  ProblemAst a = parse_ast(minimal("(if (done p) (a q) (a p))"));
  std::string t = print(a);
  CHECK(t.find("(choice (seq (test (done p)) (a q)) (seq (test (not (done p))) (a p)))") != std::string::npos);
  ProblemAst w = parse_ast(minimal("(while (not (done p)) (a p))"));
  CHECK(print(w).find("(seq (star (seq (test (not (done p))) (a p))) (test (not (not (done p)))))") !=
        std::string::npos);
  auto p = parse_problem(minimal("(while (not (done p)) (a p))"));
  CHECK(p->resources.size() == 1);
}

TEST_CASE("program variables are renamed apart") {
  ProblemAst a = parse_ast(minimal("(seq (pick ?x (a ?x)) (pick ?x (a ?x)))"));
  std::string t = print(a);
  CHECK(t.find("?x_2") != std::string::npos);
  CHECK(t.find("?x_3") != std::string::npos);
}

TEST_CASE("unused variables produce warnings") {
  auto p = parse_problem(minimal("(star (pick ?y (a p)))", "(map (A ?p) (a q))"));
  REQUIRE(p->warnings.size() == 2);
  for (const auto& w : p->warnings) CHECK(w.rfind("FreeVariableWarning", 0) == 0);
}

TEST_CASE("numeric literals are objects") {
  auto p = parse_problem(minimal("(star (a .3))").replace(minimal("").find("(p q)"), 5, "(p q .3)"));
  CHECK(p->sig->sort(p->sig->find_sort("part")).members.size() == 3);
  auto cell = testing::bundled("cell.gsp");
  CHECK(ObjectTable::global().find(".3").is_named());
}

TEST_CASE("mu formulas parse over the labelling") {
  auto p = testing::bundled("micro.gsp");
  MuFormula f = parse_mu("(nu X (mu Y (or (and turnT (box X)) (and turnS (diamond Y)))))", *p);
  CHECK(f.kind() == MuFormula::Kind::nu);
  Arena arena(p, testing::options_of(*p));
  FiniteArena fa = build_finite_arena(arena);
  CHECK(eval_mu(f, model_of(arena, fa)) == StateSet(6, 1));
  MuFormula reach = parse_mu("(mu Z (or (exists ((?x part)) (done2 ?x)) (diamond Z)))", *p);
  CHECK(eval_mu(reach, model_of(arena, fa)) == StateSet(6, 1));
  CHECK_THROWS_AS(parse_mu("(mu X (not X))", *p), Error);
  CHECK_THROWS_AS(parse_mu("(mu X (frobnicate))", *p), Error);
}
