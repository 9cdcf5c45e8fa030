#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "golsynth/mucheck.hpp"
#include "golsynth/sexpr.hpp"

namespace golsynth {

// Normalized problem syntax: if/while desugared and program variables
// renamed apart. Printing and reparsing yields an equal value.
struct ProblemAst {
  std::string name;
  std::vector<SExpr> forms;

  friend bool operator==(const ProblemAst&, const ProblemAst&) = default;
};

// Throws ProblemErrors listing every syntax problem.
ProblemAst parse_ast(std::string_view text, std::string_view origin = "<input>");
std::string print(const ProblemAst& ast);

// Builds the problem; throws ProblemErrors listing every validation problem.
// Non-fatal findings are stored in Problem::warnings.
std::shared_ptr<Problem> elaborate(const ProblemAst& ast, std::string_view origin = "<input>");

std::shared_ptr<Problem> parse_problem(std::string_view text, std::string_view origin = "<input>");
std::shared_ptr<Problem> load_problem(const std::string& path);

// Mu-calculus formula over the problem's labelling: (nu X ..), (mu X ..),
// (diamond ..), (box ..), (not ..), (and ..), (or ..), fixpoint variables,
// and closed first-order leaves.
MuFormula parse_mu(std::string_view text, Problem& problem);

std::string read_file(const std::string& path);

}  // namespace golsynth
