#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "golsynth/errors.hpp"
#include "golsynth/objects.hpp"
#include "golsynth/signature.hpp"

namespace golsynth {

struct Term {
  enum class Kind : std::uint8_t { var, constant, ctor };

  Kind kind = Kind::constant;
  int var = -1;
  Object value;
  std::string ctor;
  std::vector<Term> args;

  static Term variable(int v);
  static Term constant_of(Object o);
  static Term constructed(std::string name, std::vector<Term> args);

  bool operator==(const Term&) const = default;
};

void collect_vars(const Term& t, std::vector<int>& out);

// Immutable formula DAG. Nodes are shared; copying a Formula is cheap.
class Formula {
 public:
  enum class Kind : std::uint8_t { truth, falsity, atom, eq, member, negation, conj, disj, implies, exists, forall };

  struct Node {
    Kind kind = Kind::truth;
    int symbol = -1;  // fluent id for atom, action id for member
    std::vector<Term> terms;
    std::vector<Formula> kids;
    std::vector<int> vars;       // bound variables of quantifiers
    std::vector<int> free_vars;  // sorted
  };

  Formula();  // truth

  static Formula truth();
  static Formula falsity();
  static Formula atom(int fluent, std::vector<Term> terms);
  static Formula equals(Term a, Term b);
  static Formula member(int action, std::vector<Term> terms);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula implies(Formula a, Formula b);
  static Formula exists(std::vector<int> vars, Formula body);
  static Formula forall(std::vector<int> vars, Formula body);

  Kind kind() const { return node_->kind; }
  int symbol() const { return node_->symbol; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Formula>& kids() const { return node_->kids; }
  const std::vector<int>& bound_vars() const { return node_->vars; }
  const std::vector<int>& free_vars() const { return node_->free_vars; }
  bool is_closed() const { return node_->free_vars.empty(); }
  const Node* node() const { return node_.get(); }

  // Structural equality (variables compared by id).
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

// Negation normal form of the negation of f.
Formula negated_nnf(const Formula& f);

// Interpretation of fluents (situation-dependent and rigid) at one situation.
class Interpretation {
 public:
  virtual ~Interpretation() = default;
  virtual bool holds(int fluent, const Tuple& args) const = 0;
  // Calls visit on every tuple in the extension; stops when visit returns false.
  virtual bool for_each(int fluent, const std::function<bool(const Tuple&)>& visit) const = 0;
  // Objects occurring in situation-dependent extensions.
  virtual void active_domain(std::vector<Object>& out) const = 0;
};

using Binding = std::vector<Object>;  // indexed by variable id, kUnset = unbound

struct EvalContext {
  const Signature& sig;
  const Interpretation& interp;
  const CompoundAction* action = nullptr;

  EvalContext(const Signature& s, const Interpretation& i, const CompoundAction* a = nullptr)
      : sig(s), interp(i), action(a) {}

  // Quantifier / enumeration domain of a variable.
  const std::vector<Object>& domain(int var) const;

 private:
  mutable std::optional<std::vector<Object>> adom_;
  mutable std::vector<std::optional<std::vector<Object>>> by_sort_;
  mutable std::optional<std::vector<Object>> untyped_;
  const std::vector<Object>& adom() const;
};

// Value of a ground term. Throws UnboundVariable.
Object eval_term(const Term& t, const Binding& b);

// Truth of f under b. All free variables of f must be bound.
bool eval(const Formula& f, const EvalContext& ctx, Binding& b);
bool eval(const Formula& f, const EvalContext& ctx);

// Enumerates assignments to the unbound free variables of f that make f
// true; on_solution sees b with all free variables of f bound and returns
// false to stop. Bindings are restored on return. The same assignment may
// be reported more than once. Returns false iff stopped early.
bool solve(const Formula& f, const EvalContext& ctx, Binding& b, const std::function<bool()>& on_solution);

// Capture-avoiding substitution of variables by terms. Bound variables that
// would capture a free variable of a replacement are renamed to fresh
// variables registered in sig.
Formula substitute(const Formula& f, const std::vector<std::pair<int, Term>>& binding, Signature& sig);
Term substitute(const Term& t, const std::vector<std::pair<int, Term>>& binding);

std::string to_string(const Term& t, const Signature& sig);
std::string to_string(const Formula& f, const Signature& sig);

}  // namespace golsynth
