#include "golsynth/mucheck.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <unordered_map>

namespace golsynth {

MuFormula MuFormula::make(Node n) { return MuFormula(std::make_shared<const Node>(std::move(n))); }

MuFormula MuFormula::fo(Formula sentence) {
  if (!sentence.is_closed()) throw Error(ErrorKind::InvalidProblem, "first-order leaf of a mu formula must be closed");
  Node n;
  n.kind = Kind::fo;
  n.sentence = std::move(sentence);
  return make(std::move(n));
}

MuFormula MuFormula::truth() { return fo(Formula::truth()); }

MuFormula MuFormula::negate(MuFormula f) {
  Node n;
  n.kind = Kind::negation;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

MuFormula MuFormula::conj(MuFormula a, MuFormula b) {
  Node n;
  n.kind = Kind::conj;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

MuFormula MuFormula::disj(MuFormula a, MuFormula b) {
  Node n;
  n.kind = Kind::disj;
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

MuFormula MuFormula::diamond(MuFormula f) {
  Node n;
  n.kind = Kind::diamond;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

MuFormula MuFormula::box(MuFormula f) {
  Node n;
  n.kind = Kind::box;
  n.kids = {std::move(f)};
  return make(std::move(n));
}

MuFormula MuFormula::var(std::string name) {
  Node n;
  n.kind = Kind::var;
  n.name = std::move(name);
  return make(std::move(n));
}

namespace {

// Throws if name occurs free in f with negative polarity.
void check_polarity(const MuFormula& f, const std::string& name, bool positive) {
  switch (f.kind()) {
    case MuFormula::Kind::fo:
      return;
    case MuFormula::Kind::var:
      if (f.name() == name && !positive)
        throw Error(ErrorKind::NonMonotone, "variable " + name + " occurs under an odd number of negations");
      return;
    case MuFormula::Kind::negation:
      check_polarity(f.kids()[0], name, !positive);
      return;
    case MuFormula::Kind::mu:
    case MuFormula::Kind::nu:
      if (f.name() == name) return;
      check_polarity(f.kids()[0], name, positive);
      return;
    default:
      for (const auto& k : f.kids()) check_polarity(k, name, positive);
  }
}

}  // namespace

MuFormula MuFormula::mu(std::string name, MuFormula body) {
  check_polarity(body, name, true);
  Node n;
  n.kind = Kind::mu;
  n.name = std::move(name);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

MuFormula MuFormula::nu(std::string name, MuFormula body) {
  check_polarity(body, name, true);
  Node n;
  n.kind = Kind::nu;
  n.name = std::move(name);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

void check_monotone(const MuFormula& f) {
  if (f.kind() == MuFormula::Kind::mu || f.kind() == MuFormula::Kind::nu) check_polarity(f.kids()[0], f.name(), true);
  if (f.kind() != MuFormula::Kind::fo)
    for (const auto& k : f.kids()) check_monotone(k);
}

std::string to_string(const MuFormula& f, const Signature& sig) {
  switch (f.kind()) {
    case MuFormula::Kind::fo:
      return to_string(f.sentence(), sig);
    case MuFormula::Kind::negation:
      return "(not " + to_string(f.kids()[0], sig) + ")";
    case MuFormula::Kind::conj:
      return "(and " + to_string(f.kids()[0], sig) + " " + to_string(f.kids()[1], sig) + ")";
    case MuFormula::Kind::disj:
      return "(or " + to_string(f.kids()[0], sig) + " " + to_string(f.kids()[1], sig) + ")";
    case MuFormula::Kind::diamond:
      return "(diamond " + to_string(f.kids()[0], sig) + ")";
    case MuFormula::Kind::box:
      return "(box " + to_string(f.kids()[0], sig) + ")";
    case MuFormula::Kind::var:
      return f.name();
    case MuFormula::Kind::mu:
      return "(mu " + f.name() + " " + to_string(f.kids()[0], sig) + ")";
    case MuFormula::Kind::nu:
      return "(nu " + f.name() + " " + to_string(f.kids()[0], sig) + ")";
  }
  return {};
}

MuModel model_of(const Arena& arena, const FiniteArena& fa) {
  MuModel m;
  m.succ = fa.successor_lists();
  const Signature& sig = *arena.problem().sig;
  m.holds = [&arena, &fa, &sig](int q, const Formula& f) {
    auto interp = arena.labelling(fa.states.at(q));
    return eval(f, EvalContext(sig, *interp));
  };
  return m;
}

StateSet pre_e(const std::vector<std::vector<int>>& succ, const StateSet& z) {
  StateSet out(succ.size(), 0);
  for (std::size_t q = 0; q < succ.size(); ++q)
    out[q] = std::any_of(succ[q].begin(), succ[q].end(), [&](int s) { return z[s] != 0; });
  return out;
}

StateSet pre_a(const std::vector<std::vector<int>>& succ, const StateSet& z) {
  StateSet out(succ.size(), 0);
  for (std::size_t q = 0; q < succ.size(); ++q)
    out[q] = std::all_of(succ[q].begin(), succ[q].end(), [&](int s) { return z[s] != 0; });
  return out;
}

StateSet pre_e(const MuModel& m, const StateSet& z) { return pre_e(m.succ, z); }
StateSet pre_a(const MuModel& m, const StateSet& z) { return pre_a(m.succ, z); }

namespace {

class MuEvaluator {
 public:
  explicit MuEvaluator(const MuModel& m) : m_(m) {}

  StateSet eval(const MuFormula& f, SOAssignment& v) {
    const std::size_t n = m_.size();
    switch (f.kind()) {
      case MuFormula::Kind::fo: {
        auto it = leaves_.find(f.id());
        if (it != leaves_.end()) return it->second;
        StateSet out(n, 0);
        for (std::size_t q = 0; q < n; ++q) out[q] = m_.holds(static_cast<int>(q), f.sentence());
        leaves_.emplace(f.id(), out);
        return out;
      }
      case MuFormula::Kind::negation: {
        StateSet s = eval(f.kids()[0], v);
        for (auto& x : s) x = !x;
        return s;
      }
      case MuFormula::Kind::conj:
      case MuFormula::Kind::disj: {
        StateSet a = eval(f.kids()[0], v);
        StateSet b = eval(f.kids()[1], v);
        for (std::size_t q = 0; q < n; ++q) a[q] = f.kind() == MuFormula::Kind::conj ? (a[q] && b[q]) : (a[q] || b[q]);
        return a;
      }
      case MuFormula::Kind::diamond:
        return pre_e(m_, eval(f.kids()[0], v));
      case MuFormula::Kind::box:
        return pre_a(m_, eval(f.kids()[0], v));
      case MuFormula::Kind::var: {
        auto it = v.find(f.name());
        if (it == v.end()) throw Error(ErrorKind::UnboundSOVariable, f.name());
        if (it->second.size() != n)
          throw Error(ErrorKind::UnboundSOVariable, f.name() + " is assigned a set of the wrong size");
        return it->second;
      }
      case MuFormula::Kind::mu:
      case MuFormula::Kind::nu: {
        std::optional<StateSet> saved;
        if (auto it = v.find(f.name()); it != v.end()) saved = it->second;
        StateSet z(n, f.kind() == MuFormula::Kind::nu ? 1 : 0);
        while (true) {
          v[f.name()] = z;
          StateSet next = eval(f.kids()[0], v);
          if (next == z) break;
          z = std::move(next);
        }
        if (saved)
          v[f.name()] = *saved;
        else
          v.erase(f.name());
        return z;
      }
    }
    return {};
  }

 private:
  const MuModel& m_;
  std::unordered_map<const void*, StateSet> leaves_;
};

}  // namespace

StateSet eval_mu(const MuFormula& f, const MuModel& m, const SOAssignment& v) {
  check_monotone(f);
  SOAssignment env = v;
  MuEvaluator e(m);
  return e.eval(f, env);
}

MuFormula phi_sim(const LabellingFluents& labels, bool strict_obs) {
  auto atom = [](int fluent) { return Formula::atom(fluent, {}); };
  std::vector<Formula> ok{Formula::implies(atom(labels.final_t), atom(labels.final_s)), atom(labels.turn_t)};
  if (strict_obs) ok.push_back(atom(labels.obs_eq));
  MuFormula goal = MuFormula::conj(MuFormula::fo(Formula::conj(std::move(ok))), MuFormula::box(MuFormula::var("X")));
  MuFormula step = MuFormula::conj(MuFormula::fo(atom(labels.turn_s)), MuFormula::diamond(MuFormula::var("Y")));
  return MuFormula::nu("X", MuFormula::mu("Y", MuFormula::disj(goal, step)));
}

StateSet goal_states(const FiniteArena& fa, bool strict_obs) {
  StateSet out(fa.size(), 0);
  for (std::size_t q = 0; q < fa.size(); ++q) {
    const Labels& l = fa.labels[q];
    out[q] = l.turn == Turn::T && (!l.final_t || l.final_s) && (!strict_obs || l.obs_eq);
  }
  return out;
}

namespace {

void dump_set(std::string& out, const std::string& name, const StateSet& s) {
  out += name + ":";
  for (std::size_t q = 0; q < s.size(); ++q)
    if (s[q]) out += " " + std::to_string(q);
  out += "\n";
}

}  // namespace

AnnotatedWinningSet win_round(const FiniteArena& fa, const StateSet& x, bool strict_obs, std::string* dump,
                              int round) {
  const auto succ = fa.successor_lists();
  const StateSet ok = goal_states(fa, strict_obs);
  const StateSet ax = pre_a(succ, x);
  const std::size_t n = fa.size();

  AnnotatedWinningSet r;
  r.win.assign(n, 0);
  r.ann.assign(n, -1);
  if (dump) dump_set(*dump, "Y" + std::to_string(round) + ".0", r.win);
  for (int j = 1;; ++j) {
    StateSet e = pre_e(succ, r.win);
    StateSet next = r.win;
    for (std::size_t q = 0; q < n; ++q) {
      if (next[q]) continue;
      bool turn_s = fa.labels[q].turn == Turn::S;
      if ((ok[q] && ax[q]) || (turn_s && e[q])) {
        next[q] = 1;
        r.ann[q] = j - 1;
      }
    }
    if (next == r.win) break;
    r.win = std::move(next);
    if (dump) dump_set(*dump, "Y" + std::to_string(round) + "." + std::to_string(j), r.win);
  }
  return r;
}

AnnotatedWinningSet compute_win(const FiniteArena& fa, bool strict_obs, std::string* dump) {
  const std::size_t n = fa.size();
  StateSet x(n, 1);
  for (int i = 0;; ++i) {
    if (dump) dump_set(*dump, "X" + std::to_string(i), x);
    AnnotatedWinningSet r = win_round(fa, x, strict_obs, dump, i);
    StateSet next(n, 0);
    for (std::size_t q = 0; q < n; ++q) next[q] = r.win[q] && x[q];
    if (next == x) {
      r.win = std::move(next);
      for (std::size_t q = 0; q < n; ++q)
        if (!r.win[q]) r.ann[q] = -1;
      r.outer_rounds = i + 1;
      return r;
    }
    x = std::move(next);
  }
}

std::string check_soundness(const FiniteArena& fa, const StateSet& win, bool strict_obs) {
  const StateSet ok = goal_states(fa, strict_obs);
  const auto succ = fa.successor_lists();
  const std::size_t n = fa.size();
  // States of win from which a turnT member of win is reachable through S-states of win.
  StateSet reach(n, 0);
  std::vector<std::vector<int>> pred(n);
  for (std::size_t q = 0; q < n; ++q)
    for (int s : succ[q]) pred[s].push_back(static_cast<int>(q));
  std::deque<int> queue;
  for (std::size_t q = 0; q < n; ++q)
    if (win[q] && fa.labels[q].turn == Turn::T) {
      reach[q] = 1;
      queue.push_back(static_cast<int>(q));
    }
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int p : pred[q])
      if (!reach[p] && win[p] && fa.labels[p].turn == Turn::S) {
        reach[p] = 1;
        queue.push_back(p);
      }
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!win[q] || fa.labels[q].turn != Turn::T) continue;
    if (!ok[q]) return "turnT member " + std::to_string(q) + " is not a goal state";
    for (int s : succ[q])
      if (!reach[s])
        return "successor " + std::to_string(s) + " of turnT member " + std::to_string(q) +
               " has no System path back to a winning turnT state";
  }
  return {};
}

Strategy extract_strategy(const AnnotatedWinningSet& w, const FiniteArena& fa) {
  if (!w.contains(fa.initial)) throw Error(ErrorKind::NotRealizable, "initial state is not in the winning set");
  Strategy st;
  st.choice.assign(fa.size(), -1);
  for (std::size_t q = 0; q < fa.size(); ++q) {
    if (!w.win[q] || fa.labels[q].turn != Turn::S) continue;
    int best = -1;
    for (const auto& e : fa.edges[q]) {
      if (!w.contains(e.to) || w.ann[e.to] >= w.ann[q]) continue;
      if (best < 0 || fa.forms[e.to] < fa.forms[best]) best = e.to;
    }
    if (best < 0)
      throw Error(ErrorKind::InvalidProblem, "winning S-state " + std::to_string(q) + " has no decreasing successor");
    st.choice[q] = best;
  }
  return st;
}

}  // namespace golsynth
