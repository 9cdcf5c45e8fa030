#include "golsynth/controller.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

namespace golsynth {

StrategyTable StrategyTable::from(const FiniteArena& fa, const AnnotatedWinningSet& win, const Strategy& strategy) {
  StrategyTable t;
  t.initial = fa.forms.at(fa.initial);
  for (std::size_t q = 0; q < fa.size(); ++q) {
    if (!win.win[q]) continue;
    t.ann[fa.forms[q]] = win.ann[q];
    if (strategy.choice[q] >= 0) t.next[fa.forms[q]] = fa.forms[strategy.choice[q]];
  }
  return t;
}

Controller::Controller(const Arena& arena, const StrategyTable& table)
    : arena_(&arena),
      table_(&table),
      state_(arena.initial_state()),
      form_(canonicalize(arena, state_).text),
      tracker_(arena, state_) {
  if (!table.winning(form_)) throw Error(ErrorKind::NotInWinningRelation, "initial state is not winning");
}

std::vector<Move> Controller::target_moves() const {
  if (state_.turn != Turn::T) return {};
  return arena_->successors(state_);
}

Response Controller::respond(const Move& target_move) {
  if (!table_->winning(form_)) throw Error(ErrorKind::NotInWinningRelation, "current state is not winning");
  const Signature& sig = *arena_->problem().sig;
  auto legal = target_moves();
  auto it = std::find_if(legal.begin(), legal.end(), [&](const Move& m) {
    return m.kind == Move::Kind::target && m.action == target_move.action && m.next == target_move.next;
  });
  if (it == legal.end())
    throw Error(ErrorKind::IllegalTargetMove, sig.action_text(target_move.action) + " is not a legal target step");

  Response r;
  r.target = *it;
  auto advance = [&](const Move& m, std::string form) {
    tracker_.step(m.next, form);
    state_ = m.next;
    form_ = std::move(form);
  };
  std::string form = canonicalize(*arena_, it->next).text;
  if (!table_->winning(form))
    throw Error(ErrorKind::NotInWinningRelation, "target step leaves the winning set");
  advance(*it, std::move(form));

  while (state_.turn == Turn::S) {
    auto choice = table_->next.find(form_);
    if (choice == table_->next.end())
      throw Error(ErrorKind::NotInWinningRelation, "no strategy entry for the current S-state");
    bool moved = false;
    for (auto& m : arena_->successors(state_)) {
      if (canonicalize(*arena_, m.next).text != choice->second) continue;
      r.system.push_back(m);
      advance(m, choice->second);
      moved = true;
      break;
    }
    if (!moved) throw Error(ErrorKind::BisimulationBroken, "no concrete successor matches the strategy's choice");
  }
  return r;
}

Response Controller::respond(const std::string& action_text) {
  const Signature& sig = *arena_->problem().sig;
  // A single action may be written without the set braces.
  std::string wanted = action_text.starts_with('{') ? action_text : "{" + action_text + "}";
  for (const auto& m : target_moves())
    if (sig.action_text(m.action) == wanted) return respond(m);
  throw Error(ErrorKind::IllegalTargetMove, action_text + " is not a legal target step");
}

std::string TraceReport::text() const {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string check_response(const Arena& arena, const ArenaState& before, const Response& r) {
  const Problem& p = arena.problem();
  ProgramPool& pool = *p.pool;
  const Signature& sig = *p.sig;
  const ArenaState* prev = &r.target.next;
  for (const auto& m : r.system) {
    TransContext ctx = arena.system_context(*prev);
    CompoundAction want = sig.strip_idle(m.action);
    ctx.filter = [&](const CompoundAction& a) {
      for (const auto& g : a.members())
        if (!sig.action(g.action).idle && !std::binary_search(want.members().begin(), want.members().end(), g))
          return false;
      return true;
    };
    auto steps = trans(pool, prev->system, ctx);
    bool found = std::any_of(steps.begin(), steps.end(),
                             [&](const Step& s) { return s.action == m.action && s.next == m.next.system; });
    if (!found) return "system move " + sig.action_text(m.action) + " is not a Trans step of the available program";
    prev = &m.next;
  }
  if (prev->turn != Turn::T) return "system reply does not hand the turn back";
  // Follow the mapped program along the reply; some branch must end final
  // in the reached system world.
  std::vector<Configuration> frontier{r.target.next.pending};
  const ArenaState* at = &r.target.next;
  for (const auto& m : r.system) {
    TransContext step_ctx = arena.system_context(*at);
    CompoundAction done = sig.strip_idle(m.action);
    std::vector<Configuration> next;
    for (const auto& c : frontier)
      for (auto& s : trans(pool, c, step_ctx))
        if (sig.strip_idle(s.action) == done && s.next.world == m.next.system.world &&
            std::find(next.begin(), next.end(), s.next) == next.end())
          next.push_back(std::move(s.next));
    frontier = std::move(next);
    at = &m.next;
  }
  TransContext ctx = arena.system_context(*prev);
  bool complete = std::any_of(frontier.begin(), frontier.end(), [&](const Configuration& c) {
    return c.world == prev->system.world && final(pool, c, ctx);
  });
  if (!complete)
    return "system reply for " + sig.action_text(r.target.action) + " is not a complete execution of its mapping";
  if (before.turn != Turn::T) return "response started outside a T-state";
  Labels l = arena.labels(*prev);
  if (l.final_t && !l.final_s) return "target final but system not final";
  return {};
}

namespace {

std::string state_line(const std::string& form) { return "STATE " + form; }

// Runs one response and appends its trace lines; returns false on failure.
bool play(const Arena& arena, Controller& c, const Move& m, TraceReport& report) {
  const Signature& sig = *arena.problem().sig;
  ArenaState before = c.state();
  report.lines.push_back("T-MOVE " + sig.action_text(m.action));
  Response r;
  try {
    r = c.respond(m);
  } catch (const Error& e) {
    report.pass = false;
    report.reason = e.what();
    return false;
  }
  ++report.responses;
  for (const auto& s : r.system) report.lines.push_back("S-MOVE " + sig.action_text(s.action));
  report.lines.push_back(state_line(c.form()));
  std::string why = check_response(arena, before, r);
  if (!why.empty()) {
    report.pass = false;
    report.reason = why;
    return false;
  }
  return true;
}

void finish(TraceReport& report) {
  report.lines.push_back(report.pass ? "VERDICT PASS" : "VERDICT FAIL " + report.reason);
}

bool start(const Arena& arena, const StrategyTable& table, std::optional<Controller>& c, TraceReport& report) {
  try {
    c.emplace(arena, table);
  } catch (const Error& e) {
    report.pass = false;
    report.reason = e.what();
    return false;
  }
  report.lines.push_back(state_line(c->form()));
  return true;
}

}  // namespace

TraceReport playout_scripted(const Arena& arena, const StrategyTable& table, const std::vector<std::string>& actions) {
  TraceReport report;
  report.runs = 1;
  std::optional<Controller> c;
  if (start(arena, table, c, report)) {
    const Signature& sig = *arena.problem().sig;
    for (const auto& given : actions) {
      std::string a = given.starts_with('{') ? given : "{" + given + "}";
      auto moves = c->target_moves();
      auto it = std::find_if(moves.begin(), moves.end(), [&](const Move& m) { return sig.action_text(m.action) == a; });
      if (it == moves.end()) {
        report.lines.push_back("T-MOVE " + a);
        report.pass = false;
        report.reason = "IllegalTargetMove: " + a + " is not a legal target step";
        break;
      }
      if (!play(arena, *c, *it, report)) break;
    }
  }
  finish(report);
  return report;
}

TraceReport playout_random(const Arena& arena, const StrategyTable& table, std::uint64_t seed, std::size_t runs,
                           std::size_t max_steps) {
  TraceReport report;
  report.lines.push_back("SEED " + std::to_string(seed));
  std::mt19937_64 rng(seed);
  for (std::size_t run = 0; run < runs && report.pass; ++run) {
    ++report.runs;
    report.lines.push_back("RUN " + std::to_string(run));
    std::optional<Controller> c;
    if (!start(arena, table, c, report)) break;
    for (std::size_t step = 0; step < max_steps; ++step) {
      auto moves = c->target_moves();
      if (moves.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
      if (!play(arena, *c, moves[pick(rng)], report)) break;
    }
  }
  finish(report);
  return report;
}

TraceReport playout_exhaustive(const Arena& arena, const StrategyTable& table, std::size_t depth) {
  TraceReport report;
  std::optional<Controller> root;
  if (!start(arena, table, root, report)) {
    finish(report);
    return report;
  }
  std::function<void(const Controller&, std::size_t, std::vector<std::string>&)> dfs =
      [&](const Controller& c, std::size_t d, std::vector<std::string>& prefix) {
        if (!report.pass) return;
        auto moves = d < depth ? c.target_moves() : std::vector<Move>{};
        if (moves.empty()) {
          ++report.runs;
          report.lines.push_back("RUN " + std::to_string(report.runs - 1));
          report.lines.insert(report.lines.end(), prefix.begin(), prefix.end());
          return;
        }
        for (const auto& m : moves) {
          Controller next = c;
          TraceReport local;
          bool ok = play(arena, next, m, local);
          report.responses += local.responses;
          std::size_t mark = prefix.size();
          prefix.insert(prefix.end(), local.lines.begin(), local.lines.end());
          if (!ok) {
            report.pass = false;
            report.reason = local.reason;
            report.lines.insert(report.lines.end(), prefix.begin(), prefix.end());
            return;
          }
          dfs(next, d + 1, prefix);
          prefix.resize(mark);
          if (!report.pass) return;
        }
      };
  std::vector<std::string> prefix;
  dfs(*root, 0, prefix);
  finish(report);
  return report;
}

}  // namespace golsynth

namespace golsynth {

std::string write_bundle(const BundleManifest& m, const StrategyTable& table) {
  std::map<std::string, std::size_t> ids;
  for (const auto& [form, ann] : table.ann) ids.emplace(form, ids.size());
  std::string out = "golsynth-controller " + std::to_string(m.version) + "\n";
  out += "problem " + m.problem + "\n";
  out += "digest " + m.digest + "\n";
  out += "bound " + std::to_string(m.bound) + "\n";
  out += "anon-pool " + std::to_string(m.anon_pool) + "\n";
  out += std::string("strict-obs ") + (m.strict_obs ? "true" : "false") + "\n";
  out += "arena-states " + std::to_string(m.arena_states) + "\n";
  out += "winning " + std::to_string(table.ann.size()) + "\n";
  out += "initial " + std::to_string(ids.at(table.initial)) + "\n";
  for (const auto& [form, ann] : table.ann) {
    out += "entry " + std::to_string(ids.at(form)) + " ann " + std::to_string(ann);
    if (auto it = table.next.find(form); it != table.next.end()) out += " next " + std::to_string(ids.at(it->second));
    out += " form " + std::to_string(form.size()) + ":" + form + "\n";
  }
  return out + "end\n";
}

StrategyTable read_bundle(std::string_view text, BundleManifest* manifest) {
  auto bad = [](const std::string& why) { return Error(ErrorKind::InvalidProblem, "controller bundle: " + why); };
  std::size_t pos = 0;
  auto line = [&]() -> std::string_view {
    if (pos >= text.size()) throw bad("unexpected end");
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    pos = end + 1;
    return l;
  };
  auto field = [&](std::string_view key) {
    std::string_view l = line();
    if (l.substr(0, key.size() + 1) != std::string(key) + " ") throw bad("expected " + std::string(key));
    return std::string(l.substr(key.size() + 1));
  };
  auto number = [&](const std::string& s) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw bad("expected a number, got " + s);
    }
  };
  BundleManifest m;
  m.version = static_cast<int>(number(field("golsynth-controller")));
  if (m.version != 1) throw bad("unsupported version " + std::to_string(m.version));
  m.problem = field("problem");
  m.digest = field("digest");
  m.bound = number(field("bound"));
  m.anon_pool = static_cast<int>(number(field("anon-pool")));
  m.strict_obs = field("strict-obs") == "true";
  m.arena_states = number(field("arena-states"));
  std::size_t count = number(field("winning"));
  std::size_t initial = number(field("initial"));

  std::vector<std::string> forms(count);
  std::vector<int> anns(count, -1);
  std::vector<long long> next(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    if (text.substr(pos, 6) != "entry ") throw bad("expected entry");
    std::size_t form_at = text.find(" form ", pos);
    if (form_at == std::string_view::npos) throw bad("entry without form");
    std::istringstream head(std::string(text.substr(pos + 6, form_at - pos - 6)));
    std::size_t id;
    std::string key;
    int ann;
    head >> id >> key >> ann;
    if (!head || key != "ann" || id >= count) throw bad("malformed entry");
    std::string nk;
    long long nx;
    if (head >> nk >> nx) {
      if (nk != "next" || nx < 0 || static_cast<std::size_t>(nx) >= count) throw bad("malformed next");
      next[id] = nx;
    }
    std::size_t colon = text.find(':', form_at + 6);
    if (colon == std::string_view::npos) throw bad("malformed form");
    std::size_t len = number(std::string(text.substr(form_at + 6, colon - form_at - 6)));
    if (colon + 1 + len >= text.size() + 1) throw bad("truncated form");
    forms[id] = std::string(text.substr(colon + 1, len));
    anns[id] = ann;
    pos = colon + 1 + len;
    if (pos >= text.size() || text[pos] != '\n') throw bad("form length mismatch");
    ++pos;
  }
  if (line() != "end") throw bad("missing end");
  if (initial >= count) throw bad("initial out of range");
  StrategyTable t;
  t.initial = forms[initial];
  for (std::size_t i = 0; i < count; ++i) {
    t.ann[forms[i]] = anns[i];
    if (next[i] >= 0) t.next[forms[i]] = forms[next[i]];
  }
  if (manifest) *manifest = m;
  return t;
}

}  // namespace golsynth

namespace golsynth {

Synthesis synthesize(std::shared_ptr<Problem> problem, const ArenaOptions& options, bool dump_approximants) {
  Synthesis s;
  s.arena = std::make_unique<Arena>(std::move(problem), options);
  s.quotient = build_finite_arena(*s.arena);
  s.win = compute_win(s.quotient, options.strict_obs, dump_approximants ? &s.approximants : nullptr);
  s.realizable = s.win.contains(s.quotient.initial);
  if (s.realizable) {
    s.strategy = extract_strategy(s.win, s.quotient);
    s.table = StrategyTable::from(s.quotient, s.win, s.strategy);
  }
  return s;
}

}  // namespace golsynth
