#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "golsynth/controller.hpp"
#include "golsynth/frontend.hpp"

using namespace golsynth;

namespace {

struct Common {
  std::string file;
  std::optional<std::size_t> bound;
  std::optional<int> anon_pool;
  bool no_strict_obs = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("problem", c.file, "problem file")->required();
  app->add_option("--bound", c.bound, "maximum active-domain size of an arena state");
  app->add_option("--anon-pool", c.anon_pool, "fresh anonymous objects offered per pick");
  app->add_flag("--no-strict-obs", c.no_strict_obs, "drop the observation-equivalence conjunct from the goal");
}

ArenaOptions options_for(const Problem& p, const Common& c) {
  ArenaOptions o = ArenaOptions::from(p.config);
  if (c.bound) o.bound = *c.bound;
  if (c.anon_pool) o.anon_pool = *c.anon_pool;
  if (c.no_strict_obs) o.strict_obs = false;
  return o;
}

std::shared_ptr<Problem> load(const Common& c) {
  auto p = load_problem(c.file);
  for (const auto& w : p->warnings) std::cerr << c.file << ": " << w << "\n";
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidProblem, "cannot write " + path);
  out << text;
}

// Strategy from a bundle when given, otherwise synthesized now.
StrategyTable strategy_for(const Problem& p, const Synthesis& s, const std::string& bundle) {
  if (bundle.empty()) {
    if (!s.realizable) throw Error(ErrorKind::NotRealizable, "initial state is not in the winning set");
    return s.table;
  }
  BundleManifest m;
  StrategyTable t = read_bundle(read_file(bundle), &m);
  if (m.digest != p.digest) throw Error(ErrorKind::InvalidProblem, bundle + " was synthesized for a different problem");
  return t;
}

int report(const TraceReport& r, const std::string& out) {
  if (out.empty())
    std::cout << r.text();
  else
    write_text(out, r.text());
  return r.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controller synthesis for ConGolog target and available programs"};
  app.require_subcommand(1);

  Common check_c;
  auto* check = app.add_subcommand("check", "parse and validate a problem file");
  check->add_option("problem", check_c.file, "problem file")->required();
  bool print_normalized = false;
  check->add_flag("--print", print_normalized, "print the normalized problem");

  Common syn_c;
  std::string syn_out;
  bool dump_approx = false, oracle_mode = false;
  std::size_t oracle_limit = 200000;
  auto* syn = app.add_subcommand("synthesize", "compute the winning set and write a controller bundle");
  add_common(syn, syn_c);
  syn->add_option("-o,--output", syn_out, "controller bundle path (default <problem>.ctl)");
  syn->add_flag("--dump-approximants", dump_approx, "print every X_i and Y_ij");
  syn->add_flag("--oracle-mode", oracle_mode, "also solve the concrete arena and compare");
  syn->add_option("--oracle-limit", oracle_limit, "state limit of the concrete arena");

  Common rep_c;
  std::string rep_trace, rep_bundle, rep_out;
  auto* rep = app.add_subcommand("replay", "run a scripted target trace through the controller");
  add_common(rep, rep_c);
  rep->add_option("trace", rep_trace, "file with one target action (or T-MOVE line) per line")->required();
  rep->add_option("--controller", rep_bundle, "controller bundle (synthesized on the fly if omitted)");
  rep->add_option("-o,--output", rep_out, "trace output path");

  Common play_c;
  std::string play_mode = "random", play_bundle, play_out;
  std::uint64_t seed = 1;
  std::size_t runs = 1, steps = 20, depth = 6;
  auto* play = app.add_subcommand("playout", "run the controller against a target driver");
  add_common(play, play_c);
  play->add_option("--mode", play_mode, "random or exhaustive")->check(CLI::IsMember({"random", "exhaustive"}));
  play->add_option("--seed", seed, "random driver seed");
  play->add_option("--runs", runs, "random runs");
  play->add_option("--steps", steps, "target moves per random run");
  play->add_option("--depth", depth, "exhaustive depth in target moves");
  play->add_option("--controller", play_bundle, "controller bundle (synthesized on the fly if omitted)");
  play->add_option("-o,--output", play_out, "trace output path");

  Common dump_c;
  bool dump_concrete = false;
  auto* dump_cmd = app.add_subcommand("dump-arena", "print the quotient arena");
  add_common(dump_cmd, dump_c);
  dump_cmd->add_flag("--concrete", dump_concrete, "dump the concrete arena instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      std::string text = read_file(check_c.file);
      ProblemAst ast = parse_ast(text, check_c.file);
      auto p = elaborate(ast, check_c.file);
      for (const auto& w : p->warnings) std::cerr << check_c.file << ": " << w << "\n";
      if (print_normalized) {
        std::cout << print(ast);
      } else {
        std::cout << "problem " << p->name << ": " << p->resources.size() << " resources, "
                  << p->mappings.actions().size() << " action mappings, " << p->mappings.observations().size()
                  << " observation mappings\n";
      }
      return 0;
    }
    if (*syn) {
      auto p = load(syn_c);
      ArenaOptions o = options_for(*p, syn_c);
      Synthesis s = synthesize(p, o, dump_approx);
      if (dump_approx) std::cout << s.approximants;
      std::cout << "quotient states " << s.quotient.size() << " edges " << s.quotient.edge_count() << "\n";
      std::size_t winning = std::count(s.win.win.begin(), s.win.win.end(), 1);
      std::cout << "winning states " << winning << " outer rounds " << s.win.outer_rounds << "\n";
      int code = 0;
      if (oracle_mode) {
        BuildOptions bo;
        bo.concrete = true;
        bo.max_states = oracle_limit;
        FiniteArena concrete = build_finite_arena(*s.arena, bo);
        auto cw = compute_win(concrete, o.strict_obs);
        bool agree = cw.contains(concrete.initial) == s.realizable;
        std::cout << "concrete states " << concrete.size() << " initial winning "
                  << (cw.contains(concrete.initial) ? "yes" : "no") << (agree ? " (agrees)" : " (DISAGREES)") << "\n";
        if (!agree) code = 2;
      }
      if (!s.realizable) {
        std::cout << "NotRealizable: initial state is not in the winning set\n" << s.arena->describe(s.quotient.states[0]);
        return code ? code : 1;
      }
      BundleManifest m;
      m.problem = p->name;
      m.digest = p->digest;
      m.bound = o.bound;
      m.anon_pool = o.anon_pool;
      m.strict_obs = o.strict_obs;
      m.arena_states = s.quotient.size();
      std::string out = syn_out.empty() ? p->name + ".ctl" : syn_out;
      write_text(out, write_bundle(m, s.table));
      std::cout << "realizable; controller written to " << out << "\n";
      return code;
    }
    if (*rep) {
      auto p = load(rep_c);
      ArenaOptions o = options_for(*p, rep_c);
      Synthesis s = rep_bundle.empty() ? synthesize(p, o) : Synthesis{};
      if (!s.arena) s.arena = std::make_unique<Arena>(p, o);
      StrategyTable t = strategy_for(*p, s, rep_bundle);
      std::vector<std::string> actions;
      std::istringstream in(read_file(rep_trace));
      for (std::string line; std::getline(in, line);) {
        if (line.rfind("T-MOVE ", 0) == 0) line = line.substr(7);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        if (!line.empty() && line[0] != ';' && line.rfind("S-MOVE", 0) != 0 && line.rfind("STATE", 0) != 0 &&
            line.rfind("VERDICT", 0) != 0)
          actions.push_back(line);
      }
      return report(playout_scripted(*s.arena, t, actions), rep_out);
    }
    if (*play) {
      auto p = load(play_c);
      ArenaOptions o = options_for(*p, play_c);
      Synthesis s = play_bundle.empty() ? synthesize(p, o) : Synthesis{};
      if (!s.arena) s.arena = std::make_unique<Arena>(p, o);
      StrategyTable t = strategy_for(*p, s, play_bundle);
      TraceReport r = play_mode == "random" ? playout_random(*s.arena, t, seed, runs, steps)
                                            : playout_exhaustive(*s.arena, t, depth);
      return report(r, play_out);
    }
    if (*dump_cmd) {
      auto p = load(dump_c);
      Arena arena(p, options_for(*p, dump_c));
      BuildOptions bo;
      bo.concrete = dump_concrete;
      std::cout << dump(arena, build_finite_arena(arena, bo));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::NotRealizable ? 1 : 2;
  }
  return 2;
}
