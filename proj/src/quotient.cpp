#include "golsynth/quotient.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace golsynth {

namespace {

using Namer = std::function<std::string(Object)>;

void put(std::string& out, std::string_view token) {
  out += std::to_string(token.size());
  out += ':';
  out += token;
}

std::string tuple_text(const Tuple& t, const Namer& name) {
  std::string out;
  for (auto o : t) put(out, name(o));
  return out;
}

void put_config(std::string& out, const Arena& arena, const Configuration& c, const Namer& name, bool with_world) {
  const Problem& p = arena.problem();
  const Signature& sig = *p.sig;
  put(out, p.pool->text(c.counter));
  std::vector<std::string> env;
  for (const auto& [v, o] : c.env) env.push_back(sig.var(v).name + "=" + name(o));
  std::sort(env.begin(), env.end());
  put(out, "env" + std::to_string(env.size()));
  for (const auto& e : env) put(out, e);
  if (!with_world) return;
  const WorldState& w = c.world;
  for (std::size_t f = 0; f < w.fluent_count(); ++f) {
    if (w.is_rigid(static_cast<int>(f))) continue;
    const auto& ext = w.extension(static_cast<int>(f));
    if (ext.empty()) continue;
    std::vector<std::string> rows;
    rows.reserve(ext.size());
    for (const auto& t : ext) rows.push_back(tuple_text(t, name));
    std::sort(rows.begin(), rows.end());
    put(out, sig.fluent(static_cast<int>(f)).name + "/" + std::to_string(rows.size()));
    for (const auto& r : rows) put(out, r);
  }
}

std::string serialize_with(const Arena& arena, const ArenaState& q, const Namer& name) {
  std::string out = "cf1";
  put(out, std::string(1, turn_char(q.turn)));
  put(out, "T");
  put_config(out, arena, q.target, name, true);
  put(out, "S");
  put_config(out, arena, q.system, name, true);
  put(out, "P");
  put_config(out, arena, q.pending, name, false);
  return out;
}

struct Fact {
  std::string tag;
  Tuple objs;
};

std::vector<Fact> facts_of(const Arena& arena, const ArenaState& q) {
  const Signature& sig = *arena.problem().sig;
  std::vector<Fact> out;
  auto world = [&](const char* tag, const WorldState& w) {
    for (std::size_t f = 0; f < w.fluent_count(); ++f) {
      if (w.is_rigid(static_cast<int>(f))) continue;
      for (const auto& t : w.extension(static_cast<int>(f))) out.push_back({tag + sig.fluent(static_cast<int>(f)).name, t});
    }
  };
  world("t.", q.target.world);
  world("s.", q.system.world);
  auto env = [&](const char* tag, const Env& e) {
    for (const auto& [v, o] : e) out.push_back({tag + sig.var(v).name, {o}});
  };
  env("eT.", q.target.env);
  env("eS.", q.system.env);
  env("eP.", q.pending.env);
  return out;
}

class Labeler {
 public:
  Labeler(const Arena& arena, const ArenaState& q, const std::vector<Object>& pinned)
      : arena_(arena), q_(q), facts_(facts_of(arena, q)) {
    for (auto o : arena.anonymous_objects(q))
      if (std::find(pinned.begin(), pinned.end(), o) == pinned.end()) free_.push_back(o);
    for (std::size_t i = 0; i < facts_.size(); ++i)
      for (std::size_t k = 0; k < facts_[i].objs.size(); ++k)
        if (facts_[i].objs[k].is_anonymous()) occurrences_[facts_[i].objs[k]].push_back({i, k});
  }

  CanonicalForm run() {
    std::map<Object, int> colors;
    for (auto o : free_) colors[o] = 0;
    search(colors);
    return best_;
  }

 private:
  std::string fixed_name(Object o) const {
    if (o.is_anonymous()) return "!" + std::to_string(o.anon_index());
    return to_string(o);
  }

  void refine(std::map<Object, int>& colors) const {
    std::size_t classes = count_classes(colors);
    while (true) {
      std::map<Object, std::string> keys;
      for (auto o : free_) {
        std::vector<std::string> sig;
        auto it = occurrences_.find(o);
        if (it != occurrences_.end())
          for (auto [fi, pos] : it->second) {
            std::string s = facts_[fi].tag + "@" + std::to_string(pos) + "(";
            for (auto x : facts_[fi].objs) {
              auto c = colors.find(x);
              s += c != colors.end() ? "c" + std::to_string(c->second) : fixed_name(x);
              s += ',';
            }
            sig.push_back(s + ")");
          }
        std::sort(sig.begin(), sig.end());
        std::string key = std::to_string(colors[o]);
        for (const auto& s : sig) key += "|" + s;
        keys[o] = std::move(key);
      }
      // Rank by (old color, signature); old colors come first so the order is stable.
      std::vector<std::pair<int, std::string>> ranked;
      for (auto o : free_) ranked.push_back({colors[o], keys[o]});
      std::sort(ranked.begin(), ranked.end());
      ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
      for (auto o : free_) {
        auto it = std::lower_bound(ranked.begin(), ranked.end(), std::make_pair(colors[o], keys[o]));
        colors[o] = static_cast<int>(it - ranked.begin());
      }
      std::size_t now = count_classes(colors);
      if (now == classes) return;
      classes = now;
    }
  }

  static std::size_t count_classes(const std::map<Object, int>& colors) {
    std::set<int> s;
    for (const auto& [o, c] : colors) s.insert(c);
    return s.size();
  }

  void search(std::map<Object, int> colors) {
    refine(colors);
    std::map<int, std::vector<Object>> classes;
    for (const auto& [o, c] : colors) classes[c].push_back(o);
    for (const auto& [c, members] : classes) {
      if (members.size() < 2) continue;
      for (auto o : members) {
        std::map<Object, int> next;
        for (const auto& [x, cx] : colors) next[x] = 2 * cx;
        next[o] = 2 * c - 1;
        search(std::move(next));
      }
      return;
    }
    Renaming r;
    for (const auto& [o, c] : colors) r[o] = anonymous(static_cast<std::uint32_t>(c));
    std::string text = serialize_with(arena_, q_, [&](Object o) {
      auto it = r.find(o);
      if (it != r.end()) return to_string(it->second);
      return fixed_name(o);
    });
    if (!found_ || text < best_.text) {
      found_ = true;
      best_.text = std::move(text);
      best_.renaming = std::move(r);
    }
  }

  const Arena& arena_;
  const ArenaState& q_;
  std::vector<Fact> facts_;
  std::vector<Object> free_;
  std::map<Object, std::vector<std::pair<std::size_t, std::size_t>>> occurrences_;
  CanonicalForm best_;
  bool found_ = false;
};

}  // namespace

ArenaState rename(const ArenaState& q, const Renaming& r) {
  if (r.empty()) return q;
  auto f = [&](Object o) {
    auto it = r.find(o);
    return it == r.end() ? o : it->second;
  };
  auto config = [&](const Configuration& c, bool world) {
    Configuration out;
    out.counter = c.counter;
    for (const auto& [v, o] : c.env) out.env.push_back({v, f(o)});
    out.world = world ? c.world.renamed(f) : c.world;
    return out;
  };
  ArenaState out;
  out.turn = q.turn;
  out.target = config(q.target, true);
  out.system = config(q.system, true);
  out.pending = config(q.pending, false);
  out.pending.world = out.system.world;
  return out;
}

std::string serialize(const Arena& arena, const ArenaState& q) {
  return serialize_with(arena, q, [](Object o) { return to_string(o); });
}

CanonicalForm canonicalize(const Arena& arena, const ArenaState& q, const std::vector<Object>& pinned) {
  Labeler labeler(arena, q, pinned);
  CanonicalForm cf = labeler.run();
  if (!pinned.empty()) cf.renaming.clear();
  return cf;
}

std::optional<Renaming> isomorphic(const Arena& arena, const ArenaState& q1, const ArenaState& q2) {
  CanonicalForm c1 = canonicalize(arena, q1);
  CanonicalForm c2 = canonicalize(arena, q2);
  if (c1.text != c2.text) return std::nullopt;
  Renaming inverse;
  for (const auto& [o, c] : c2.renaming) inverse[c] = o;
  Renaming h;
  for (const auto& [o, c] : c1.renaming) h[o] = inverse.at(c);
  return h;
}

// ---------------------------------------------------------------------------

std::size_t FiniteArena::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

int FiniteArena::find(const std::string& form) const {
  auto it = index.find(form);
  return it == index.end() ? -1 : it->second;
}

std::vector<std::vector<int>> FiniteArena::successor_lists() const {
  std::vector<std::vector<int>> out(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (const auto& e : edges[i]) out[i].push_back(e.to);
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

namespace {

std::string move_line(const Arena& arena, Move::Kind kind, const CompoundAction& a) {
  return std::string(kind == Move::Kind::target ? "T-MOVE " : "S-MOVE ") + arena.problem().sig->action_text(a);
}

}  // namespace

FiniteArena build_finite_arena(const Arena& arena, const BuildOptions& options) {
  FiniteArena fa;
  std::vector<int> parents;

  auto key_of = [&](const ArenaState& q) {
    return options.concrete ? serialize(arena, q) : canonicalize(arena, q).text;
  };

  // Replays the path to the offending state from the concrete initial
  // state, so the reported moves use one consistent naming.
  auto check_bound = [&](const ArenaState& q, int parent) {
    std::size_t size = arena.active_domain(q).size();
    if (size <= arena.options().bound) return;
    std::vector<std::string> keys{key_of(q)};
    for (int i = parent; i > 0; i = parents[i]) keys.push_back(fa.forms[i]);
    std::reverse(keys.begin(), keys.end());
    std::string msg = "active domain of size " + std::to_string(size) + " exceeds bound " +
                      std::to_string(arena.options().bound) + "\ntrace:\n";
    ArenaState cur = arena.initial_state();
    for (const auto& key : keys) {
      bool found = false;
      for (auto& m : arena.successors(cur)) {
        if (key_of(m.next) != key) continue;
        msg += "  " + move_line(arena, m.kind, m.action) + "\n";
        cur = std::move(m.next);
        found = true;
        break;
      }
      if (!found) break;
    }
    msg += "offending state:\n" + arena.describe(cur);
    throw Error(ErrorKind::BoundExceeded, msg);
  };

  auto add = [&](const ArenaState& q, int parent) -> int {
    std::string key;
    ArenaState rep;
    if (options.concrete) {
      key = serialize(arena, q);
      rep = q;
    } else {
      CanonicalForm cf = canonicalize(arena, q);
      key = std::move(cf.text);
      rep = rename(q, cf.renaming);
    }
    if (auto it = fa.index.find(key); it != fa.index.end()) return it->second;
    check_bound(rep, parent);
    if (fa.states.size() >= options.max_states)
      throw Error(ErrorKind::InvalidProblem, "arena exceeds " + std::to_string(options.max_states) + " states");
    int id = static_cast<int>(fa.states.size());
    fa.index.emplace(key, id);
    fa.forms.push_back(std::move(key));
    fa.labels.push_back(arena.labels(rep));
    fa.states.push_back(std::move(rep));
    fa.edges.emplace_back();
    parents.push_back(parent);
    return id;
  };

  fa.initial = add(arena.initial_state(), -1);
  for (std::size_t i = 0; i < fa.states.size(); ++i) {
    ArenaState q = fa.states[i];
    std::set<std::pair<int, CompoundAction>> seen;
    for (auto& m : arena.successors(q)) {
      int j = add(m.next, static_cast<int>(i));
      if (!seen.insert({j, m.action}).second) continue;
      fa.edges[i].push_back({j, m.kind, std::move(m.action)});
    }
  }
  return fa;
}

std::string dump(const Arena& arena, const FiniteArena& fa) {
  std::string out = "arena states " + std::to_string(fa.size()) + " edges " + std::to_string(fa.edge_count()) +
                    " initial " + std::to_string(fa.initial) + "\n";
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const Labels& l = fa.labels[i];
    out += "state " + std::to_string(i) + " turn " + turn_char(l.turn) + " finalT " + (l.final_t ? "1" : "0") +
           " finalS " + (l.final_s ? "1" : "0") + " obsEq " + (l.obs_eq ? "1" : "0") + "\n";
    std::string d = arena.describe(fa.states[i]);
    std::size_t start = 0;
    while (start < d.size()) {
      std::size_t end = d.find('\n', start);
      out += "  " + d.substr(start, end - start) + "\n";
      start = end + 1;
    }
    for (const auto& e : fa.edges[i])
      out += "  -> " + std::to_string(e.to) + " " + move_line(arena, e.kind, e.action) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

PBisimTracker::PBisimTracker(const Arena& arena, const ArenaState& initial)
    : arena_(arena), concrete_(initial), abstract_(initial) {
  for (auto o : arena.anonymous_objects(initial)) h_[o] = o;
}

void PBisimTracker::step(const ArenaState& next, const std::string& expected_form) {
  ++checks_;
  std::vector<Object> now = arena_.anonymous_objects(next);
  std::set<Object> taken;
  for (const auto& [c, a] : h_) taken.insert(a);
  for (const auto& [c, a] : departed_) taken.insert(a);

  Renaming h2;
  std::set<Object> image;
  std::uint32_t fresh = 0;
  for (auto o : now) {
    Object a;
    if (auto it = h_.find(o); it != h_.end())
      a = it->second;
    else if (auto jt = departed_.find(o); jt != departed_.end())
      a = jt->second;
    else {
      while (taken.contains(anonymous(fresh)) || image.contains(anonymous(fresh))) ++fresh;
      a = anonymous(fresh++);
    }
    if (!image.insert(a).second)
      throw Error(ErrorKind::BisimulationBroken, "renaming is not injective at " + to_string(a));
    h2[o] = a;
  }
  ArenaState abs_next = rename(next, h2);

  bool identity = std::all_of(h2.begin(), h2.end(), [](const auto& e) { return e.first == e.second; }) &&
                  abstract_ == concrete_;
  if (!identity) {
    std::vector<Object> before = arena_.anonymous_objects(abstract_);
    std::vector<Object> pinned;
    std::set_intersection(before.begin(), before.end(), image.begin(), image.end(), std::back_inserter(pinned));
    std::string target = canonicalize(arena_, abs_next, pinned).text;
    bool matched = false;
    for (const auto& m : arena_.successors(abstract_))
      if (canonicalize(arena_, m.next, pinned).text == target) {
        matched = true;
        break;
      }
    if (!matched)
      throw Error(ErrorKind::BisimulationBroken, "abstract step has no matching successor:\n" + arena_.describe(abs_next));
  }
  if (canonicalize(arena_, abs_next).text != expected_form)
    throw Error(ErrorKind::BisimulationBroken, "abstract state differs from the quotient state:\n" +
                                                   arena_.describe(abs_next));

  Renaming departed;
  for (const auto& [c, a] : h_)
    if (!h2.contains(c)) departed[c] = a;
  departed_ = std::move(departed);
  h_ = std::move(h2);
  concrete_ = next;
  abstract_ = std::move(abs_next);
}

}  // namespace golsynth
