#include "golsynth/signature.hpp"

#include <algorithm>

namespace golsynth {

std::string_view to_string(Theory t) { return t == Theory::target ? "target" : "system"; }

CompoundAction::CompoundAction(std::vector<GroundAction> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

CompoundAction CompoundAction::unite(const CompoundAction& a, const CompoundAction& b) {
  CompoundAction out;
  out.members_.reserve(a.size() + b.size());
  std::set_union(a.members_.begin(), a.members_.end(), b.members_.begin(), b.members_.end(),
                 std::back_inserter(out.members_));
  return out;
}

bool CompoundAction::contains(const GroundAction& a) const {
  return std::binary_search(members_.begin(), members_.end(), a);
}

bool Signature::is_reserved(std::string_view name) {
  return std::find(std::begin(kReserved), std::end(kReserved), name) != std::end(kReserved);
}

int Signature::add_sort(Sort sort) {
  std::sort(sort.members.begin(), sort.members.end());
  sort.members.erase(std::unique(sort.members.begin(), sort.members.end()), sort.members.end());
  for (auto o : sort.members) add_constant(o);
  int id = static_cast<int>(sorts_.size());
  sort_index_[sort.name] = id;
  sorts_.push_back(std::move(sort));
  return id;
}

int Signature::add_fluent(FluentSchema fluent) {
  int id = static_cast<int>(fluents_.size());
  fluent_index_[fluent.name] = id;
  fluents_.push_back(std::move(fluent));
  return id;
}

int Signature::add_action(ActionSchema action) {
  int id = static_cast<int>(actions_.size());
  action_index_[action.name] = id;
  actions_.push_back(std::move(action));
  return id;
}

int Signature::add_var(std::string name, int sort) {
  vars_.push_back(VarInfo{std::move(name), sort});
  return static_cast<int>(vars_.size()) - 1;
}

void Signature::add_constant(Object o) {
  if (!o.is_named()) return;
  auto it = std::lower_bound(constants_.begin(), constants_.end(), o);
  if (it == constants_.end() || *it != o) constants_.insert(it, o);
}

namespace {
int lookup(const std::unordered_map<std::string, int>& index, std::string_view name) {
  auto it = index.find(std::string(name));
  return it == index.end() ? -1 : it->second;
}
}  // namespace

int Signature::find_sort(std::string_view name) const { return lookup(sort_index_, name); }
int Signature::find_fluent(std::string_view name) const { return lookup(fluent_index_, name); }
int Signature::find_action(std::string_view name) const { return lookup(action_index_, name); }

std::string Signature::action_text(const GroundAction& a) const {
  std::string out = actions_.at(a.action).name;
  out += to_string(std::span<const Object>(a.args));
  return out;
}

std::string Signature::action_text(const CompoundAction& a) const {
  std::string out = "{";
  bool first = true;
  for (const auto& m : a.members()) {
    if (!first) out += ',';
    first = false;
    out += action_text(m);
  }
  out += '}';
  return out;
}

CompoundAction Signature::strip_idle(const CompoundAction& a) const {
  std::vector<GroundAction> kept;
  for (const auto& m : a.members())
    if (!actions_.at(m.action).idle) kept.push_back(m);
  return CompoundAction(std::move(kept));
}

}  // namespace golsynth
