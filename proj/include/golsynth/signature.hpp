#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "golsynth/objects.hpp"

namespace golsynth {

enum class Theory : std::uint8_t { target, system };

std::string_view to_string(Theory t);

inline constexpr int kAnySort = -1;

struct Sort {
  std::string name;
  std::vector<Object> members;  // named constants, sorted
  // Pick variables of an open sort may also take anonymous objects.
  bool open = false;
};

struct FluentSchema {
  std::string name;
  std::vector<int> arg_sorts;
  bool situation_dependent = true;
  bool observable = false;
  Theory theory = Theory::target;
};

struct ActionSchema {
  std::string name;
  std::vector<int> param_sorts;
  Theory theory = Theory::target;
  // Idle actions (nop) are dropped before compound-action comparison and
  // compound Poss matching.
  bool idle = false;
};

struct VarInfo {
  std::string name;
  int sort = kAnySort;
};

struct GroundAction {
  int action = -1;
  Tuple args;

  friend auto operator<=>(const GroundAction&, const GroundAction&) = default;
};

// A finite set of simple actions executed together. Members are kept sorted
// and unique, so equality is set equality.
class CompoundAction {
 public:
  CompoundAction() = default;
  explicit CompoundAction(std::vector<GroundAction> members);

  static CompoundAction unite(const CompoundAction& a, const CompoundAction& b);

  const std::vector<GroundAction>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(const GroundAction& a) const;

  friend auto operator<=>(const CompoundAction&, const CompoundAction&) = default;

 private:
  std::vector<GroundAction> members_;
};

class Signature {
 public:
  static constexpr const char* kReserved[] = {"turnS", "turnT", "turn", "progT", "progS",
                                              "finalT", "finalS", "envT", "envS", "obsEq"};
  static bool is_reserved(std::string_view name);

  int add_sort(Sort sort);
  int add_fluent(FluentSchema fluent);
  int add_action(ActionSchema action);
  int add_var(std::string name, int sort = kAnySort);
  void add_constant(Object o);

  int find_sort(std::string_view name) const;
  int find_fluent(std::string_view name) const;
  int find_action(std::string_view name) const;

  const Sort& sort(int id) const { return sorts_.at(id); }
  const FluentSchema& fluent(int id) const { return fluents_.at(id); }
  const ActionSchema& action(int id) const { return actions_.at(id); }
  const VarInfo& var(int id) const { return vars_.at(id); }
  VarInfo& var(int id) { return vars_.at(id); }

  std::size_t sort_count() const { return sorts_.size(); }
  std::size_t fluent_count() const { return fluents_.size(); }
  std::size_t action_count() const { return actions_.size(); }
  std::size_t var_count() const { return vars_.size(); }

  // Every named constant mentioned anywhere in the problem, sorted.
  const std::vector<Object>& constants() const { return constants_; }
  bool sort_is_open(int sort) const { return sort == kAnySort || sorts_.at(sort).open; }

  std::string action_text(const GroundAction& a) const;
  std::string action_text(const CompoundAction& a) const;

  // Drops idle members; the result may be empty.
  CompoundAction strip_idle(const CompoundAction& a) const;

 private:
  std::vector<Sort> sorts_;
  std::vector<FluentSchema> fluents_;
  std::vector<ActionSchema> actions_;
  std::vector<VarInfo> vars_;
  std::vector<Object> constants_;
  std::unordered_map<std::string, int> sort_index_, fluent_index_, action_index_;
};

}  // namespace golsynth
