#pragma once

#include <compare>
#include <deque>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace golsynth {

// An element of the object domain. Named constants (including constructed
// tuple-objects such as hole(f,1,2,3)) live in the low id range; anonymous
// objects carry the high bit and are identified only up to renaming.
struct Object {
  static constexpr std::uint32_t kAnonBit = 0x80000000u;
  static constexpr std::uint32_t kUnsetId = 0xFFFFFFFFu;

  std::uint32_t id = kUnsetId;

  constexpr bool is_unset() const { return id == kUnsetId; }
  constexpr bool is_anonymous() const { return !is_unset() && (id & kAnonBit) != 0; }
  constexpr bool is_named() const { return !is_unset() && (id & kAnonBit) == 0; }
  constexpr std::uint32_t anon_index() const { return id & ~kAnonBit; }

  friend constexpr auto operator<=>(Object, Object) = default;
};

inline constexpr Object kUnset{};

constexpr Object anonymous(std::uint32_t index) { return Object{index | Object::kAnonBit}; }

using Tuple = std::vector<Object>;

struct CtorInfo {
  std::string name;
  Tuple args;
};

// Process-wide intern table for named constants. Interning is guarded by a
// mutex; lookups of already-interned ids return stable references.
class ObjectTable {
 public:
  static ObjectTable& global();

  Object intern(std::string_view name);
  Object intern_ctor(std::string_view ctor, std::span<const Object> args);
  // Returns kUnset if the name was never interned.
  Object find(std::string_view name) const;

  std::string name(Object o) const;
  // nullptr unless o was built by intern_ctor.
  const CtorInfo* ctor_info(Object o) const;

 private:
  ObjectTable() = default;

  mutable std::mutex mu_;
  std::vector<std::string> names_;
  std::vector<std::size_t> ctor_index_;  // parallel to names_, SIZE_MAX if plain
  std::deque<CtorInfo> ctors_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

std::string to_string(Object o);
std::string to_string(std::span<const Object> tuple);

// Parses "#k" into anonymous(k); named otherwise.
Object object_from_token(std::string_view token);

struct ObjectHash {
  std::size_t operator()(Object o) const noexcept { return std::hash<std::uint32_t>{}(o.id); }
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept;
};

}  // namespace golsynth
