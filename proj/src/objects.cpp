#include "golsynth/objects.hpp"

#include <charconv>
#include <limits>

namespace golsynth {

namespace {
constexpr std::size_t kNoCtor = std::numeric_limits<std::size_t>::max();
}

ObjectTable& ObjectTable::global() {
  static ObjectTable table;
  return table;
}

Object ObjectTable::intern(std::string_view name) {
  std::lock_guard lock(mu_);
  std::string key(name);
  if (auto it = by_name_.find(key); it != by_name_.end()) return Object{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.push_back(key);
  ctor_index_.push_back(kNoCtor);
  by_name_.emplace(std::move(key), id);
  return Object{id};
}

Object ObjectTable::intern_ctor(std::string_view ctor, std::span<const Object> args) {
  std::string key(ctor);
  key += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) key += ',';
    key += name(args[i]);
  }
  key += ')';
  std::lock_guard lock(mu_);
  if (auto it = by_name_.find(key); it != by_name_.end()) return Object{it->second};
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.push_back(key);
  ctor_index_.push_back(ctors_.size());
  ctors_.push_back(CtorInfo{std::string(ctor), Tuple(args.begin(), args.end())});
  by_name_.emplace(std::move(key), id);
  return Object{id};
}

Object ObjectTable::find(std::string_view name) const {
  std::lock_guard lock(mu_);
  if (auto it = by_name_.find(std::string(name)); it != by_name_.end()) return Object{it->second};
  return kUnset;
}

std::string ObjectTable::name(Object o) const {
  if (o.is_unset()) return "_";
  if (o.is_anonymous()) return "#" + std::to_string(o.anon_index());
  std::lock_guard lock(mu_);
  return names_.at(o.id);
}

const CtorInfo* ObjectTable::ctor_info(Object o) const {
  if (!o.is_named()) return nullptr;
  std::lock_guard lock(mu_);
  if (o.id >= ctor_index_.size()) return nullptr;
  auto idx = ctor_index_[o.id];
  return idx == kNoCtor ? nullptr : &ctors_[idx];
}

std::string to_string(Object o) { return ObjectTable::global().name(o); }

std::string to_string(std::span<const Object> tuple) {
  std::string out = "(";
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i) out += ',';
    out += to_string(tuple[i]);
  }
  out += ')';
  return out;
}

Object object_from_token(std::string_view token) {
  if (token.size() > 1 && token[0] == '#') {
    std::uint32_t idx = 0;
    auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), idx);
    if (ec == std::errc() && ptr == token.data() + token.size()) return anonymous(idx);
  }
  return ObjectTable::global().intern(token);
}

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto o : t) {
    h ^= o.id;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace golsynth
