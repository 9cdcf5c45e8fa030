#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "golsynth/errors.hpp"

namespace golsynth {

struct Span {
  int line = 0;
  int column = 0;
};

// Symbol or list. Spans are ignored by equality.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  Span span;

  static SExpr symbol(std::string s, Span sp = {}) { return SExpr{false, std::move(s), {}, sp}; }
  static SExpr list(std::vector<SExpr> items, Span sp = {}) { return SExpr{true, {}, std::move(items), sp}; }

  bool is_atom() const { return !is_list; }
  bool is(std::string_view s) const { return !is_list && atom == s; }
  // True for a list whose first item is the symbol head.
  bool headed(std::string_view head) const { return is_list && !items.empty() && items[0].is(head); }
  std::size_t size() const { return items.size(); }
  const SExpr& operator[](std::size_t i) const { return items.at(i); }

  friend bool operator==(const SExpr& a, const SExpr& b) {
    return a.is_list == b.is_list && a.atom == b.atom && a.items == b.items;
  }
};

struct Diagnostic {
  ErrorKind kind = ErrorKind::SyntaxError;
  Span span;
  std::string message;
};

std::string format(const Diagnostic& d, std::string_view origin);

// All diagnostics found in one pass; the message lists every one of them
// with its location.
class ProblemErrors : public Error {
 public:
  ProblemErrors(std::vector<Diagnostic> diags, std::string_view origin);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

// Reads every top-level expression. Comments run from ';' to end of line.
// Syntax problems are appended to diags.
std::vector<SExpr> read_sexprs(std::string_view text, std::vector<Diagnostic>& diags);

// Single-line rendering.
std::string to_text(const SExpr& e);
// Indented multi-line rendering; lists that fit in width stay on one line.
std::string pretty(const SExpr& e, std::size_t width = 100);

}  // namespace golsynth
