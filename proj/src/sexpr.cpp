#include "golsynth/sexpr.hpp"

#include <cctype>

namespace golsynth {

std::string format(const Diagnostic& d, std::string_view origin) {
  return std::string(origin) + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) + ": " +
         std::string(to_string(d.kind)) + ": " + d.message;
}

namespace {

std::string join(const std::vector<Diagnostic>& diags, std::string_view origin) {
  std::string out = std::to_string(diags.size()) + " problem(s)";
  for (const auto& d : diags) out += "\n" + format(d, origin);
  return out;
}

class Reader {
 public:
  Reader(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    while (true) {
      skip();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == ')') {
        error("unbalanced ')'");
        advance();
        continue;
      }
      out.push_back(read());
    }
    return out;
  }

 private:
  Span here() const { return {line_, col_}; }

  void error(std::string msg) { diags_.push_back({ErrorKind::SyntaxError, here(), std::move(msg)}); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    Span start = here();
    if (text_[pos_] == '(') {
      advance();
      std::vector<SExpr> items;
      while (true) {
        skip();
        if (pos_ >= text_.size()) {
          diags_.push_back({ErrorKind::SyntaxError, start, "unterminated list"});
          break;
        }
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        items.push_back(read());
      }
      return SExpr::list(std::move(items), start);
    }
    std::string atom;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      if (!std::isprint(static_cast<unsigned char>(c))) {
        error("unexpected character");
        advance();
        continue;
      }
      atom += c;
      advance();
    }
    return SExpr::symbol(std::move(atom), start);
  }

  std::string_view text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void pretty_rec(const SExpr& e, std::size_t indent, std::size_t width, std::string& out) {
  std::string flat = to_text(e);
  if (!e.is_list || indent + flat.size() <= width || e.items.size() < 2) {
    out += flat;
    return;
  }
  out += "(";
  std::size_t first = 1;
  out += to_text(e.items[0]);
  if (e.items[0].is_atom() && e.items.size() > 1 && e.items[1].is_atom()) {
    out += " " + e.items[1].atom;
    first = 2;
  }
  for (std::size_t i = first; i < e.items.size(); ++i) {
    out += "\n" + std::string(indent + 2, ' ');
    pretty_rec(e.items[i], indent + 2, width, out);
  }
  out += ")";
}

}  // namespace

ProblemErrors::ProblemErrors(std::vector<Diagnostic> diags, std::string_view origin)
    : Error(diags.empty() ? ErrorKind::InvalidProblem : diags.front().kind, join(diags, origin)),
      diags_(std::move(diags)) {}

std::vector<SExpr> read_sexprs(std::string_view text, std::vector<Diagnostic>& diags) {
  return Reader(text, diags).all();
}

std::string to_text(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    out += to_text(e.items[i]);
  }
  return out + ")";
}

std::string pretty(const SExpr& e, std::size_t width) {
  std::string out;
  pretty_rec(e, 0, width, out);
  return out;
}

}  // namespace golsynth
