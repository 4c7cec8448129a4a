#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "alab/expr.hpp"

namespace alab {
namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords)
      : text_(text), coords_(coords) {}

  Expr run() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" +
                                   std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * factor();
      } else if (accept('/')) {
        lhs = lhs / factor();
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    if (accept('-')) return -power();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_space();
    double exponent = number();
    return pow(base, negative ? -exponent : exponent);
  }

  double number() {
    skip_space();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first == last ||
        !(std::isdigit(static_cast<unsigned char>(*first)) || *first == '.')) {
      fail("expected a number");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  Expr atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return Expr(number());
    }
    if (accept('(')) {
      Expr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view name = text_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i] == name) return Expr::coord(i);
      }
      using Fn = Expr (*)(const Expr&);
      Fn fn = nullptr;
      if (name == "sin") fn = &sin;
      else if (name == "cos") fn = &cos;
      else if (name == "tan") fn = &tan;
      else if (name == "exp") fn = &exp;
      else if (name == "log") fn = &log;
      else if (name == "sqrt") fn = &sqrt;
      if (fn == nullptr) {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      if (!accept('(')) fail("expected '(' after " + std::string(name));
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return fn(arg);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::kAdd:
    case Op::kSub: return 1;
    case Op::kMul:
    case Op::kDiv: return 2;
    case Op::kNeg: return 3;
    case Op::kConst: return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    case Op::kPow: return 4;
    default: return 5;
  }
}

class Printer {
 public:
  explicit Printer(std::span<const std::string> coords) : coords_(coords) {}

  void print(const Expr& e) {
    switch (e.op()) {
      case Op::kConst: out_ += format_double(e.value()); return;
      case Op::kCoord:
        if (e.index() < coords_.size()) {
          out_ += coords_[e.index()];
        } else {
          out_ += "x" + std::to_string(e.index() + 1);
        }
        return;
      case Op::kNeg:
        out_ += '-';
        wrap(e.lhs(), 4);
        return;
      case Op::kPow:
        wrap(e.lhs(), 5);
        out_ += '^';
        out_ += format_double(e.value());
        return;
      case Op::kAdd: binary(e, " + ", 1); return;
      case Op::kSub: binary(e, " - ", 1); return;
      case Op::kMul: binary(e, "*", 2); return;
      case Op::kDiv: binary(e, "/", 2); return;
      case Op::kSin: call("sin", e); return;
      case Op::kCos: call("cos", e); return;
      case Op::kTan: call("tan", e); return;
      case Op::kExp: call("exp", e); return;
      case Op::kLog: call("log", e); return;
      case Op::kSqrt: call("sqrt", e); return;
    }
  }

  std::string take() { return std::move(out_); }

 private:
  void wrap(const Expr& e, int min_prec) {
    if (precedence(e) < min_prec) {
      out_ += '(';
      print(e);
      out_ += ')';
    } else {
      print(e);
    }
  }

  void binary(const Expr& e, const char* sep, int prec) {
    wrap(e.lhs(), prec);
    out_ += sep;
    // Right operands bind tighter; a leading minus would read as unary.
    int p = precedence(e.rhs());
    if (p <= prec || p == 3) {
      out_ += '(';
      print(e.rhs());
      out_ += ')';
    } else {
      print(e.rhs());
    }
  }

  void call(const char* name, const Expr& e) {
    out_ += name;
    out_ += '(';
    print(e.lhs());
    out_ += ')';
  }

  std::span<const std::string> coords_;
  std::string out_;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> coords) {
  return Parser(text, coords).run();
}

std::string to_string(const Expr& e, std::span<const std::string> coords) {
  Printer p(coords);
  p.print(e);
  return p.take();
}

std::string to_string(const Expr& e) { return to_string(e, {}); }

}  // namespace alab
