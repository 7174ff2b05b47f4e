#pragma once

// Analytic expressions of one complex variable z.
//
// Grammar (whitespace ignored):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := unary ('^' factor)?          right associative
//   unary  := '-'? atom
//   atom   := number | 'i' | 'z' | ('exp' | 'log') '(' expr ')' | '(' expr ')'
//
// Note that '-' binds tighter than '^', so "-z^2" is (-z)^2.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "logharm/error.hpp"
#include "logharm/jet.hpp"

namespace logharm {

class Expr {
 public:
  enum class Op { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow, Exp, Log };

  struct Node {
    Op op;
    Complex value{};
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
    bool constant = true;  // no occurrence of z below this node
  };

  Expr() : Expr(literal(0.0)) {}

  static Expr literal(Complex c) { return Expr(make(Op::Literal, c, nullptr, nullptr)); }
  static Expr variable() { return Expr(make(Op::Variable, {}, nullptr, nullptr)); }

  friend Expr operator-(const Expr& a) { return unary(Op::Neg, a); }
  friend Expr operator+(const Expr& a, const Expr& b) { return binary(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(Op::Div, a, b); }
  friend Expr pow(const Expr& a, const Expr& b) { return binary(Op::Pow, a, b); }
  friend Expr exp(const Expr& a) { return unary(Op::Exp, a); }
  friend Expr log(const Expr& a) { return unary(Op::Log, a); }

  const Node& root() const { return *root_; }
  bool is_constant() const { return root_->constant; }

  /// Derivative jet of order N at p. Throws PoleEncountered(p) on a zero
  /// denominator, log(0), or a non-integer / negative power of 0.
  template <int N>
  Jet<N> jet(Complex p) const {
    try {
      return eval<N>(*root_, p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleEncountered && !e.point())
        throw Error(e.kind(), e.what(), p);
      throw;
    }
  }

  Complex operator()(Complex p) const { return jet<0>(p).value(); }

  std::string to_string() const {
    std::string out;
    print(*root_, out);
    return out;
  }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Op op, Complex v, std::shared_ptr<const Node> l,
                                          std::shared_ptr<const Node> r) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = v;
    n->constant = op != Op::Variable && (!l || l->constant) && (!r || r->constant);
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }
  static Expr unary(Op op, const Expr& a) { return Expr(make(op, {}, a.root_, nullptr)); }
  static Expr binary(Op op, const Expr& a, const Expr& b) {
    return Expr(make(op, {}, a.root_, b.root_));
  }

  template <int N>
  static Jet<N> eval(const Node& n, Complex p) {
    switch (n.op) {
      case Op::Literal: return Jet<N>::constant(n.value);
      case Op::Variable: return Jet<N>::variable(p);
      case Op::Neg: return -eval<N>(*n.lhs, p);
      case Op::Add: return eval<N>(*n.lhs, p) + eval<N>(*n.rhs, p);
      case Op::Sub: return eval<N>(*n.lhs, p) - eval<N>(*n.rhs, p);
      case Op::Mul: return eval<N>(*n.lhs, p) * eval<N>(*n.rhs, p);
      case Op::Div: return eval<N>(*n.lhs, p) / eval<N>(*n.rhs, p);
      case Op::Exp: return logharm::exp(eval<N>(*n.lhs, p));
      case Op::Log: return logharm::log(eval<N>(*n.lhs, p));
      case Op::Pow: {
        const Jet<N> base = eval<N>(*n.lhs, p);
        if (!n.rhs->constant) {
          return logharm::exp(eval<N>(*n.rhs, p) * logharm::log(base));
        }
        const Complex c = eval<0>(*n.rhs, p).value();
        if (c.imag() == 0.0 && std::abs(c.real()) <= 4096.0 &&
            c.real() == std::trunc(c.real())) {
          return pow_int(base, static_cast<std::int64_t>(c.real()));
        }
        return pow_const(base, c);
      }
    }
    return {};
  }

  static int precedence(const Node& n) {
    switch (n.op) {
      case Op::Add:
      case Op::Sub: return 1;
      case Op::Mul:
      case Op::Div: return 2;
      case Op::Pow: return 3;
      case Op::Neg: return 4;
      default: return 5;
    }
  }

  static bool is_plain_literal(Complex v) {
    return (v.imag() == 0.0 && !std::signbit(v.real())) || v == Complex{0.0, 1.0};
  }

  static void print_number(double x, std::string& out) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
  }

  static void print_paren(const Node& n, bool paren, std::string& out) {
    if (paren) out += '(';
    print(n, out);
    if (paren) out += ')';
  }

  static void print(const Node& n, std::string& out) {
    switch (n.op) {
      case Op::Literal: {
        const Complex v = n.value;
        if (v == Complex{0.0, 1.0}) {
          out += 'i';
        } else if (is_plain_literal(v)) {
          print_number(v.real(), out);
        } else if (v.imag() == 0.0) {
          out += "(-";
          print_number(-v.real(), out);
          out += ')';
        } else {
          out += '(';
          print_number(v.real(), out);
          out += v.imag() < 0 ? '-' : '+';
          print_number(std::abs(v.imag()), out);
          out += "*i)";
        }
        return;
      }
      case Op::Variable: out += 'z'; return;
      case Op::Neg:
        out += '-';
        print_paren(*n.lhs, precedence(*n.lhs) < 5, out);
        return;
      case Op::Exp:
      case Op::Log:
        out += n.op == Op::Exp ? "exp(" : "log(";
        print(*n.lhs, out);
        out += ')';
        return;
      case Op::Pow:
        print_paren(*n.lhs, precedence(*n.lhs) < 4, out);
        out += '^';
        print_paren(*n.rhs, precedence(*n.rhs) < 3, out);
        return;
      default: {
        const int prec = precedence(n);
        print_paren(*n.lhs, precedence(*n.lhs) < prec, out);
        out += n.op == Op::Add ? "+" : n.op == Op::Sub ? "-" : n.op == Op::Mul ? "*" : "/";
        print_paren(*n.rhs, precedence(*n.rhs) <= prec, out);
        return;
      }
    }
  }

  std::shared_ptr<const Node> root_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, ErrorKind kind = ErrorKind::ParseError) {
    throw Error(kind, msg + " at offset " + std::to_string(pos_), std::nullopt, pos_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = lhs + term();
      else if (accept('-')) lhs = lhs - term();
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) lhs = lhs * factor();
      else if (accept('/')) lhs = lhs / factor();
      else return lhs;
    }
  }

  Expr factor() {
    Expr base = unary();
    if (accept('^')) return pow(base, factor());
    return base;
  }

  Expr unary() {
    if (accept('-')) return -atom();
    return atom();
  }

  Expr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view id = text_.substr(start, pos_ - start);
      if (id == "z") return Expr::variable();
      if (id == "i") return Expr::literal({0.0, 1.0});
      if (id == "exp" || id == "log") {
        expect('(');
        Expr arg = expr();
        expect(')');
        return id == "exp" ? exp(arg) : log(arg);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'", ErrorKind::UnknownIdentifier);
    }
    fail("unexpected character");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::literal(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Throws ParseError or UnknownIdentifier, both carrying the byte offset.
inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

inline Jet3 eval_jet(const Expr& e, Complex p) { return e.jet<3>(p); }

/// (d/dz, d/dzbar) of an analytic expression: (e'(p), 0).
inline std::pair<Complex, Complex> wirtinger_pair(const Expr& e, Complex p) {
  return {e.jet<1>(p)[1], Complex{}};
}

}  // namespace logharm
