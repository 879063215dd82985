#pragma once

#include "confalg/cdmod.hpp"
#include "confalg/errors.hpp"
#include "confalg/exact/laurent.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace confalg::cli {

struct Pos {
  int line = 1;
  int col = 1;
};

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Pos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }
  bool at(std::string_view punct) const { return tok_.kind == Token::Kind::Punct && tok_.text == punct; }
  bool at_end() const { return tok_.kind == Token::Kind::End; }

  Token expect(std::string_view punct) {
    if (!at(punct)) fail("expected '" + std::string(punct) + "'");
    return next();
  }
  Token expect_ident(const std::string& what) {
    if (tok_.kind != Token::Kind::Ident) fail("expected " + what);
    return next();
  }
  Token expect_number(const std::string& what) {
    if (tok_.kind != Token::Kind::Number) fail("expected " + what);
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = tok_.kind == Token::Kind::End ? "end of input" : "'" + tok_.text + "'";
    throw InputError(msg + ", found " + found, tok_.pos.line, tok_.pos.col);
  }

 private:
  void advance() {
    skip_space();
    tok_ = Token{};
    tok_.pos = pos_;
    if (i_ >= src_.size()) return;
    const char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::string(src_.substr(i_, j - i_));
      move(j - i_);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      tok_.kind = Token::Kind::Number;
      tok_.text = std::string(src_.substr(i_, j - i_));
      move(j - i_);
    } else if (std::string_view("+-*/^()[]{};,=").find(c) != std::string_view::npos) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      move(1);
    } else {
      throw InputError(std::string("unexpected character '") + c + "'", pos_.line, pos_.col);
    }
  }

  void skip_space() {
    while (i_ < src_.size()) {
      const char c = src_[i_];
      if (c == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') move(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        move(1);
      } else {
        break;
      }
    }
  }

  void move(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i_) {
      if (src_[i_] == '\n') {
        ++pos_.line;
        pos_.col = 1;
      } else {
        ++pos_.col;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Pos pos_;
  Token tok_;
};

struct Expr {
  enum class Kind { Num, Del, Lambda, Z, Gen, Add, Sub, Mul, Div, Neg, Pow, Exp };
  Kind kind = Kind::Num;
  Rational num;        // Num: a non-negative integer
  std::string name;    // Gen
  long exponent = 0;   // Pow
  std::vector<Expr> args;
  Pos pos;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.kind == b.kind && a.num == b.num && a.name == b.name && a.exponent == b.exponent && a.args == b.args;
  }
};

namespace detail {

inline Expr node(Expr::Kind k, Pos p, std::vector<Expr> args = {}) {
  Expr e;
  e.kind = k;
  e.pos = p;
  e.args = std::move(args);
  return e;
}

inline Expr parse_sum(Lexer& lx);

inline Expr parse_primary(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number) {
    Token n = lx.next();
    Expr e = node(Expr::Kind::Num, n.pos);
    e.num = Rational(n.text);
    return e;
  }
  if (t.kind == Token::Kind::Ident) {
    Token id = lx.next();
    if (id.text == "del") return node(Expr::Kind::Del, id.pos);
    if (id.text == "lambda") return node(Expr::Kind::Lambda, id.pos);
    if (id.text == "z") return node(Expr::Kind::Z, id.pos);
    if (id.text == "exp") {
      lx.expect("(");
      Expr arg = parse_sum(lx);
      lx.expect(")");
      return node(Expr::Kind::Exp, id.pos, {std::move(arg)});
    }
    Expr e = node(Expr::Kind::Gen, id.pos);
    e.name = id.text;
    return e;
  }
  if (lx.at("(")) {
    lx.next();
    Expr e = parse_sum(lx);
    lx.expect(")");
    return e;
  }
  lx.fail("expected an expression");
}

inline Expr parse_power(Lexer& lx) {
  Expr base = parse_primary(lx);
  if (!lx.at("^")) return base;
  Token caret = lx.next();
  bool neg = false;
  if (lx.at("-")) {
    lx.next();
    neg = true;
  }
  Token n = lx.expect_number("an integer exponent");
  if (n.text.size() > 3) throw InputError("exponent too large", n.pos.line, n.pos.col);
  long k = std::stol(n.text);
  if (neg) {
    if (base.kind != Expr::Kind::Z) throw InputError("negative exponents are only allowed on z", caret.pos.line, caret.pos.col);
    k = -k;
  }
  Expr e = node(Expr::Kind::Pow, caret.pos, {std::move(base)});
  e.exponent = k;
  return e;
}

inline Expr parse_unary(Lexer& lx) {
  if (lx.at("-")) {
    Token m = lx.next();
    return node(Expr::Kind::Neg, m.pos, {parse_unary(lx)});
  }
  return parse_power(lx);
}

inline Expr parse_product(Lexer& lx) {
  Expr left = parse_unary(lx);
  while (lx.at("*") || lx.at("/")) {
    Token op = lx.next();
    Expr right = parse_unary(lx);
    left = node(op.text == "*" ? Expr::Kind::Mul : Expr::Kind::Div, op.pos, {std::move(left), std::move(right)});
  }
  return left;
}

inline Expr parse_sum(Lexer& lx) {
  Expr left = parse_product(lx);
  while (lx.at("+") || lx.at("-")) {
    Token op = lx.next();
    Expr right = parse_product(lx);
    left = node(op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub, op.pos, {std::move(left), std::move(right)});
  }
  return left;
}

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

}  // namespace detail

inline Expr parse_expr(Lexer& lx) { return detail::parse_sum(lx); }

inline Expr parse_expr(std::string_view text) {
  Lexer lx(text);
  Expr e = parse_expr(lx);
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return e;
}

// Prints with the fewest parentheses that reparse to the same tree.
inline std::string print(const Expr& e, int parent = 0, bool right = false) {
  const int p = detail::precedence(e);
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Num: return e.num.get_str();
    case Expr::Kind::Del: return "del";
    case Expr::Kind::Lambda: return "lambda";
    case Expr::Kind::Z: return "z";
    case Expr::Kind::Gen: return e.name;
    case Expr::Kind::Exp: return "exp(" + print(e.args[0]) + ")";
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      s = print(e.args[0], 1) + (e.kind == Expr::Kind::Add ? " + " : " - ") + print(e.args[1], 1, true);
      break;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      s = print(e.args[0], 2) + (e.kind == Expr::Kind::Mul ? "*" : "/") + print(e.args[1], 2, true);
      break;
    case Expr::Kind::Neg: s = "-" + print(e.args[0], 3); break;
    case Expr::Kind::Pow: s = print(e.args[0], 5) + "^" + std::to_string(e.exponent); break;
  }
  if (parent > p || (parent == p && right && p <= 2)) return "(" + s + ")";
  return s;
}

// Expression from a polynomial in del and lambda, in the printed form.
inline Expr expr_of(const ParamPoly& p) { return parse_expr(p.str()); }

// ---- Evaluation -------------------------------------------------------------

struct EvalContext {
  const FgModule* module = nullptr;  // generator names; null when none are allowed
  bool allow_z = false;
  bool allow_lambda = true;
  long exp_order = 8;
};

// Linear combination of generators (key = index) and a scalar part (key = -1),
// each a Laurent window in z.
struct Value {
  std::map<long, LaurentWindow> parts;

  static Value scalar(const LaurentWindow& w) {
    Value v;
    v.parts.emplace(-1, w);
    return v;
  }
  bool is_scalar() const { return parts.empty() || (parts.size() == 1 && parts.begin()->first == -1); }
  LaurentWindow scalar_part() const {
    auto it = parts.find(-1);
    return it == parts.end() ? LaurentWindow::zero() : it->second;
  }
};

namespace detail {

inline Value combine(const Value& a, const Value& b, bool subtract) {
  Value r = a;
  for (const auto& [k, w] : b.parts) {
    auto it = r.parts.find(k);
    if (it == r.parts.end()) {
      r.parts.emplace(k, subtract ? -w : w);
    } else {
      it->second = subtract ? it->second - w : it->second + w;
    }
  }
  return r;
}

inline std::optional<Rational> as_constant(const LaurentWindow& w) {
  if (!w.is_exact()) return std::nullopt;
  if (w.is_zero()) return Rational(0);
  if (w.coefficients().size() != 1 || w.coefficients().begin()->first[0] != 0) return std::nullopt;
  const ParamPoly& p = w.coefficients().begin()->second;
  if (!p.is_constant()) return std::nullopt;
  return p.constant_term();
}

}  // namespace detail

inline Value evaluate(const Expr& e, const EvalContext& ctx) {
  auto err = [&](const std::string& msg) -> InputError { return InputError(msg, e.pos.line, e.pos.col); };
  switch (e.kind) {
    case Expr::Kind::Num: return Value::scalar(LaurentWindow::constant(ParamPoly(e.num)));
    case Expr::Kind::Del: return Value::scalar(LaurentWindow::constant(ParamPoly::del()));
    case Expr::Kind::Lambda:
      if (!ctx.allow_lambda) throw err("lambda is not allowed here");
      return Value::scalar(LaurentWindow::constant(ParamPoly::lambda()));
    case Expr::Kind::Z:
      if (!ctx.allow_z) throw err("z is not allowed here");
      return Value::scalar(LaurentWindow::monomial(1, ParamPoly(1)));
    case Expr::Kind::Gen: {
      if (!ctx.module) throw err("unknown symbol '" + e.name + "'");
      auto idx = ctx.module->index_of(e.name);
      if (!idx) throw err("unknown generator '" + e.name + "'");
      Value v;
      v.parts.emplace(static_cast<long>(*idx), LaurentWindow::constant(ParamPoly(1)));
      return v;
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return detail::combine(evaluate(e.args[0], ctx), evaluate(e.args[1], ctx), e.kind == Expr::Kind::Sub);
    case Expr::Kind::Neg: return detail::combine(Value{}, evaluate(e.args[0], ctx), true);
    case Expr::Kind::Mul: {
      Value a = evaluate(e.args[0], ctx);
      Value b = evaluate(e.args[1], ctx);
      if (!a.is_scalar() && !b.is_scalar()) throw err("product of two generator expressions");
      if (!a.is_scalar()) std::swap(a, b);
      const LaurentWindow s = a.scalar_part();
      Value r;
      for (const auto& [k, w] : b.parts) r.parts.emplace(k, s * w);
      return r;
    }
    case Expr::Kind::Div: {
      Value a = evaluate(e.args[0], ctx);
      Value b = evaluate(e.args[1], ctx);
      auto c = b.is_scalar() ? detail::as_constant(b.scalar_part()) : std::nullopt;
      if (!c) throw err("division only by a nonzero rational constant");
      if (*c == 0) throw err("division by zero");
      const ParamPoly inv(Rational(1) / *c);
      for (auto& [k, w] : a.parts) w = w.scaled(inv);
      return a;
    }
    case Expr::Kind::Pow: {
      if (e.exponent < 0) return Value::scalar(LaurentWindow::monomial(e.exponent, ParamPoly(1)));
      Value base = evaluate(e.args[0], ctx);
      if (!base.is_scalar()) throw err("powers of generator expressions are not allowed");
      LaurentWindow s = base.scalar_part();
      LaurentWindow r = LaurentWindow::constant(ParamPoly(1));
      for (long k = 0; k < e.exponent; ++k) r = r * s;
      return Value::scalar(r);
    }
    case Expr::Kind::Exp: {
      if (!ctx.allow_z) throw err("exp is only allowed in field entries");
      Value arg = evaluate(e.args[0], ctx);
      const LaurentWindow w = arg.scalar_part();
      bool linear = arg.is_scalar() && w.is_exact();
      for (const auto& [k, c] : w.coefficients()) linear = linear && k[0] == 1;
      if (!linear) throw err("the argument of exp must be z times a polynomial in del");
      return Value::scalar(truncated_exp(w.coefficient(1), ctx.exp_order));
    }
  }
  throw err("bad expression");
}

// Largest total pole order an expression can produce: the sum of all
// negative exponents of z.
inline long pole_bound(const Expr& e) {
  long r = (e.kind == Expr::Kind::Pow && e.exponent < 0) ? -e.exponent : 0;
  for (const auto& a : e.args) r += pole_bound(a);
  return r;
}

}  // namespace confalg::cli
