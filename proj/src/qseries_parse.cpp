#include <cctype>
#include <map>

#include "mlab/qseries.hpp"

namespace mlab {

namespace {

class Parser {
 public:
  Parser(const std::string& s, bool extended) : s_(s), ext_(extended) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  const std::string& s_;
  bool ext_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    std::string digits = s_.substr(start, pos_ - start);
    if (digits.size() > 12) fail("integer too large");
    return std::stol(digits);
  }

  // n, n/m or (n/m)
  mpq_class rational() {
    if (eat('(')) {
      mpq_class r = rational();
      expect(')');
      return r;
    }
    long n = integer();
    if (eat('/')) {
      long m = integer();
      if (m == 0) fail("zero denominator");
      mpq_class r(n, m);
      r.canonicalize();
      return r;
    }
    return mpq_class(n);
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (eat('+'))
        e = e + term();
      else if (eat('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (eat('*'))
        e = e * factor();
      else if (peek('/')) {
        ++pos_;
        e = e / factor();
      } else
        return e;
    }
  }

  Expr factor() {
    Expr base = unary();
    if (eat('^')) {
      bool neg = false;
      bool paren = eat('(');
      if (eat('-')) neg = true;
      long n = integer();
      if (paren) expect(')');
      return pow(base, neg ? -n : n);
    }
    return base;
  }

  Expr unary() {
    if (eat('-')) return -unary();
    return primary();
  }

  // (q), (q^j), and in extended mode (-q^j)
  std::pair<mpq_class, bool> argument() {
    expect('(');
    bool neg = false;
    if (eat('-')) {
      if (!ext_) fail("negated argument requires the extended grammar");
      neg = true;
    }
    skip();
    if (ident() != "q") fail("expected 'q'");
    mpq_class j = 1;
    if (eat('^')) j = rational();
    if (j <= 0) fail("substitution index must be positive");
    expect(')');
    return {j, neg};
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr(mpq_class(integer()));
    std::size_t start = pos_;
    std::string name = ident();
    if (name.empty()) fail("unexpected '" + std::string(1, c) + "'");
    if (name == "qpow") {
      expect('(');
      bool neg = eat('-');
      mpq_class r = rational();
      expect(')');
      return qpow(neg ? mpq_class(-r) : r);
    }
    static const std::map<std::string, Expr (*)(const mpq_class&)> basic = {
        {"eta", eta}, {"phi", phi}, {"phineg", phineg}, {"psi", psi},
        {"a", a_fn},  {"b", b_fn},  {"c", c_fn},        {"L", L_fn}};
    static const std::map<std::string, Expr (*)(const mpq_class&)> extra = {
        {"etaprod", eta_product}, {"psineg", psineg}};
    Expr (*maker)(const mpq_class&) = nullptr;
    if (auto it = basic.find(name); it != basic.end()) maker = it->second;
    if (ext_)
      if (auto it = extra.find(name); it != extra.end()) maker = it->second;
    if (maker) {
      auto [j, neg] = argument();
      Expr e = maker(j);
      return neg ? with_negated_arg(e) : e;
    }
    if (ext_ && name.rfind("lambert_", 0) == 0) {
      static const std::map<std::string, Character> chars = {
          {"chi3", Character::Chi3}, {"chi4", Character::Chi4}, {"chi6", Character::Chi6}};
      static const std::map<std::string, LambertVariant> vars = {
          {"sigma", LambertVariant::Sigma},
          {"divisor", LambertVariant::Divisor},
          {"halfodd", LambertVariant::HalfOdd},
          {"altlinear", LambertVariant::AltLinear}};
      std::string rest = name.substr(8);
      auto us = rest.find('_');
      if (us != std::string::npos) {
        auto ci = chars.find(rest.substr(0, us));
        auto vi = vars.find(rest.substr(us + 1));
        if (ci != chars.end() && vi != vars.end()) {
          auto [j, neg] = argument();
          Expr e = lambert(ci->second, vi->second, j);
          return neg ? with_negated_arg(e) : e;
        }
      }
    }
    pos_ = start;
    fail("unknown function '" + name + "'");
  }
};

}  // namespace

Expr parse_expr(const std::string& text, bool extended) { return Parser(text, extended).parse(); }

}  // namespace mlab
