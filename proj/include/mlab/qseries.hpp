#pragma once

#include <gmpxx.h>

#include <complex>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlab {

// Truncated power series in q with exponents in (1/D)Z and rational
// coefficients. Terms with exponent >= order are never stored.
class FracSeries {
 public:
  FracSeries(long denom, mpq_class order);
  static FracSeries constant(const mpq_class& c, const mpq_class& order);
  static FracSeries monomial(const mpq_class& c, const mpq_class& exponent, const mpq_class& order);

  long denom() const { return denom_; }
  const mpq_class& order() const { return order_; }
  // Keyed by exponent numerator over denom().
  const std::map<long, mpq_class>& terms() const { return terms_; }

  mpq_class coeff(const mpq_class& exponent) const;
  // Lowest exponent with a nonzero coefficient; order() when none is stored.
  mpq_class valuation() const;
  std::vector<std::pair<mpq_class, mpq_class>> list() const;

  void add_term(long num, const mpq_class& c);
  FracSeries rescaled(long new_denom) const;
  FracSeries truncated(const mpq_class& order) const;
  FracSeries inverse() const;

  FracSeries operator-() const;
  friend FracSeries operator+(const FracSeries& a, const FracSeries& b);
  friend FracSeries operator-(const FracSeries& a, const FracSeries& b);
  friend FracSeries operator*(const FracSeries& a, const FracSeries& b);
  friend FracSeries operator/(const FracSeries& a, const FracSeries& b);
  friend FracSeries operator*(const mpq_class& s, const FracSeries& a);
  FracSeries pow(long n) const;

 private:
  long denom_;
  mpq_class order_;
  std::map<long, mpq_class> terms_;
};

enum class Character { Chi3, Chi4, Chi6 };
enum class LambertVariant { Sigma, Divisor, HalfOdd, AltLinear };

int character_value(Character c, long n);
std::string character_name(Character c);
std::string variant_name(LambertVariant v);

enum class Prim { Eta, EtaProduct, Phi, PhiNeg, Psi, PsiNeg, A, B, C, L, Lambert, Q };

struct EtaExpr;
using ExprPtr = std::shared_ptr<const EtaExpr>;

// Immutable expression tree over eta-type primitives evaluated at sign*q^j.
struct EtaExpr {
  enum class Op { Prim, Scalar, Add, Sub, Mul, Div, Pow, Neg };
  Op op = Op::Scalar;
  Prim prim = Prim::Eta;
  mpq_class j = 1;          // substitution q -> q^j, or the power for Prim::Q
  bool negated_arg = false; // argument -q^j
  Character chr = Character::Chi3;
  LambertVariant variant = LambertVariant::Sigma;
  mpq_class scalar = 0;
  long exponent = 1;
  ExprPtr lhs, rhs;

  std::string to_string() const;
};

class Expr {
 public:
  Expr(ExprPtr p) : p_(std::move(p)) {}
  Expr(long v);
  Expr(const mpq_class& v);
  const EtaExpr& operator*() const { return *p_; }
  const EtaExpr* operator->() const { return p_.get(); }
  const ExprPtr& ptr() const { return p_; }
  std::string to_string() const { return p_->to_string(); }

 private:
  ExprPtr p_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, long n);

Expr eta(const mpq_class& j = 1);
Expr eta_product(const mpq_class& j = 1);
Expr phi(const mpq_class& j = 1);
Expr phineg(const mpq_class& j = 1);
Expr psi(const mpq_class& j = 1);
Expr psineg(const mpq_class& j = 1);
Expr a_fn(const mpq_class& j = 1);
Expr b_fn(const mpq_class& j = 1);
Expr c_fn(const mpq_class& j = 1);
Expr L_fn(const mpq_class& j = 1);
Expr lambert(Character c, LambertVariant v, const mpq_class& j = 1);
Expr qpow(const mpq_class& r);
Expr with_negated_arg(const Expr& prim);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Grammar: eta, phi, phineg, psi, a, b, c, L applied to (q) or (q^j), qpow(r),
// rational scalars, + - * /, integer ^. The extended grammar additionally
// accepts etaprod, psineg, lambert_<chi3|chi4|chi6>_<sigma|divisor|halfodd|altlinear>
// and a negated argument (-q^j).
Expr parse_expr(const std::string& text, bool extended = false);

FracSeries series_of(const Expr& e, const mpq_class& N);

struct SeriesComparison {
  bool equal = false;
  mpq_class first_mismatch = 0;  // meaningful when !equal
  mpq_class order_lhs = 0, order_rhs = 0;
};
SeriesComparison compare_series(const Expr& e1, const Expr& e2, const mpq_class& N);
bool series_equal(const Expr& e1, const Expr& e2, const mpq_class& N);

// Numeric evaluation at complex q, |q| < 1. Fractional powers use the
// principal branch of log q.
std::complex<double> eval_numeric(const Expr& e, std::complex<double> q);

// Evaluate a truncated series at a real q.
double eval_series(const FracSeries& s, double q);

double lambert_eval(Character c, LambertVariant v, double q);

// Real-axis helpers at q = e^{-u}, u > 0, stable as u -> 0 via eta inversion.
double log_eta_u(double u);

// log prod eta(e^{-scale u})^exponent. Near u = 0 all factors are inverted
// together so that cancelling singular terms cancel exactly.
struct EtaFactor {
  double exponent;
  double scale;
};
double log_eta_quotient(std::initializer_list<EtaFactor> factors, double u);
double eta_u(double u);
double b_u(double u);
double c_u(double u);
double a_u(double u);
double psi_u(double u);      // psi(q)
double psineg_u(double u);   // psi(-q)
double phi_u(double u);      // phi(q)
double phineg_u(double u);   // phi(-q)

}  // namespace mlab
