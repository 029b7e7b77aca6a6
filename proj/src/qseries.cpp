#include "mlab/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mlab {

namespace {

mpz_class ceil_mpq(const mpq_class& x) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

long to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("series exponent out of range");
  return z.get_si();
}

long lcm_l(long a, long b) { return std::lcm(a, b); }

}  // namespace

// ---------------------------------------------------------------- FracSeries

FracSeries::FracSeries(long denom, mpq_class order) : denom_(denom), order_(std::move(order)) {
  if (denom_ <= 0) throw std::invalid_argument("FracSeries: denominator must be positive");
  order_.canonicalize();
}

FracSeries FracSeries::constant(const mpq_class& c, const mpq_class& order) {
  FracSeries s(1, order);
  s.add_term(0, c);
  return s;
}

FracSeries FracSeries::monomial(const mpq_class& c, const mpq_class& exponent,
                                const mpq_class& order) {
  mpq_class e = exponent;
  e.canonicalize();
  long d = to_long(e.get_den());
  FracSeries s(d, order);
  s.add_term(to_long(e.get_num()), c);
  return s;
}

namespace {
long limit_of(const mpq_class& order, long denom) { return to_long(ceil_mpq(order * denom)); }
}  // namespace

void FracSeries::add_term(long num, const mpq_class& c) {
  if (c == 0) return;
  if (num >= limit_of(order_, denom_)) return;
  auto [it, inserted] = terms_.try_emplace(num, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpq_class FracSeries::coeff(const mpq_class& exponent) const {
  mpq_class k = exponent * denom_;
  k.canonicalize();
  if (k.get_den() != 1) return 0;
  auto it = terms_.find(to_long(k.get_num()));
  return it == terms_.end() ? mpq_class(0) : it->second;
}

mpq_class FracSeries::valuation() const {
  if (terms_.empty()) return order_;
  mpq_class v(terms_.begin()->first, denom_);
  v.canonicalize();
  return v;
}

std::vector<std::pair<mpq_class, mpq_class>> FracSeries::list() const {
  std::vector<std::pair<mpq_class, mpq_class>> out;
  for (const auto& [k, c] : terms_) {
    mpq_class e(k, denom_);
    e.canonicalize();
    out.emplace_back(e, c);
  }
  return out;
}

FracSeries FracSeries::rescaled(long new_denom) const {
  if (new_denom % denom_ != 0) throw std::invalid_argument("FracSeries: bad rescale");
  long f = new_denom / denom_;
  FracSeries s(new_denom, order_);
  for (const auto& [k, c] : terms_) s.terms_.emplace(k * f, c);
  return s;
}

FracSeries FracSeries::truncated(const mpq_class& order) const {
  FracSeries s(denom_, std::min(order, order_));
  long lim = limit_of(s.order_, denom_);
  for (const auto& [k, c] : terms_) {
    if (k >= lim) break;
    s.terms_.emplace(k, c);
  }
  return s;
}

FracSeries FracSeries::operator-() const {
  FracSeries s(*this);
  for (auto& kv : s.terms_) kv.second = -kv.second;
  return s;
}

FracSeries operator+(const FracSeries& a, const FracSeries& b) {
  long d = lcm_l(a.denom_, b.denom_);
  FracSeries ra = a.rescaled(d), rb = b.rescaled(d);
  FracSeries s(d, std::min(a.order_, b.order_));
  for (const auto& [k, c] : ra.terms_) s.add_term(k, c);
  for (const auto& [k, c] : rb.terms_) s.add_term(k, c);
  return s;
}

FracSeries operator-(const FracSeries& a, const FracSeries& b) { return a + (-b); }

FracSeries operator*(const mpq_class& s, const FracSeries& a) {
  FracSeries r(a.denom_, a.order_);
  if (s == 0) return r;
  for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, s * c);
  return r;
}

FracSeries operator*(const FracSeries& a, const FracSeries& b) {
  long d = lcm_l(a.denom_, b.denom_);
  FracSeries ra = a.rescaled(d), rb = b.rescaled(d);
  mpq_class order = std::min(a.order_ + b.valuation(), b.order_ + a.valuation());
  FracSeries s(d, order);
  long lim = limit_of(order, d);
  std::map<long, mpq_class> acc;
  mpq_class tmp;
  for (const auto& [ka, ca] : ra.terms_) {
    for (const auto& [kb, cb] : rb.terms_) {
      long k = ka + kb;
      if (k >= lim) break;
      tmp = ca * cb;
      acc[k] += tmp;
    }
  }
  for (auto& [k, c] : acc)
    if (c != 0) s.terms_.emplace(k, std::move(c));
  return s;
}

FracSeries FracSeries::inverse() const {
  if (terms_.empty())
    throw std::domain_error("division by a series with zero leading coefficient");
  const long k0 = terms_.begin()->first;
  const mpq_class c0 = terms_.begin()->second;
  const mpq_class v = valuation();
  const mpq_class new_order = order_ - 2 * v;
  // Relative exponents of the normalized unit series u = f / (c0 q^v).
  std::vector<std::pair<long, mpq_class>> u;
  long g = 0;
  for (const auto& [k, c] : terms_) {
    if (k == k0) continue;
    u.emplace_back(k - k0, c / c0);
    g = std::gcd(g, k - k0);
  }
  FracSeries s(denom_, new_order);
  long lim = limit_of(new_order, denom_) + k0;
  mpq_class inv_c0 = 1 / c0;
  if (lim <= 0) return s;
  if (g == 0) {
    s.add_term(-k0, inv_c0);
    return s;
  }
  long n = (lim - 1) / g + 1;
  std::vector<mpq_class> w(n);
  std::vector<char> nz(n, 0);
  w[0] = 1;
  nz[0] = 1;
  mpq_class acc, tmp;
  for (long i = 1; i < n; ++i) {
    acc = 0;
    bool any = false;
    for (const auto& [e, c] : u) {
      long step = e / g;
      if (step > i) break;
      if (!nz[i - step]) continue;
      tmp = c * w[i - step];
      acc -= tmp;
      any = true;
    }
    if (any && acc != 0) {
      w[i] = acc;
      nz[i] = 1;
    }
  }
  for (long i = 0; i < n; ++i)
    if (nz[i]) s.add_term(i * g - k0, w[i] * inv_c0);
  return s;
}

FracSeries operator/(const FracSeries& a, const FracSeries& b) { return a * b.inverse(); }

FracSeries FracSeries::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FracSeries result = FracSeries::constant(1, order_ - valuation());
  FracSeries base = *this;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------- characters

int character_value(Character c, long n) {
  switch (c) {
    case Character::Chi3: {
      long r = ((n % 3) + 3) % 3;
      return r == 1 ? 1 : (r == 2 ? -1 : 0);
    }
    case Character::Chi4: {
      long r = ((n % 4) + 4) % 4;
      return r == 1 ? 1 : (r == 3 ? -1 : 0);
    }
    case Character::Chi6: {
      long r = ((n % 6) + 6) % 6;
      return r == 1 ? 1 : (r == 5 ? -1 : 0);
    }
  }
  return 0;
}

std::string character_name(Character c) {
  switch (c) {
    case Character::Chi3: return "chi3";
    case Character::Chi4: return "chi4";
    case Character::Chi6: return "chi6";
  }
  return "?";
}

std::string variant_name(LambertVariant v) {
  switch (v) {
    case LambertVariant::Sigma: return "sigma";
    case LambertVariant::Divisor: return "divisor";
    case LambertVariant::HalfOdd: return "halfodd";
    case LambertVariant::AltLinear: return "altlinear";
  }
  return "?";
}

// ---------------------------------------------------------------- expressions

namespace {

ExprPtr make_prim(Prim p, const mpq_class& j) {
  if (p != Prim::Q && j <= 0) throw std::invalid_argument("substitution index must be positive");
  auto e = std::make_shared<EtaExpr>();
  e->op = EtaExpr::Op::Prim;
  e->prim = p;
  e->j = j;
  e->j.canonicalize();
  return e;
}

ExprPtr make_bin(EtaExpr::Op op, const ExprPtr& a, const ExprPtr& b) {
  auto e = std::make_shared<EtaExpr>();
  e->op = op;
  e->lhs = a;
  e->rhs = b;
  return e;
}

std::string rat_str(const mpq_class& r) { return r.get_str(); }

std::string arg_str(const EtaExpr& e) {
  std::string q = e.j == 1 ? "q" : "q^" + (e.j.get_den() == 1 ? rat_str(e.j) : "(" + rat_str(e.j) + ")");
  return e.negated_arg ? "-" + q : q;
}

std::string prim_name(const EtaExpr& e) {
  switch (e.prim) {
    case Prim::Eta: return "eta";
    case Prim::EtaProduct: return "etaprod";
    case Prim::Phi: return "phi";
    case Prim::PhiNeg: return "phineg";
    case Prim::Psi: return "psi";
    case Prim::PsiNeg: return "psineg";
    case Prim::A: return "a";
    case Prim::B: return "b";
    case Prim::C: return "c";
    case Prim::L: return "L";
    case Prim::Lambert: return "lambert_" + character_name(e.chr) + "_" + variant_name(e.variant);
    case Prim::Q: return "qpow";
  }
  return "?";
}

}  // namespace

std::string EtaExpr::to_string() const {
  switch (op) {
    case Op::Scalar: return scalar < 0 ? "(" + rat_str(scalar) + ")" : rat_str(scalar);
    case Op::Prim:
      if (prim == Prim::Q) return "qpow(" + rat_str(j) + ")";
      return prim_name(*this) + "(" + arg_str(*this) + ")";
    case Op::Add: return "(" + lhs->to_string() + " + " + rhs->to_string() + ")";
    case Op::Sub: return "(" + lhs->to_string() + " - " + rhs->to_string() + ")";
    case Op::Mul: return lhs->to_string() + "*" + rhs->to_string();
    case Op::Div: return lhs->to_string() + "/" + rhs->to_string();
    case Op::Neg: return "-" + lhs->to_string();
    case Op::Pow: return lhs->to_string() + "^" + std::to_string(exponent);
  }
  return "?";
}

Expr::Expr(long v) : Expr(mpq_class(v)) {}
Expr::Expr(const mpq_class& v) {
  auto e = std::make_shared<EtaExpr>();
  e->op = EtaExpr::Op::Scalar;
  e->scalar = v;
  e->scalar.canonicalize();
  p_ = e;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr(make_bin(EtaExpr::Op::Add, a.ptr(), b.ptr())); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(make_bin(EtaExpr::Op::Sub, a.ptr(), b.ptr())); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(make_bin(EtaExpr::Op::Mul, a.ptr(), b.ptr())); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(make_bin(EtaExpr::Op::Div, a.ptr(), b.ptr())); }
Expr operator-(const Expr& a) { return Expr(make_bin(EtaExpr::Op::Neg, a.ptr(), nullptr)); }
Expr pow(const Expr& a, long n) {
  auto e = std::make_shared<EtaExpr>();
  e->op = EtaExpr::Op::Pow;
  e->lhs = a.ptr();
  e->exponent = n;
  return Expr(e);
}

Expr eta(const mpq_class& j) { return Expr(make_prim(Prim::Eta, j)); }
Expr eta_product(const mpq_class& j) { return Expr(make_prim(Prim::EtaProduct, j)); }
Expr phi(const mpq_class& j) { return Expr(make_prim(Prim::Phi, j)); }
Expr phineg(const mpq_class& j) { return Expr(make_prim(Prim::PhiNeg, j)); }
Expr psi(const mpq_class& j) { return Expr(make_prim(Prim::Psi, j)); }
Expr psineg(const mpq_class& j) { return Expr(make_prim(Prim::PsiNeg, j)); }
Expr a_fn(const mpq_class& j) { return Expr(make_prim(Prim::A, j)); }
Expr b_fn(const mpq_class& j) { return Expr(make_prim(Prim::B, j)); }
Expr c_fn(const mpq_class& j) { return Expr(make_prim(Prim::C, j)); }
Expr L_fn(const mpq_class& j) { return Expr(make_prim(Prim::L, j)); }
Expr lambert(Character c, LambertVariant v, const mpq_class& j) {
  auto p = make_prim(Prim::Lambert, j);
  auto e = std::make_shared<EtaExpr>(*p);
  e->chr = c;
  e->variant = v;
  return Expr(e);
}
Expr qpow(const mpq_class& r) { return Expr(make_prim(Prim::Q, r)); }
Expr with_negated_arg(const Expr& prim) {
  if (prim->op != EtaExpr::Op::Prim || prim->prim == Prim::Q)
    throw std::invalid_argument("negated argument applies to primitives only");
  auto e = std::make_shared<EtaExpr>(*prim);
  e->negated_arg = !e->negated_arg;
  return Expr(e);
}

// ---------------------------------------------------------------- primitive series

namespace {

// All primitives are generated in a variable x with exponents on (1/24)Z.
constexpr long kD = 24;

long x_limit(const mpq_class& T) { return to_long(ceil_mpq(T * kD)); }

FracSeries gen_eta(const mpq_class& T) {
  FracSeries s(kD, T);
  long lim = x_limit(T);
  for (long n = 0;; ++n) {
    bool any = false;
    for (long m : {n, -n - 1}) {
      long e = (6 * m + 1) * (6 * m + 1);
      if (e < lim) {
        s.add_term(e, (m % 2 == 0) ? 1 : -1);
        any = true;
      }
    }
    if (!any) break;
  }
  return s;
}

FracSeries gen_eta_product(const mpq_class& T) {
  // x^{1/24} prod_{k>=1} (1 - x^k), integer exponents shifted by 1/24.
  long lim = x_limit(T);
  long M = lim / kD + 1;
  std::vector<mpz_class> p(M + 1);
  p[0] = 1;
  for (long k = 1; k <= M; ++k)
    for (long i = M; i >= k; --i) p[i] -= p[i - k];
  FracSeries s(kD, T);
  for (long i = 0; i <= M; ++i) s.add_term(kD * i + 1, mpq_class(p[i]));
  return s;
}

template <class Coef>
FracSeries gen_squares(const mpq_class& T, bool triangular, Coef coef) {
  FracSeries s(kD, T);
  long lim = x_limit(T);
  if (triangular) {
    for (long n = 0;; ++n) {
      long e = n * (n + 1) / 2;
      if (e * kD >= lim) break;
      s.add_term(e * kD, coef(e));
    }
  } else {
    for (long n = 0;; ++n) {
      long e = n * n;
      if (e * kD >= lim) break;
      s.add_term(e * kD, (n == 0 ? 1 : 2) * coef(e));
    }
  }
  return s;
}

FracSeries gen_a(const mpq_class& T) {
  long lim = x_limit(T);
  long top = (lim + kD - 1) / kD;  // integer exponents below top
  long R = static_cast<long>(std::ceil(std::sqrt(4.0 * static_cast<double>(top) / 3.0))) + 2;
  std::vector<long> cnt(top, 0);
  for (long m = -R; m <= R; ++m)
    for (long n = -R; n <= R; ++n) {
      long e = m * m + m * n + n * n;
      if (e < top) ++cnt[e];
    }
  FracSeries s(kD, T);
  for (long e = 0; e < top; ++e) s.add_term(e * kD, cnt[e]);
  return s;
}

std::vector<long> sigma_table(long top) {
  std::vector<long> sig(top + 1, 0);
  for (long d = 1; d <= top; ++d)
    for (long m = d; m <= top; m += d) sig[m] += d;
  return sig;
}

FracSeries gen_L(const mpq_class& T) {
  long top = (x_limit(T) + kD - 1) / kD;
  auto sig = sigma_table(top);
  FracSeries s(kD, T);
  s.add_term(0, 1);
  for (long m = 1; m < top; ++m) s.add_term(m * kD, -24 * sig[m]);
  return s;
}

FracSeries gen_lambert(Character c, LambertVariant v, const mpq_class& T) {
  long lim = x_limit(T);
  FracSeries s(kD, T);
  long top = (lim + kD - 1) / kD;
  switch (v) {
    case LambertVariant::Sigma: {
      auto sig = sigma_table(top);
      for (long m = 1; m < top; ++m) s.add_term(m * kD, character_value(c, m) * sig[m]);
      break;
    }
    case LambertVariant::Divisor: {
      std::vector<long> co(top, 0);
      for (long n = 1; n < top; ++n)
        for (long m = n; m < top; m += n) co[m] += character_value(c, n);
      for (long m = 1; m < top; ++m) s.add_term(m * kD, co[m]);
      break;
    }
    case LambertVariant::HalfOdd: {
      // sum chi(n) x^{n(2k+1)/2}; exponent m/2 with m = n(2k+1)
      long mtop = 2 * top + 1;
      std::vector<long> co(mtop, 0);
      for (long n = 1; n < mtop; ++n)
        for (long m = n; m < mtop; m += 2 * n) co[m] += character_value(c, n);
      for (long m = 1; m < mtop; ++m) s.add_term(m * (kD / 2), co[m]);
      break;
    }
    case LambertVariant::AltLinear:
      for (long m = 1; m < top; ++m)
        s.add_term(m * kD, (m % 2 == 0 ? 1 : -1) * m * character_value(c, m));
      break;
  }
  return s;
}

FracSeries x_cubed(const FracSeries& s) {
  FracSeries r(s.denom(), s.order() * 3);
  for (const auto& [k, c] : s.terms()) r.add_term(3 * k, c);
  return r;
}

FracSeries gen_bc(bool is_b, const mpq_class& T) {
  // b = eta^3(x)/eta(x^3), c = 3 eta^3(x^3)/eta(x), retried until valid to T.
  mpq_class extra = 1;
  for (int attempt = 0; attempt < 8; ++attempt) {
    mpq_class t = T + extra;
    FracSeries e1 = gen_eta(t);
    FracSeries e3 = x_cubed(gen_eta(t / 3));
    FracSeries r = is_b ? e1.pow(3) / e3 : mpq_class(3) * e3.pow(3) / e1;
    if (r.order() >= T) return r.truncated(T);
    extra += T - r.order() + 1;
  }
  throw std::runtime_error("b/c series: order bookkeeping did not converge");
}

FracSeries primitive_x(const EtaExpr& e, const mpq_class& T) {
  switch (e.prim) {
    case Prim::Eta: return gen_eta(T);
    case Prim::EtaProduct: return gen_eta_product(T);
    case Prim::Phi: return gen_squares(T, false, [](long) { return 1; });
    case Prim::PhiNeg: return gen_squares(T, false, [](long e) { return e % 2 == 0 ? 1 : -1; });
    case Prim::Psi: return gen_squares(T, true, [](long) { return 1; });
    case Prim::PsiNeg: return gen_squares(T, true, [](long e) { return e % 2 == 0 ? 1 : -1; });
    case Prim::A: return gen_a(T);
    case Prim::B: return gen_bc(true, T);
    case Prim::C: return gen_bc(false, T);
    case Prim::L: return gen_L(T);
    case Prim::Lambert: return gen_lambert(e.chr, e.variant, T);
    case Prim::Q: break;
  }
  throw std::logic_error("primitive_x: unexpected primitive");
}

FracSeries primitive_series(const EtaExpr& e, const mpq_class& T) {
  if (e.prim == Prim::Q) return FracSeries::monomial(1, e.j, T);
  FracSeries x = primitive_x(e, T / e.j);
  long u = to_long(e.j.get_num()), v = to_long(e.j.get_den());
  FracSeries s(x.denom() * v, T);
  for (const auto& [k, c] : x.terms()) {
    mpq_class coef = c;
    if (e.negated_arg) {
      if (k % x.denom() != 0)
        throw std::domain_error("negated argument needs integer exponents: " + e.to_string());
      if ((k / x.denom()) % 2 != 0) coef = -coef;
    }
    s.add_term(k * u, coef);
  }
  return s;
}

FracSeries eval_tree(const EtaExpr& e, const mpq_class& T) {
  using Op = EtaExpr::Op;
  switch (e.op) {
    case Op::Scalar: return FracSeries::constant(e.scalar, T);
    case Op::Prim: return primitive_series(e, T);
    case Op::Add: return eval_tree(*e.lhs, T) + eval_tree(*e.rhs, T);
    case Op::Sub: return eval_tree(*e.lhs, T) - eval_tree(*e.rhs, T);
    case Op::Neg: return -eval_tree(*e.lhs, T);
    case Op::Mul: {
      if (e.lhs->op == Op::Scalar) return e.lhs->scalar * eval_tree(*e.rhs, T);
      if (e.rhs->op == Op::Scalar) return e.rhs->scalar * eval_tree(*e.lhs, T);
      return eval_tree(*e.lhs, T) * eval_tree(*e.rhs, T);
    }
    case Op::Div: {
      if (e.rhs->op == Op::Scalar) {
        if (e.rhs->scalar == 0) throw std::domain_error("division by zero scalar");
        return mpq_class(1 / e.rhs->scalar) * eval_tree(*e.lhs, T);
      }
      return eval_tree(*e.lhs, T) / eval_tree(*e.rhs, T);
    }
    case Op::Pow: return eval_tree(*e.lhs, T).pow(e.exponent);
  }
  throw std::logic_error("eval_tree: bad node");
}

}  // namespace

FracSeries series_of(const Expr& e, const mpq_class& N) {
  if (N <= 0) throw std::invalid_argument("series_of requires N > 0");
  mpq_class T = N;
  for (int attempt = 0; attempt < 8; ++attempt) {
    FracSeries s = eval_tree(*e, T);
    if (s.order() >= N) return s.truncated(N);
    T += N - s.order() + 1;
  }
  throw std::runtime_error("series_of: could not reach the requested order");
}

SeriesComparison compare_series(const Expr& e1, const Expr& e2, const mpq_class& N) {
  FracSeries s1 = series_of(e1, N), s2 = series_of(e2, N);
  SeriesComparison r;
  r.order_lhs = s1.order();
  r.order_rhs = s2.order();
  FracSeries d = s1 - s2;
  r.equal = d.terms().empty();
  if (!r.equal) r.first_mismatch = d.valuation();
  return r;
}

bool series_equal(const Expr& e1, const Expr& e2, const mpq_class& N) {
  return compare_series(e1, e2, N).equal;
}

// ---------------------------------------------------------------- numerics

namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double sum_pentagonal_real(double x) {
  // sum_n (-1)^n x^{n(3n-1)/2} over all n, x in [0, 1)
  double s = 1.0;
  for (long n = 1;; ++n) {
    double t1 = std::pow(x, n * (3.0 * n - 1) / 2), t2 = std::pow(x, n * (3.0 * n + 1) / 2);
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    s += sg * (t1 + t2);
    if (t1 < 1e-18 * std::abs(s)) break;
  }
  return s;
}

}  // namespace

double log_eta_u(double u) {
  if (!(u > 0) || !std::isfinite(u)) throw std::domain_error("eta: need u > 0");
  if (u < 2 * kPi) return 0.5 * std::log(2 * kPi / u) + log_eta_u(4 * kPi * kPi / u);
  return -u / 24.0 + std::log(sum_pentagonal_real(std::exp(-u)));
}

double log_eta_quotient(std::initializer_list<EtaFactor> factors, double u) {
  if (!(u > 0) || !std::isfinite(u)) throw std::domain_error("eta: need u > 0");
  double kmax = 0.0;
  for (const auto& f : factors) {
    if (!(f.scale > 0)) throw std::domain_error("eta quotient: scales must be positive");
    kmax = std::max(kmax, f.scale);
  }
  const bool invert = u * kmax <= 4 * kPi * kPi;
  // Leading terms are c/u (inverted) or c u (direct); c is a rational
  // combination that is often exactly zero.
  double lead = 0.0, lead_abs = 0.0, rest = 0.0;
  for (const auto& f : factors) {
    double v = f.scale * u;
    if (invert) {
      double w = 4 * kPi * kPi / v;
      lead += f.exponent / f.scale;
      lead_abs += std::abs(f.exponent / f.scale);
      rest += f.exponent * (0.5 * std::log(2 * kPi / v) + std::log(sum_pentagonal_real(std::exp(-w))));
    } else {
      lead += f.exponent * f.scale;
      lead_abs += std::abs(f.exponent * f.scale);
      rest += f.exponent * std::log(sum_pentagonal_real(std::exp(-v)));
    }
  }
  if (std::abs(lead) <= 1e-13 * lead_abs) lead = 0.0;
  return invert ? rest - lead * kPi * kPi / (6 * u) : rest - lead * u / 24;
}

double eta_u(double u) { return std::exp(log_eta_u(u)); }
double b_u(double u) { return std::exp(log_eta_quotient({{3, 1}, {-1, 3}}, u)); }
double c_u(double u) { return 3 * std::exp(log_eta_quotient({{3, 3}, {-1, 1}}, u)); }
double a_u(double u) { return b_u(u) + 3 * c_u(3 * u); }
double psi_u(double u) { return std::exp(u / 8 + log_eta_quotient({{2, 2}, {-1, 1}}, u)); }
double psineg_u(double u) {
  return std::exp(u / 8 + log_eta_quotient({{1, 1}, {1, 4}, {-1, 2}}, u));
}
double phi_u(double u) { return std::exp(log_eta_quotient({{5, 2}, {-2, 1}, {-2, 4}}, u)); }
double phineg_u(double u) { return std::exp(log_eta_quotient({{2, 1}, {-1, 2}}, u)); }

namespace {

// Power series sum_{n>=0} coef(n) x^n until the geometric tail is negligible.
template <class F>
C sum_power(C lx, F coef, long start = 0) {
  C s = 0;
  double ax = std::exp(lx.real());
  for (long n = start;; ++n) {
    double cn = coef(n);
    if (cn != 0) s += cn * std::exp(static_cast<double>(n) * lx);
    double tail = std::pow(ax, static_cast<double>(n)) * double(n + 1) * double(n + 1) / (1.0 - ax);
    if (n > 8 && tail < 1e-18 * std::max(1.0, std::abs(s))) break;
    if (n > 2000000) throw std::runtime_error("series evaluation did not converge");
  }
  return s;
}

C eta_numeric(C lx) {
  // eta(x) with x = exp(lx)
  if (std::abs(lx.imag()) < 1e-300 && lx.real() < 0 && std::exp(lx.real()) > 0.9)
    return std::exp(log_eta_u(-lx.real()));
  C s = 1.0;
  for (long n = 1;; ++n) {
    double sg = (n % 2 == 0) ? 1.0 : -1.0;
    C t1 = std::exp(lx * (n * (3.0 * n - 1) / 2)), t2 = std::exp(lx * (n * (3.0 * n + 1) / 2));
    s += sg * (t1 + t2);
    if (std::abs(t1) < 1e-18 * std::abs(s)) break;
  }
  return std::exp(lx / 24.0) * s;
}

long sigma_of(long m) {
  long s = 0;
  for (long d = 1; d * d <= m; ++d)
    if (m % d == 0) s += d + (d * d == m ? 0 : m / d);
  return s;
}

C lambert_numeric(Character c, LambertVariant v, C lx) {
  switch (v) {
    case LambertVariant::Sigma:
      return sum_power(lx, [c](long m) { return m == 0 ? 0.0 : double(character_value(c, m) * sigma_of(m)); });
    case LambertVariant::Divisor: {
      C s = 0;
      for (long n = 1;; ++n) {
        C xn = std::exp(double(n) * lx);
        int ch = character_value(c, n);
        if (ch) s += double(ch) * xn / (1.0 - xn);
        if (n > 4 && std::abs(xn) < 1e-18 * std::max(1.0, std::abs(s))) break;
      }
      return s;
    }
    case LambertVariant::HalfOdd: {
      C s = 0;
      for (long n = 1;; ++n) {
        C xn = std::exp(double(n) * lx), xh = std::exp(0.5 * double(n) * lx);
        int ch = character_value(c, n);
        if (ch) s += double(ch) * xh / (1.0 - xn);
        if (n > 4 && std::abs(xh) < 1e-18 * std::max(1.0, std::abs(s))) break;
      }
      return s;
    }
    case LambertVariant::AltLinear:
      return sum_power(lx, [c](long m) { return double((m % 2 == 0 ? 1 : -1) * m * character_value(c, m)); });
  }
  return 0;
}

C prim_numeric(const EtaExpr& e, C lq) {
  if (e.prim == Prim::Q) return std::exp(lq * e.j.get_d());
  C lx = lq * e.j.get_d();
  if (e.negated_arg) lx += C(0, kPi);
  auto ser = [&](auto coef) { return sum_power(lx, coef); };
  switch (e.prim) {
    case Prim::Eta:
    case Prim::EtaProduct: return eta_numeric(lx);
    case Prim::Phi:
    case Prim::PhiNeg: {
      bool alt = e.prim == Prim::PhiNeg;
      C s = 1.0;
      for (long n = 1;; ++n) {
        C t = std::exp(lx * double(n * n));
        s += 2.0 * ((alt && n % 2) ? -t : t);
        if (std::abs(t) < 1e-18 * std::abs(s)) break;
      }
      return s;
    }
    case Prim::Psi:
    case Prim::PsiNeg: {
      bool alt = e.prim == Prim::PsiNeg;
      C s = 0.0;
      for (long n = 0;; ++n) {
        long k = n * (n + 1) / 2;
        C t = std::exp(lx * double(k));
        s += (alt && k % 2) ? -t : t;
        if (n > 0 && std::abs(t) < 1e-18 * std::abs(s)) break;
      }
      return s;
    }
    case Prim::A:
      return 1.0 + 6.0 * lambert_numeric(Character::Chi3, LambertVariant::Divisor, lx);
    case Prim::B: return std::pow(eta_numeric(lx), 3) / eta_numeric(3.0 * lx);
    case Prim::C: return 3.0 * std::pow(eta_numeric(3.0 * lx), 3) / eta_numeric(lx);
    case Prim::L:
      return 1.0 - 24.0 * ser([](long m) { return m == 0 ? 0.0 : double(sigma_of(m)); });
    case Prim::Lambert: return lambert_numeric(e.chr, e.variant, lx);
    case Prim::Q: break;
  }
  throw std::logic_error("prim_numeric: unexpected primitive");
}

bool pure_eta(const EtaExpr& e) {
  if (e.op == EtaExpr::Op::Prim)
    return e.prim == Prim::Eta || e.prim == Prim::EtaProduct || e.prim == Prim::B ||
           e.prim == Prim::C || e.prim == Prim::Q;
  if (e.op == EtaExpr::Op::Scalar) return true;
  return (!e.lhs || pure_eta(*e.lhs)) && (!e.rhs || pure_eta(*e.rhs));
}

C eval_num_tree(const EtaExpr& e, C lq) {
  using Op = EtaExpr::Op;
  switch (e.op) {
    case Op::Scalar: return e.scalar.get_d();
    case Op::Prim: return prim_numeric(e, lq);
    case Op::Add: return eval_num_tree(*e.lhs, lq) + eval_num_tree(*e.rhs, lq);
    case Op::Sub: return eval_num_tree(*e.lhs, lq) - eval_num_tree(*e.rhs, lq);
    case Op::Neg: return -eval_num_tree(*e.lhs, lq);
    case Op::Mul: return eval_num_tree(*e.lhs, lq) * eval_num_tree(*e.rhs, lq);
    case Op::Div: return eval_num_tree(*e.lhs, lq) / eval_num_tree(*e.rhs, lq);
    case Op::Pow: return std::pow(eval_num_tree(*e.lhs, lq), static_cast<int>(e.exponent));
  }
  throw std::logic_error("eval_num_tree: bad node");
}

}  // namespace

std::complex<double> eval_numeric(const Expr& e, std::complex<double> q) {
  double aq = std::abs(q);
  if (!(aq < 1.0)) throw std::domain_error("eval_numeric: need |q| < 1");
  if (aq == 0.0) {
    // Only the constant terms survive.
    FracSeries s = series_of(e, mpq_class(1, 48));
    return s.coeff(0).get_d();
  }
  bool real_pos = q.imag() == 0.0 && q.real() > 0.0;
  if (aq > 0.95 && !(real_pos && pure_eta(*e)))
    throw std::domain_error("eval_numeric: |q| > 0.95 is only supported for eta quotients at real q");
  return eval_num_tree(*e, std::log(q));
}

double eval_series(const FracSeries& s, double q) {
  double v = 0.0;
  for (const auto& [e, c] : s.list()) v += c.get_d() * std::pow(q, e.get_d());
  return v;
}

double lambert_eval(Character c, LambertVariant v, double q) {
  if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("lambert_eval: need 0 <= q < 1");
  if (q == 0.0) return 0.0;
  return lambert_numeric(c, v, std::log(q)).real();
}

}  // namespace mlab
