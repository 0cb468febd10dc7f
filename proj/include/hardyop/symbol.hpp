#ifndef HARDYOP_SYMBOL_HPP
#define HARDYOP_SYMBOL_HPP

// Rational symbols num/den, analytic on a neighbourhood of the closed disk.
// Houses selfmaps phi, psi, the automorphisms alpha_p, finite Blaschke
// products, and all compositions/iterates of those.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardyop/coeffs.hpp"
#include "hardyop/errors.hpp"

namespace hardyop {

inline constexpr double kRootMargin = 1e-9;
inline constexpr double kSelfmapSlack = 1e-9;
inline constexpr std::size_t kSelfmapGrid = 4096;
inline constexpr std::size_t kDefaultMaxDegree = 4096;

/// Degree cap for composition and iteration; HARDYOP_MAX_DEGREE overrides.
inline std::size_t max_degree() {
  if (const char* env = std::getenv("HARDYOP_MAX_DEGREE")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDegree;
}

/// Roots of a polynomial as companion-matrix eigenvalues.
inline std::vector<cplx> polynomial_roots(std::span<const cplx> c) {
  const std::size_t d = poly::degree(c);
  if (d == 0) return {};
  const cplx lead = c[d];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                 static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i)
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> roots(d);
  for (std::size_t i = 0; i < d; ++i) roots[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  return roots;
}

/// Uniform grid theta_j = 2 pi j / m on the circle.
inline std::vector<double> circle_grid(std::size_t m) {
  std::vector<double> t(m);
  for (std::size_t j = 0; j < m; ++j) t[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
  return t;
}

struct SymbolHints {
  bool is_constant = false;
  bool is_polynomial = false;
  bool claimed_inner = false;
};

/// Rational function num/den in lowest-z-power form with den(0) = 1.
/// Construction rejects denominators with a root in the closed disk.
class Symbol {
 public:
  Symbol() : Symbol(CoeffVec{cplx{}, cplx{1.0}}) {}

  explicit Symbol(CoeffVec num, CoeffVec den = {cplx{1.0}}, bool claimed_inner = false)
      : num_(poly::trimmed(std::move(num))), den_(poly::trimmed(std::move(den))) {
    if (poly::is_zero(den_)) throw DenominatorError("denominator is identically zero");
    if (poly::is_zero(num_)) {
      den_ = {cplx{1.0}};
    } else {
      // cancel common powers of z
      std::size_t shift = 0;
      while (shift < num_.size() && shift < den_.size() && num_[shift] == cplx{} &&
             den_[shift] == cplx{})
        ++shift;
      if (shift > 0) {
        num_.erase(num_.begin(), num_.begin() + static_cast<std::ptrdiff_t>(shift));
        den_.erase(den_.begin(), den_.begin() + static_cast<std::ptrdiff_t>(shift));
      }
    }
    if (den_[0] == cplx{}) throw DenominatorError("denominator vanishes at z = 0");
    if (den_[0] != cplx{1.0}) {
      const cplx d0 = den_[0];
      for (auto& v : num_) v /= d0;
      for (auto& v : den_) v /= d0;
      den_[0] = cplx{1.0};
    }
    if (poly::degree(den_) > 0) {
      for (const cplx r : polynomial_roots(den_)) {
        if (std::abs(r) < 1.0 + kRootMargin)
          throw DenominatorError("denominator root of modulus " + std::to_string(std::abs(r)) +
                                 " lies in the closed unit disk");
      }
    }
    hints_.is_polynomial = poly::degree(den_) == 0;
    hints_.is_constant = hints_.is_polynomial && poly::degree(num_) == 0;
    hints_.claimed_inner = claimed_inner;
  }

  static Symbol identity() { return Symbol{}; }
  static Symbol constant(cplx p) { return Symbol(CoeffVec{p}); }
  static Symbol polynomial(CoeffVec c) { return Symbol(std::move(c)); }

  /// The involutive disk automorphism (p - z) / (1 - conj(p) z).
  static Symbol alpha(cplx p) {
    if (std::abs(p) >= 1.0) throw PreconditionError("alpha(p) needs |p| < 1");
    return Symbol(CoeffVec{p, cplx{-1.0}}, CoeffVec{cplx{1.0}, -std::conj(p)}, true);
  }

  const CoeffVec& num() const noexcept { return num_; }
  const CoeffVec& den() const noexcept { return den_; }
  const SymbolHints& hints() const noexcept { return hints_; }
  bool is_constant() const noexcept { return hints_.is_constant; }
  bool is_polynomial() const noexcept { return hints_.is_polynomial; }

  /// Rational degree max(deg num, deg den).
  std::size_t degree() const { return std::max(poly::degree(num_), poly::degree(den_)); }

  cplx operator()(cplx z) const { return poly::horner(num_, z) / poly::horner(den_, z); }
  cplx at_origin() const { return num_[0]; }

  cplx derivative_at(cplx z) const {
    const cplx n = poly::horner(num_, z);
    const cplx d = poly::horner(den_, z);
    const cplx dn = poly::horner(poly::derivative(num_), z);
    const cplx dd = poly::horner(poly::derivative(den_), z);
    return (dn * d - n * dd) / (d * d);
  }

  Symbol scaled(cplx s) const { return Symbol(poly::scale(num_, s), den_, hints_.claimed_inner); }

  friend Symbol operator+(const Symbol& a, const Symbol& b) {
    if (a.den_ == b.den_) return Symbol(poly::add(a.num_, b.num_), a.den_);
    return Symbol(poly::add(poly::mul(a.num_, b.den_), poly::mul(b.num_, a.den_)),
                  poly::mul(a.den_, b.den_));
  }
  friend Symbol operator-(const Symbol& a, const Symbol& b) {
    if (a.den_ == b.den_) return Symbol(poly::sub(a.num_, b.num_), a.den_);
    return Symbol(poly::sub(poly::mul(a.num_, b.den_), poly::mul(b.num_, a.den_)),
                  poly::mul(a.den_, b.den_));
  }
  friend Symbol operator-(const Symbol& a) { return Symbol(poly::scale(a.num_, -1.0), a.den_); }
  friend Symbol operator*(const Symbol& a, const Symbol& b) {
    return Symbol(poly::mul(a.num_, b.num_), poly::mul(a.den_, b.den_),
                  a.hints_.claimed_inner && b.hints_.claimed_inner);
  }
  friend Symbol operator/(const Symbol& a, const Symbol& b) {
    if (poly::is_zero(b.num_)) throw DenominatorError("division by the zero function");
    return Symbol(poly::mul(a.num_, b.den_), poly::mul(a.den_, b.num_));
  }
  Symbol pow(unsigned e) const {
    return Symbol(poly::pow(num_, e), poly::pow(den_, e), hints_.claimed_inner);
  }

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// DSL text that parses back to bit-identical coefficients.
  std::string to_string() const {
    const auto poly_text = [](const CoeffVec& c) {
      std::string s;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k > 0 && c[k] == cplx{}) continue;
        if (!s.empty()) s += "+";
        s += format_complex(c[k]);
        if (k == 1) s += "*z";
        if (k > 1) s += "*z^" + std::to_string(k);
      }
      return s;
    };
    if (is_polynomial()) return poly_text(num_);
    return "(" + poly_text(num_) + ")/(" + poly_text(den_) + ")";
  }

  static std::string format_complex(cplx c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
    return buf;
  }

 private:
  CoeffVec num_;
  CoeffVec den_;
  SymbolHints hints_;
};

/// First n Taylor coefficients (exact for polynomials when n > degree).
inline CoeffVec taylor(const Symbol& s, std::size_t n) {
  if (n == 0) throw PreconditionError("taylor needs at least one coefficient");
  if (s.is_polynomial()) {
    CoeffVec c(n);
    for (std::size_t i = 0; i < n && i < s.num().size(); ++i) c[i] = s.num()[i];
    return c;
  }
  return poly::series_div(s.num(), s.den(), n);
}

inline std::vector<cplx> boundary_eval(const Symbol& s, std::span<const double> thetas) {
  std::vector<cplx> v(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) v[j] = s(std::polar(1.0, thetas[j]));
  return v;
}

struct SelfmapDiagnostics {
  std::vector<double> root_moduli;  // ascending
  double boundary_sup = 0.0;
  double sup_theta = 0.0;
  bool denominator_ok = true;
  bool bounded = true;
  bool valid = true;
};

inline SelfmapDiagnostics validate_selfmap(const Symbol& s) {
  SelfmapDiagnostics d;
  for (const cplx r : polynomial_roots(s.den())) d.root_moduli.push_back(std::abs(r));
  std::sort(d.root_moduli.begin(), d.root_moduli.end());
  d.denominator_ok = d.root_moduli.empty() || d.root_moduli.front() >= 1.0 + kRootMargin;
  const auto grid = circle_grid(kSelfmapGrid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double m = std::abs(s(std::polar(1.0, grid[j])));
    if (m > d.boundary_sup) {
      d.boundary_sup = m;
      d.sup_theta = grid[j];
    }
  }
  d.bounded = d.boundary_sup <= 1.0 + kSelfmapSlack;
  d.valid = d.denominator_ok && d.bounded;
  return d;
}

inline void require_selfmap(const Symbol& s, const char* role) {
  const auto d = validate_selfmap(s);
  if (!d.valid)
    throw SelfmapError(std::string(role) + " is not a selfmap of the disk (boundary sup " +
                       std::to_string(d.boundary_sup) + ")");
}

namespace detail {

inline std::size_t checked_product(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) throw DegreeError("composition degree exceeds cap " + std::to_string(cap));
  const std::size_t p = a * b;
  if (p > cap) throw DegreeError("composition degree " + std::to_string(p) + " exceeds cap " +
                                 std::to_string(cap));
  return p;
}

/// f o g by homogeneous substitution: sum f_k A^k B^(d-k) over sum q_k A^k B^(d-k).
inline Symbol compose_unchecked(const Symbol& f, const Symbol& g, std::size_t cap) {
  const std::size_t d = f.degree();
  checked_product(std::max<std::size_t>(d, 1), std::max<std::size_t>(g.degree(), 1), cap);
  std::vector<CoeffVec> pa{CoeffVec{cplx{1.0}}}, pb{CoeffVec{cplx{1.0}}};
  for (std::size_t k = 1; k <= d; ++k) {
    pa.push_back(poly::mul(pa.back(), g.num()));
    pb.push_back(poly::mul(pb.back(), g.den()));
  }
  CoeffVec num{cplx{}}, den{cplx{}};
  for (std::size_t k = 0; k <= d; ++k) {
    const cplx fk = k < f.num().size() ? f.num()[k] : cplx{};
    const cplx qk = k < f.den().size() ? f.den()[k] : cplx{};
    if (fk == cplx{} && qk == cplx{}) continue;
    const CoeffVec term = poly::mul(pa[k], pb[d - k]);
    if (fk != cplx{}) num = poly::add(num, poly::scale(term, fk));
    if (qk != cplx{}) den = poly::add(den, poly::scale(term, qk));
  }
  return Symbol(std::move(num), std::move(den),
                f.hints().claimed_inner && g.hints().claimed_inner);
}

}  // namespace detail

/// Rational representation of f o g; g must map the disk into itself.
inline Symbol compose(const Symbol& f, const Symbol& g, std::size_t cap = max_degree()) {
  require_selfmap(g, "inner argument of compose");
  return detail::compose_unchecked(f, g, cap);
}

/// n-fold composition s o ... o s.
inline Symbol iterate(const Symbol& s, unsigned n, std::size_t cap = max_degree()) {
  if (n == 0) throw PreconditionError("iterate needs n >= 1");
  require_selfmap(s, "iterated symbol");
  std::size_t deg = 1;
  for (unsigned i = 0; i < n; ++i)
    deg = detail::checked_product(deg, std::max<std::size_t>(s.degree(), 1), cap);
  Symbol r = s;
  for (unsigned i = 1; i < n; ++i) r = detail::compose_unchecked(s, r, cap);
  return r;
}

struct FixedPointOptions {
  double tol = 1e-12;
  double damping = 0.5;
  int newton_max_iter = 200;
  long orbit_max_steps = 100000;
  double interior_margin = 1e-6;
};

/// Interior fixed point: damped Newton from 0, falling back to the orbit of 0.
inline cplx fixed_point(const Symbol& s, const FixedPointOptions& opt = {}) {
  const auto residual = [&](cplx z) { return std::abs(s(z) - z); };
  cplx z{};
  double r = residual(z);
  for (int it = 0; it < opt.newton_max_iter && r > opt.tol; ++it) {
    const cplx slope = s.derivative_at(z) - 1.0;
    if (slope == cplx{}) break;
    const cplx step = (s(z) - z) / slope;
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      const cplx trial = z - t * step;
      if (std::abs(trial) < 1.0) {
        const double rt = residual(trial);
        if (rt < r) {
          z = trial;
          r = rt;
          moved = true;
          break;
        }
      }
      t *= opt.damping;
    }
    if (!moved) break;
  }
  // Orbits drawn to a boundary Denjoy-Wolff point also shrink the residual,
  // so "interior" has to mean clear of the circle.
  const auto interior = [&](cplx w) { return std::abs(w) < 1.0 - opt.interior_margin; };
  if (r <= opt.tol && interior(z)) return z;

  z = cplx{};
  for (long k = 0; k < opt.orbit_max_steps; ++k) {
    if (residual(z) <= opt.tol) break;
    z = s(z);
  }
  if (residual(z) <= opt.tol && interior(z)) return z;
  throw ConvergenceError("no interior fixed point found (symbol may be an automorphism or have "
                         "its Denjoy-Wolff point on the circle)");
}

}  // namespace hardyop

#endif  // HARDYOP_SYMBOL_HPP
