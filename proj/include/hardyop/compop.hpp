#ifndef HARDYOP_COMPOP_HPP
#define HARDYOP_COMPOP_HPP

// Finite sections of composition, constant-symbol and weighted composition
// operators in the monomial basis, and their operator norms.
//
// A compression P_N T P_N has norm <= ||T||, nondecreasing in N. Every value
// produced here is such a lower bound.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardyop/closedform.hpp"
#include "hardyop/coeffs.hpp"
#include "hardyop/errors.hpp"
#include "hardyop/hardy.hpp"
#include "hardyop/symbol.hpp"

namespace hardyop {

/// FULL: basis {1, z, ..., z^{N-1}}. H20: basis {z, ..., z^N} of zH^2.
enum class Basis { Full, H20 };

struct OpMatrix {
  Eigen::MatrixXcd entries;
  Basis basis = Basis::Full;
  std::string provenance;

  Eigen::Index dim() const { return entries.cols(); }
};

namespace detail {

inline Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

/// Multiplies a truncated series by the rational function num/den.
inline CoeffVec mul_rational_trunc(std::span<const cplx> c, const Symbol& r, std::size_t len) {
  CoeffVec out = poly::mul_trunc(c, r.num(), len);
  if (!r.is_polynomial()) out = poly::series_div(out, r.den(), len);
  return out;
}

/// Columns k = 0..len-1 hold the first `len` coefficients of phi^k; each
/// column is the previous one times num/den, truncated.
inline Eigen::MatrixXcd power_columns(const Symbol& s, std::size_t len) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(idx(len), idx(len));
  CoeffVec col(len);
  col[0] = cplx{1.0};
  for (std::size_t k = 0; k < len; ++k) {
    if (k > 0) {
      if (poly::is_zero(col)) break;
      col = mul_rational_trunc(col, s, len);
    }
    for (std::size_t i = 0; i < len; ++i) m(idx(i), idx(k)) = col[i];
  }
  return m;
}

}  // namespace detail

/// Matrix of C_phi on the first N monomials (FULL) or on z..z^N (H20).
inline OpMatrix comp_matrix(const Symbol& s, std::size_t n, Basis basis = Basis::Full) {
  if (n < 2) throw PreconditionError("compression dimension must be >= 2");
  require_selfmap(s, "composition symbol");
  OpMatrix op;
  op.basis = basis;
  op.provenance = "C[" + s.to_string() + "] N=" + std::to_string(n) +
                  (basis == Basis::Full ? " FULL" : " H20");
  if (basis == Basis::Full) {
    op.entries = detail::power_columns(s, n);
  } else {
    const Eigen::MatrixXcd full = detail::power_columns(s, n + 1);
    op.entries = full.bottomRightCorner(detail::idx(n), detail::idx(n));
  }
  return op;
}

/// Matrix of T_{w,s} f = w (f o s) on the first N monomials.
inline OpMatrix weighted_matrix(const Symbol& w, const Symbol& s, std::size_t n) {
  if (n < 2) throw PreconditionError("compression dimension must be >= 2");
  require_selfmap(s, "composition symbol");
  OpMatrix op;
  op.basis = Basis::Full;
  op.provenance = "T[" + w.to_string() + ", " + s.to_string() + "] N=" + std::to_string(n);
  op.entries = Eigen::MatrixXcd::Zero(detail::idx(n), detail::idx(n));
  CoeffVec col(n);
  col[0] = cplx{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) col = detail::mul_rational_trunc(col, s, n);
    const CoeffVec wc = detail::mul_rational_trunc(col, w, n);
    for (std::size_t i = 0; i < n; ++i) op.entries(detail::idx(i), detail::idx(k)) = wc[i];
  }
  return op;
}

enum class NormMethod { Lanczos, Power };

struct OpNormResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct OpNormOptions {
  double tol = 1e-12;
  int max_iter = 100000;
  NormMethod method = NormMethod::Lanczos;
};

namespace detail {

/// Largest eigenvalue of the symmetric tridiagonal (a, b) by Sturm bisection.
inline double tridiag_max_eig(const std::vector<double>& a, const std::vector<double>& b,
                              double lower_hint) {
  const std::size_t m = a.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < m ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }
  lo = std::max(lo, std::min(lower_hint, hi));
  // count of eigenvalues strictly greater than x
  const auto count_above = [&](double x) {
    std::size_t below = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double off = i > 0 ? b[i - 1] * b[i - 1] : 0.0;
      d = a[i] - x - (i > 0 ? off / d : 0.0);
      if (d == 0.0) d = -std::numeric_limits<double>::min();
      if (d < 0.0) ++below;
    }
    return m - below;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_above(mid) > 0) lo = mid; else hi = mid;
  }
  return hi;
}

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXcd vector;
  int iterations = 0;
  bool converged = true;
};

/// Largest eigenvalue of a Hermitian operator given as a matvec, by Lanczos
/// with full reorthogonalization. Stops once the top Ritz value changes by
/// at most tol (relative) on three consecutive steps, or the Krylov space
/// fills the whole space.
template <class MatVec>
LanczosResult lanczos_max(MatVec&& apply, const Eigen::VectorXcd& start, double tol, int max_iter,
                          bool want_vector) {
  const Eigen::Index n = start.size();
  const Eigen::Index cap = std::min<Eigen::Index>(n, std::max(1, max_iter));
  Eigen::MatrixXcd v(n, cap + 1);
  v.col(0) = start.normalized();
  std::vector<double> alpha, beta;
  LanczosResult res;
  double theta = -std::numeric_limits<double>::infinity();
  int stagnant = 0;
  Eigen::Index restart_probe = 0;
  Eigen::Index k = 0;
  for (; k < cap; ++k) {
    Eigen::VectorXcd w = apply(v.col(k));
    const double a = v.col(k).dot(w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const auto basis = v.leftCols(k + 1);
      w.noalias() -= basis * (basis.adjoint() * w);
    }
    double b = w.norm();
    const double prev = theta;
    theta = tridiag_max_eig(alpha, beta, prev);
    if (k > 0 && std::abs(theta - prev) <= tol * std::max(std::abs(theta), 1e-300)) {
      if (++stagnant >= 3) {
        ++k;
        break;
      }
    } else {
      stagnant = 0;
    }
    if (k + 1 == n) {
      ++k;
      break;
    }
    const double scale = std::max({std::abs(theta), std::abs(a), 1e-300});
    if (b <= 1e-13 * scale) {
      // invariant subspace: continue from a fresh deterministic direction
      b = 0.0;
      bool found = false;
      for (; restart_probe < n && !found; ++restart_probe) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(restart_probe) = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
          const auto basis = v.leftCols(k + 1);
          e.noalias() -= basis * (basis.adjoint() * e);
        }
        if (e.norm() > 0.5) {
          w = e;
          found = true;
        }
      }
      if (!found) {
        ++k;
        break;
      }
      beta.push_back(0.0);
      v.col(k + 1) = w.normalized();
      continue;
    }
    beta.push_back(b);
    v.col(k + 1) = w / b;
  }
  res.iterations = static_cast<int>(k);
  res.converged = stagnant >= 3 || k == n || k < cap;
  res.value = theta;
  if (want_vector) {
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd y = es.eigenvectors().col(m - 1);
    res.vector = v.leftCols(m) * y.cast<cplx>();
    res.vector.normalize();
  }
  return res;
}

/// With at most one nonzero per row the columns are orthogonal and the norm
/// is the largest column norm. Covers monomial symbols (and their
/// differences against rotations), where it gives the exact answer.
inline std::optional<double> orthogonal_columns_norm(const Eigen::MatrixXcd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    int nz = 0;
    for (Eigen::Index j = 0; j < a.cols() && nz < 2; ++j) nz += a(i, j) != cplx{};
    if (nz > 1) return std::nullopt;
  }
  double best = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    int nz = 0;
    double single = 0.0, sq = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) == cplx{}) continue;
      ++nz;
      single = std::abs(a(i, j));
      sq += std::norm(a(i, j));
    }
    best = std::max(best, nz == 1 ? single : std::sqrt(sq));
  }
  return best;
}

}  // namespace detail

/// Largest singular value. Lanczos on A^H A (default) or plain power
/// iteration, both from the normalized all-ones vector.
inline OpNormResult op_norm(const Eigen::MatrixXcd& a, const OpNormOptions& opt = {}) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return {0.0, 0, true};
  if (auto exact = detail::orthogonal_columns_norm(a)) return {*exact, 0, true};
  const Eigen::VectorXcd start =
      Eigen::VectorXcd::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  if (opt.method == NormMethod::Lanczos) {
    const auto gram = [&](const auto& x) -> Eigen::VectorXcd {
      const Eigen::VectorXcd y = a * x;
      return a.adjoint() * y;
    };
    const auto r = detail::lanczos_max(gram, start, opt.tol, opt.max_iter, false);
    return {std::sqrt(std::max(r.value, 0.0)), r.iterations, r.converged};
  }
  Eigen::VectorXcd x = start;
  double value = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::VectorXcd y = a.adjoint() * (a * x);
    const double nv = x.dot(y).real();
    const double ny = y.norm();
    if (ny == 0.0) return {0.0, it, true};
    x = y / ny;
    if (std::abs(nv - value) <= opt.tol * nv) return {std::sqrt(nv), it, true};
    value = nv;
  }
  return {std::sqrt(value), opt.max_iter, false};
}

inline OpNormResult op_norm(const OpMatrix& a, const OpNormOptions& opt = {}) {
  return op_norm(a.entries, opt);
}

/// Dense SVD cross-check.
inline double op_norm_dense(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

/// Compression of ||C_a - C_b||.
inline double distance(const Symbol& a, const Symbol& b, std::size_t n, const OpNormOptions& opt = {}) {
  const OpMatrix ma = comp_matrix(a, n), mb = comp_matrix(b, n);
  return op_norm(Eigen::MatrixXcd(ma.entries - mb.entries), opt).value;
}

/// Compression of ||C_phi | H^2_0|| = ||C_phi - C_0||.
inline double restricted_norm(const Symbol& s, std::size_t n, const OpNormOptions& opt = {}) {
  return op_norm(comp_matrix(s, n, Basis::H20), opt).value;
}

// ---------------------------------------------------------------------------
// Convergence schedules

enum class Task { Distance, Restricted, Weighted, OpNorm };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::Distance: return "distance";
    case Task::Restricted: return "restricted";
    case Task::Weighted: return "weighted";
    case Task::OpNorm: return "opnorm";
  }
  return "unknown";
}

struct TaskParams {
  Task task = Task::OpNorm;
  Symbol a;
  std::optional<Symbol> b;  // second symbol (distance) or composition symbol (weighted)
  OpNormOptions solver{};
};

struct Target {
  double value = 0.0;
  std::string source;
};

struct ConvergenceReport {
  std::string task;
  std::vector<std::size_t> dims;
  std::vector<double> values;
  std::optional<double> target;
  std::string target_source;
  std::vector<double> gaps;
  bool monotone = true;
  bool bounded = true;
  bool converged = true;
  std::string internal_error;

  bool pass() const { return monotone && bounded && converged && internal_error.empty(); }
};

inline constexpr double kMonotoneSlack = 1e-9;
inline constexpr double kTargetSlack = 1e-9;

namespace detail {

inline constexpr std::size_t kMatchTerms = 64;
inline constexpr double kMatchTol = 1e-10;

inline bool same_function(const Symbol& a, const Symbol& b) {
  return poly::max_abs_diff(taylor(a, kMatchTerms), taylor(b, kMatchTerms)) <= kMatchTol;
}

inline bool fixes_origin(const Symbol& s) { return std::abs(s.at_origin()) <= 1e-14; }

inline bool inner_fixing_origin(const Symbol& s) { return fixes_origin(s) && is_inner(s).is_inner; }

/// Polynomial phi with phi(0) = 0 and <phi, phi^n> = 0 for every n >= 2.
/// Only finitely many n need checking: phi^n has valuation n*val(phi).
inline bool orthogonal_to_higher_powers(const Symbol& s) {
  if (!s.is_polynomial() || !fixes_origin(s)) return false;
  const auto& c = s.num();
  std::size_t val = 0;
  while (val < c.size() && c[val] == cplx{}) ++val;
  if (val == 0 || val >= c.size()) return false;
  const std::size_t deg = poly::degree(c);
  CoeffVec pw(c.begin(), c.end());
  for (std::size_t n = 2; n * val <= deg; ++n) {
    pw = poly::mul(pw, c);
    if (std::abs(h2_inner(c, pw)) > 1e-14) return false;
  }
  return true;
}

inline std::optional<Target> restricted_target(const Symbol& s) {
  if (s.is_constant()) return Target{0.0, "constant-symbol"};
  if (is_inner(s).is_inner) return Target{eq12_check_value(s.at_origin()), "inner-symbol-norm"};
  if (fixes_origin(s)) {
    const double sup = sup_norm(s).value;
    if (sup > 0.0 && is_inner(s.scaled(1.0 / sup)).is_inner) return Target{sup, "inner-multiple"};
    if (orthogonal_to_higher_powers(s)) return Target{h2_norm(s.num()), "orthogonal-powers"};
  }
  return std::nullopt;
}

inline std::optional<Target> rotation_target(const Symbol& a, const Symbol& b) {
  if (!fixes_origin(b) || poly::is_zero(b.num())) return std::nullopt;
  const double mu = sup_norm(b).value;
  if (!(mu > 0.0)) return std::nullopt;
  if (!is_inner(b.scaled(1.0 / mu)).is_inner) return std::nullopt;
  const CoeffVec ta = taylor(a, kMatchTerms), tb = taylor(b, kMatchTerms);
  std::size_t j = 0;
  for (std::size_t i = 1; i < tb.size(); ++i)
    if (std::abs(tb[i]) > std::abs(tb[j])) j = i;
  const cplx c = ta[j] / tb[j];
  for (std::size_t i = 0; i < tb.size(); ++i)
    if (std::abs(ta[i] - c * tb[i]) > kMatchTol) return std::nullopt;
  const double mu_r = std::abs(mu - 1.0) <= 1e-12 ? 1.0 : mu;
  cplx lam = c * mu_r;
  if (std::abs(std::abs(lam) - 1.0) <= 1e-12) lam /= std::abs(lam);
  return Target{rotation_distance(lam, cplx{mu_r}).value, "rotated-inner"};
}

inline std::optional<Target> distance_target(const Symbol& a, const Symbol& b) {
  if (a.is_constant() && b.is_constant())
    return Target{const_distance(a.at_origin(), b.at_origin()), "constant-vs-constant"};
  if (auto t = rotation_target(a, b)) return t;
  if (auto t = rotation_target(b, a)) return t;
  for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
    if (y->is_constant() && inner_fixing_origin(*x))
      return Target{inner_const_distance(y->at_origin()), "inner-vs-constant"};
  }
  for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
    if (!is_inner(*y).is_inner) continue;
    for (const cplx p : {x->at_origin(), y->at_origin()}) {
      if (!(std::abs(p) < 1.0)) continue;
      if (!fixes_origin(*y) && p != y->at_origin()) continue;
      if (same_function(compose(Symbol::alpha(p), *y), *x))
        return Target{inner_alpha_distance(p), "alpha-composed-vs-inner"};
    }
  }
  return std::nullopt;
}

inline std::optional<Target> opnorm_target(const Symbol& s) {
  if (s.is_constant()) return Target{norm_bounds(s.at_origin()).lower, "constant-symbol-norm"};
  if (is_inner(s).is_inner) return Target{inner_symbol_norm(s.at_origin()), "inner-symbol-norm"};
  if (fixes_origin(s)) return Target{1.0, "origin-fixing-contraction"};
  return std::nullopt;
}

}  // namespace detail

/// Closed-form value of the task's operator norm when the symbols match a known pattern.
inline std::optional<Target> closed_form_target(const TaskParams& p) {
  switch (p.task) {
    case Task::Distance:
      if (!p.b) throw PreconditionError("distance task needs two symbols");
      return detail::distance_target(p.a, *p.b);
    case Task::Restricted:
      return detail::restricted_target(p.a);
    case Task::Weighted:
      if (p.b && !(*p.b == p.a)) return std::nullopt;
      return detail::restricted_target(p.a);
    case Task::OpNorm:
      return detail::opnorm_target(p.a);
  }
  return std::nullopt;
}

inline OpNormResult task_value(const TaskParams& p, std::size_t n) {
  switch (p.task) {
    case Task::Distance: {
      const OpMatrix ma = comp_matrix(p.a, n), mb = comp_matrix(*p.b, n);
      return op_norm(Eigen::MatrixXcd(ma.entries - mb.entries), p.solver);
    }
    case Task::Restricted:
      return op_norm(comp_matrix(p.a, n, Basis::H20), p.solver);
    case Task::Weighted:
      return op_norm(weighted_matrix(p.a, p.b ? *p.b : p.a, n), p.solver);
    case Task::OpNorm:
      return op_norm(comp_matrix(p.a, n), p.solver);
  }
  return {};
}

/// Runs the task at each dimension and checks monotonicity and the target bound.
inline ConvergenceReport norm_schedule(const TaskParams& p, std::span<const std::size_t> dims) {
  if (dims.empty()) throw PreconditionError("empty dimension schedule");
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] <= dims[i - 1]) throw PreconditionError("dimension schedule must be strictly increasing");
  if (p.task == Task::Distance && !p.b) throw PreconditionError("distance task needs two symbols");

  ConvergenceReport r;
  r.task = to_string(p.task);
  r.dims.assign(dims.begin(), dims.end());
  if (auto t = closed_form_target(p)) {
    r.target = t->value;
    r.target_source = t->source;
  }
  for (const std::size_t n : dims) {
    const OpNormResult v = task_value(p, n);
    r.converged = r.converged && v.converged;
    if (!r.values.empty() && v.value < r.values.back() - kMonotoneSlack) {
      r.monotone = false;
      r.internal_error = "compression norm decreased from N=" + std::to_string(r.dims[r.values.size() - 1]) +
                         " to N=" + std::to_string(n);
    }
    r.values.push_back(v.value);
    if (r.target) {
      r.gaps.push_back(*r.target - v.value);
      if (v.value > *r.target + kTargetSlack) r.bounded = false;
    }
  }
  return r;
}

}  // namespace hardyop

#endif  // HARDYOP_COMPOP_HPP
