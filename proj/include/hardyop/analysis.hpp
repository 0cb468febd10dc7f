#ifndef HARDYOP_ANALYSIS_HPP
#define HARDYOP_ANALYSIS_HPP

// Procedures built on the lower modules: the Hardy exponent p(phi) with
// ||C_phi|H^2_0|| = ||phi||_p, the z-eigenvector conditions for
// ||C_phi|H^2_0|| = ||phi||_2, Rudin orthogonality, iterate sweeps toward an
// interior fixed point, and the Nordgren boundary identity for inner symbols.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hardyop/coeffs.hpp"
#include "hardyop/compop.hpp"
#include "hardyop/errors.hpp"
#include "hardyop/hardy.hpp"
#include "hardyop/symbol.hpp"

namespace hardyop {

// ---------------------------------------------------------------------------
// p(phi)

enum class PSolveOutcome { Finite, InnerMultiple };

struct PSolveResult {
  PSolveOutcome outcome = PSolveOutcome::Finite;
  std::optional<double> p_value;
  double residual = 0.0;  // | ||phi||_p - r |
  double r = 0.0;         // restricted-norm estimate
  std::size_t dimension = 0;
  double plateau_delta = 0.0;  // r(N) - r(N/2)
  bool plateau_ok = true;
  double norm2 = 0.0;
  double norm_inf = 0.0;
  int sign_changes = 0;  // of ||phi||_p - r on the log-spaced p grid
};

struct PSolveOptions {
  double tol = 1e-10;  // on p
  std::size_t dimension = 512;
  double p_cap = 65536.0;
  double plateau_tol = 1e-7;
  /// Throw instead of reporting when r(N) - r(N/2) exceeds plateau_tol.
  bool require_plateau = false;
  std::size_t sign_grid = 64;
  OpNormOptions solver{};
};

inline const char* to_string(PSolveOutcome o) {
  return o == PSolveOutcome::Finite ? "finite" : "inner-multiple";
}

namespace detail {
inline bool origin_fixed(const Symbol& s) { return std::abs(s.at_origin()) <= 1e-14; }
}  // namespace detail

inline PSolveResult p_solve(const Symbol& s, const PSolveOptions& opt = {}) {
  require_selfmap(s, "p_solve symbol");
  if (!detail::origin_fixed(s)) throw PreconditionError("p_solve needs phi(0) = 0");
  if (s.is_constant()) throw PreconditionError("p_solve needs a nonconstant symbol");

  PSolveResult res;
  res.dimension = opt.dimension;
  res.r = restricted_norm(s, opt.dimension, opt.solver);
  const double r_half = restricted_norm(s, std::max<std::size_t>(opt.dimension / 2, 2), opt.solver);
  res.plateau_delta = res.r - r_half;
  res.plateau_ok = std::abs(res.plateau_delta) <= opt.plateau_tol;
  if (!res.plateau_ok && opt.require_plateau)
    throw ConvergenceError("restricted norm has not plateaued: r(" + std::to_string(opt.dimension) +
                           ") - r(" + std::to_string(opt.dimension / 2) +
                           ") = " + std::to_string(res.plateau_delta));

  res.norm_inf = sup_norm(s).value;
  res.norm2 = p_norm(s, 2.0).value;
  const double value_tol = 1e-9;
  if (is_inner(s.scaled(1.0 / res.norm_inf)).is_inner) {
    res.outcome = PSolveOutcome::InnerMultiple;
    res.residual = std::abs(res.norm_inf - res.r);
    return res;
  }
  if (res.r < res.norm2 - value_tol || res.r > res.norm_inf + value_tol)
    throw InconsistencyError("restricted norm " + std::to_string(res.r) + " outside [||phi||_2, ||phi||_inf] = [" +
                             std::to_string(res.norm2) + ", " + std::to_string(res.norm_inf) +
                             "]; truncation too small?");

  const auto f = [&](double p) { return p_norm(s, p).value - res.r; };

  {
    const double lo = std::log(2.0), hi = std::log(opt.p_cap);
    double prev = f(2.0);
    for (std::size_t i = 1; i < opt.sign_grid; ++i) {
      const double p = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(opt.sign_grid - 1));
      const double cur = f(p);
      if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++res.sign_changes;
      if (cur != 0.0) prev = cur;
    }
  }

  const double f2 = f(2.0);
  if (std::abs(f2) <= 1e-12 || f2 > 0.0) {
    res.outcome = PSolveOutcome::Finite;
    res.p_value = 2.0;
    res.residual = std::abs(f2);
    return res;
  }
  const double fcap = f(opt.p_cap);
  if (fcap < 0.0) {
    if (is_inner(s.scaled(1.0 / res.norm_inf), InnerMode::Numeric).is_inner) {
      res.outcome = PSolveOutcome::InnerMultiple;
      res.residual = std::abs(res.norm_inf - res.r);
      return res;
    }
    throw ConvergenceError("no sign change of ||phi||_p - r on [2, " + std::to_string(opt.p_cap) +
                           "]: ||phi||_cap - r = " + std::to_string(fcap));
  }
  double lo = 2.0, hi = opt.p_cap;
  while (hi - lo > opt.tol) {
    const double mid = (hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  const double p = 0.5 * (lo + hi);
  res.outcome = PSolveOutcome::Finite;
  res.p_value = p;
  res.residual = std::abs(f(p));
  return res;
}

// ---------------------------------------------------------------------------
// ||C_phi|H^2_0|| = ||phi||_2 conditions

struct Thm7Report {
  double phi_norm2 = 0.0;
  double restricted = 0.0;
  double cond20_gap = 0.0;             // | ||C_phi|H^2_0|| - ||phi||_2 |
  double cond21_residual = 0.0;        // || M^H M e_z - ||phi||_2^2 e_z ||
  double cond22_eigen_residual = 0.0;  // || M^H M e_z - lambda e_z ||, lambda free
  std::vector<cplx> cond23_inners;     // <phi, phi^n>, n = 2..n_max
};

namespace detail {

inline CoeffVec long_coeffs(const Symbol& s, std::size_t n) {
  if (s.is_polynomial()) return s.num();
  return taylor(s, std::max<std::size_t>(n, 8192));
}

}  // namespace detail

inline Thm7Report thm7_check(const Symbol& s, std::size_t n, unsigned n_max) {
  if (!detail::origin_fixed(s)) throw PreconditionError("thm7_check needs phi(0) = 0");
  const OpMatrix m = comp_matrix(s, n, Basis::H20);
  Thm7Report rep;
  const CoeffVec phi = detail::long_coeffs(s, n + 1);
  rep.phi_norm2 = h2_norm(phi);

  const Eigen::VectorXcd mez = m.entries.col(0);
  Eigen::VectorXcd v = m.entries.adjoint() * mez;
  Eigen::VectorXcd target = Eigen::VectorXcd::Zero(v.size());
  target(0) = rep.phi_norm2 * rep.phi_norm2;
  rep.cond21_residual = (v - target).norm();
  rep.cond22_eigen_residual = v.tail(v.size() - 1).norm();

  for (unsigned k = 2; k <= n_max; ++k) {
    CoeffVec pw;
    if (s.is_polynomial()) {
      pw = poly::pow(s.num(), k);
    } else {
      pw = taylor(s.pow(k), phi.size());
    }
    rep.cond23_inners.push_back(h2_inner(phi, pw));
  }
  rep.restricted = op_norm(m).value;
  rep.cond20_gap = std::abs(rep.restricted - rep.phi_norm2);
  return rep;
}

/// Gram matrix G(m, n) = <phi^m, phi^n>, 0 <= m, n <= n_max, by exact expansion.
inline Eigen::MatrixXcd rudin_audit(const Symbol& s, unsigned n_max) {
  if (!s.is_polynomial()) throw PreconditionError("rudin_audit needs a polynomial symbol");
  const std::size_t deg = std::max<std::size_t>(s.degree(), 1);
  if (deg * n_max > max_degree())
    throw DegreeError("rudin_audit degree " + std::to_string(deg * n_max) + " exceeds cap");
  std::vector<CoeffVec> powers{CoeffVec{cplx{1.0}}};
  for (unsigned k = 1; k <= n_max; ++k) powers.push_back(poly::mul(powers.back(), s.num()));
  const auto dim = static_cast<Eigen::Index>(n_max + 1);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      g(i, j) = h2_inner(powers[static_cast<std::size_t>(i)], powers[static_cast<std::size_t>(j)]);
  return g;
}

/// Largest |<phi^m, phi^n>| with m != n.
inline double max_offdiag(const Eigen::MatrixXcd& g) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      if (i != j) m = std::max(m, std::abs(g(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// Iterates

struct IterateRow {
  unsigned n = 0;
  double distance_to_fixed = 0.0;  // ||C_{phi[n]} - C_p||
  double norm = 0.0;               // ||C_{phi[n]}||
  double centered_distance = 0.0;  // ||C_{phi[n]} - C_{phi[n](0)}||
  double strict_gap = 0.0;         // norm - centered_distance
};

struct IterateSweep {
  cplx fixed_point{};
  std::size_t dimension = 0;
  std::vector<IterateRow> rows;
  std::optional<unsigned> first_strict_n;
};

inline constexpr double kStrictGapTol = 1e-6;

inline IterateSweep iterate_sweep(const Symbol& s, unsigned n_max, std::size_t n,
                                  const OpNormOptions& solver = {}) {
  require_selfmap(s, "iterated symbol");
  if (n_max == 0) throw PreconditionError("iterate_sweep needs n_max >= 1");
  if (is_inner(s).is_inner) throw PreconditionError("iterate_sweep needs a non-inner symbol");
  IterateSweep sweep;
  sweep.dimension = n;
  sweep.fixed_point = fixed_point(s);
  const Eigen::MatrixXcd at_fixed = comp_matrix(Symbol::constant(sweep.fixed_point), n).entries;
  Symbol it = s;
  for (unsigned k = 1; k <= n_max; ++k) {
    if (k > 1) it = compose(s, it);
    const Eigen::MatrixXcd c = comp_matrix(it, n).entries;
    const Eigen::MatrixXcd c0 = comp_matrix(Symbol::constant(it.at_origin()), n).entries;
    IterateRow row;
    row.n = k;
    row.distance_to_fixed = op_norm(Eigen::MatrixXcd(c - at_fixed), solver).value;
    row.norm = op_norm(c, solver).value;
    row.centered_distance = op_norm(Eigen::MatrixXcd(c - c0), solver).value;
    row.strict_gap = row.norm - row.centered_distance;
    if (!sweep.first_strict_n && row.strict_gap > kStrictGapTol) sweep.first_strict_n = k;
    sweep.rows.push_back(row);
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Nordgren identity: int |f o phi|^2 dm = int |f|^2 P(phi(0), .) dm, phi inner

struct Eq6Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

inline Eq6Result eq6_verify(const Symbol& s, const CoeffVec& f, std::size_t grid = 1024) {
  if (!is_inner(s).is_inner) throw PreconditionError("eq6_verify needs an inner symbol");
  const cplx a = s.at_origin();
  Eq6Result r;
  r.lhs = circle_mean([&](cplx u) { return std::norm(poly::horner(f, s(u))); }, grid);
  r.rhs = circle_mean([&](cplx u) { return std::norm(poly::horner(f, u)) * poisson(a, u); }, grid);
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace hardyop

#endif  // HARDYOP_ANALYSIS_HPP
