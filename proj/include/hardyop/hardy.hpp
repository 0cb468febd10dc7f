#ifndef HARDYOP_HARDY_HPP
#define HARDYOP_HARDY_HPP

// Hardy-space metrics. Boundary integrals use the normalized measure
// dm = d(theta)/2pi, approximated by the uniform trapezoid rule.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "hardyop/coeffs.hpp"
#include "hardyop/errors.hpp"
#include "hardyop/symbol.hpp"

namespace hardyop {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline double h2_norm(std::span<const cplx> c) {
  double s = 0.0;
  for (const cplx v : c) s += std::norm(v);
  return std::sqrt(s);
}

/// <f, g> = sum f_n conj(g_n).
inline cplx h2_inner(std::span<const cplx> f, std::span<const cplx> g) {
  cplx s{};
  const std::size_t n = std::min(f.size(), g.size());
  for (std::size_t i = 0; i < n; ++i) s += f[i] * std::conj(g[i]);
  return s;
}

/// Taylor coefficients of the reproducing kernel k_p(z) = 1/(1 - conj(p) z).
inline CoeffVec kernel_coeffs(cplx p, std::size_t n) {
  if (std::abs(p) >= 1.0) throw PreconditionError("kernel point must lie in the open disk");
  if (n == 0) throw PreconditionError("kernel_coeffs needs n >= 1");
  CoeffVec c(n);
  const cplx q = std::conj(p);
  cplx v{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = v;
    v *= q;
  }
  return c;
}

/// ||k_{p1} - k_{p2}|| from the reproducing property.
inline double kernel_distance(cplx p1, cplx p2) {
  if (std::abs(p1) >= 1.0 || std::abs(p2) >= 1.0)
    throw PreconditionError("kernel points must lie in the open disk");
  const double v = 1.0 / (1.0 - std::norm(p1)) + 1.0 / (1.0 - std::norm(p2)) -
                   2.0 * (1.0 / (1.0 - std::conj(p1) * p2)).real();
  return std::sqrt(std::max(v, 0.0));
}

/// Poisson kernel Re (u + z)/(u - z).
inline double poisson(cplx z, cplx u) { return ((u + z) / (u - z)).real(); }

/// Trapezoid mean of f over m equispaced boundary points.
template <class F>
double circle_mean(F&& f, std::size_t m) {
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    s += f(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m)));
  return s / static_cast<double>(m);
}

struct PNormResult {
  double p = 2.0;
  double value = 0.0;
  std::size_t grid_size = 0;
  double est_error = 0.0;
  bool converged = true;
};

struct PNormOptions {
  double tol = 1e-12;
  std::size_t start_grid = 1024;
  std::size_t max_grid = std::size_t{1} << 20;
  std::size_t sup_grid = 4096;
  double sup_refine_tol = 1e-10;
};

namespace detail {

// |phi|^p summed in log space so large p neither underflows nor overflows.
struct LogPowerSum {
  double p;
  double log_max = -kInfinity;
  double scaled = 0.0;
  std::size_t count = 0;

  void add(double modulus) {
    ++count;
    if (modulus == 0.0) return;
    const double l = p * std::log(modulus);
    if (l > log_max) {
      scaled = scaled * std::exp(log_max - l) + 1.0;
      log_max = l;
    } else {
      scaled += std::exp(l - log_max);
    }
  }
  double norm() const {
    if (scaled == 0.0) return 0.0;
    return std::exp((log_max + std::log(scaled / static_cast<double>(count))) / p);
  }
};

inline double golden_max(const Symbol& s, double a, double b, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto f = [&](double t) { return std::abs(s(std::polar(1.0, t))); };
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

}  // namespace detail

/// sup |phi| on the circle: grid maximum refined by golden-section search
/// around the three largest grid local maxima.
inline PNormResult sup_norm(const Symbol& s, const PNormOptions& opt = {}) {
  const std::size_t m = opt.sup_grid;
  std::vector<double> mod(m);
  for (std::size_t j = 0; j < m; ++j)
    mod[j] = std::abs(s(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m))));
  std::vector<std::size_t> peaks;
  for (std::size_t j = 0; j < m; ++j) {
    const double l = mod[(j + m - 1) % m], r = mod[(j + 1) % m];
    if (mod[j] >= l && mod[j] >= r) peaks.push_back(j);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
    return mod[a] != mod[b] ? mod[a] > mod[b] : a < b;
  });
  if (peaks.size() > 3) peaks.resize(3);
  const double grid_max = *std::max_element(mod.begin(), mod.end());
  double best = grid_max;
  const double h = kTwoPi / static_cast<double>(m);
  for (const std::size_t j : peaks) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    best = std::max(best, detail::golden_max(s, t - h, t + h, opt.sup_refine_tol));
  }
  return PNormResult{kInfinity, best, m, best - grid_max, true};
}

/// ||phi||_p for p in [2, inf]. Finite p: trapezoid rule on doubling grids
/// until successive values agree to `tol`.
inline PNormResult p_norm(const Symbol& s, double p, const PNormOptions& opt = {}) {
  if (!(p >= 2.0)) throw PreconditionError("p_norm supports p in [2, inf]");
  if (std::isinf(p)) return sup_norm(s, opt);

  // Grid values are reused: doubling only evaluates the new odd nodes.
  std::size_t m = opt.start_grid;
  detail::LogPowerSum acc{p};
  for (std::size_t j = 0; j < m; ++j)
    acc.add(std::abs(s(std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m)))));
  double prev = acc.norm();
  double delta = kInfinity;
  while (m < opt.max_grid) {
    for (std::size_t j = 0; j < m; ++j) {
      const double t = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
      acc.add(std::abs(s(std::polar(1.0, t))));
    }
    m *= 2;
    const double cur = acc.norm();
    delta = std::abs(cur - prev);
    prev = cur;
    if (delta <= opt.tol) return PNormResult{p, cur, m, delta, true};
  }
  return PNormResult{p, prev, m, delta, false};
}

enum class InnerMode { ExactRational, Numeric };

struct InnerVerdict {
  InnerMode mode = InnerMode::ExactRational;
  bool is_inner = false;
  /// max | |phi(e^{it})| - 1 | over the boundary grid.
  double margin = 0.0;
  /// max |num*reflect(num) - den*reflect(den)| (ExactRational mode only).
  double coeff_residual = 0.0;
};

inline constexpr double kInnerCoeffTol = 1e-10;
inline constexpr double kInnerNumericTol = 1e-6;

inline double boundary_modulus_margin(const Symbol& s, std::size_t grid = kSelfmapGrid) {
  double m = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const cplx u = std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(grid));
    m = std::max(m, std::abs(std::abs(s(u)) - 1.0));
  }
  return m;
}

/// Finite Blaschke product test: with D = max degree, phi is inner iff
/// num * z^D conj(num)(1/z) == den * z^D conj(den)(1/z).
inline InnerVerdict is_inner(const Symbol& s, InnerMode mode = InnerMode::ExactRational) {
  InnerVerdict v;
  v.mode = mode;
  v.margin = boundary_modulus_margin(s);
  if (mode == InnerMode::Numeric) {
    v.is_inner = v.margin < kInnerNumericTol;
    return v;
  }
  const std::size_t d = s.degree();
  const CoeffVec lhs = poly::mul(s.num(), poly::reflect(s.num(), d));
  const CoeffVec rhs = poly::mul(s.den(), poly::reflect(s.den(), d));
  v.coeff_residual = poly::max_abs_diff(lhs, rhs);
  v.is_inner = v.coeff_residual <= kInnerCoeffTol;
  return v;
}

}  // namespace hardyop

#endif  // HARDYOP_HARDY_HPP
