#ifndef HARDYOP_CLOSEDFORM_HPP
#define HARDYOP_CLOSEDFORM_HPP

// Exact norm, distance, and numerical-range formulas for composition
// operators on H^2. These are the verification targets for everything the
// compression machinery computes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

#include "hardyop/coeffs.hpp"
#include "hardyop/errors.hpp"

namespace hardyop {

namespace detail {
inline void require_open_disk(cplx p, const char* what) {
  if (!(std::abs(p) < 1.0)) throw PreconditionError(std::string(what) + " must lie in the open disk");
}
}  // namespace detail

/// Elliptical disk given by foci and axis lengths; degenerate when it
/// collapses to the focal segment.
struct EllipseDisk {
  cplx focus_a{};
  cplx focus_b{};
  double major_len = 0.0;
  double minor_len = 0.0;
  bool degenerate = false;
  bool closed = true;

  cplx center() const { return 0.5 * (focus_a + focus_b); }
  double focal_distance() const { return std::abs(focus_b - focus_a); }

  cplx axis() const {
    const cplx d = focus_b - focus_a;
    return std::abs(d) > 0.0 ? d / std::abs(d) : cplx{1.0};
  }

  /// h(theta) = max over the disk of Re(w e^{-i theta}).
  double support(double theta) const {
    const cplx d = std::polar(1.0, theta);
    const cplx local = d * std::conj(axis());
    const double a = 0.5 * major_len, b = 0.5 * minor_len;
    return (center() * std::conj(d)).real() +
           std::sqrt(a * a * local.real() * local.real() + b * b * local.imag() * local.imag());
  }

  cplx boundary_point(double t) const {
    const double a = 0.5 * major_len, b = 0.5 * minor_len;
    return center() + axis() * cplx{a * std::cos(t), b * std::sin(t)};
  }

  double focal_sum(cplx w) const { return std::abs(w - focus_a) + std::abs(w - focus_b); }

  /// Positive inside, zero on the boundary curve.
  double interior_margin(cplx w) const { return major_len - focal_sum(w); }
};

inline EllipseDisk make_ellipse(cplx focus_a, cplx focus_b, double major_len, bool closed) {
  EllipseDisk e{focus_a, focus_b, major_len, 0.0, false, closed};
  const double c = e.focal_distance();
  if (major_len < c) throw PreconditionError("major axis shorter than focal distance");
  e.minor_len = std::sqrt(std::max(major_len * major_len - c * c, 0.0));
  e.degenerate = e.minor_len == 0.0;
  return e;
}

struct NormBounds {
  double lower;
  double upper;
};

/// 1/sqrt(1-|phi(0)|^2) <= ||C_phi|| <= sqrt((1+|phi(0)|)/(1-|phi(0)|)).
inline NormBounds norm_bounds(cplx phi0) {
  detail::require_open_disk(phi0, "phi(0)");
  const double r = std::abs(phi0);
  return {1.0 / std::sqrt(1.0 - r * r), std::sqrt((1.0 + r) / (1.0 - r))};
}

/// ||C_phi|| (and its essential norm) for inner phi.
inline double inner_symbol_norm(cplx phi0) { return norm_bounds(phi0).upper; }

/// ||C_phi - C_0|| for inner phi; the same value as inner_symbol_norm.
inline double eq12_check_value(cplx phi0) { return inner_symbol_norm(phi0); }

/// ||C_{p1} - C_{p2}|| for constant symbols.
inline double const_distance(cplx p1, cplx p2) {
  detail::require_open_disk(p1, "p1");
  detail::require_open_disk(p2, "p2");
  const double v = 1.0 / (1.0 - std::norm(p1)) + 1.0 / (1.0 - std::norm(p2)) -
                   2.0 * (1.0 / (1.0 - std::conj(p1) * p2)).real();
  return std::sqrt(std::max(v, 0.0));
}

/// ||C_phi - C_p|| for inner phi fixing 0.
inline double inner_const_distance(cplx p) {
  detail::require_open_disk(p, "p");
  return 1.0 / std::sqrt(1.0 - std::norm(p));
}

/// ||C_{alpha_p o phi} +- C_phi|| for inner phi fixing 0.
inline double inner_alpha_distance(cplx p) {
  detail::require_open_disk(p, "p");
  return 2.0 / std::sqrt(1.0 - std::norm(p));
}

/// Closed numerical range of C_p: foci 0 and 1, major axis 1/sqrt(1-|p|^2).
inline EllipseDisk cp_ellipse(cplx p) {
  EllipseDisk e = make_ellipse(cplx{0.0}, cplx{1.0}, inner_const_distance(p), true);
  if (p == cplx{}) {
    e.minor_len = 0.0;
    e.degenerate = true;
  }
  return e;
}

/// Numerical range of C_{alpha_p}: foci -1 and 1, major 2/sqrt(1-|p|^2);
/// open unless p = 0, where it is the closed segment [-1, 1].
inline EllipseDisk alpha_ellipse(cplx p) {
  const double major = inner_alpha_distance(p);
  EllipseDisk e = make_ellipse(cplx{-1.0}, cplx{1.0}, major, p == cplx{});
  if (p == cplx{}) {
    e.minor_len = 0.0;
    e.degenerate = true;
  }
  return e;
}

enum class RotationCase { Equal, EvenOrder, OddOrder, NotRootOfUnity, Numeric };

struct RotationDistance {
  double value = 0.0;
  RotationCase tag = RotationCase::Numeric;
  std::uint64_t order = 0;  // k when lam/mu = e^{2 pi i a/k}
};

inline constexpr double kRootOfUnityTol = 1e-12;
inline constexpr std::uint64_t kRootOfUnityMaxDen = 1000000;

struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 0;  // 0 when not recognized
};

/// Continued-fraction recognition of x in [0,1) as a/k with k <= max_den.
inline Fraction recognize_fraction(double x, double tol = kRootOfUnityTol,
                                   std::uint64_t max_den = kRootOfUnityMaxDen) {
  std::uint64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(y);
    if (a > 1e18) break;
    const auto ai = static_cast<std::uint64_t>(a);
    const std::uint64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    if (std::abs(x - static_cast<double>(h2) / static_cast<double>(k2)) <= tol) return {h2, k2};
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = y - a;
    if (frac <= 0.0) break;
    y = 1.0 / frac;
  }
  return {};
}

namespace detail {

/// Fractional part of n*x computed with an fma error term, so large n keeps
/// full angular precision.
inline double frac_times(double x, std::uint64_t n) {
  const double dn = static_cast<double>(n);
  const double hi = dn * x;
  const double lo = std::fma(dn, x, -hi);
  double f = (hi - std::floor(hi)) + lo;
  f -= std::floor(f);
  return f;
}

inline double turns(cplx z) {
  double t = std::arg(z) / kTwoPi;
  if (t < 0.0) t += 1.0;
  return t;
}

}  // namespace detail

/// sup_{1 <= n <= depth} |lam^n - mu^n| by enumeration.
inline double rotation_sup_numeric(cplx lam, cplx mu, std::uint64_t depth) {
  const double rl = std::abs(lam), rm = std::abs(mu);
  const double tl = detail::turns(lam), tm = detail::turns(mu);
  double best = 0.0;
  double pl = 1.0, pm = 1.0;
  for (std::uint64_t n = 1; n <= depth; ++n) {
    pl *= rl;
    pm *= rm;
    if (pl + pm <= best) break;
    const cplx a = std::polar(pl, kTwoPi * detail::frac_times(tl, n));
    const cplx b = std::polar(pm, kTwoPi * detail::frac_times(tm, n));
    best = std::max(best, std::abs(a - b));
  }
  return best;
}

/// ||C_{lam phi} - C_{mu phi}|| = sup_n |lam^n - mu^n| for inner phi fixing 0.
/// Unimodular pairs use the exact root-of-unity case analysis; an
/// unrecognized ratio is treated as an irrational rotation (value 2).
inline RotationDistance rotation_distance(cplx lam, cplx mu, std::uint64_t depth = 1000000) {
  if (std::abs(lam) > 1.0 + 1e-12 || std::abs(mu) > 1.0 + 1e-12)
    throw PreconditionError("rotation_distance needs |lam|, |mu| <= 1");
  if (lam == mu) return {0.0, RotationCase::Equal, 1};
  const bool unimodular =
      std::abs(std::abs(lam) - 1.0) <= 1e-12 && std::abs(std::abs(mu) - 1.0) <= 1e-12;
  if (!unimodular) return {rotation_sup_numeric(lam, mu, depth), RotationCase::Numeric, 0};

  const Fraction f = recognize_fraction(detail::turns(lam / mu));
  if (f.den == 0) return {2.0, RotationCase::NotRootOfUnity, 0};
  const std::uint64_t k = f.den;
  if (k == 1) return {0.0, RotationCase::Equal, 1};
  if (k % 2 == 0) return {2.0, RotationCase::EvenOrder, k};
  const double kd = static_cast<double>(k);
  return {2.0 * std::sin(kPi * (kd - 1.0) / (2.0 * kd)), RotationCase::OddOrder, k};
}

inline const char* to_string(RotationCase c) {
  switch (c) {
    case RotationCase::Equal: return "equal";
    case RotationCase::EvenOrder: return "even-order-root";
    case RotationCase::OddOrder: return "odd-order-root";
    case RotationCase::NotRootOfUnity: return "not-root-of-unity";
    case RotationCase::Numeric: return "numeric";
  }
  return "unknown";
}

}  // namespace hardyop

#endif  // HARDYOP_CLOSEDFORM_HPP
