#ifndef HARDYOP_COEFFS_HPP
#define HARDYOP_COEFFS_HPP

// Dense complex coefficient sequences: Taylor coefficients of H^2 functions
// and coefficient lists of polynomials (index n holds the z^n coefficient).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hardyop {

using cplx = std::complex<double>;
using CoeffVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace poly {

/// Drops trailing exact zeros, keeping at least one entry.
inline CoeffVec trimmed(CoeffVec c) {
  while (c.size() > 1 && c.back() == cplx{}) c.pop_back();
  if (c.empty()) c.push_back(cplx{});
  return c;
}

/// Degree after trimming; the zero polynomial has degree 0.
inline std::size_t degree(std::span<const cplx> c) {
  std::size_t n = c.size();
  while (n > 1 && c[n - 1] == cplx{}) --n;
  return n == 0 ? 0 : n - 1;
}

inline bool is_zero(std::span<const cplx> c) {
  return std::all_of(c.begin(), c.end(), [](cplx v) { return v == cplx{}; });
}

inline CoeffVec add(std::span<const cplx> a, std::span<const cplx> b) {
  CoeffVec r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trimmed(std::move(r));
}

inline CoeffVec sub(std::span<const cplx> a, std::span<const cplx> b) {
  CoeffVec r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return trimmed(std::move(r));
}

inline CoeffVec scale(std::span<const cplx> a, cplx s) {
  CoeffVec r(a.begin(), a.end());
  for (auto& v : r) v *= s;
  return trimmed(std::move(r));
}

inline CoeffVec mul(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {cplx{}};
  CoeffVec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == cplx{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trimmed(std::move(r));
}

/// First `n` coefficients of a*b.
inline CoeffVec mul_trunc(std::span<const cplx> a, std::span<const cplx> b, std::size_t n) {
  CoeffVec r(n);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == cplx{}) continue;
    const std::size_t jmax = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < jmax; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// First `n` coefficients of the power series num/den; requires den[0] != 0.
/// Recurrence c_k = (num_k - sum_{j>=1} den_j c_{k-j}) / den_0.
inline CoeffVec series_div(std::span<const cplx> num, std::span<const cplx> den, std::size_t n) {
  CoeffVec c(n);
  const cplx d0 = den[0];
  const std::size_t dd = den.size();
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = k < num.size() ? num[k] : cplx{};
    const std::size_t jmax = std::min(dd - 1, k);
    for (std::size_t j = 1; j <= jmax; ++j) acc -= den[j] * c[k - j];
    c[k] = (d0 == cplx{1.0, 0.0}) ? acc : acc / d0;
  }
  return c;
}

inline CoeffVec pow(std::span<const cplx> a, unsigned e) {
  CoeffVec result{cplx{1.0, 0.0}};
  CoeffVec base(a.begin(), a.end());
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

inline cplx horner(std::span<const cplx> c, cplx z) {
  cplx acc{};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

inline CoeffVec derivative(std::span<const cplx> c) {
  if (c.size() <= 1) return {cplx{}};
  CoeffVec d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

/// z^D * conj(c)(1/z): conjugated coefficients reversed against a fixed degree D >= deg c.
inline CoeffVec reflect(std::span<const cplx> c, std::size_t D) {
  CoeffVec r(D + 1);
  for (std::size_t i = 0; i < c.size() && i <= D; ++i) r[D - i] = std::conj(c[i]);
  return r;
}

/// Largest coefficient difference, shorter operand padded with zeros.
inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  const std::size_t n = std::max(a.size(), b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx x = i < a.size() ? a[i] : cplx{};
    const cplx y = i < b.size() ? b[i] : cplx{};
    m = std::max(m, std::abs(x - y));
  }
  return m;
}

inline double max_abs(std::span<const cplx> a) {
  double m = 0.0;
  for (auto v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace poly
}  // namespace hardyop

#endif  // HARDYOP_COEFFS_HPP
