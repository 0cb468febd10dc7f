#ifndef HARDYOP_TESTS_ORACLES_HPP
#define HARDYOP_TESTS_ORACLES_HPP

// Reference computations that deliberately avoid the library's own code
// paths: closed forms, naive series, and DFT quadrature.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "hardyop/hardyop.hpp"

namespace oracle {

using hardyop::cplx;
using hardyop::CoeffVec;

/// ||(z + z^2)/2||_p: |phi(e^{it})| = |cos(t/2)|, so the p-th power mean is
/// Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2 + 1)).
inline double half_z_plus_z2_pnorm(double p) {
  const double lg = std::lgamma((p + 1.0) / 2.0) - 0.5 * std::log(M_PI) - std::lgamma(p / 2.0 + 1.0);
  return std::exp(lg / p);
}

/// ||k_a - k_b||^2 by summing the coefficient series directly.
inline double kernel_distance_series(cplx a, cplx b, int terms = 20000) {
  double s = 0.0;
  cplx pa{1.0}, pb{1.0};
  for (int k = 0; k < terms; ++k) {
    s += std::norm(pa - pb);
    pa *= std::conj(a);
    pb *= std::conj(b);
  }
  return std::sqrt(s);
}

/// Taylor coefficient j of f^k by a length-m DFT on the circle (m > degree).
inline cplx power_coeff_dft(const hardyop::Symbol& f, unsigned k, unsigned j, int m = 1024) {
  cplx s{};
  for (int t = 0; t < m; ++t) {
    const cplx u = std::polar(1.0, 2.0 * M_PI * t / m);
    s += std::pow(f(u), static_cast<int>(k)) * std::pow(std::conj(u), static_cast<int>(j));
  }
  return s / static_cast<double>(m);
}

/// Coefficients of q o phi for polynomials, by naive Horner on coefficient vectors.
inline CoeffVec compose_poly(const CoeffVec& q, const CoeffVec& phi) {
  CoeffVec acc{q.back()};
  for (std::size_t i = q.size() - 1; i-- > 0;) {
    CoeffVec next(acc.size() + phi.size() - 1);
    for (std::size_t a = 0; a < acc.size(); ++a)
      for (std::size_t b = 0; b < phi.size(); ++b) next[a + b] += acc[a] * phi[b];
    next[0] += q[i];
    acc = next;
  }
  return acc;
}

inline double l2(const CoeffVec& c) {
  double s = 0.0;
  for (const cplx v : c) s += std::norm(v);
  return std::sqrt(s);
}

inline cplx random_complex(std::mt19937& g, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cplx z;
  do z = cplx{u(g), u(g)};
  while (std::abs(z) >= 1.0);
  return radius * z;
}

/// Polynomial with sum |c_k| <= budget, so it maps the disk into radius budget.
inline CoeffVec random_poly(std::mt19937& g, std::size_t degree, double budget, bool fix_origin) {
  CoeffVec c(degree + 1);
  double total = 0.0;
  for (std::size_t k = fix_origin ? 1 : 0; k <= degree; ++k) {
    c[k] = random_complex(g, 1.0);
    total += std::abs(c[k]);
  }
  for (auto& v : c) v *= budget / total;
  return c;
}

/// Max over n samples of Re(w e^{-i theta}) for a dense set of boundary points.
inline double support_brute(const std::vector<cplx>& pts, double theta) {
  double m = -1e300;
  for (const cplx w : pts) m = std::max(m, (w * std::polar(1.0, -theta)).real());
  return m;
}

}  // namespace oracle

#endif  // HARDYOP_TESTS_ORACLES_HPP
