#ifndef HARDYOP_NUMRANGE_HPP
#define HARDYOP_NUMRANGE_HPP

// Numerical range W(A) = { <Af, f> : ||f|| = 1 } of finite compressions.
// The boundary is traced by its support function
//   h(theta) = lambda_max( (e^{-i theta} A + e^{i theta} A^H) / 2 ),
// with the boundary point in direction theta equal to <Av, v> for the top
// eigenvector v.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#if defined(HARDYOP_USE_LAPACKE)
#include <lapacke.h>
#endif

#include "hardyop/closedform.hpp"
#include "hardyop/coeffs.hpp"
#include "hardyop/compop.hpp"
#include "hardyop/errors.hpp"

namespace hardyop {

inline constexpr std::size_t kDenseEigenMaxDim = 512;

namespace detail {

/// Standard normal deviates from mt19937_64 via Box-Muller; portable across
/// standard libraries, unlike std::normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace detail

/// Rayleigh quotients <Af, f> for seeded random unit vectors f.
inline std::vector<cplx> sample_w(const Eigen::MatrixXcd& a, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw PreconditionError("sample_w needs count >= 1");
  detail::GaussianStream g(seed);
  std::vector<cplx> pts;
  pts.reserve(count);
  Eigen::VectorXcd f(a.cols());
  for (std::size_t s = 0; s < count; ++s) {
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double re = g.next();
      const double im = g.next();
      f(i) = cplx{re, im};
    }
    f.normalize();
    pts.push_back(f.dot(a * f));
  }
  return pts;
}

inline std::vector<cplx> sample_w(const OpMatrix& a, std::size_t count, std::uint64_t seed) {
  return sample_w(a.entries, count, seed);
}

struct NRBoundary {
  std::vector<double> thetas;
  std::vector<double> support_vals;
  std::vector<cplx> boundary_pts;
  std::vector<bool> converged;
  double radius = 0.0;

  bool all_converged() const {
    return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
  }
};

namespace detail {

struct TopEigen {
  double value = 0.0;
  Eigen::VectorXcd vector;
  bool converged = true;
};

inline Eigen::VectorXcd probe_vector(Eigen::Index n) {
  Eigen::VectorXcd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = std::polar(1.0, 2.399963229728653 * static_cast<double>(i));
  return x.normalized();
}

#if defined(HARDYOP_USE_LAPACKE)
/// zheevr restricted to the largest eigenpair; blocked tridiagonalization
/// makes it a few times faster than Eigen's solver at these sizes.
inline bool lapack_top_eigen(const Eigen::MatrixXcd& h, TopEigen& top) {
  const auto n = static_cast<lapack_int>(h.rows());
  Eigen::MatrixXcd work = h;
  Eigen::VectorXcd z(n);
  std::vector<double> w(static_cast<std::size_t>(n));
  lapack_int found = 0;
  lapack_int support[2];
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'U', n, reinterpret_cast<lapack_complex_double*>(work.data()), n, 0.0, 0.0, n,
      n, 0.0, &found, w.data(), reinterpret_cast<lapack_complex_double*>(z.data()), n, support);
  if (info != 0 || found != 1) return false;
  top.value = w[0];
  top.vector = z;
  top.converged = true;
  return true;
}
#endif

/// Dense path: eigenvalues only, then the top eigenvector by shifted inverse
/// iteration with a Cholesky factor of (sigma I - H), sigma just above lambda_max.
inline TopEigen dense_top_eigen(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
#if defined(HARDYOP_USE_LAPACKE)
  {
    TopEigen top;
    if (lapack_top_eigen(h, top)) return top;
  }
#endif
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  TopEigen top;
  top.converged = es.info() == Eigen::Success;
  top.value = es.eigenvalues()(n - 1);
  const double scale = std::max({1.0, std::abs(es.eigenvalues()(0)), std::abs(top.value)});
  double shift = 1e-10 * scale;
  for (int attempt = 0; attempt < 6; ++attempt, shift *= 100.0) {
    Eigen::MatrixXcd m = -h;
    m.diagonal().array() += top.value + shift;
    Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success) continue;
    Eigen::VectorXcd x = probe_vector(n);
    for (int it = 0; it < 4; ++it) x = llt.solve(x).normalized();
    top.vector = x;
    return top;
  }
  top.converged = false;
  top.vector = probe_vector(n);
  return top;
}

}  // namespace detail

/// Support function and boundary points on `grid` equispaced directions.
inline NRBoundary boundary(const Eigen::MatrixXcd& a, std::size_t grid = 720) {
  if (grid < 16) throw PreconditionError("boundary grid must have at least 16 angles");
  const Eigen::Index n = a.rows();
  NRBoundary nr;
  nr.thetas = circle_grid(grid);
  Eigen::VectorXcd warm = detail::probe_vector(n);
  for (const double theta : nr.thetas) {
    const cplx rot = std::polar(1.0, -theta);
    const Eigen::MatrixXcd h = 0.5 * (rot * a + std::conj(rot) * a.adjoint());
    detail::TopEigen top;
    if (static_cast<std::size_t>(n) <= kDenseEigenMaxDim) {
      top = detail::dense_top_eigen(h);
    } else {
      const auto apply = [&](const auto& x) -> Eigen::VectorXcd { return h * x; };
      auto r = detail::lanczos_max(apply, warm, 1e-10, static_cast<int>(n), true);
      top = {r.value, r.vector, r.converged};
      warm = r.vector;
    }
    const cplx pt = top.vector.dot(a * top.vector);
    nr.support_vals.push_back(top.value);
    nr.boundary_pts.push_back(pt);
    nr.converged.push_back(top.converged);
    nr.radius = std::max(nr.radius, std::abs(pt));
  }
  return nr;
}

inline NRBoundary boundary(const OpMatrix& a, std::size_t grid = 720) { return boundary(a.entries, grid); }

struct EllipseComparison {
  bool contained = false;
  /// sup over the direction grid of |h_W - h_E|: the Hausdorff distance of
  /// the two convex sets, sampled in the grid directions.
  double hausdorff = 0.0;
  /// max(0, max_theta h_W - h_E).
  double max_violation = 0.0;
  /// Two-sided distance between the boundary polyline and a dense polyline of the ellipse.
  double polyline_hausdorff = 0.0;
};

inline constexpr double kContainmentTol = 1e-8;

namespace detail {

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

inline double point_polyline_distance(cplx p, const std::vector<cplx>& poly_pts) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = poly_pts.size();
  for (std::size_t i = 0; i < m; ++i)
    best = std::min(best, point_segment_distance(p, poly_pts[i], poly_pts[(i + 1) % m]));
  return best;
}

}  // namespace detail

inline EllipseComparison ellipse_compare(const NRBoundary& nr, const EllipseDisk& e,
                                         std::size_t ellipse_samples = 8192) {
  EllipseComparison c;
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nr.thetas.size(); ++j) {
    const double d = nr.support_vals[j] - e.support(nr.thetas[j]);
    excess = std::max(excess, d);
    c.hausdorff = std::max(c.hausdorff, std::abs(d));
  }
  c.max_violation = std::max(0.0, excess);
  c.contained = c.max_violation <= kContainmentTol;

  std::vector<cplx> curve(ellipse_samples);
  for (std::size_t k = 0; k < ellipse_samples; ++k)
    curve[k] = e.boundary_point(kTwoPi * static_cast<double>(k) / static_cast<double>(ellipse_samples));
  double ph = 0.0;
  for (const cplx p : nr.boundary_pts) ph = std::max(ph, detail::point_polyline_distance(p, curve));
  for (const cplx q : curve) ph = std::max(ph, detail::point_polyline_distance(q, nr.boundary_pts));
  c.polyline_hausdorff = ph;
  return c;
}

/// Smallest interior margin (major axis minus focal-distance sum) over the points.
inline double min_interior_margin(const std::vector<cplx>& pts, const EllipseDisk& e) {
  double m = std::numeric_limits<double>::infinity();
  for (const cplx p : pts) m = std::min(m, e.interior_margin(p));
  return m;
}

/// CSV rows: theta, h(theta), Re point, Im point.
inline std::string to_csv(const NRBoundary& nr) {
  std::string out = "theta,support,re,im\n";
  char buf[160];
  for (std::size_t j = 0; j < nr.thetas.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", nr.thetas[j], nr.support_vals[j],
                  nr.boundary_pts[j].real(), nr.boundary_pts[j].imag());
    out += buf;
  }
  return out;
}

}  // namespace hardyop

#endif  // HARDYOP_NUMRANGE_HPP
