#include <gtest/gtest.h>

#include <random>

#include "hardyop/hardyop.hpp"
#include "oracles.hpp"

using namespace hardyop;

TEST(SampleW, TrivialMatrices) {
  for (const cplx w : sample_w(Eigen::MatrixXcd::Identity(5, 5), 50, 1)) EXPECT_NEAR(std::abs(w - 1.0), 0.0, 1e-15);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  for (const cplx w : sample_w(d, 200, 2)) {
    EXPECT_LE(std::abs(w.imag()), 1e-15);
    EXPECT_LE(std::abs(w.real()), 1.0 + 1e-15);
  }
  // C_0 compresses to a rank-one projection: W = [0, 1].
  for (const cplx w : sample_w(comp_matrix(Symbol::constant(0.0), 8), 200, 3)) {
    EXPECT_LE(std::abs(w.imag()), 1e-15);
    EXPECT_GE(w.real(), -1e-15);
    EXPECT_LE(w.real(), 1.0 + 1e-15);
  }
  EXPECT_THROW(sample_w(d, 0, 1), PreconditionError);
}

TEST(SampleW, DeterministicPerSeed) {
  const OpMatrix a = comp_matrix(Symbol::alpha(0.5), 16);
  EXPECT_EQ(sample_w(a, 20, 42), sample_w(a, 20, 42));
  EXPECT_NE(sample_w(a, 20, 42), sample_w(a, 20, 43));
}

TEST(Boundary, HermitianDiagonal) {
  const NRBoundary nr = boundary(comp_matrix(parse_symbol("-z"), 6), 64);
  EXPECT_NEAR(nr.radius, 1.0, 1e-12);
  for (std::size_t j = 0; j < nr.thetas.size(); ++j) {
    EXPECT_NEAR(nr.support_vals[j], std::abs(std::cos(nr.thetas[j])), 1e-12);
    EXPECT_LE(std::abs(nr.boundary_pts[j].imag()), 1e-12);
  }
  EXPECT_THROW(boundary(comp_matrix(parse_symbol("-z"), 6), 8), PreconditionError);
}

TEST(Boundary, ConstantSymbolMatchesEllipse) {
  const NRBoundary nr = boundary(comp_matrix(Symbol::constant(0.5), 64), 720);
  const EllipseComparison c = ellipse_compare(nr, cp_ellipse(0.5));
  EXPECT_TRUE(c.contained);
  EXPECT_LE(c.hausdorff, 1e-6);
  EXPECT_TRUE(nr.all_converged());
  // C_0 compression: W = [0,1], the degenerate focal segment.
  const EllipseComparison z = ellipse_compare(boundary(comp_matrix(Symbol::constant(0.0), 16), 180), cp_ellipse(0.0));
  EXPECT_TRUE(z.contained);
  EXPECT_LE(z.hausdorff, 1e-10);
}

TEST(Boundary, SupportValuesAreRayleighMaxima) {
  // Every random Rayleigh quotient sits inside the support-function hull.
  std::mt19937 g(8);
  for (int trial = 0; trial < 4; ++trial) {
    const Symbol s(oracle::random_poly(g, 2, 0.9, false));
    const OpMatrix a = comp_matrix(s, 12);
    const NRBoundary nr = boundary(a, 90);
    for (const cplx w : sample_w(a, 300, 100 + trial))
      for (std::size_t j = 0; j < nr.thetas.size(); ++j)
        EXPECT_LE((w * std::polar(1.0, -nr.thetas[j])).real(), nr.support_vals[j] + 1e-8);
    for (std::size_t j = 0; j < nr.thetas.size(); ++j)
      EXPECT_NEAR((nr.boundary_pts[j] * std::polar(1.0, -nr.thetas[j])).real(), nr.support_vals[j], 1e-10);
  }
}

TEST(Boundary, SupportNondecreasingInDimension) {
  const NRBoundary a = boundary(comp_matrix(Symbol::alpha(0.5), 16), 120);
  const NRBoundary b = boundary(comp_matrix(Symbol::alpha(0.5), 32), 120);
  for (std::size_t j = 0; j < a.thetas.size(); ++j) EXPECT_GE(b.support_vals[j], a.support_vals[j] - 1e-12);
}

TEST(Boundary, IterativePathAgreesWithDenseSolve) {
  const std::size_t n = kDenseEigenMaxDim + 40;
  const Eigen::MatrixXcd a = comp_matrix(Symbol::alpha(0.5), n).entries;
  const NRBoundary nr = boundary(a, 16);
  for (const std::size_t j : {0u, 3u, 9u}) {
    const cplx rot = std::polar(1.0, -nr.thetas[j]);
    const Eigen::MatrixXcd h = 0.5 * (rot * a + std::conj(rot) * a.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    EXPECT_NEAR(nr.support_vals[j], es.eigenvalues()(es.eigenvalues().size() - 1), 1e-9);
  }
}

TEST(Ellipse, AlphaCompressionsContainedAndApproaching) {
  const EllipseDisk e = alpha_ellipse(0.5);
  double prev = 1e300;
  for (const std::size_t n : {16, 32, 64}) {
    const NRBoundary nr = boundary(comp_matrix(Symbol::alpha(0.5), n), 360);
    const EllipseComparison c = ellipse_compare(nr, e);
    EXPECT_TRUE(c.contained);
    EXPECT_LT(c.hausdorff, prev);
    EXPECT_GT(min_interior_margin(nr.boundary_pts, e), 0.0);
    prev = c.hausdorff;
  }
}

TEST(Ellipse, ViolationIsDetected) {
  // Shrink the target: the compression must stick out.
  const NRBoundary nr = boundary(comp_matrix(Symbol::constant(0.5), 32), 180);
  const EllipseDisk small = make_ellipse(0.0, 1.0, 1.1, true);
  const EllipseComparison c = ellipse_compare(nr, small);
  EXPECT_FALSE(c.contained);
  EXPECT_GT(c.max_violation, 1e-3);
}

TEST(Csv, HeaderAndRows) {
  const NRBoundary nr = boundary(comp_matrix(Symbol::constant(0.5), 4), 16);
  const std::string csv = to_csv(nr);
  EXPECT_EQ(csv.rfind("theta,support,re,im\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 17);
}
