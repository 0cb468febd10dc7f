#include <gtest/gtest.h>

#include <random>

#include "hardyop/hardyop.hpp"
#include "oracles.hpp"

using namespace hardyop;

TEST(PSolve, OrthogonalPowersGiveTwo) {
  const PSolveResult r = p_solve(parse_symbol("(z^2+z^3)/2"));
  ASSERT_EQ(r.outcome, PSolveOutcome::Finite);
  EXPECT_NEAR(*r.p_value, 2.0, 1e-6);
  EXPECT_TRUE(r.plateau_ok);
}

TEST(PSolve, InnerMultiple) {
  const PSolveResult r = p_solve(parse_symbol("0.7*z^3"));
  EXPECT_EQ(r.outcome, PSolveOutcome::InnerMultiple);
  EXPECT_FALSE(r.p_value.has_value());
  EXPECT_NEAR(r.norm2, 0.7, 1e-12);
  EXPECT_NEAR(r.norm_inf, 0.7, 1e-12);
}

TEST(PSolve, GenericSymbolAgainstGammaOracle) {
  const PSolveResult r = p_solve(parse_symbol("(z+z^2)/2"));
  ASSERT_EQ(r.outcome, PSolveOutcome::Finite);
  ASSERT_TRUE(r.p_value);
  EXPECT_GT(*r.p_value, 2.0);
  EXPECT_LE(r.residual, 1e-8);
  EXPECT_EQ(r.sign_changes, 1);
  EXPECT_NEAR(oracle::half_z_plus_z2_pnorm(*r.p_value), r.r, 1e-9);
  // The compressions converge like 1/N here, so the plateau test fails and is reported.
  EXPECT_FALSE(r.plateau_ok);
  EXPECT_GT(r.plateau_delta, 0.0);
}

TEST(PSolve, StrictPlateauRaises) {
  PSolveOptions o;
  o.require_plateau = true;
  EXPECT_THROW(p_solve(parse_symbol("(z+z^2)/2"), o), ConvergenceError);
}

TEST(PSolve, Preconditions) {
  EXPECT_THROW(p_solve(Symbol::constant(0.0)), PreconditionError);
  EXPECT_THROW(p_solve(parse_symbol("z/2+1/4")), PreconditionError);
  EXPECT_THROW(p_solve(parse_symbol("2*z")), SelfmapError);
}

TEST(PSolve, TooSmallTruncationIsInconsistent) {
  // phi = 0.1z/(1-0.9z) has ||phi||_2 = 0.1/sqrt(0.19); its N=2 compression
  // [[0.1, 0], [0.09, 0.01]] has norm about 0.135.
  PSolveOptions o;
  o.dimension = 2;
  EXPECT_THROW(p_solve(parse_symbol("0.1*z/(1-0.9*z)"), o), InconsistencyError);
}

TEST(PSolve, UniqueRootOnCorpus) {
  for (const char* text : {"(z+z^2)/2", "(z+z^3)/2", "0.6*z+0.3*z^2"}) {
    PSolveOptions o;
    o.dimension = 256;
    const PSolveResult r = p_solve(parse_symbol(text), o);
    EXPECT_EQ(r.sign_changes, 1) << text;
  }
}

TEST(Thm7, OrthogonalPowers) {
  const Thm7Report r = thm7_check(parse_symbol("(z^2+z^3)/2"), 32, 10);
  for (const cplx v : r.cond23_inners) EXPECT_EQ(v, cplx{});
  EXPECT_LE(r.cond21_residual, 1e-12);
  EXPECT_LE(r.cond22_eigen_residual, 1e-12);
  EXPECT_LE(r.cond20_gap, 1e-9);
}

TEST(Thm7, Monomial) {
  const Thm7Report r = thm7_check(parse_symbol("z^2"), 32, 10);
  EXPECT_LE(r.cond20_gap, 1e-12);
  EXPECT_LE(r.cond21_residual, 1e-12);
  EXPECT_LE(r.cond22_eigen_residual, 1e-12);
  for (const cplx v : r.cond23_inners) EXPECT_LE(std::abs(v), 1e-12);
}

TEST(Thm7, GenericSymbolFails) {
  const Thm7Report r = thm7_check(parse_symbol("(z+z^2)/2"), 64, 4);
  // phi^2 = (z^2 + 2z^3 + z^4)/4 overlaps phi only in degree 2: (1/2)(1/4).
  EXPECT_NEAR(std::abs(r.cond23_inners[0] - 0.125), 0.0, 1e-15);
  EXPECT_GT(r.cond20_gap, 1e-3);
  EXPECT_GT(r.cond21_residual, 1e-3);
  EXPECT_THROW(thm7_check(parse_symbol("z/2+1/4"), 16, 3), PreconditionError);
}

TEST(Thm7, RationalSymbol) {
  const Thm7Report r = thm7_check(parse_symbol("z*alpha(0.5)"), 64, 4);
  EXPECT_EQ(r.cond23_inners.size(), 3u);
  EXPECT_GT(r.phi_norm2, 0.99);
}

TEST(Rudin, Audit) {
  const Eigen::MatrixXcd m = rudin_audit(parse_symbol("z^2"), 6);
  EXPECT_EQ(max_offdiag(m), 0.0);
  const Eigen::MatrixXcd g = rudin_audit(parse_symbol("(z^2+z^3)/2"), 4);
  EXPECT_NEAR(std::abs(g(2, 3) - 0.03125), 0.0, 1e-15);
  for (int n = 2; n <= 4; ++n) EXPECT_EQ(g(1, n), cplx{});
  EXPECT_THROW(rudin_audit(Symbol::alpha(0.5), 3), PreconditionError);
  EXPECT_THROW(rudin_audit(parse_symbol("z^100"), 100), DegreeError);
}

TEST(Iterates, AffineContraction) {
  const IterateSweep sw = iterate_sweep(parse_symbol("z/2+1/4"), 8, 128);
  EXPECT_NEAR(std::abs(sw.fixed_point - 0.5), 0.0, 1e-12);
  for (std::size_t i = 1; i < sw.rows.size(); ++i)
    EXPECT_LT(sw.rows[i].distance_to_fixed, sw.rows[i - 1].distance_to_fixed);
  EXPECT_LT(sw.rows.back().distance_to_fixed, 0.05);
  ASSERT_TRUE(sw.first_strict_n);
}

TEST(Iterates, OriginFixingSymbol) {
  const IterateSweep sw = iterate_sweep(parse_symbol("(z+z^2)/2"), 4, 256);
  EXPECT_NEAR(std::abs(sw.fixed_point), 0.0, 1e-12);
  for (const IterateRow& r : sw.rows) EXPECT_LT(r.centered_distance, 1.0);
}

TEST(Iterates, RejectsInner) { EXPECT_THROW(iterate_sweep(parse_symbol("z^2"), 3, 16), PreconditionError); }

TEST(Eq6, BothSides) {
  const Eq6Result a = eq6_verify(Symbol::alpha(0.3), CoeffVec{1.0, 1.0});
  EXPECT_NEAR(a.lhs, 2.6, 1e-12);
  EXPECT_NEAR(a.rhs, 2.6, 1e-12);
  EXPECT_LE(a.residual, 1e-10);
  const Eq6Result one = eq6_verify(Symbol::alpha(0.3), CoeffVec{1.0});
  EXPECT_NEAR(one.lhs, 1.0, 1e-12);
  EXPECT_NEAR(one.rhs, 1.0, 1e-12);
  std::mt19937 g(4);
  const CoeffVec f = oracle::random_poly(g, 6, 2.0, false);
  const Eq6Result sq = eq6_verify(parse_symbol("z^2"), f);
  EXPECT_NEAR(sq.lhs, std::pow(oracle::l2(f), 2), 1e-12);
  EXPECT_LE(sq.residual, 1e-10);
  EXPECT_THROW(eq6_verify(parse_symbol("(z+z^2)/2"), f), PreconditionError);
}

namespace {

// phi supported in degrees [m, 2m-1] is orthogonal to all its higher powers,
// whose supports start at degree 2m.
CoeffVec gapped_poly(std::mt19937& g, std::size_t m) {
  CoeffVec c(2 * m);
  double total = 0.0;
  for (std::size_t k = m; k < 2 * m; ++k) {
    c[k] = oracle::random_complex(g, 1.0);
    total += std::abs(c[k]);
  }
  std::uniform_real_distribution<double> u(0.3, 1.0);
  const double budget = u(g);
  for (auto& v : c) v *= budget / total;
  return c;
}

}  // namespace

TEST(Properties, CompositionNormBoundForOrthogonalPowers) {
  std::mt19937 g(77);
  for (int trial = 0; trial < 200; ++trial) {
    const CoeffVec phi = gapped_poly(g, 1 + trial % 4);
    const Thm7Report rep = thm7_check(Symbol::polynomial(phi), 4 * phi.size(), 3);
    for (const cplx v : rep.cond23_inners) ASSERT_LE(std::abs(v), 1e-12);
    CoeffVec q = oracle::random_poly(g, 1 + trial % 5, 1.0, true);
    const double lhs = oracle::l2(oracle::compose_poly(q, phi));
    EXPECT_LE(lhs, oracle::l2(phi) * oracle::l2(q) + 1e-9);
  }
}

TEST(Properties, OrthogonalPowersAttainTwoNorm) {
  std::mt19937 g(78);
  for (int trial = 0; trial < 20; ++trial) {
    const CoeffVec phi = gapped_poly(g, 1 + trial % 3);
    const std::size_t deg = phi.size() - 1;
    const Thm7Report rep = thm7_check(Symbol::polynomial(phi), 8 * deg, 4);
    EXPECT_LE(rep.cond20_gap, 1e-6);
  }
}

TEST(Properties, NonorthogonalPowersExceedTwoNorm) {
  std::mt19937 g(79);
  int tested = 0;
  while (tested < 4) {
    const Symbol s(oracle::random_poly(g, 2, 0.9, true));
    const Thm7Report rep = thm7_check(s, 16, 4);
    double biggest = 0.0;
    for (const cplx v : rep.cond23_inners) biggest = std::max(biggest, std::abs(v));
    if (biggest < 0.01) continue;
    ++tested;
    EXPECT_GT(restricted_norm(s, 512) - h2_norm(s.num()), 1e-4) << s.to_string();
  }
}
