#ifndef HARDYOP_TOOLS_CHECKS_HPP
#define HARDYOP_TOOLS_CHECKS_HPP

// The numbered verification checks shared by `hardyop verify` and the
// acceptance test binary. Each check records what it measured so a failure
// says by how much.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hardyop/hardyop.hpp"

namespace hardyop::checks {

struct Metric {
  std::string name;
  double value;
};

struct Check {
  int id = 0;
  std::string suite;
  std::string title;
  bool pass = true;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::vector<Metric> metrics;
  std::vector<std::string> failures;

  void metric(std::string name, double v) { metrics.push_back({std::move(name), v}); }

  /// Records a sub-check; returns its outcome.
  bool expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
    return ok;
  }
};

namespace detail {

inline std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace detail

inline void c1_constant_distance(Check& c) {
  const double want = std::sqrt(1.0 / 3.0);
  const double d = distance(Symbol::constant(0.0), Symbol::constant(0.5), 64);
  const double k = kernel_distance(0.0, 0.5);
  c.metric("compression", d);
  c.metric("kernel_distance", k);
  c.expect(std::abs(d - want) <= 1e-9, detail::fmt("compression %.17g vs sqrt(1/3)", d));
  c.expect(std::abs(k - want) <= 1e-12, detail::fmt("kernel distance %.17g vs sqrt(1/3)", k));
}

inline void c2_rotations(Check& c) {
  const Symbol iz = parse_symbol("i*z");
  for (const std::size_t n : {3, 4, 8, 32}) {
    const double d = distance(iz, Symbol::identity(), n);
    c.expect(d == 2.0, detail::fmt("distance(i z, z) at N=%.0f is %.17g, not 2", static_cast<double>(n), d));
  }
  const cplx w = std::polar(1.0, kTwoPi / 3.0);
  const RotationDistance r = rotation_distance(w, 1.0);
  const double brute = rotation_sup_numeric(w, 1.0, 1000000);
  c.metric("closed_form", r.value);
  c.metric("brute_force", brute);
  c.expect(r.tag == RotationCase::OddOrder && r.order == 3, "cube root of unity not recognized");
  c.expect(std::abs(r.value - std::sqrt(3.0)) <= 1e-12, detail::fmt("closed form %.17g vs sqrt(3)", r.value));
  c.expect(std::abs(brute - r.value) <= 1e-12, detail::fmt("brute force %.17g vs closed form", brute));
}

inline void c3_inner_vs_constant(Check& c) {
  const double want = 2.0 / std::sqrt(3.0);
  const std::vector<std::size_t> dims{16, 32, 64, 128};
  const ConvergenceReport r =
      norm_schedule({Task::Distance, parse_symbol("z^2"), Symbol::constant(0.5)}, dims);
  for (std::size_t i = 0; i < dims.size(); ++i) c.metric("N=" + std::to_string(dims[i]), r.values[i]);
  c.expect(r.target && std::abs(*r.target - want) <= 1e-15, "closed-form target not attached");
  c.expect(std::abs(r.values.back() - want) <= 1e-6, detail::fmt("N=128 value %.17g vs 2/sqrt(3)", r.values.back()));
  c.expect(r.monotone, "values not monotone in N");
  for (const double v : r.values) c.expect(v <= want + 1e-9, detail::fmt("value %.17g exceeds target", v));
}

inline void c4_alpha_minus_identity(Check& c) {
  const double bound = 2.30940108;
  const std::vector<std::size_t> dims{128, 256, 512, 1024, 2048};
  const ConvergenceReport r = norm_schedule({Task::Distance, Symbol::alpha(0.5), Symbol::identity()}, dims);
  for (std::size_t i = 0; i < dims.size(); ++i) c.metric("N=" + std::to_string(dims[i]), r.values[i]);
  c.expect(r.monotone, "compression norms not monotone");
  for (const double v : r.values) c.expect(v <= bound, detail::fmt("value %.17g above 2.30940108", v));
  std::vector<double> gaps;
  for (const double v : r.values) gaps.push_back(4.0 / std::sqrt(3.0) - v);
  c.metric("gap_2048", gaps.back());
  c.expect(gaps.back() <= 0.05, detail::fmt("gap at N=2048 is %.3g", gaps.back()));
  c.expect(detail::strictly_decreasing(gaps), "gaps not strictly decreasing");
}

inline void c5_constant_range(Check& c) {
  const EllipseDisk e = cp_ellipse(0.5);
  const NRBoundary nr = boundary(comp_matrix(Symbol::constant(0.5), 64), 720);
  const EllipseComparison cmp = ellipse_compare(nr, e);
  c.metric("hausdorff", cmp.hausdorff);
  c.metric("max_violation", cmp.max_violation);
  c.metric("polyline_hausdorff", cmp.polyline_hausdorff);
  c.expect(std::abs(e.major_len - 1.1547005) <= 1e-7 && std::abs(e.minor_len - 0.5773503) <= 1e-7,
           "ellipse axes wrong");
  c.expect(nr.all_converged(), "eigensolver flagged an angle");
  c.expect(cmp.hausdorff <= 1e-6, detail::fmt("hausdorff %.3g", cmp.hausdorff));
  c.expect(cmp.max_violation <= 1e-8, detail::fmt("containment violation %.3g", cmp.max_violation));
}

inline void c6_alpha_range(Check& c) {
  const EllipseDisk e = alpha_ellipse(0.5);
  c.expect(std::abs(e.major_len - 2.3094011) <= 1e-7 && std::abs(e.minor_len - 1.1547005) <= 1e-7,
           "ellipse axes wrong");
  std::vector<double> haus;
  for (const std::size_t n : {64, 128, 256}) {
    const NRBoundary nr = boundary(comp_matrix(Symbol::alpha(0.5), n), 720);
    const EllipseComparison cmp = ellipse_compare(nr, e);
    haus.push_back(cmp.hausdorff);
    c.metric("hausdorff_N=" + std::to_string(n), cmp.hausdorff);
    c.expect(nr.all_converged(), "eigensolver flagged an angle");
    if (n == 256) {
      const double margin = min_interior_margin(nr.boundary_pts, e);
      c.metric("max_violation", cmp.max_violation);
      c.metric("min_interior_margin", margin);
      c.expect(cmp.max_violation <= 1e-8, detail::fmt("containment violation %.3g", cmp.max_violation));
      c.expect(cmp.hausdorff <= 0.05, detail::fmt("hausdorff %.3g", cmp.hausdorff));
      c.expect(margin > 0.0, detail::fmt("boundary point not strictly interior (margin %.3g)", margin));
    }
  }
  c.expect(detail::strictly_decreasing(haus), "hausdorff gap not decreasing from N=64 to N=256");
}

inline void c7_restricted_inner(Check& c) {
  for (const char* text : {"z^2", "z^3", "z*alpha(0.5)"}) {
    const double v = restricted_norm(parse_symbol(text), 128);
    c.metric(std::string("restricted ") + text, v);
    c.expect(std::abs(v - 1.0) <= 1e-8, std::string(text) + detail::fmt(": restricted norm %.17g", v));
  }
  const Symbol s = parse_symbol("(z+z^2)/2");
  const double v512 = restricted_norm(s, 512), v256 = restricted_norm(s, 256);
  c.metric("value_512", v512);
  c.metric("plateau_delta", v512 - v256);
  c.metric("margin", 1.0 - v512);
  c.expect(v512 < 1.0, "restricted norm not below 1");
  c.expect(v512 - v256 <= 1e-6, detail::fmt("no plateau: value(512) - value(256) = %.3g", v512 - v256));
  c.expect(1.0 - v512 > 1e-3, detail::fmt("margin %.3g", 1.0 - v512));
}

inline void c8_orthogonal_powers(Check& c) {
  const Symbol s = parse_symbol("(z^2+z^3)/2");
  const double v = restricted_norm(s, 16);
  c.metric("restricted_16", v);
  c.expect(std::abs(v - std::sqrt(0.5)) <= 1e-9, detail::fmt("restricted norm %.17g", v));
  const Thm7Report rep = thm7_check(s, 32, 10);
  c.metric("cond21_residual", rep.cond21_residual);
  c.expect(rep.cond21_residual <= 1e-12, detail::fmt("cond21 residual %.3g", rep.cond21_residual));
  for (std::size_t i = 0; i < rep.cond23_inners.size(); ++i)
    c.expect(rep.cond23_inners[i] == cplx{}, "<phi, phi^" + std::to_string(i + 2) + "> not exactly 0");
  const Eigen::MatrixXcd g = rudin_audit(s, 3);
  c.metric("gram_2_3", std::abs(g(2, 3)));
  c.expect(std::abs(g(2, 3) - 0.03125) <= 1e-12, detail::fmt("<phi^2, phi^3> = %.17g", g(2, 3).real()));
}

inline void c9_p_solve(Check& c) {
  const PSolveResult a = p_solve(parse_symbol("(z^2+z^3)/2"));
  c.expect(a.outcome == PSolveOutcome::Finite && a.p_value && std::abs(*a.p_value - 2.0) <= 1e-6,
           "p((z^2+z^3)/2) is not 2");
  if (a.p_value) c.metric("p_orthogonal", *a.p_value);

  const Symbol m = parse_symbol("0.7*z^3");
  const PSolveResult b = p_solve(m);
  const double n2 = p_norm(m, 2.0).value, ninf = sup_norm(m).value;
  c.metric("norm2_0.7z3", n2);
  c.metric("norminf_0.7z3", ninf);
  c.expect(b.outcome == PSolveOutcome::InnerMultiple, "0.7 z^3 not classified as inner multiple");
  c.expect(std::abs(n2 - 0.7) <= 1e-12 && std::abs(ninf - 0.7) <= 1e-12, "norms of 0.7 z^3 not 0.7");

  const PSolveResult d = p_solve(parse_symbol("(z+z^2)/2"));
  if (d.p_value) c.metric("p_generic", *d.p_value);
  c.metric("residual_generic", d.residual);
  c.metric("sign_changes", d.sign_changes);
  c.expect(d.outcome == PSolveOutcome::Finite && d.p_value && *d.p_value > 2.0, "no finite p > 2");
  c.expect(d.sign_changes == 1, "sign changes on p grid: " + std::to_string(d.sign_changes));
  c.expect(d.residual <= 1e-8, detail::fmt("residual %.3g", d.residual));
}

inline void c10_boundary_identity(Check& c) {
  const Eq6Result r = eq6_verify(Symbol::alpha(0.3), CoeffVec{1.0, 1.0});
  c.metric("lhs", r.lhs);
  c.metric("rhs", r.rhs);
  c.metric("residual", r.residual);
  c.expect(r.residual <= 1e-10, detail::fmt("residual %.3g", r.residual));
  c.expect(std::abs(r.lhs - 2.6) <= 1e-10 && std::abs(r.rhs - 2.6) <= 1e-10, "sides differ from 2.6");
}

inline void c11_quadrature(Check& c) {
  const Symbol s = parse_symbol("(z^2+z^3)/2");
  const double v4 = p_norm(s, 4.0).value;
  c.metric("norm4", v4);
  c.expect(std::abs(v4 - std::pow(3.0 / 8.0, 0.25)) <= 1e-8, detail::fmt("||phi||_4 = %.17g", v4));
  double prev = 0.0;
  for (const double p : {2.0, 3.0, 4.0, 8.0, 16.0}) {
    const double v = p_norm(s, p).value;
    c.expect(v >= prev - 1e-9, detail::fmt("||phi||_p decreases at p=%.0f", p));
    prev = v;
  }
}

inline void c12_iterates(Check& c) {
  const IterateSweep sw = iterate_sweep(parse_symbol("z/2+1/4"), 8, 128);
  c.expect(std::abs(sw.fixed_point - cplx{0.5}) <= 1e-12, "fixed point is not 0.5");
  std::vector<double> d;
  for (const IterateRow& r : sw.rows) d.push_back(r.distance_to_fixed);
  c.metric("distance_n8", d.back());
  c.expect(detail::strictly_decreasing(d), "distances to C_0.5 not strictly decreasing");
  c.expect(d.back() < 0.05, detail::fmt("distance at n=8 is %.3g", d.back()));
  c.expect(sw.first_strict_n.has_value(), "strict gap never exceeds 1e-6");
  if (sw.first_strict_n) {
    c.metric("first_strict_n", *sw.first_strict_n);
    for (const IterateRow& r : sw.rows)
      if (r.n >= *sw.first_strict_n) c.expect(r.strict_gap > 0.0, "strict gap not positive at n=" + std::to_string(r.n));
  }
}

struct Spec {
  int id;
  const char* suite;
  const char* title;
  double time_limit;
  void (*run)(Check&);
};

inline const std::vector<Spec>& registry() {
  static const std::vector<Spec> specs{
      {1, "formulas", "constant-symbol distance", 1.0, c1_constant_distance},
      {2, "formulas", "rotation distances", 1.0, c2_rotations},
      {3, "formulas", "inner vs constant distance", 2.0, c3_inner_vs_constant},
      {4, "formulas", "alpha_0.5 minus identity", 60.0, c4_alpha_minus_identity},
      {5, "nrange", "numerical range of C_0.5", 5.0, c5_constant_range},
      {6, "nrange", "numerical range of C_alpha", 30.0, c6_alpha_range},
      {7, "thm7", "restricted norms of inner and non-inner symbols", 10.0, c7_restricted_inner},
      {8, "thm7", "orthogonal-powers symbol", 1.0, c8_orthogonal_powers},
      {9, "thm7", "Hardy exponent solver", 10.0, c9_p_solve},
      {10, "formulas", "boundary identity for inner symbols", 1.0, c10_boundary_identity},
      {11, "formulas", "boundary quadrature", 1.0, c11_quadrature},
      {12, "iterates", "iterates toward an interior fixed point", 10.0, c12_iterates},
  };
  return specs;
}

inline bool suite_known(const std::string& suite) {
  return suite == "all" || suite == "formulas" || suite == "nrange" || suite == "thm7" || suite == "iterates";
}

/// Runs one check; library exceptions become failures, with the message kept.
inline Check run(const Spec& s) {
  Check c;
  c.id = s.id;
  c.suite = s.suite;
  c.title = s.title;
  c.time_limit = s.time_limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    s.run(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(c.seconds <= c.time_limit, detail::fmt("took %.2f s, limit %.0f s", c.seconds, c.time_limit));
  return c;
}

inline std::vector<Check> run_suite(const std::string& suite) {
  std::vector<Check> out;
  for (const Spec& s : registry())
    if (suite == "all" || suite == s.suite) out.push_back(run(s));
  return out;
}

}  // namespace hardyop::checks

#endif  // HARDYOP_TOOLS_CHECKS_HPP
