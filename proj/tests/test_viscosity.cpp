#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppde/comparison.hpp"

using namespace ppde;
using nlohmann::json;

namespace {

const TimeGrid kGrid(1.0, 4);
const SpatialGrid kBox(-2.0, 2.0, 5);

Mat m1(double v) { return Mat::Constant(1, 1, v); }

}  // namespace

TEST_CASE("g_heat generator frozen values") {
  const Generator g = builtin_generator("g_heat", {{"sigma_low", 0.5}, {"sigma_high", 1.0}});
  CHECK(g(0.0, Vec::Zero(1), m1(2.0)) == doctest::Approx(1.0));
  CHECK(g(0.0, Vec::Zero(1), m1(-2.0)) == doctest::Approx(-0.25));
  CHECK(g.sigma_eff == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)builtin_generator("g_heat", {{"sigma_low", 2.0}}), Error);
}

TEST_CASE("linear heat generator") {
  const Generator g = builtin_generator("linear_heat", {{"sigma", 2.0}});
  CHECK(g(0.0, Vec::Zero(1), m1(1.0)) == doctest::Approx(2.0));
  CHECK(g.assumptions.count(Assumption::H1) == 1);
  CHECK(g.assumptions.count(Assumption::H2) == 1);
}

TEST_CASE("declared monotonicity assumptions verify on samples") {
  CHECK(check_monotonicity(builtin_generator("linear_heat", {})).pass);
  CHECK(check_monotonicity(builtin_generator("g_heat", {})).pass);
  CHECK(check_monotonicity(builtin_generator("transport", {{"c", 1.0}, {"lambda", 0.5}}))
            .pass);
}

TEST_CASE("reaction term breaks the declared degenerate ellipticity") {
  const Generator g = builtin_generator("reaction_heat", {{"lambda", 0.5}});
  const MonotonicityReport rep = check_monotonicity(g);
  CHECK(!rep.pass);
  CHECK(rep.violations > 0);
  CHECK(!rep.witness.empty());
  CHECK(check_monotonicity(builtin_generator("reaction_heat", {{"lambda", 0.0}})).pass);
}

TEST_CASE("transport without decay still declares H3") {
  const Generator g = builtin_generator("transport", {{"c", 1.0}, {"lambda", -1.0}});
  CHECK(g.assumptions.count(Assumption::H3) == 0);
  CHECK(g.first_order);
}

TEST_CASE("heat solution is both a sub- and a supersolution") {
  const PathFunctional u = builtin("heat_solution", json::object(), kGrid, kBox);
  const Generator g = builtin_generator("linear_heat", {});
  const std::vector<PathStub> stubs = lattice_stubs(kGrid, kBox);
  const ViscosityReport sub = is_subsolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  const ViscosityReport sup = is_supersolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  CHECK(sub.pass);
  CHECK(sup.pass);
  CHECK(std::abs(sub.worst_margin) <= 1e-8);
  CHECK(std::abs(sup.worst_margin) <= 1e-8);
  CHECK(sub.checked > 0);
}

TEST_CASE("doubled time decay is a strict supersolution, not a subsolution") {
  // x^2 + 2(T - t): a + G/2 = -2 + 1 = -1 at every interior stub
  const PathFunctional u =
      builtin("quadratic_time", {{"a", 1.0}, {"b", 2.0}, {"c", 0.0}}, kGrid, kBox);
  const Generator g = builtin_generator("linear_heat", {});
  const std::vector<PathStub> stubs = lattice_stubs(kGrid, kBox);
  const ViscosityReport sup = is_supersolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  const ViscosityReport sub = is_subsolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  CHECK(sup.pass);
  CHECK(!sub.pass);
  CHECK(sub.worst_margin == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("g_heat solution via the classical lift") {
  // x^2 + sigma_high^2 (T - t) solves the G-heat equation for convex data
  const PathFunctional u =
      builtin("quadratic_time", {{"a", 1.0}, {"b", 1.0}, {"c", 0.0}}, kGrid, kBox);
  const Generator g = builtin_generator("g_heat", {{"sigma_low", 0.5}, {"sigma_high", 1.0}});
  const std::vector<PathStub> stubs = lattice_stubs(kGrid, kBox);
  const ViscosityReport sub = is_subsolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  const ViscosityReport sup = is_supersolution(u, g, stubs, kBox, JetSource::Exact, 1e-8);
  CHECK(sub.pass);
  CHECK(sup.pass);
}

TEST_CASE("numeric jets agree with exact ones at looser tolerance") {
  const PathFunctional u = builtin("heat_solution", json::object(), kGrid, kBox);
  const Generator g = builtin_generator("linear_heat", {});
  const std::vector<PathStub> stubs = lattice_stubs(kGrid, kBox);
  const double tol = default_viscosity_tol(JetSource::Numeric);
  CHECK(tol == doctest::Approx(1e-4));
  CHECK(is_subsolution(u, g, stubs, kBox, JetSource::Numeric, tol).pass);
  CHECK(is_supersolution(u, g, stubs, kBox, JetSource::Numeric, tol).pass);
}

TEST_CASE("explicit jets are filtered by membership") {
  // x^2 + 2(T - t): the exact jet (-2, 2x, 2) is a genuine superjet
  const PathFunctional u =
      builtin("quadratic_time", {{"a", 1.0}, {"b", 2.0}, {"c", 0.0}}, kGrid, kBox);
  const Generator g = builtin_generator("linear_heat", {});
  const std::vector<PathStub> stubs = {make_stub(kGrid, {0.0, 0.0})};
  Jet member;
  member.a = -2.0;
  member.p = Vec::Zero(1);
  member.X = m1(2.0);
  Jet outsider = member;
  outsider.X = m1(-2.0);  // under-curves: filtered out
  std::vector<std::pair<int, Jet>> jets = {{0, member}, {0, outsider}};
  const ViscosityReport rep =
      is_subsolution(u, g, stubs, kBox, JetSource::Explicit, 1e-8, &jets);
  CHECK(rep.checked == 1);
  CHECK(rep.skipped == 1);
  CHECK(!rep.pass);  // a + G = -2 + 1 < 0 exhibits the non-subsolution
}

TEST_CASE("exact source requires exact derivatives") {
  const PathFunctional u = builtin("running_max", json::object(), kGrid, kBox);
  const Generator g = builtin_generator("linear_heat", {});
  const std::vector<PathStub> stubs = {make_stub(kGrid, {0.0, 0.0})};
  CHECK_THROWS_AS((void)is_subsolution(u, g, stubs, kBox, JetSource::Exact, 1e-8), Error);
}

TEST_CASE("strictness perturbation") {
  const PathFunctional u = builtin("heat_solution", json::object(), kGrid, kBox);
  const PerturbedFunctional p = strictness_perturb(u, 0.02, kGrid.horizon);
  CHECK(p.c == doctest::Approx(0.02));
  const PathStub w = make_stub(kGrid, {0.0, 0.5});
  CHECK(p.u_tilde(w) == doctest::Approx(u(w) - 0.02 / 0.25));
  CHECK(p.u_tilde.exact_dt(w) == doctest::Approx(u.exact_dt(w) + 0.02 / 0.0625));
  CHECK_THROWS_AS((void)p.u_tilde(make_stub(kGrid, {0.0})), Error);
}
