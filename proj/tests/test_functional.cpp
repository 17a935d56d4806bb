#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppde/functional.hpp"

using namespace ppde;
using nlohmann::json;

namespace {

const TimeGrid kGrid(1.0, 8);
const SpatialGrid kBox(-2.0, 2.0, 17);

PathFunctional get(const std::string& name, const json& params = json::object()) {
  return builtin(name, params, kGrid, kBox);
}

}  // namespace

TEST_CASE("terminal functional and its derivatives") {
  const PathFunctional u = get("terminal");
  const PathStub w = make_stub(kGrid, {0.0, 0.5});
  CHECK(u(w) == doctest::Approx(0.5));
  CHECK(u.exact_dt(w) == doctest::Approx(0.0));
  CHECK(u.exact_dx(w)[0] == doctest::Approx(1.0));
  CHECK(u.exact_dxx(w)(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("running integral is a left Riemann sum") {
  const PathFunctional u = get("running_integral");
  const PathStub w = make_stub(kGrid, {1.0, 2.0, 0.5});
  CHECK(u(w) == doctest::Approx((1.0 + 2.0) * 0.125));
  CHECK(u.exact_dt(w) == doctest::Approx(0.5));  // the terminal value accrues
  CHECK(u.exact_dx(w)[0] == doctest::Approx(0.0));
}

TEST_CASE("heat solution satisfies the heat identity exactly") {
  const PathFunctional u = get("heat_solution", {{"sigma", 1.0}});
  for (std::uint64_t key = 0; key < 50; ++key) {
    const PathStub w = random_interior_stub(kGrid, kBox, key);
    const double resid = u.exact_dt(w) + 0.5 * u.exact_dxx(w)(0, 0);
    CHECK(std::abs(resid) <= 1e-9);
  }
}

TEST_CASE("asian martingale has zero horizontal derivative") {
  const PathFunctional u = get("asian_martingale");
  for (std::uint64_t key = 0; key < 50; ++key) {
    const PathStub w = random_interior_stub(kGrid, kBox, key);
    CHECK(std::abs(u.exact_dt(w)) <= 1e-12);
    CHECK(std::abs(d_t(u, w)) <= 1e-9);
  }
}

TEST_CASE("numeric derivatives match exact ones") {
  const double h = default_bump(kBox);
  for (const std::string name :
       {"terminal", "running_integral", "asian_martingale", "heat_solution",
        "quadratic_test"}) {
    const PathFunctional u = get(name);
    for (std::uint64_t key = 0; key < 20; ++key) {
      const PathStub w = random_interior_stub(kGrid, kBox, key);
      CAPTURE(name);
      CHECK(std::abs(d_x(u, w, kBox, h)[0] - u.exact_dx(w)[0]) <= 1e-3);
      CHECK(std::abs(d_xx(u, w, kBox, h)(0, 0) - u.exact_dxx(w)(0, 0)) <= 1e-3);
    }
  }
}

TEST_CASE("lifted polynomials") {
  const PathFunctional q = get("quadratic_time", {{"a", 1.0}, {"b", 0.5}, {"c", 0.25}});
  const PathStub w = make_stub(kGrid, {0.0, 1.0});
  CHECK(q(w) == doctest::Approx(1.0 + 0.5 * (1.0 - 0.125) + 0.25));
  CHECK(q.exact_dt(w) == doctest::Approx(-0.5));
  CHECK(q.exact_dx(w)[0] == doctest::Approx(2.0));
  CHECK(q.exact_dxx(w)(0, 0) == doctest::Approx(2.0));

  const PathFunctional a = get("affine_lift", {{"px", 2.0}, {"pt", 1.5}, {"c", -1.0}});
  CHECK(a(w) == doctest::Approx(2.0 * 1.0 + 1.5 * 0.125 - 1.0));
  CHECK(a.exact_dt(w) == doctest::Approx(1.5));
  CHECK(a.exact_dx(w)[0] == doctest::Approx(2.0));
  CHECK(a.exact_dxx(w)(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("classical lift plumbing") {
  const PathFunctional u = classical_lift(
      "xt", [](double t, const Vec& x) { return x[0] * t; },
      [](double, const Vec& x) { return x[0]; },
      [](double t, const Vec& x) { return Vec::Constant(x.size(), t).eval(); },
      [](double, const Vec& x) {
        return Mat::Zero(x.size(), x.size()).eval();
      });
  CHECK(u.tag == Smoothness::C12);
  const PathStub w = make_stub(kGrid, {0.0, 1.5});
  CHECK(u(w) == doctest::Approx(1.5 * 0.125));
  CHECK(u.exact_dt(w) == doctest::Approx(1.5));
  CHECK(std::abs(d_t(u, w) - 1.5) <= 1e-12);  // affine in t: exact match
}

TEST_CASE("running max evaluates and has no exact derivatives") {
  const PathFunctional u = get("running_max");
  CHECK(!u.has_exact());
  CHECK(u.tag == Smoothness::USCstar);
  CHECK(u(make_stub(kGrid, {0.0, 1.5, -1.0})) == doctest::Approx(1.5));
}

TEST_CASE("brownian continuation is deterministic and absorbed") {
  const PathStub w = make_stub(kGrid, {0.0, 0.5});
  const PathStub a = brownian_continuation(w, kBox, 1.0, 7, 3);
  const PathStub b = brownian_continuation(w, kBox, 1.0, 7, 3);
  CHECK(a.same_values(b));
  CHECK(in_lambda_qbar(a, kBox));
  CHECK(classify(a, kBox) == DomainClass::Boundary);
  for (int j = 0; j <= w.k(); ++j) CHECK(a.values(0, j) == w.values(0, j));
}

TEST_CASE("mc conditional functional is deterministic") {
  const json params = {{"phi", {{"name", "terminal"}}}, {"seed", 11}, {"n_paths", 200},
                       {"sigma", 1.0}};
  const PathFunctional u = get("mc_conditional", params);
  const PathStub w = make_stub(kGrid, {0.0});
  CHECK(u(w) == doctest::Approx(u(w)));
  CHECK(std::abs(u(w)) < 0.5);  // martingale mean near zero
}

TEST_CASE("semicontinuity probe flags nothing on smooth functionals") {
  const PathFunctional u = get("heat_solution");
  const PathStub w = make_stub(kGrid, {0.0, 0.5});
  CHECK(!check_usc_star(u, w, kBox).violation(1e-6));
}

TEST_CASE("builtin rejects unknown names and bad params") {
  CHECK_THROWS_AS((void)get("no_such"), Error);
  CHECK_THROWS_AS((void)get("mc_conditional", {{"seed", 1}}), Error);
}
