#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppde/frozen_max.hpp"
#include "ppde/rng.hpp"

using namespace ppde;
using nlohmann::json;

namespace {

const TimeGrid kGrid(1.0, 4);
const SpatialGrid kBox(-2.0, 2.0, 5);

PathFunctional get(const std::string& name, const json& params = json::object()) {
  return builtin(name, params, kGrid, kBox);
}

// deterministic wiggly functional for equivalence sweeps
PathFunctional wiggly(std::uint64_t key) {
  PathFunctional u;
  u.name = "wiggly";
  u.eval = [key](const PathStub& w) {
    double s = 0.0;
    for (int j = 0; j <= w.k(); ++j)
      s += std::sin(0.7 * (key + 1) * w.values(0, j) + 0.3 * j) +
           0.05 * (key % 3) * w.values(0, j) * w.values(0, j);
    return s + 0.2 * w.time();
  };
  return u;
}

}  // namespace

TEST_CASE("frozen maximization equals brute force on the terminal functional") {
  const PathFunctional u = get("terminal");
  const PathStub w0 = make_stub(kGrid, {0.0});
  EnumOptions opt;
  opt.k_max = 3;
  const MaximizationResult bf = brute_force_sup(u, w0, kBox, opt);
  const MaximizationResult fr = left_frozen_maximize(u, w0, kBox, opt);
  CHECK(fr.value == bf.value);
  CHECK(fr.value == doctest::Approx(2.0));
  CHECK(fr.certificate.back().m == fr.certificate.back().mbar);
  CHECK(verify_rmax(u, fr, kBox, opt).ok);
}

TEST_CASE("frozen past is never modified") {
  const PathFunctional u = get("terminal");
  const PathStub w0 = make_stub(kGrid, {0.0, -1.0});
  EnumOptions opt;
  opt.k_max = 3;
  const MaximizationResult fr = left_frozen_maximize(u, w0, kBox, opt);
  REQUIRE(fr.maximizer.k() >= w0.k());
  for (int j = 0; j < w0.k(); ++j)
    CHECK(fr.maximizer.values(0, j) == w0.values(0, j));
}

TEST_CASE("oracle equivalence on random instances with certificates") {
  for (std::uint64_t key = 0; key < 50; ++key) {
    const PathFunctional u = wiggly(key);
    const PathStub w0 = random_interior_stub(kGrid, kBox, key);
    EnumOptions opt;
    opt.k_max = std::min(kGrid.steps, w0.k() + 2);
    const MaximizationResult bf = brute_force_sup(u, w0, kBox, opt);
    const MaximizationResult fr = left_frozen_maximize(u, w0, kBox, opt);
    CAPTURE(key);
    CHECK(fr.value == bf.value);
    REQUIRE(!fr.certificate.empty());
    for (std::size_t i = 0; i + 1 < fr.certificate.size(); ++i) {
      const CertEntry& cur = fr.certificate[i];
      const CertEntry& nxt = fr.certificate[i + 1];
      CHECK(nxt.m >= (cur.m + cur.mbar) / 2.0 - 1e-12);  // gap halving
      CHECK(nxt.mbar <= cur.mbar + 1e-12);
    }
    CHECK(fr.certificate.back().m == fr.certificate.back().mbar);
    CHECK(verify_rmax(u, fr, kBox, opt).ok);
  }
}

TEST_CASE("first-order conditions hold at interior maximizers") {
  // concave in the terminal value and decreasing along flat extensions
  const PathFunctional u = builtin(
      "quadratic_time", {{"a", -1.0}, {"b", 0.5}, {"c", 0.0}}, kGrid, kBox);
  const PathStub w0 = make_stub(kGrid, {0.0, 0.0});
  EnumOptions opt;
  opt.k_max = 3;
  opt.interior_only = true;
  const MaximizationResult fr = left_frozen_maximize(u, w0, kBox, opt);
  CHECK(classify(fr.maximizer, kBox) == DomainClass::Interior);
  const FirstOrderConditions foc = first_order_conditions(u, fr.maximizer, kBox);
  CHECK(foc.dt_val <= 1e-6);
  CHECK(foc.dx_norm <= 1e-6);
  CHECK(foc.dxx_eig_max <= 1e-6);
  CHECK(foc.all());
}

TEST_CASE("first-order conditions demand smoothness or exact derivatives") {
  const PathFunctional u = get("running_max");
  const PathStub w = make_stub(kGrid, {0.0, 0.0});
  CHECK_THROWS_AS((void)first_order_conditions(u, w, kBox), Error);
}

TEST_CASE("pair maximization agrees with its brute-force oracle") {
  const PairFunctional f = [](const PathStub& a, const PathStub& b) {
    return a.terminal()[0] - b.terminal()[0] -
           0.5 * distance_parabolic(a, b);
  };
  const PathStub w0 = make_stub(kGrid, {0.0});
  PairEnumOptions opt;
  opt.k_max1 = opt.k_max2 = 2;
  opt.synchronous = true;
  opt.interior_only = true;
  const MaximizationResult bf = brute_force_sup_pair(f, w0, w0, kBox, opt);
  const MaximizationResult fr = left_frozen_maximize_pair(f, w0, w0, kBox, opt);
  CHECK(fr.is_pair);
  CHECK(fr.value == bf.value);
  CHECK(verify_rmax_pair(f, fr, kBox, opt).ok);
}

TEST_CASE("pair constraints restrict the feasible set") {
  int count_sync = 0, count_all = 0;
  const PairFunctional f = [&](const PathStub&, const PathStub&) { return 0.0; };
  const PathStub w0 = make_stub(kGrid, {0.0});
  PairEnumOptions opt;
  opt.k_max1 = opt.k_max2 = 1;
  {
    PairEnumOptions s = opt;
    s.synchronous = true;
    const PairFunctional g = [&](const PathStub& a, const PathStub& b) {
      CHECK(a.k() == b.k());
      ++count_sync;
      return 0.0;
    };
    (void)brute_force_sup_pair(g, w0, w0, kBox, s);
  }
  {
    const PairFunctional g = [&](const PathStub&, const PathStub&) {
      ++count_all;
      return 0.0;
    };
    (void)brute_force_sup_pair(g, w0, w0, kBox, opt);
  }
  CHECK(count_sync > 0);
  CHECK(count_all > count_sync);
  (void)f;
}

TEST_CASE("infeasible pair constraints are a precondition failure") {
  const PairFunctional f = [](const PathStub&, const PathStub&) { return 0.0; };
  const PathStub a = make_stub(kGrid, {0.0});
  const PathStub b = make_stub(kGrid, {0.0, 1.9});
  PairEnumOptions opt;
  opt.k_max1 = 0;
  opt.k_max2 = 1;
  opt.synchronous = true;  // k1 = 0 can never equal k2 >= 1
  CHECK_THROWS_AS((void)brute_force_sup_pair(f, a, b, kBox, opt), Error);
}
