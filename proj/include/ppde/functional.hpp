#ifndef PPDE_FUNCTIONAL_HPP
#define PPDE_FUNCTIONAL_HPP

#include <functional>
#include <string>

#include <json.hpp>

#include "ppde/path_core.hpp"

namespace ppde {

enum class Smoothness { C12, C10, USCstar, LSCstar, None };

/// A real functional of path stubs with optional exact Dupire derivatives.
struct PathFunctional {
  std::string name;
  Smoothness tag = Smoothness::None;
  std::function<double(const PathStub&)> eval;
  std::function<double(const PathStub&)> exact_dt;  // horizontal
  std::function<Vec(const PathStub&)> exact_dx;     // vertical gradient
  std::function<Mat(const PathStub&)> exact_dxx;    // vertical Hessian

  bool has_exact() const {
    return static_cast<bool>(exact_dt) && static_cast<bool>(exact_dx) &&
           static_cast<bool>(exact_dxx);
  }
  double operator()(const PathStub& w) const { return eval(w); }
};

struct DupireDerivatives {
  double dt_val = 0.0;
  Vec dx_val;
  Mat dxx_val;
  double time_step = 0.0;  // delta used for D_t
  double bump = 0.0;       // h used for D_x / D_xx
};

/// Forward difference along the flat extension: [u(omega_{t,delta}) - u] / delta.
double d_t(const PathFunctional& u, const PathStub& w, int steps = 1);

/// Central differences across terminal bumps, one per axis.
Vec d_x(const PathFunctional& u, const PathStub& w, const SpatialGrid& q, double h);

/// Second central differences (diagonal) and four-point stencils
/// (off-diagonal); output symmetrized.
Mat d_xx(const PathFunctional& u, const PathStub& w, const SpatialGrid& q, double h);

/// Exact derivatives when present, numeric otherwise.
DupireDerivatives dupire_derivatives(const PathFunctional& u, const PathStub& w,
                                     const SpatialGrid& q, double h, int steps = 1);

/// Default central-difference step: min grid spacing / 8.
double default_bump(const SpatialGrid& q);

/// u(omega_t) := ubar(t, omega(t)); exact Dupire derivatives wired to the
/// classical partials when supplied (then tagged C12, else C10/None).
PathFunctional classical_lift(
    const std::string& name, std::function<double(double, const Vec&)> f,
    std::function<double(double, const Vec&)> ft = nullptr,
    std::function<Vec(double, const Vec&)> fx = nullptr,
    std::function<Mat(double, const Vec&)> fxx = nullptr);

/// Builtin library; names: terminal, running_integral, running_max,
/// asian_martingale, heat_solution, quadratic_test, mc_conditional.
PathFunctional builtin(const std::string& name, const nlohmann::json& params,
                       const TimeGrid& tg, const SpatialGrid& sg);

/// One grid-projected sigma-Brownian continuation of `from`, absorbed at the
/// first boundary hit; deterministic in (seed, sim).
PathStub brownian_continuation(const PathStub& from, const SpatialGrid& q, double sigma,
                               std::uint64_t seed, std::uint64_t sim);

/// Sampled semicontinuity diagnostic (never authoritative).
struct SemicontinuityReport {
  // condition (ii): max over lattice prefixes of u(prefix) - sup_x u(bump)
  double left_limit_margin = 0.0;
  // condition (i): two-scale upward-jump proxy on a (delta, x) probe mesh
  double tx_margin = 0.0;
  bool violation(double tol = 1e-9) const {
    return left_limit_margin > tol || tx_margin > tol;
  }
};

SemicontinuityReport check_usc_star(const PathFunctional& u, const PathStub& w,
                                    const SpatialGrid& q, int probe_budget = 8);

}  // namespace ppde

#endif
