#ifndef PPDE_SOLVER_HPP
#define PPDE_SOLVER_HPP

#include <map>

#include "ppde/viscosity.hpp"

namespace ppde {

struct SchemeParams {
  std::size_t cap = 1'000'000;
  bool check_cfl = true;
};

/// Backward-induction values on the stencil-reachable path tree. Keys are
/// integer tuples [k, grid index of v_0, .., grid index of v_k] flattened
/// axis-major; the map order is the serialization order.
struct LatticeSolution {
  TimeGrid tg;
  SpatialGrid q;
  std::map<std::vector<int>, double> values;
  double cfl_ratio = 0.0;  // dt * d * sigma_eff^2 / h^2

  std::vector<int> key_of(const PathStub& w) const;  // StubNotInLattice off-grid
  double value_at(const PathStub& w) const;
};

/// Explicit monotone scheme: interior stubs take
///   u(w) = u(w extended flat) + dt * G(w, u_next, D_x u_next, D_xx u_next)
/// with central vertical differences across the +-h bumped extensions;
/// boundary stubs take the data Phi. Explores the tree of +-h/0 increments
/// reachable from the root.
LatticeSolution solve_lattice(const Generator& g, const PathFunctional& phi,
                              const TimeGrid& tg, const SpatialGrid& q,
                              const PathStub& root, const SchemeParams& params = {});

enum class LiftKind { None, RunningIntegral, RunningMax };

/// Classical backward finite differences on (t, x, a) for d = 1 payoffs with
/// a one-dimensional sufficient statistic. The running integral advects
/// a' = a + x dt (linear interpolation in a); the running max updates
/// a' = max(a, x') exactly on grid nodes.
struct LiftedSolution {
  LiftKind kind = LiftKind::None;
  TimeGrid tg;
  SpatialGrid q;
  std::vector<double> a_nodes;  // single 0.0 for LiftKind::None
  std::vector<Mat> levels;      // per time level: points_per_axis x a-count
  double cfl_ratio = 0.0;

  double value_at(int k, double x, double a) const;
};

LiftedSolution solve_lifted(const Generator& g,
                            const std::function<double(double, double, double)>& phi_lift,
                            LiftKind kind, const TimeGrid& tg, const SpatialGrid& q,
                            const SchemeParams& params = {});

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int n = 0;
};

/// Linear Feynman-Kac oracle: mean of Phi over grid-projected Brownian
/// continuations of w, absorbed at the spatial boundary.
McEstimate mc_feynman_kac(const PathFunctional& phi, const PathStub& w,
                          const SpatialGrid& q, double sigma, int n_paths,
                          std::uint64_t seed);

/// Lookup-backed functional over a computed solution; strict lookups throw
/// StubNotInLattice for stubs outside the solved tree.
PathFunctional solution_as_functional(const LatticeSolution& sol);

}  // namespace ppde

#endif
