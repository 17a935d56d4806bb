#ifndef PPDE_PATH_CORE_HPP
#define PPDE_PATH_CORE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ppde/types.hpp"

namespace ppde {

/// Uniform grid of time nodes t_k = k*dt on [0, T].
struct TimeGrid {
  double horizon = 1.0;  // T
  int steps = 1;         // N

  TimeGrid() = default;
  TimeGrid(double T, int N);

  double dt() const { return horizon / steps; }
  double node(int k) const { return k * dt(); }

  bool operator==(const TimeGrid& o) const {
    return horizon == o.horizon && steps == o.steps;
  }
};

/// Axis-aligned open box Q discretized with M points per axis; the two
/// extreme points of each axis lie on the boundary.
struct SpatialGrid {
  Vec lower;
  Vec upper;
  int points_per_axis = 3;  // M

  SpatialGrid() = default;
  SpatialGrid(Vec lo, Vec hi, int M);
  /// 1-d convenience.
  SpatialGrid(double lo, double hi, int M);

  int dim() const { return static_cast<int>(lower.size()); }
  double spacing(int axis) const {
    return (upper[axis] - lower[axis]) / (points_per_axis - 1);
  }
  double coord(int axis, int idx) const { return lower[axis] + idx * spacing(axis); }
  Vec point(const std::vector<int>& idx) const;

  bool in_open(const Vec& x) const;
  bool in_closure(const Vec& x) const;
  bool on_boundary(const Vec& x) const { return in_closure(x) && !in_open(x); }

  /// Index of the grid point nearest to x along one axis (clamped).
  int nearest_index(int axis, double x) const;
};

/// A right-continuous piecewise-constant path observed up to t_k:
/// omega(s) = v_j for s in [t_j, t_{j+1}) and omega(t_k) = v_k.
/// Columns of `values` are v_0..v_k.
struct PathStub {
  TimeGrid grid;
  Mat values;  // d x (k+1)

  PathStub() = default;
  PathStub(TimeGrid g, Mat v);

  int k() const { return static_cast<int>(values.cols()) - 1; }
  int dim() const { return static_cast<int>(values.rows()); }
  double time() const { return grid.node(k()); }
  Vec terminal() const { return values.col(k()); }

  /// Restriction to [0, t_j], j <= k.
  PathStub truncated(int j) const;

  bool same_values(const PathStub& o) const {
    return grid == o.grid && values.rows() == o.values.rows() &&
           values.cols() == o.values.cols() && values == o.values;
  }
};

/// 1-d convenience constructor: stub from a list of scalar values.
PathStub make_stub(const TimeGrid& g, const std::vector<double>& vals);

enum class DomainClass { Interior, Boundary };

/// omega_t^x: shift only the terminal value by x. Throws OutOfDomain if the
/// shifted terminal leaves the closed box.
PathStub vertical_bump(const PathStub& w, const Vec& x, const SpatialGrid& q);

/// omega_{t,delta}: append `steps` copies of the terminal value.
PathStub flat_extend(const PathStub& w, int steps);

/// head (x) tail: head's values strictly before its terminal time, then the
/// tail from that index on (the value AT the junction comes from the tail).
PathStub concat(const PathStub& head, const PathStub& tail);

/// d(omega_t, upsilon_s) = |omega(t)-upsilon(s)|^2
///   + int_0^{t v s} |omega(r^t)-upsilon(r^s)|^2 dr  (left-Riemann).
double distance_parabolic(const PathStub& w, const PathStub& v);

/// |g(s)-h(sb)|^2 + |s-sb|^2 + int_0^{s^sb} (s^sb - r)|g(r)-h(r)|^2 dr.
double distance_first_order(const PathStub& g, const PathStub& h);

/// Boundary iff the terminal value is on the spatial boundary or k == N.
/// Throws NotInClosure if an earlier value is not strictly inside Q.
DomainClass classify(const PathStub& w, const SpatialGrid& q);

/// True iff all values before the terminal are in Q and the terminal in the
/// closure (membership in Lambda_{Qbar}).
bool in_lambda_qbar(const PathStub& w, const SpatialGrid& q);

struct EnumOptions {
  int k_max = 0;               // last admissible terminal index
  bool interior_only = false;  // restrict terminal values to Q and k_max < N
  std::size_t cap = 1'000'000;
};

/// Visits every lattice continuation of `w`: the stub itself first, then for
/// each terminal index j in [k, k_max] every choice of interior grid values
/// at indices k..j-1 and a grid value (interior if interior_only) at j, in
/// lexicographic order of grid indices. Boundary stubs have no continuations.
/// Throws SearchSpaceTooLarge past `cap` visits.
void for_each_continuation(const PathStub& w, const SpatialGrid& q,
                           const EnumOptions& opt,
                           const std::function<void(const PathStub&)>& visit);

std::vector<PathStub> enumerate_continuations(const PathStub& w, const SpatialGrid& q,
                                              const EnumOptions& opt);

/// Deterministic interior lattice stub from a 64-bit sample key: random
/// length in [1, N-1], values on interior grid points, for sweeps and tests.
PathStub random_interior_stub(const TimeGrid& g, const SpatialGrid& q, std::uint64_t key);

}  // namespace ppde

#endif
