#include "ppde/solver.hpp"

#include <algorithm>
#include <cmath>

namespace ppde {

namespace {

int grid_index_checked(const SpatialGrid& q, int axis, double x) {
  const int i = q.nearest_index(axis, x);
  if (std::abs(q.coord(axis, i) - x) > 1e-9)
    throw Error(Err::StubNotInLattice, "value off the spatial grid");
  return i;
}

double check_cfl(const Generator& g, const TimeGrid& tg, const SpatialGrid& q,
                 const SchemeParams& params) {
  double hmin = q.spacing(0);
  for (int i = 1; i < q.dim(); ++i) hmin = std::min(hmin, q.spacing(i));
  const double ratio =
      tg.dt() * q.dim() * g.sigma_eff * g.sigma_eff / (hmin * hmin);
  if (params.check_cfl && ratio > 1.0 + 1e-9)
    throw Error(Err::CflViolation,
                "dt exceeds h^2 / (d sigma^2), ratio " + std::to_string(ratio));
  return ratio;
}

// one explicit step from next-level values: flat, +h and -h per axis
double stencil_update(const Generator& g, const PathStub& w, double u_flat,
                      const std::vector<double>& u_plus, const std::vector<double>& u_minus,
                      double dt, const SpatialGrid& q) {
  const int d = q.dim();
  Vec dx(d);
  Mat dxx = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double h = q.spacing(i);
    dx[i] = (u_plus[i] - u_minus[i]) / (2.0 * h);
    dxx(i, i) = (u_plus[i] + u_minus[i] - 2.0 * u_flat) / (h * h);
  }
  return u_flat + dt * g.at(w, u_flat, dx, dxx);
}

}  // namespace

std::vector<int> LatticeSolution::key_of(const PathStub& w) const {
  if (!(w.grid == tg)) throw Error(Err::GridMismatch, "stub on a different time grid");
  std::vector<int> key;
  key.reserve(static_cast<std::size_t>(w.dim()) * (w.k() + 1) + 1);
  key.push_back(w.k());
  for (int j = 0; j <= w.k(); ++j)
    for (int i = 0; i < w.dim(); ++i)
      key.push_back(grid_index_checked(q, i, w.values(i, j)));
  return key;
}

double LatticeSolution::value_at(const PathStub& w) const {
  const auto it = values.find(key_of(w));
  if (it == values.end())
    throw Error(Err::StubNotInLattice, "stub outside the solved tree");
  return it->second;
}

namespace {

struct TreeSolver {
  const Generator& g;
  const PathFunctional& phi;
  const SpatialGrid& q;
  const SchemeParams& params;
  LatticeSolution& sol;

  double solve(const PathStub& w) {
    const std::vector<int> key = sol.key_of(w);
    const auto it = sol.values.find(key);
    if (it != sol.values.end()) return it->second;
    if (sol.values.size() >= params.cap)
      throw Error(Err::SearchSpaceTooLarge, "lattice node cap exceeded");

    double val;
    if (classify(w, q) == DomainClass::Boundary) {
      val = phi(w);
    } else {
      const double dt = w.grid.dt();
      const double u_flat = solve(flat_extend(w, 1));
      std::vector<double> u_plus(q.dim()), u_minus(q.dim());
      for (int i = 0; i < q.dim(); ++i) {
        Vec e = Vec::Zero(q.dim());
        e[i] = q.spacing(i);
        u_plus[i] = solve(flat_extend(vertical_bump(w, e, q), 1));
        u_minus[i] = solve(flat_extend(vertical_bump(w, -e, q), 1));
      }
      val = stencil_update(g, w, u_flat, u_plus, u_minus, dt, q);
    }
    sol.values.emplace(key, val);
    return val;
  }
};

}  // namespace

LatticeSolution solve_lattice(const Generator& g, const PathFunctional& phi,
                              const TimeGrid& tg, const SpatialGrid& q,
                              const PathStub& root, const SchemeParams& params) {
  if (g.first_order)
    throw Error(Err::BadParams, "lattice solver handles second-order generators");
  LatticeSolution sol;
  sol.tg = tg;
  sol.q = q;
  sol.cfl_ratio = check_cfl(g, tg, q, params);
  if (!in_lambda_qbar(root, q))
    throw Error(Err::NotInClosure, "root stub leaves the closed box");
  sol.key_of(root);  // validates grid alignment
  TreeSolver ts{g, phi, q, params, sol};
  ts.solve(root);
  return sol;
}

double LiftedSolution::value_at(int k, double x, double a) const {
  if (k < 0 || k > tg.steps) throw Error(Err::IndexMismatch, "level out of range");
  const int ix = q.nearest_index(0, x);
  if (std::abs(q.coord(0, ix) - x) > 1e-9)
    throw Error(Err::StubNotInLattice, "x off the spatial grid");
  const Mat& lvl = levels[static_cast<std::size_t>(k)];
  if (a_nodes.size() == 1) return lvl(ix, 0);
  const double a0 = a_nodes.front(), a1 = a_nodes.back();
  const double da = a_nodes[1] - a_nodes[0];
  const double ac = std::clamp(a, a0, a1);
  int ja = std::clamp(static_cast<int>(std::floor((ac - a0) / da)), 0,
                      static_cast<int>(a_nodes.size()) - 2);
  const double lo = a_nodes[static_cast<std::size_t>(ja)];
  if (std::abs(ac - lo) <= 1e-9) return lvl(ix, ja);
  if (std::abs(ac - a_nodes[static_cast<std::size_t>(ja) + 1]) <= 1e-9)
    return lvl(ix, ja + 1);
  const double wgt = (ac - lo) / da;
  return (1.0 - wgt) * lvl(ix, ja) + wgt * lvl(ix, ja + 1);
}

LiftedSolution solve_lifted(const Generator& g,
                            const std::function<double(double, double, double)>& phi_lift,
                            LiftKind kind, const TimeGrid& tg, const SpatialGrid& q,
                            const SchemeParams& params) {
  if (q.dim() != 1) throw Error(Err::BadParams, "lifted solver is one-dimensional");
  if (g.first_order)
    throw Error(Err::BadParams, "lifted solver handles second-order generators");

  LiftedSolution sol;
  sol.kind = kind;
  sol.tg = tg;
  sol.q = q;
  sol.cfl_ratio = check_cfl(g, tg, q, params);

  const int M = q.points_per_axis;
  const double h = q.spacing(0);
  const double dt = tg.dt();

  if (kind == LiftKind::None) {
    sol.a_nodes = {0.0};
  } else if (kind == LiftKind::RunningIntegral) {
    // spacing h*dt makes grid-path transitions land on nodes for aligned Q
    const double a0 = std::min(0.0, q.lower[0] * tg.horizon);
    const double a1 = std::max(0.0, q.upper[0] * tg.horizon);
    const int n = static_cast<int>(std::lround((a1 - a0) / (h * dt))) + 1;
    if (static_cast<std::size_t>(n) * M > params.cap)
      throw Error(Err::SearchSpaceTooLarge, "lifted grid cap exceeded");
    sol.a_nodes.resize(n);
    for (int j = 0; j < n; ++j) sol.a_nodes[j] = a0 + j * h * dt;
  } else {  // RunningMax: the statistic lives on the spatial grid itself
    sol.a_nodes.resize(M);
    for (int j = 0; j < M; ++j) sol.a_nodes[j] = q.coord(0, j);
  }
  const int nA = static_cast<int>(sol.a_nodes.size());

  sol.levels.assign(static_cast<std::size_t>(tg.steps) + 1, Mat(M, nA));
  auto fill_data = [&](int k) {
    const double t = tg.node(k);
    Mat& lvl = sol.levels[static_cast<std::size_t>(k)];
    for (int ix = 0; ix < M; ++ix)
      for (int ja = 0; ja < nA; ++ja)
        lvl(ix, ja) = phi_lift(t, q.coord(0, ix), sol.a_nodes[ja]);
  };
  fill_data(tg.steps);

  for (int k = tg.steps - 1; k >= 0; --k) {
    const double t = tg.node(k);
    Mat& lvl = sol.levels[static_cast<std::size_t>(k)];
    const int kn = k + 1;
    for (int ja = 0; ja < nA; ++ja) {
      const double a = sol.a_nodes[static_cast<std::size_t>(ja)];
      // spatial boundary rows carry the data at the current time
      lvl(0, ja) = phi_lift(t, q.coord(0, 0), a);
      lvl(M - 1, ja) = phi_lift(t, q.coord(0, M - 1), a);
      for (int ix = 1; ix < M - 1; ++ix) {
        const double x = q.coord(0, ix);
        double u_flat, up, um;
        if (kind == LiftKind::None) {
          u_flat = sol.levels[kn](ix, 0);
          up = sol.levels[kn](ix + 1, 0);
          um = sol.levels[kn](ix - 1, 0);
        } else if (kind == LiftKind::RunningIntegral) {
          const double an = a + x * dt;  // left-Riemann: current value accrues
          u_flat = sol.value_at(kn, x, an);
          up = sol.value_at(kn, x + h, an);
          um = sol.value_at(kn, x - h, an);
        } else {
          u_flat = sol.levels[kn](ix, std::max(ja, ix));
          up = sol.levels[kn](ix + 1, std::max(ja, ix + 1));
          um = sol.levels[kn](ix - 1, std::max(ja, ix - 1));
        }
        Vec dx(1);
        dx[0] = (up - um) / (2.0 * h);
        Mat dxx(1, 1);
        dxx(0, 0) = (up + um - 2.0 * u_flat) / (h * h);
        lvl(ix, ja) = u_flat + dt * g.eval2(nullptr, u_flat, dx, dxx);
      }
    }
  }
  return sol;
}

McEstimate mc_feynman_kac(const PathFunctional& phi, const PathStub& w,
                          const SpatialGrid& q, double sigma, int n_paths,
                          std::uint64_t seed) {
  if (n_paths < 100) throw Error(Err::BadParams, "mc_feynman_kac needs n_paths >= 100");
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n_paths; ++i) {
    const double v =
        phi(brownian_continuation(w, q, sigma, seed, static_cast<std::uint64_t>(i)));
    sum += v;
    sumsq += v * v;
  }
  McEstimate est;
  est.n = n_paths;
  est.mean = sum / n_paths;
  const double var = std::max(0.0, sumsq / n_paths - est.mean * est.mean);
  est.stderr_ = std::sqrt(var / n_paths);
  return est;
}

PathFunctional solution_as_functional(const LatticeSolution& sol) {
  PathFunctional u;
  u.name = "lattice_solution";
  u.eval = [sol](const PathStub& w) { return sol.value_at(w); };
  return u;
}

}  // namespace ppde
