#include "ppde/functional.hpp"

#include <algorithm>
#include <cmath>

#include "ppde/rng.hpp"

namespace ppde {

double d_t(const PathFunctional& u, const PathStub& w, int steps) {
  if (steps < 1) throw Error(Err::BadParams, "d_t needs steps >= 1");
  const double delta = steps * w.grid.dt();
  return (u(flat_extend(w, steps)) - u(w)) / delta;
}

Vec d_x(const PathFunctional& u, const PathStub& w, const SpatialGrid& q, double h) {
  Vec g(w.dim());
  for (int i = 0; i < w.dim(); ++i) {
    Vec e = Vec::Zero(w.dim());
    e[i] = h;
    g[i] = (u(vertical_bump(w, e, q)) - u(vertical_bump(w, -e, q))) / (2.0 * h);
  }
  return g;
}

Mat d_xx(const PathFunctional& u, const PathStub& w, const SpatialGrid& q, double h) {
  const int d = w.dim();
  const double u0 = u(w);
  Mat a(d, d);
  for (int i = 0; i < d; ++i) {
    Vec ei = Vec::Zero(d);
    ei[i] = h;
    a(i, i) = (u(vertical_bump(w, ei, q)) + u(vertical_bump(w, -ei, q)) - 2.0 * u0) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      Vec ej = Vec::Zero(d);
      ej[j] = h;
      const double v = (u(vertical_bump(w, (ei + ej).eval(), q)) -
                        u(vertical_bump(w, (ei - ej).eval(), q)) -
                        u(vertical_bump(w, (ej - ei).eval(), q)) +
                        u(vertical_bump(w, (-ei - ej).eval(), q))) /
                       (4.0 * h * h);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return 0.5 * (a + a.transpose());
}

double default_bump(const SpatialGrid& q) {
  double s = q.spacing(0);
  for (int i = 1; i < q.dim(); ++i) s = std::min(s, q.spacing(i));
  return s / 8.0;
}

DupireDerivatives dupire_derivatives(const PathFunctional& u, const PathStub& w,
                                     const SpatialGrid& q, double h, int steps) {
  DupireDerivatives d;
  d.time_step = steps * w.grid.dt();
  d.bump = h;
  if (u.has_exact()) {
    d.dt_val = u.exact_dt(w);
    d.dx_val = u.exact_dx(w);
    d.dxx_val = u.exact_dxx(w);
  } else {
    d.dt_val = d_t(u, w, steps);
    d.dx_val = d_x(u, w, q, h);
    d.dxx_val = d_xx(u, w, q, h);
  }
  return d;
}

PathFunctional classical_lift(const std::string& name,
                              std::function<double(double, const Vec&)> f,
                              std::function<double(double, const Vec&)> ft,
                              std::function<Vec(double, const Vec&)> fx,
                              std::function<Mat(double, const Vec&)> fxx) {
  PathFunctional u;
  u.name = name;
  const bool exact = ft && fx && fxx;
  u.tag = exact ? Smoothness::C12 : Smoothness::C10;
  u.eval = [f](const PathStub& w) { return f(w.time(), w.terminal()); };
  if (exact) {
    u.exact_dt = [ft](const PathStub& w) { return ft(w.time(), w.terminal()); };
    u.exact_dx = [fx](const PathStub& w) { return fx(w.time(), w.terminal()); };
    u.exact_dxx = [fxx](const PathStub& w) { return fxx(w.time(), w.terminal()); };
  }
  return u;
}

PathStub brownian_continuation(const PathStub& from, const SpatialGrid& q, double sigma,
                               std::uint64_t seed, std::uint64_t sim) {
  const TimeGrid& tg = from.grid;
  const double sdt = sigma * std::sqrt(tg.dt());
  Mat v(from.dim(), tg.steps + 1);
  v.leftCols(from.k() + 1) = from.values;
  int k = from.k();
  std::uint64_t ctr = 0;
  while (k < tg.steps) {
    bool exited = false;
    Vec next(from.dim());
    for (int i = 0; i < from.dim(); ++i) {
      const double x = v(i, k) + sdt * counter_normal(seed, sim, ctr++);
      const int idx = q.nearest_index(i, x);
      next[i] = q.coord(i, idx);
      if (idx == 0 || idx == q.points_per_axis - 1) exited = true;
    }
    v.col(k + 1) = next;
    ++k;
    if (exited) break;  // absorbed at the spatial boundary
  }
  return PathStub(tg, v.leftCols(k + 1));
}

namespace {

double comp_sum(const Vec& x) { return x.sum(); }

// left-Riemann running integral of the component sum
double running_integral_value(const PathStub& w) {
  double s = 0.0;
  for (int j = 0; j < w.k(); ++j) s += comp_sum(w.values.col(j));
  return s * w.grid.dt();
}

PathFunctional with_exact(PathFunctional u, std::function<double(const PathStub&)> dt,
                          std::function<Vec(const PathStub&)> dx,
                          std::function<Mat(const PathStub&)> dxx) {
  u.tag = Smoothness::C12;
  u.exact_dt = std::move(dt);
  u.exact_dx = std::move(dx);
  u.exact_dxx = std::move(dxx);
  return u;
}

}  // namespace

PathFunctional builtin(const std::string& name, const nlohmann::json& raw_params,
                       const TimeGrid& tg, const SpatialGrid& sg) {
  const nlohmann::json params =
      raw_params.is_null() ? nlohmann::json::object() : raw_params;
  const int d = sg.dim();
  PathFunctional u;
  u.name = name;

  if (name == "terminal") {
    u.eval = [](const PathStub& w) { return comp_sum(w.terminal()); };
    return with_exact(std::move(u), [](const PathStub&) { return 0.0; },
                      [d](const PathStub&) { return Vec::Ones(d).eval(); },
                      [d](const PathStub&) { return Mat::Zero(d, d).eval(); });
  }
  if (name == "running_integral") {
    u.eval = running_integral_value;
    return with_exact(std::move(u),
                      [](const PathStub& w) { return comp_sum(w.terminal()); },
                      [d](const PathStub&) { return Vec::Zero(d).eval(); },
                      [d](const PathStub&) { return Mat::Zero(d, d).eval(); });
  }
  if (name == "running_max") {
    u.tag = Smoothness::USCstar;
    u.eval = [](const PathStub& w) {
      double m = comp_sum(w.values.col(0));
      for (int j = 1; j <= w.k(); ++j) m = std::max(m, comp_sum(w.values.col(j)));
      return m;
    };
    return u;
  }
  if (name == "asian_martingale") {
    const double T = tg.horizon;
    u.eval = [T](const PathStub& w) {
      return running_integral_value(w) + comp_sum(w.terminal()) * (T - w.time());
    };
    return with_exact(std::move(u), [](const PathStub&) { return 0.0; },
                      [d, T](const PathStub& w) {
                        return ((T - w.time()) * Vec::Ones(d)).eval();
                      },
                      [d](const PathStub&) { return Mat::Zero(d, d).eval(); });
  }
  if (name == "heat_solution") {
    const double sigma = params.value("sigma", 1.0);
    const double T = tg.horizon;
    u.eval = [sigma, T, d](const PathStub& w) {
      return w.terminal().squaredNorm() + d * sigma * sigma * (T - w.time());
    };
    return with_exact(std::move(u),
                      [sigma, d](const PathStub&) { return -d * sigma * sigma; },
                      [](const PathStub& w) { return (2.0 * w.terminal()).eval(); },
                      [d](const PathStub&) { return (2.0 * Mat::Identity(d, d)).eval(); });
  }
  if (name == "quadratic_test") {
    u.eval = [](const PathStub& w) { return w.terminal().squaredNorm(); };
    return with_exact(std::move(u), [](const PathStub&) { return 0.0; },
                      [](const PathStub& w) { return (2.0 * w.terminal()).eval(); },
                      [d](const PathStub&) { return (2.0 * Mat::Identity(d, d)).eval(); });
  }
  if (name == "quadratic_time") {
    // a|x|^2 + b(T - t) + c
    const double a = params.value("a", 1.0);
    const double b = params.value("b", 1.0);
    const double c = params.value("c", 0.0);
    const double T = tg.horizon;
    u.eval = [a, b, c, T](const PathStub& w) {
      return a * w.terminal().squaredNorm() + b * (T - w.time()) + c;
    };
    return with_exact(std::move(u), [b](const PathStub&) { return -b; },
                      [a](const PathStub& w) { return (2.0 * a * w.terminal()).eval(); },
                      [a, d](const PathStub&) { return (2.0 * a * Mat::Identity(d, d)).eval(); });
  }
  if (name == "affine_lift") {
    // px * sum(x) + pt * t + c
    const double px = params.value("px", 1.0);
    const double pt = params.value("pt", 0.0);
    const double c = params.value("c", 0.0);
    u.eval = [px, pt, c](const PathStub& w) {
      return px * w.terminal().sum() + pt * w.time() + c;
    };
    return with_exact(std::move(u), [pt](const PathStub&) { return pt; },
                      [px, d](const PathStub&) { return (px * Vec::Ones(d)).eval(); },
                      [d](const PathStub&) { return Mat::Zero(d, d).eval(); });
  }
  if (name == "mc_conditional") {
    if (!params.contains("phi") || !params.contains("seed"))
      throw Error(Err::BadParams, "mc_conditional requires phi and seed");
    const auto inner = params.at("phi");
    const PathFunctional phi =
        builtin(inner.at("name").get<std::string>(), inner.value("params", nlohmann::json::object()),
                tg, sg);
    const double sigma = params.value("sigma", 1.0);
    const int n = params.value("n", 1000);
    const std::uint64_t seed = params.at("seed").get<std::uint64_t>();
    if (n < 1) throw Error(Err::BadParams, "mc_conditional requires n >= 1");
    u.eval = [phi, sigma, n, seed, sg](const PathStub& w) {
      double acc = 0.0;
      for (int sim = 0; sim < n; ++sim)
        acc += phi(brownian_continuation(w, sg, sigma, seed, static_cast<std::uint64_t>(sim)));
      return acc / n;
    };
    return u;
  }
  throw Error(Err::UnknownName, "unknown builtin functional '" + name + "'");
}

SemicontinuityReport check_usc_star(const PathFunctional& u, const PathStub& w,
                                    const SpatialGrid& q, int probe_budget) {
  SemicontinuityReport rep;

  // condition (ii): lattice approach t_i = t - i*dt, against the bump sup
  double sup_bump = u(w);
  for (int idx = 0; idx < q.points_per_axis; ++idx) {
    PathStub b = w;
    for (int i = 0; i < w.dim(); ++i) b.values(i, b.k()) = q.coord(i, idx);
    if (in_lambda_qbar(b, q)) sup_bump = std::max(sup_bump, u(b));
  }
  double worst_ii = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= std::min(probe_budget, w.k()); ++i)
    worst_ii = std::max(worst_ii, u(w.truncated(w.k() - i)));
  rep.left_limit_margin =
      std::isfinite(worst_ii) ? worst_ii - sup_bump : 0.0;

  // condition (i): two-scale upward-jump proxy for (t, x) |-> u((w^x)_{t,delta}).
  // A jump that does not shrink with the probe scale flags a USC violation.
  const int dmax = std::min(probe_budget, w.grid.steps - w.k());
  auto val = [&](int steps, double xoff) -> double {
    Vec e = Vec::Constant(w.dim(), xoff);
    PathStub b = vertical_bump(w, e, q);
    return u(steps > 0 ? flat_extend(b, steps) : b);
  };
  const double r = default_bump(q) * 4.0;
  double worst = 0.0;
  for (int s = 0; s <= dmax; ++s) {
    for (int m = -2; m <= 2; ++m) {
      const double x = m * r;
      Vec e = Vec::Constant(w.dim(), x);
      if (!q.in_closure((w.terminal() + e).eval())) continue;
      double coarse = 0.0, fine = 0.0;
      for (int sgn : {-1, 1}) {
        Vec ec = Vec::Constant(w.dim(), x + sgn * r);
        Vec ef = Vec::Constant(w.dim(), x + sgn * r / 2.0);
        if (q.in_closure((w.terminal() + ec).eval()))
          coarse = std::max(coarse, val(s, x + sgn * r) - val(s, x));
        if (q.in_closure((w.terminal() + ef).eval()))
          fine = std::max(fine, val(s, x + sgn * r / 2.0) - val(s, x));
      }
      // smooth growth halves with the scale; keep what survives
      worst = std::max(worst, fine - 0.75 * coarse);
    }
  }
  rep.tx_margin = worst;
  return rep;
}

}  // namespace ppde
