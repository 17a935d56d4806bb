#include "ppde/jets.hpp"

#include <algorithm>
#include <cmath>

namespace ppde {

namespace {

// unit probe directions: axes, then two-axis diagonals
std::vector<Vec> probe_directions(int d) {
  std::vector<Vec> dirs;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  const double inv = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Vec e = Vec::Zero(d);
      e[i] = inv;
      e[j] = inv;
      dirs.push_back(e);
      dirs.push_back(-e);
      e[j] = -inv;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
  return dirs;
}

struct ProbeSweep {
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<double> level_max;  // per radius level
  int skipped = 0;
};

ProbeSweep sweep(const PathFunctional& u, const PathStub& w, const Jet& jet,
                 const SpatialGrid& q, const JetProbeOptions& opt) {
  ProbeSweep s;
  const double u0 = u(w);
  const int dt_room = std::min(opt.max_dt_steps, w.grid.steps - w.k());
  const auto dirs = probe_directions(w.dim());

  auto excess = [&](int steps, const Vec& x) -> double {
    PathStub probe = vertical_bump(w, x, q);
    if (steps > 0) probe = flat_extend(probe, steps);
    const double delta = steps * w.grid.dt();
    const double model = u0 + jet.a * delta + jet.p.dot(x) + 0.5 * x.dot(jet.X * x);
    return (u(probe) - model) / (delta + x.squaredNorm());
  };

  // horizontal-only probes, radius independent
  for (int steps = 1; steps <= dt_room; ++steps) {
    const double e = excess(steps, Vec::Zero(w.dim()));
    s.worst = std::max(s.worst, e);
  }

  double r = opt.radius;
  for (int level = 0; level < opt.levels; ++level, r /= 2.0) {
    double lvl = -std::numeric_limits<double>::infinity();
    for (const Vec& dir : dirs) {
      const Vec x = r * dir;
      if (!q.in_closure((w.terminal() + x).eval())) {
        ++s.skipped;
        continue;
      }
      for (int steps = 0; steps <= dt_room; ++steps) lvl = std::max(lvl, excess(steps, x));
    }
    s.level_max.push_back(lvl);
    s.worst = std::max(s.worst, lvl);
  }
  return s;
}

JetTestReport judge(const ProbeSweep& s, double tol) {
  JetTestReport rep;
  rep.skipped = s.skipped;
  rep.margin = std::isfinite(s.worst) ? s.worst : 0.0;
  bool ok = rep.margin <= tol;
  for (std::size_t l = 1; l < s.level_max.size(); ++l) {
    const double prev = std::max(s.level_max[l - 1], 0.0);
    const double cur = std::max(s.level_max[l], 0.0);
    if (cur > prev + tol) ok = false;
  }
  rep.pass = ok;
  return rep;
}

}  // namespace

PathFunctional negate(const PathFunctional& u) {
  PathFunctional n;
  n.name = "-" + u.name;
  switch (u.tag) {
    case Smoothness::USCstar: n.tag = Smoothness::LSCstar; break;
    case Smoothness::LSCstar: n.tag = Smoothness::USCstar; break;
    default: n.tag = u.tag;
  }
  n.eval = [u](const PathStub& w) { return -u.eval(w); };
  if (u.has_exact()) {
    n.exact_dt = [u](const PathStub& w) { return -u.exact_dt(w); };
    n.exact_dx = [u](const PathStub& w) { return (-u.exact_dx(w)).eval(); };
    n.exact_dxx = [u](const PathStub& w) { return (-u.exact_dxx(w)).eval(); };
  }
  return n;
}

JetTestReport superjet_test(const PathFunctional& u, const PathStub& w, const Jet& jet,
                            const SpatialGrid& q, const JetProbeOptions& opt) {
  if (classify(w, q) != DomainClass::Interior)
    throw Error(Err::PreconditionFailed, "jet tests require an interior stub");
  return judge(sweep(u, w, jet, q, opt), opt.tol);
}

JetTestReport subjet_test(const PathFunctional& u, const PathStub& w, const Jet& jet,
                          const SpatialGrid& q, const JetProbeOptions& opt) {
  Jet neg;
  neg.a = -jet.a;
  neg.p = -jet.p;
  neg.X = -jet.X;
  return superjet_test(negate(u), w, neg, q, opt);
}

Jet jet_from_test_function(const PathFunctional& phi, const PathStub& w) {
  if (!phi.has_exact())
    throw Error(Err::NotSmooth, "test function has no exact derivatives");
  Jet j;
  j.a = phi.exact_dt(w);
  j.p = phi.exact_dx(w);
  j.X = phi.exact_dxx(w);
  return j;
}

bool touch_check(const PathFunctional& phi, const PathFunctional& u, const PathStub& w,
                 const SpatialGrid& q, const JetProbeOptions& opt) {
  if (std::abs(phi(w) - u(w)) > opt.tol) return false;
  const int dt_room = std::min(opt.max_dt_steps, w.grid.steps - w.k());
  const auto dirs = probe_directions(w.dim());
  double r = opt.radius;
  for (int level = 0; level < opt.levels; ++level, r /= 2.0)
    for (const Vec& dir : dirs) {
      const Vec x = r * dir;
      if (!q.in_closure((w.terminal() + x).eval())) continue;
      for (int steps = 0; steps <= dt_room; ++steps) {
        PathStub probe = vertical_bump(w, x, q);
        if (steps > 0) probe = flat_extend(probe, steps);
        if (phi(probe) < u(probe) - opt.tol) return false;
      }
    }
  return true;
}

bool closure_jet_search(const PathFunctional& u, const PathStub& w, const Jet& jet,
                        const SpatialGrid& q, int budget) {
  if (classify(w, q) != DomainClass::Interior)
    throw Error(Err::PreconditionFailed, "closure search requires an interior stub");

  double hmin = q.spacing(0);
  for (int i = 1; i < q.dim(); ++i) hmin = std::min(hmin, q.spacing(i));

  // candidate sequence members: w itself and interior grid bumps of w
  std::vector<PathStub> cands{w};
  std::vector<int> idx(q.dim(), 1);
  while (true) {
    const Vec pt = q.point(idx);
    if (pt != w.terminal()) {
      PathStub c = w;
      c.values.col(c.k()) = pt;
      cands.push_back(c);
    }
    int axis = q.dim() - 1;
    while (axis >= 0 && idx[axis] == q.points_per_axis - 2) idx[axis--] = 1;
    if (axis < 0) break;
    ++idx[axis];
    if (cands.size() > 100000) throw Error(Err::SearchSpaceTooLarge, "candidate cap");
  }

  JetProbeOptions popt;
  popt.radius = hmin / 2.0;
  popt.tol = 1e-6;

  // radii shrink but floor at the lattice resolution (one-cell bump)
  const double floor_r = hmin * hmin;
  for (int n = 0; n < budget; ++n) {
    const double rn = std::max(std::pow(0.5, n), floor_r);
    bool found = false;
    for (const PathStub& c : cands) {
      if (distance_parabolic(c, w) > rn + 1e-12) continue;
      if (std::abs(u(c) - u(w)) > std::sqrt(rn) + 1e-9) continue;
      if (superjet_test(u, c, jet, q, popt).pass) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

IshiiReport verify_ishii(const IshiiCertificate& cert) {
  const int d = static_cast<int>(cert.X1.rows());
  if (cert.X1.cols() != d || cert.X2.rows() != d || cert.X2.cols() != d ||
      cert.A.rows() != 2 * d || cert.A.cols() != 2 * d)
    throw Error(Err::DimensionMismatch, "certificate blocks inconsistent");

  Mat B = Mat::Zero(2 * d, 2 * d);
  B.topLeftCorner(d, d) = cert.X1;
  B.bottomRightCorner(d, d) = -cert.X2;

  Eigen::SelfAdjointEigenSolver<Mat> esA(cert.A);
  const double normA = esA.eigenvalues().cwiseAbs().maxCoeff();
  const double tol = 1e-10 * std::max(1.0, normA);

  IshiiReport rep;
  const Mat lower = B + (1.0 / cert.eps + normA) * Mat::Identity(2 * d, 2 * d);
  const Mat upper = cert.A + cert.eps * cert.A * cert.A - B;

  Eigen::SelfAdjointEigenSolver<Mat> esL(lower), esU(upper);
  rep.lower_margin = esL.eigenvalues().minCoeff();
  rep.upper_margin = esU.eigenvalues().minCoeff();
  rep.lower_ok = rep.lower_margin >= -tol;
  rep.upper_ok = rep.upper_margin >= -tol;
  rep.scalar_margin = cert.dt_phi - (cert.b1 - cert.b2);
  rep.scalar_ok = rep.scalar_margin >= -tol;

  if (!rep.lower_ok && rep.lower_margin <= rep.upper_margin)
    rep.violating = esL.eigenvectors().col(0);
  else if (!rep.upper_ok)
    rep.violating = esU.eigenvectors().col(0);
  return rep;
}

JetTestReport spatial_jet_test(const PathFunctional& u, const PathStub& w, const Vec& p,
                               const Mat& X, const SpatialGrid& q,
                               const JetProbeOptions& opt) {
  JetProbeOptions o = opt;
  o.max_dt_steps = 0;
  Jet j;
  j.a = 0.0;
  j.p = p;
  j.X = X;
  return superjet_test(u, w, j, q, o);
}

Jet jet_lift(const PathFunctional& u, const PathStub& w, const Vec& p, const Mat& X,
             const SpatialGrid& q) {
  if (classify(w, q) != DomainClass::Interior)
    throw Error(Err::PreconditionFailed, "jet lift requires an interior stub");
  Jet j;
  j.a = u.exact_dt ? u.exact_dt(w) : d_t(u, w);
  j.p = p;
  j.X = X;
  return j;
}

}  // namespace ppde
