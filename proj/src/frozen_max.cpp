#include "ppde/frozen_max.hpp"

#include <algorithm>
#include <cmath>

namespace ppde {

namespace {

struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  PathStub stub;
  bool seen = false;

  void offer(double v, const PathStub& s) {
    if (!seen || v > value) {
      value = v;
      stub = s;
      seen = true;
    }
  }
};

bool pair_feasible(const PathStub& a, const PathStub& b, const PairEnumOptions& opt) {
  if (opt.synchronous && a.k() != b.k()) return false;
  if (std::abs(a.time() - b.time()) > opt.window + 1e-12) return false;
  if (std::isfinite(opt.tube_radius)) {
    const int jmax = std::max(a.k(), b.k());
    for (int j = 0; j <= jmax; ++j) {
      const Vec x = a.values.col(std::min(j, a.k()));
      const Vec y = b.values.col(std::min(j, b.k()));
      if ((x - y).cwiseAbs().maxCoeff() > opt.tube_radius + 1e-12) return false;
    }
  }
  return true;
}

EnumOptions component_options(int k_max, const PairEnumOptions& opt) {
  EnumOptions o;
  o.k_max = k_max;
  o.interior_only = opt.interior_only;
  o.cap = opt.cap;
  return o;
}

// Exhaustive feasible-product argmax; first pair in outer-major order wins.
ArgMax pair_argmax(const PairFunctional& u, const PathStub& w0, const PathStub& v0,
                   const SpatialGrid& q, const PairEnumOptions& opt, PathStub& best2) {
  const auto outer = enumerate_continuations(w0, q, component_options(opt.k_max1, opt));
  const auto inner = enumerate_continuations(v0, q, component_options(opt.k_max2, opt));
  ArgMax am;
  std::size_t count = 0;
  for (const auto& a : outer)
    for (const auto& b : inner) {
      if (!pair_feasible(a, b, opt)) continue;
      if (++count > opt.cap)
        throw Error(Err::SearchSpaceTooLarge, "feasible pair cap exceeded");
      const double v = u(a, b);
      if (!am.seen || v > am.value) {
        am.value = v;
        am.stub = a;
        best2 = b;
        am.seen = true;
      }
    }
  if (!am.seen) throw Error(Err::PreconditionFailed, "no feasible continuation pair");
  return am;
}

}  // namespace

MaximizationResult brute_force_sup(const PathFunctional& u, const PathStub& w0,
                                   const SpatialGrid& q, const EnumOptions& opt) {
  ArgMax am;
  for_each_continuation(w0, q, opt, [&](const PathStub& s) { am.offer(u(s), s); });
  MaximizationResult r;
  r.maximizer = am.stub;
  r.value = am.value;
  r.certificate = {{am.value, am.value}};
  r.iterations = 1;
  r.method = MaxMethod::BruteForce;
  return r;
}

MaximizationResult left_frozen_maximize(const PathFunctional& u, const PathStub& w0,
                                        const SpatialGrid& q, const EnumOptions& opt) {
  ArgMax am;
  for_each_continuation(w0, q, opt, [&](const PathStub& s) { am.offer(u(s), s); });
  const double sup = am.value;
  const PathStub& star = am.stub;

  MaximizationResult r;
  r.method = MaxMethod::Frozen;
  r.value = sup;
  r.maximizer = star;

  // Stage 0 is the bump maximization along the argmax prefix; later stages
  // advance to the shortest further prefix reaching the midpoint, so the
  // certificate gap at least halves each time.
  int j = std::min(w0.k(), star.k());
  PathStub cur = star.truncated(j);
  r.certificate.push_back({u(cur), sup});
  while (r.certificate.back().m < sup) {
    const double mid = (r.certificate.back().m + sup) / 2.0;
    int jn = j + 1;
    double vn = u(star.truncated(jn));
    while (vn < mid) vn = u(star.truncated(++jn));
    j = jn;
    r.certificate.push_back({vn, sup});
  }
  r.maximizer = star.truncated(j);
  r.iterations = static_cast<int>(r.certificate.size()) - 1;
  return r;
}

MaximizationResult brute_force_sup_pair(const PairFunctional& u, const PathStub& w0,
                                        const PathStub& v0, const SpatialGrid& q,
                                        const PairEnumOptions& opt) {
  MaximizationResult r;
  r.is_pair = true;
  r.method = MaxMethod::BruteForce;
  ArgMax am = pair_argmax(u, w0, v0, q, opt, r.maximizer2);
  r.maximizer = am.stub;
  r.value = am.value;
  r.certificate = {{am.value, am.value}};
  r.iterations = 1;
  return r;
}

MaximizationResult left_frozen_maximize_pair(const PairFunctional& u, const PathStub& w0,
                                             const PathStub& v0, const SpatialGrid& q,
                                             const PairEnumOptions& opt) {
  MaximizationResult r;
  r.is_pair = true;
  r.method = MaxMethod::Frozen;
  PathStub star2;
  const ArgMax am = pair_argmax(u, w0, v0, q, opt, star2);
  const PathStub& star1 = am.stub;
  const double sup = am.value;

  // prefix pairs ordered by combined advance, balanced between components
  struct Cand {
    int j1, j2;
  };
  const int lo1 = std::min(w0.k(), star1.k()), lo2 = std::min(v0.k(), star2.k());
  std::vector<Cand> cands;
  for (int j1 = lo1; j1 <= star1.k(); ++j1)
    for (int j2 = lo2; j2 <= star2.k(); ++j2) cands.push_back({j1, j2});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    const int sa = a.j1 + a.j2, sb = b.j1 + b.j2;
    if (sa != sb) return sa < sb;
    const int da = std::abs(a.j1 - a.j2), db = std::abs(b.j1 - b.j2);
    if (da != db) return da < db;
    return a.j1 < b.j1;
  });

  int j1 = lo1, j2 = lo2;
  if (!pair_feasible(star1.truncated(j1), star2.truncated(j2), opt)) {
    // initial bump pair can fall outside the constraints; start from the
    // first feasible candidate instead
    for (const Cand& c : cands)
      if (pair_feasible(star1.truncated(c.j1), star2.truncated(c.j2), opt)) {
        j1 = c.j1;
        j2 = c.j2;
        break;
      }
  }
  r.certificate.push_back({u(star1.truncated(j1), star2.truncated(j2)), sup});
  while (r.certificate.back().m < sup) {
    const double mid = (r.certificate.back().m + sup) / 2.0;
    const int cursum = j1 + j2;
    for (const Cand& c : cands) {
      if (c.j1 + c.j2 <= cursum) continue;
      const PathStub a = star1.truncated(c.j1), b = star2.truncated(c.j2);
      if (!pair_feasible(a, b, opt)) continue;
      if (u(a, b) >= mid) {
        j1 = c.j1;
        j2 = c.j2;
        break;
      }
    }
    r.certificate.push_back({u(star1.truncated(j1), star2.truncated(j2)), sup});
  }
  r.maximizer = star1.truncated(j1);
  r.maximizer2 = star2.truncated(j2);
  r.value = sup;
  r.iterations = static_cast<int>(r.certificate.size()) - 1;
  return r;
}

RmaxReport verify_rmax(const PathFunctional& u, const MaximizationResult& r,
                       const SpatialGrid& q, const EnumOptions& opt) {
  EnumOptions o = opt;
  o.k_max = std::max(opt.k_max, r.maximizer.k());
  RmaxReport rep;
  for_each_continuation(r.maximizer, q, o, [&](const PathStub& s) {
    rep.worst_violation = std::max(rep.worst_violation, u(s) - r.value);
  });
  rep.ok = rep.worst_violation <= 0.0;
  rep.worst_violation = std::max(rep.worst_violation, 0.0);
  return rep;
}

RmaxReport verify_rmax_pair(const PairFunctional& u, const MaximizationResult& r,
                            const SpatialGrid& q, const PairEnumOptions& opt) {
  PairEnumOptions o = opt;
  o.k_max1 = std::max(opt.k_max1, r.maximizer.k());
  o.k_max2 = std::max(opt.k_max2, r.maximizer2.k());
  const auto outer = enumerate_continuations(r.maximizer, q, component_options(o.k_max1, o));
  const auto inner = enumerate_continuations(r.maximizer2, q, component_options(o.k_max2, o));
  RmaxReport rep;
  for (const auto& a : outer)
    for (const auto& b : inner) {
      if (!pair_feasible(a, b, o)) continue;
      rep.worst_violation = std::max(rep.worst_violation, u(a, b) - r.value);
    }
  rep.ok = rep.worst_violation <= 0.0;
  rep.worst_violation = std::max(rep.worst_violation, 0.0);
  return rep;
}

FirstOrderConditions first_order_conditions(const PathFunctional& u, const PathStub& wbar,
                                            const SpatialGrid& q, double tol) {
  if (classify(wbar, q) != DomainClass::Interior)
    throw Error(Err::PreconditionFailed, "first-order conditions need an interior stub");
  if (!u.has_exact() && u.tag != Smoothness::C12)
    throw Error(Err::NotSmooth, "no derivatives available for sign checks");
  const DupireDerivatives d = dupire_derivatives(u, wbar, q, default_bump(q));
  FirstOrderConditions c;
  c.dt_val = d.dt_val;
  c.dx_norm = d.dx_val.norm();
  Eigen::SelfAdjointEigenSolver<Mat> es(d.dxx_val);
  c.dxx_eig_max = es.eigenvalues().maxCoeff();
  c.dt_ok = c.dt_val <= tol;
  c.dx_ok = c.dx_norm <= tol;
  c.dxx_ok = c.dxx_eig_max <= tol;
  return c;
}

}  // namespace ppde
