#include "ppde/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "ppde/rng.hpp"

namespace ppde {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Ordered: return "ordered";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

bool ComparisonReport::all_required_pass() const {
  for (const auto& e : ledger)
    if (e.required && !e.pass) return false;
  return true;
}

const LedgerEntry* ComparisonReport::find(const std::string& name) const {
  for (const auto& e : ledger)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<PathStub> lattice_stubs(const TimeGrid& tg, const SpatialGrid& q,
                                    std::size_t cap) {
  std::vector<PathStub> out;
  std::vector<int> idx(q.dim(), 0);
  EnumOptions opt;
  opt.k_max = tg.steps;
  opt.cap = cap;
  while (true) {
    const Vec x0 = q.point(idx);
    Mat v(q.dim(), 1);
    v.col(0) = x0;
    PathStub s(tg, v);
    if (q.in_open(x0)) {
      for_each_continuation(s, q, opt, [&](const PathStub& c) {
        if (out.size() >= cap) throw Error(Err::SearchSpaceTooLarge, "stub sweep cap");
        out.push_back(c);
      });
    } else {
      out.push_back(s);
    }
    int axis = q.dim() - 1;
    while (axis >= 0 && idx[axis] == q.points_per_axis - 1) idx[axis--] = 0;
    if (axis < 0) break;
    ++idx[axis];
  }
  return out;
}

BoundaryCheck boundary_ordering_check(const PathFunctional& u, const PathFunctional& v,
                                      const std::vector<PathStub>& stubs,
                                      const SpatialGrid& q, double tol) {
  BoundaryCheck bc;
  bc.worst = -std::numeric_limits<double>::infinity();
  for (const auto& s : stubs) {
    if (classify(s, q) != DomainClass::Boundary) continue;
    ++bc.checked;
    bc.worst = std::max(bc.worst, u(s) - v(s));
  }
  if (bc.checked == 0) bc.worst = 0.0;
  bc.ok = bc.worst <= tol;
  return bc;
}

namespace {

LedgerEntry entry(std::string name, double lhs, double rhs, bool pass, bool required) {
  LedgerEntry e;
  e.name = std::move(name);
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = rhs - lhs;
  e.pass = pass;
  e.required = required;
  return e;
}

PathFunctional difference(const PathFunctional& a, const PathFunctional& b) {
  PathFunctional d;
  d.name = a.name + "-" + b.name;
  d.tag = Smoothness::None;
  d.eval = [a, b](const PathStub& w) { return a.eval(w) - b.eval(w); };
  if (a.has_exact() && b.has_exact()) {
    d.tag = Smoothness::C12;
    d.exact_dt = [a, b](const PathStub& w) { return a.exact_dt(w) - b.exact_dt(w); };
    d.exact_dx = [a, b](const PathStub& w) { return (a.exact_dx(w) - b.exact_dx(w)).eval(); };
    d.exact_dxx = [a, b](const PathStub& w) {
      return (a.exact_dxx(w) - b.exact_dxx(w)).eval();
    };
  }
  return d;
}

std::vector<const PathStub*> interior_sweep(const std::vector<PathStub>& stubs,
                                            const SpatialGrid& q) {
  std::vector<const PathStub*> out;
  for (const auto& s : stubs)
    if (s.k() >= 1 && classify(s, q) == DomainClass::Interior) out.push_back(&s);
  return out;
}

// a + G evaluated through the exact derivatives
double pde_residual(const PathFunctional& u, const Generator& g, const PathStub& w) {
  return u.exact_dt(w) + g.at(w, u.eval(w), u.exact_dx(w), u.exact_dxx(w));
}

void require_sub_super(const PathFunctional& u, const PathFunctional& v, const Generator& g,
                       const std::vector<const PathStub*>& interior, double tol,
                       ComparisonReport& rep) {
  double sub_worst = std::numeric_limits<double>::infinity();
  double sup_worst = -std::numeric_limits<double>::infinity();
  for (const PathStub* w : interior) {
    sub_worst = std::min(sub_worst, pde_residual(u, g, *w));
    sup_worst = std::max(sup_worst, pde_residual(v, g, *w));
  }
  if (interior.empty()) sub_worst = sup_worst = 0.0;
  rep.ledger.push_back(entry("subsolution", sub_worst, 0.0, sub_worst >= -tol, true));
  rep.ledger.push_back(entry("supersolution", sup_worst, 0.0, sup_worst <= tol, true));
  if (sub_worst < -tol)
    throw Error(Err::PreconditionFailed, "subsolution check failed for u");
  if (sup_worst > tol)
    throw Error(Err::PreconditionFailed, "supersolution check failed for v");
}

}  // namespace

ComparisonReport compare_smooth(const PathFunctional& u, const PathFunctional& v,
                                const Generator& g, double delta_bar, const TimeGrid& tg,
                                const SpatialGrid& q, double tol) {
  if (!u.has_exact() || !v.has_exact())
    throw Error(Err::NotSmooth, "smooth comparison needs exact derivatives");
  ComparisonReport rep;
  const auto stubs = lattice_stubs(tg, q);
  const auto interior = interior_sweep(stubs, q);

  require_sub_super(u, v, g, interior, tol, rep);

  const BoundaryCheck bc = boundary_ordering_check(u, v, stubs, q, tol);
  rep.ledger.push_back(entry("boundary_ordering", bc.worst, 0.0, bc.ok, true));

  const PerturbedFunctional pert = strictness_perturb(u, delta_bar, tg.horizon);
  rep.c = pert.c;

  double m_tilde = -std::numeric_limits<double>::infinity();
  const PathStub* offender = nullptr;
  for (const PathStub* w : interior) {
    const double excess = pert.u_tilde(*w) - v(*w);
    if (excess > m_tilde) {
      m_tilde = excess;
      offender = w;
    }
  }
  if (!std::isfinite(m_tilde)) m_tilde = 0.0;
  rep.m_tilde = m_tilde;
  rep.ledger.push_back(entry("no_offender", m_tilde, 0.0, m_tilde <= tol, true));

  if (m_tilde <= tol) {
    rep.verdict = rep.all_required_pass() ? Verdict::Ordered : Verdict::Inconclusive;
    return rep;
  }

  rep.verdict = Verdict::Violated;
  rep.has_witness = true;
  rep.witness = *offender;

  const PathFunctional diff = difference(pert.u_tilde, v);
  EnumOptions opt;
  opt.k_max = tg.steps;
  rep.certificate = left_frozen_maximize(diff, *offender, q, opt);
  rep.has_certificate = true;
  const PathStub& wbar = rep.certificate.maximizer;

  const bool interior_max = classify(wbar, q) == DomainClass::Interior;
  rep.ledger.push_back(entry("maximizer_interior", interior_max ? 1.0 : 0.0, 1.0,
                             interior_max, false));
  if (interior_max) {
    const FirstOrderConditions foc = first_order_conditions(diff, wbar, q, 1e-6);
    rep.ledger.push_back(entry("stationarity_dt", foc.dt_val, 0.0, foc.dt_ok, false));
    rep.ledger.push_back(entry("stationarity_dx", foc.dx_norm, 0.0, foc.dx_ok, false));
    rep.ledger.push_back(entry("stationarity_dxx", foc.dxx_eig_max, 0.0, foc.dxx_ok, false));

    const double chain = pde_residual(pert.u_tilde, g, wbar) - pde_residual(v, g, wbar);
    rep.ledger.push_back(entry("chain_lower", rep.c, chain, chain >= rep.c - tol, false));
    rep.ledger.push_back(entry("chain_upper", chain, 0.0, chain <= tol, false));
  }
  return rep;
}

double DoublingFunctional::penalty(const PathStub& w1, const PathStub& w2) const {
  return 0.5 * alpha * distance_parabolic(w1, w2);
}

double DoublingFunctional::dt_phi(const PathStub& w1, const PathStub& w2) const {
  return 0.5 * alpha * (w1.terminal() - w2.terminal()).squaredNorm();
}

Vec DoublingFunctional::dx_phi1(const PathStub& w1, const PathStub& w2) const {
  return alpha * (w1.terminal() - w2.terminal());
}

Mat DoublingFunctional::d2_phi(int dim) const {
  Mat j(2 * dim, 2 * dim);
  j.topLeftCorner(dim, dim) = Mat::Identity(dim, dim);
  j.bottomRightCorner(dim, dim) = Mat::Identity(dim, dim);
  j.topRightCorner(dim, dim) = -Mat::Identity(dim, dim);
  j.bottomLeftCorner(dim, dim) = -Mat::Identity(dim, dim);
  return alpha * j;
}

DoublingFunctional doubling_functional(const PathFunctional& u, const PathFunctional& v,
                                       double alpha) {
  DoublingFunctional d;
  d.alpha = alpha;
  d.w = [u, v, alpha](const PathStub& w1, const PathStub& w2) {
    if (w1.k() != w2.k())
      throw Error(Err::TimeMismatch, "doubling objective is synchronous");
    return u.eval(w1) - v.eval(w2) - 0.5 * alpha * distance_parabolic(w1, w2);
  };
  return d;
}

namespace {

struct AlphaPick {
  bool found = false;
  double alpha = 0.0;
  double lhs = 0.0;  // admissibility left side at the picked (or last) alpha
  double rhs = 0.0;
};

AlphaPick pick_alpha(const DoublingConfig& cfg, double C, double Mstar, double target) {
  if (!cfg.rho) throw Error(Err::BadParams, "doubling config needs a modulus rho");
  AlphaPick p;
  p.rhs = 0.5 * target;
  for (double a : cfg.alpha_schedule) {
    if (a <= 0.0) throw Error(Err::BadParams, "alpha must be positive");
    const double arg = std::max(0.0, (2.0 / a) * (1.0 / a + 2.0 * C - Mstar));
    p.lhs = 1.0 / a + cfg.rho(arg);
    p.alpha = a;
    if (p.lhs <= p.rhs) {
      p.found = true;
      return p;
    }
  }
  return p;
}

std::vector<PathStub> start_stubs(const TimeGrid& tg, const SpatialGrid& q, int k) {
  // interior-valued stubs of length k, lexicographic
  std::vector<PathStub> out;
  std::vector<std::vector<int>> idx(static_cast<std::size_t>(k) + 1,
                                    std::vector<int>(q.dim(), 1));
  auto advance = [&]() -> bool {
    for (int level = k; level >= 0; --level) {
      int axis = q.dim() - 1;
      while (axis >= 0 && idx[level][axis] == q.points_per_axis - 2) idx[level][axis--] = 1;
      if (axis >= 0) {
        ++idx[level][axis];
        return true;
      }
    }
    return false;
  };
  while (true) {
    Mat v(q.dim(), k + 1);
    for (int j = 0; j <= k; ++j) v.col(j) = q.point(idx[j]);
    out.push_back(PathStub(tg, v));
    if (!advance()) break;
  }
  return out;
}

std::vector<std::pair<PathStub, PathStub>> modulus_pairs(const TimeGrid& tg,
                                                         const SpatialGrid& q, int n,
                                                         std::uint64_t seed,
                                                         bool synchronous, int max_k_gap) {
  std::vector<std::pair<PathStub, PathStub>> pairs;
  for (int i = 0; i < n; ++i) {
    PathStub a = random_interior_stub(tg, q, seed * 2654435761ULL + 2 * i);
    PathStub b = random_interior_stub(tg, q, seed * 2654435761ULL + 2 * i + 1);
    if (synchronous) {
      const int k = std::min(a.k(), b.k());
      a = a.truncated(k);
      b = b.truncated(k);
    } else if (std::abs(a.k() - b.k()) > max_k_gap) {
      if (a.k() > b.k())
        a = a.truncated(b.k() + max_k_gap);
      else
        b = b.truncated(a.k() + max_k_gap);
    }
    pairs.emplace_back(std::move(a), std::move(b));
  }
  return pairs;
}

}  // namespace

ModulusReport modulus_probe(const PathFunctional& u, const std::function<double(double)>& rho,
                            const std::vector<std::pair<PathStub, PathStub>>& pairs,
                            PairMetric metric, double tol) {
  ModulusReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    const double d = metric == PairMetric::Parabolic ? distance_parabolic(a, b)
                                                     : distance_first_order(a, b);
    const double excess = std::abs(u(a) - u(b)) - rho(d);
    ++rep.checked;
    if (excess > rep.worst_excess) {
      rep.worst_excess = excess;
      rep.witness_index = static_cast<int>(i);
    }
  }
  if (!std::isfinite(rep.worst_excess)) rep.worst_excess = 0.0;
  rep.pass = rep.worst_excess <= tol;
  return rep;
}

ComparisonReport compare_viscosity_2nd(const PathFunctional& u, const PathFunctional& v,
                                       const Generator& g, const DoublingConfig& cfg,
                                       const TimeGrid& tg, const SpatialGrid& q) {
  if (!g.assumptions.count(Assumption::H2))
    throw Error(Err::PreconditionFailed, "H2 not declared by the generator");
  const MonotonicityReport mono = check_monotonicity(g, 2000, cfg.seed, q.dim());
  if (!mono.pass)
    throw Error(Err::PreconditionFailed, "H2 violated: " + mono.witness);

  ComparisonReport rep;
  const double tol = cfg.tol;
  const auto stubs = lattice_stubs(tg, q);
  const auto interior = interior_sweep(stubs, q);

  if (u.has_exact() && v.has_exact()) require_sub_super(u, v, g, interior, tol, rep);

  const BoundaryCheck bc = boundary_ordering_check(u, v, stubs, q, tol);
  if (!bc.ok)
    throw Error(Err::PreconditionFailed, "boundary ordering failed, worst excess " +
                                             std::to_string(bc.worst));
  rep.ledger.push_back(entry("boundary_ordering", bc.worst, 0.0, true, true));

  const PerturbedFunctional pert = strictness_perturb(u, cfg.delta_bar, tg.horizon);
  rep.c = pert.c;

  double m_tilde = -std::numeric_limits<double>::infinity();
  double Cest = 0.0;
  const PathStub* offender = nullptr;
  for (const PathStub* w : interior) {
    Cest = std::max(Cest, u(*w) - v(*w));
    const double excess = pert.u_tilde(*w) - v(*w);
    if (excess > m_tilde) {
      m_tilde = excess;
      offender = w;
    }
  }
  if (!std::isfinite(m_tilde)) m_tilde = 0.0;
  rep.m_tilde = m_tilde;
  if (cfg.C > 0.0) Cest = cfg.C;

  const double target = m_tilde > tol ? std::min(m_tilde, rep.c) : rep.c;
  const AlphaPick ap = pick_alpha(cfg, Cest, bc.worst, target);
  rep.ledger.push_back(entry("alpha_admissible", ap.lhs, ap.rhs, ap.found, true));
  if (!ap.found) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "no admissible alpha in the schedule";
    return rep;
  }
  rep.alpha_used = ap.alpha;

  const auto pairs = modulus_pairs(tg, q, cfg.modulus_samples, cfg.seed, true, 0);
  const ModulusReport mu = modulus_probe(u, cfg.rho, pairs, PairMetric::Parabolic, tol);
  const ModulusReport mv = modulus_probe(v, cfg.rho, pairs, PairMetric::Parabolic, tol);
  rep.ledger.push_back(entry("u_modulus", mu.worst_excess, 0.0, mu.pass, true));
  rep.ledger.push_back(entry("v_modulus", mv.worst_excess, 0.0, mv.pass, true));

  // synchronous doubled maximization over interior continuations
  const DoublingFunctional dob = doubling_functional(pert.u_tilde, v, ap.alpha);
  PairEnumOptions popt;
  popt.k_max1 = popt.k_max2 = tg.steps - 1;
  popt.synchronous = true;
  popt.interior_only = true;
  popt.tube_radius = cfg.tube_radius;
  popt.cap = cfg.cap;

  const auto starts = start_stubs(tg, q, 1);
  bool have = false;
  MaximizationResult best;
  for (const auto& a : starts)
    for (const auto& b : starts) {
      MaximizationResult r = left_frozen_maximize_pair(dob.w, a, b, q, popt);
      if (!have || r.value > best.value) {
        best = std::move(r);
        have = true;
      }
    }
  rep.certificate = best;
  rep.has_certificate = true;
  const PathStub& w1 = best.maximizer;
  const PathStub& w2 = best.maximizer2;

  rep.ledger.push_back(
      entry("penalty_bound", dob.penalty(w1, w2), 0.5 * rep.c,
            dob.penalty(w1, w2) <= 0.5 * rep.c + tol, true));
  const bool interior_max = classify(w1, q) == DomainClass::Interior &&
                            classify(w2, q) == DomainClass::Interior;
  rep.ledger.push_back(
      entry("interior_maximizer", interior_max ? 1.0 : 0.0, 1.0, interior_max, false));

  // Ishii certificate from lattice second differences at the maximizer
  const double h = default_bump(q);
  IshiiCertificate cert;
  cert.alpha = ap.alpha;
  cert.eps = 1.0 / ap.alpha;
  cert.A = dob.d2_phi(q.dim());
  cert.X1 = d_xx(pert.u_tilde, w1, q, h);
  cert.X2 = d_xx(v, w2, q, h);
  cert.b1 = d_t(pert.u_tilde, w1);
  cert.b2 = d_t(v, w2);
  cert.dt_phi = dob.dt_phi(w1, w2);
  rep.ishii = cert;
  rep.has_ishii = true;

  const IshiiReport ir = verify_ishii(cert);
  rep.ledger.push_back(entry("ishii_lower", ir.lower_margin, 0.0, ir.lower_ok, true));
  rep.ledger.push_back(entry("ishii_upper", ir.upper_margin, 0.0, ir.upper_ok, false));
  rep.ledger.push_back(entry("b1_b2_bound", cert.b1 - cert.b2, cert.dt_phi,
                             ir.scalar_ok, false));
  rep.ledger.push_back(entry("contradiction", rep.c, cert.dt_phi,
                             cert.dt_phi <= 0.5 * rep.c + tol, false));
  rep.ledger.push_back(entry("no_offender", m_tilde, 0.0, m_tilde <= tol, true));

  if (m_tilde > tol) {
    rep.verdict = Verdict::Violated;
    rep.has_witness = true;
    rep.witness = *offender;
  } else {
    rep.verdict = rep.all_required_pass() ? Verdict::Ordered : Verdict::Inconclusive;
  }
  return rep;
}

ComparisonReport compare_viscosity_1st(const PathFunctional& u, const PathFunctional& v,
                                       const Generator& g, const DoublingConfig& cfg,
                                       const TimeGrid& tg, const SpatialGrid& q) {
  if (!g.first_order || !g.assumptions.count(Assumption::H3))
    throw Error(Err::PreconditionFailed, "H3 not declared by the generator");
  const MonotonicityReport mono = check_monotonicity(g, 2000, cfg.seed, q.dim());
  if (!mono.pass)
    throw Error(Err::PreconditionFailed, "H3 violated: " + mono.witness);
  if (!std::isfinite(cfg.a_bar) || cfg.a_bar <= 0.0)
    throw Error(Err::BadParams, "first-order comparison needs a finite window a_bar");

  ComparisonReport rep;
  const double tol = cfg.tol;
  const auto stubs = lattice_stubs(tg, q);
  const auto interior = interior_sweep(stubs, q);

  if (u.has_exact() && v.has_exact()) require_sub_super(u, v, g, interior, tol, rep);

  const BoundaryCheck bc = boundary_ordering_check(u, v, stubs, q, tol);
  if (!bc.ok)
    throw Error(Err::PreconditionFailed, "boundary ordering failed, worst excess " +
                                             std::to_string(bc.worst));
  rep.ledger.push_back(entry("boundary_ordering", bc.worst, 0.0, true, true));

  const PerturbedFunctional pert = strictness_perturb(u, cfg.delta_bar, tg.horizon);
  rep.c = pert.c;

  double m_tilde = -std::numeric_limits<double>::infinity();
  double Cest = 0.0;
  const PathStub* offender = nullptr;
  for (const PathStub* w : interior) {
    Cest = std::max(Cest, u(*w) - v(*w));
    const double excess = pert.u_tilde(*w) - v(*w);
    if (excess > m_tilde) {
      m_tilde = excess;
      offender = w;
    }
  }
  if (!std::isfinite(m_tilde)) m_tilde = 0.0;
  rep.m_tilde = m_tilde;
  if (cfg.C > 0.0) Cest = cfg.C;

  const double target = m_tilde > tol ? std::min(m_tilde, rep.c) : rep.c;
  const AlphaPick ap = pick_alpha(cfg, Cest, bc.worst, target);
  rep.ledger.push_back(entry("alpha_admissible", ap.lhs, ap.rhs, ap.found, true));
  if (!ap.found) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "no admissible alpha in the schedule";
    return rep;
  }
  rep.alpha_used = ap.alpha;

  const int wsteps = std::max(1, static_cast<int>(std::lround(cfg.a_bar / tg.dt())));
  const auto pairs = modulus_pairs(tg, q, cfg.modulus_samples, cfg.seed, false, wsteps);
  const ModulusReport mu = modulus_probe(u, cfg.rho, pairs, PairMetric::FirstOrder, tol);
  const ModulusReport mv = modulus_probe(v, cfg.rho, pairs, PairMetric::FirstOrder, tol);
  rep.ledger.push_back(entry("u_modulus", mu.worst_excess, 0.0, mu.pass, true));
  rep.ledger.push_back(entry("v_modulus", mv.worst_excess, 0.0, mv.pass, true));

  const double alpha = ap.alpha;
  const PathFunctional ut = pert.u_tilde;
  const PairFunctional w1st = [ut, v, alpha](const PathStub& a, const PathStub& b) {
    return ut.eval(a) - v.eval(b) - 0.5 * alpha * distance_first_order(a, b);
  };

  // window-by-window backward sweep over interior time levels
  double worst_penalty = 0.0;
  double worst_chain = -std::numeric_limits<double>::infinity();
  bool any_window = false;
  for (int k_hi = tg.steps - 1; k_hi >= 1; k_hi -= wsteps) {
    const int k_lo = std::max(1, k_hi - wsteps + 1);

    PairEnumOptions popt;
    popt.k_max1 = popt.k_max2 = k_hi;
    popt.window = cfg.a_bar + 1e-12;
    popt.interior_only = true;
    popt.tube_radius = cfg.tube_radius;
    popt.cap = cfg.cap;

    // stage one: fix a near-max pair by exhaustive search over window starts
    const auto starts = start_stubs(tg, q, k_lo);
    bool have = false;
    MaximizationResult coarse;
    for (const auto& a : starts)
      for (const auto& b : starts) {
        MaximizationResult r = brute_force_sup_pair(w1st, a, b, q, popt);
        if (!have || r.value > coarse.value) {
          coarse = std::move(r);
          have = true;
        }
      }
    if (!have) continue;
    any_window = true;

    // stage two: refine from the fixed pair with the frozen procedure
    const MaximizationResult fine =
        left_frozen_maximize_pair(w1st, coarse.maximizer, coarse.maximizer2, q, popt);
    if (!rep.has_certificate || fine.value > rep.certificate.value) {
      rep.certificate = fine;
      rep.has_certificate = true;
    }
    const PathStub& g1 = fine.maximizer;
    const PathStub& g2 = fine.maximizer2;
    worst_penalty =
        std::max(worst_penalty, 0.5 * alpha * distance_first_order(g1, g2));

    // explicit first-order jets of the penalty at the maximizer
    const double b = alpha * (g1.time() - g2.time());
    const Vec p = alpha * (g1.terminal() - g2.terminal());
    const double chain = (b + g.at1(g1, pert.u_tilde(g1), p)) - (b + g.at1(g2, v(g2), p));
    worst_chain = std::max(worst_chain, chain);
  }
  if (!std::isfinite(worst_chain)) worst_chain = 0.0;

  rep.ledger.push_back(entry("penalty_bound", worst_penalty, 0.5 * rep.c,
                             worst_penalty <= 0.5 * rep.c + tol, true));
  rep.ledger.push_back(entry("chain_upper", worst_chain, 0.0, worst_chain <= tol, false));
  rep.ledger.push_back(entry("no_offender", m_tilde, 0.0, m_tilde <= tol, true));
  if (!any_window)
    throw Error(Err::BadParams, "window sweep covered no interior levels");

  if (m_tilde > tol) {
    rep.verdict = Verdict::Violated;
    rep.has_witness = true;
    rep.witness = *offender;
  } else {
    rep.verdict = rep.all_required_pass() ? Verdict::Ordered : Verdict::Inconclusive;
  }
  return rep;
}

}  // namespace ppde
