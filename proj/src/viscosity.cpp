#include "ppde/viscosity.hpp"

#include <cmath>
#include <sstream>

#include "ppde/rng.hpp"

namespace ppde {

Generator builtin_generator(const std::string& name, const nlohmann::json& raw_params) {
  const nlohmann::json params =
      raw_params.is_null() ? nlohmann::json::object() : raw_params;
  Generator g;
  g.name = name;
  if (name == "linear_heat") {
    const double sigma = params.value("sigma", 1.0);
    if (sigma <= 0.0) throw Error(Err::BadParams, "linear_heat requires sigma > 0");
    g.assumptions = {Assumption::H1, Assumption::H2};
    g.sigma_eff = sigma;
    g.eval2 = [sigma](const PathStub*, double, const Vec&, const Mat& X) {
      return 0.5 * sigma * sigma * X.trace();
    };
    return g;
  }
  if (name == "g_heat") {
    const double lo = params.value("sigma_low", 0.5);
    const double hi = params.value("sigma_high", 1.0);
    if (lo < 0.0 || lo > hi) throw Error(Err::BadParams, "g_heat requires 0 <= sigma_low <= sigma_high");
    g.assumptions = {Assumption::H2};
    g.sigma_eff = hi;
    g.eval2 = [lo, hi](const PathStub*, double, const Vec&, const Mat& X) {
      const double x = X(0, 0);
      return 0.5 * (hi * hi * std::max(x, 0.0) - lo * lo * std::max(-x, 0.0));
    };
    return g;
  }
  if (name == "reaction_heat") {
    // heat plus a zero-order reaction term; the declared H2 tag is wrong
    // for lambda > 0, which check_monotonicity detects
    const double sigma = params.value("sigma", 1.0);
    const double lambda = params.value("lambda", 0.0);
    if (sigma <= 0.0) throw Error(Err::BadParams, "reaction_heat requires sigma > 0");
    g.assumptions = {Assumption::H2};
    g.sigma_eff = sigma;
    g.eval2 = [sigma, lambda](const PathStub*, double u, const Vec&, const Mat& X) {
      return 0.5 * sigma * sigma * X.trace() + lambda * u;
    };
    return g;
  }
  if (name == "transport") {
    const double c = params.value("c", 1.0);
    const double lambda = params.value("lambda", 0.0);
    if (c < 0.0) throw Error(Err::BadParams, "transport requires c >= 0");
    g.first_order = true;
    if (lambda >= 0.0) g.assumptions = {Assumption::H3};
    g.eval1 = [c, lambda](const PathStub*, double u, const Vec& p) {
      return -c * p.norm() - lambda * u;
    };
    g.eval2 = [g1 = g.eval1](const PathStub* w, double u, const Vec& p, const Mat&) {
      return g1(w, u, p);
    };
    return g;
  }
  if (name == "path_weighted") {
    const double c = params.value("c", 1.0);
    const double lambda = params.value("lambda", 0.0);
    const double kappa = params.value("kappa", 0.0);
    if (c < 0.0) throw Error(Err::BadParams, "path_weighted requires c >= 0");
    g.first_order = true;
    g.path_dependent = true;
    if (lambda >= 0.0) g.assumptions = {Assumption::H3};
    g.rho_g = [kappa](double r) { return std::abs(kappa) * std::sqrt(r); };
    g.eval1 = [c, lambda, kappa](const PathStub* w, double u, const Vec& p) {
      const double path = w ? w->terminal().sum() : 0.0;
      return -c * p.norm() - lambda * u + kappa * path;
    };
    g.eval2 = [g1 = g.eval1](const PathStub* w, double u, const Vec& p, const Mat&) {
      return g1(w, u, p);
    };
    return g;
  }
  throw Error(Err::UnknownName, "unknown generator '" + name + "'");
}

namespace {

Mat random_sym(std::uint64_t seed, std::uint64_t stream, std::uint64_t& ctr, int d,
               double scale) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      m(i, j) = scale * counter_normal(seed, stream, ctr++);
      m(j, i) = m(i, j);
    }
  return m;
}

Mat random_psd(std::uint64_t seed, std::uint64_t stream, std::uint64_t& ctr, int d,
               double scale) {
  const Mat w = random_sym(seed, stream, ctr, d, scale);
  return (w * w.transpose()).eval();
}

}  // namespace

MonotonicityReport check_monotonicity(const Generator& g, int samples, std::uint64_t seed,
                                      int dim) {
  MonotonicityReport rep;
  rep.samples = samples;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  std::uint64_t ctr = 0;
  for (int s = 0; s < samples; ++s) {
    const double v = 2.0 * counter_normal(seed, 17, ctr++);
    const double gap = std::abs(counter_normal(seed, 17, ctr++));
    Vec p(dim);
    for (int i = 0; i < dim; ++i) p[i] = 2.0 * counter_normal(seed, 17, ctr++);

    for (Assumption a : g.assumptions) {
      double slack = 0.0;
      if (a == Assumption::H3) {
        if (!g.first_order) continue;
        // u >= v must not increase G
        slack = g.eval1(nullptr, v, p) - g.eval1(nullptr, v + gap, p);
      } else {
        const Mat X = random_sym(seed, 17, ctr, dim, 1.5);
        const Mat D = random_psd(seed, 17, ctr, dim, 1.0);
        if (a == Assumption::H1) {
          // G(u, p, X) <= G(v, p, X + D) with u = v + gap
          slack = g.eval2(nullptr, v, p, (X + D).eval()) - g.eval2(nullptr, v + gap, p, X);
        } else {  // H2 / DE
          // G(u, p, X + D) >= G(v, p, X) with u = v - gap
          slack = g.eval2(nullptr, v - gap, p, (X + D).eval()) - g.eval2(nullptr, v, p, X);
        }
      }
      if (slack < rep.worst_margin) rep.worst_margin = slack;
      if (slack < -1e-12) {
        ++rep.violations;
        if (rep.witness.empty()) {
          std::ostringstream os;
          os << "sample " << s << " assumption "
             << (a == Assumption::H1 ? "H1" : a == Assumption::H3 ? "H3" : "H2")
             << " slack " << slack;
          rep.witness = os.str();
        }
      }
    }
  }
  if (!std::isfinite(rep.worst_margin)) rep.worst_margin = 0.0;
  rep.pass = rep.violations == 0;
  return rep;
}

const char* jet_source_name(JetSource s) {
  switch (s) {
    case JetSource::Exact: return "exact";
    case JetSource::Numeric: return "numeric";
    case JetSource::Explicit: return "explicit";
  }
  return "unknown";
}

double default_viscosity_tol(JetSource src) {
  return src == JetSource::Numeric ? 1e-4 : 1e-8;
}

namespace {

ViscosityReport sweep_solution(const PathFunctional& u, const Generator& g,
                               const std::vector<PathStub>& stubs, const SpatialGrid& q,
                               JetSource src, double tol,
                               const std::vector<std::pair<int, Jet>>* explicit_jets,
                               bool sub) {
  ViscosityReport rep;
  rep.jet_source = jet_source_name(src);
  rep.worst_margin = std::numeric_limits<double>::infinity();

  auto consider = [&](const PathStub& w, const Jet& jet, int index) {
    const double lhs = jet.a + g.at(w, u(w), jet.p, jet.X);
    const double margin = sub ? lhs : -lhs;  // >= -tol in both orientations
    ++rep.checked;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.witness_index = index;
    }
    if (margin < -tol) rep.pass = false;
  };

  if (src == JetSource::Explicit) {
    if (!explicit_jets) throw Error(Err::BadParams, "explicit jet source without jets");
    for (const auto& [i, jet] : *explicit_jets) {
      const PathStub& w = stubs.at(static_cast<std::size_t>(i));
      if (classify(w, q) != DomainClass::Interior) {
        ++rep.skipped;
        continue;
      }
      const JetTestReport t =
          sub ? superjet_test(u, w, jet, q) : subjet_test(u, w, jet, q);
      if (!t.pass) {
        ++rep.skipped;  // not a member of the jet set, nothing to check
        continue;
      }
      consider(w, jet, i);
    }
  } else {
    if (src == JetSource::Exact && !u.has_exact())
      throw Error(Err::NotSmooth, "exact jet source needs exact derivatives");
    for (std::size_t i = 0; i < stubs.size(); ++i) {
      const PathStub& w = stubs[i];
      if (classify(w, q) != DomainClass::Interior) {
        ++rep.skipped;
        continue;
      }
      Jet jet;
      if (src == JetSource::Exact) {
        jet.a = u.exact_dt(w);
        jet.p = u.exact_dx(w);
        jet.X = u.exact_dxx(w);
      } else {
        jet.a = d_t(u, w);
        jet.p = d_x(u, w, q, default_bump(q));
        jet.X = d_xx(u, w, q, default_bump(q));
      }
      consider(w, jet, static_cast<int>(i));
    }
  }
  if (!std::isfinite(rep.worst_margin)) rep.worst_margin = 0.0;
  if (sub) return rep;
  rep.worst_margin = -rep.worst_margin;  // report the signed a + G extreme
  return rep;
}

}  // namespace

ViscosityReport is_subsolution(const PathFunctional& u, const Generator& g,
                               const std::vector<PathStub>& stubs, const SpatialGrid& q,
                               JetSource src, double tol,
                               const std::vector<std::pair<int, Jet>>* explicit_jets) {
  return sweep_solution(u, g, stubs, q, src, tol, explicit_jets, /*sub=*/true);
}

ViscosityReport is_supersolution(const PathFunctional& u, const Generator& g,
                                 const std::vector<PathStub>& stubs, const SpatialGrid& q,
                                 JetSource src, double tol,
                                 const std::vector<std::pair<int, Jet>>* explicit_jets) {
  return sweep_solution(u, g, stubs, q, src, tol, explicit_jets, /*sub=*/false);
}

PerturbedFunctional strictness_perturb(const PathFunctional& u, double delta_bar,
                                       double horizon) {
  if (delta_bar < 0.0) throw Error(Err::BadParams, "delta_bar must be >= 0");
  PerturbedFunctional out;
  out.c = delta_bar / (horizon * horizon);
  PathFunctional& v = out.u_tilde;
  v.name = u.name + "~";
  v.tag = u.tag;
  v.eval = [u, delta_bar](const PathStub& w) {
    if (w.k() == 0) throw Error(Err::ZeroTime, "perturbation undefined at t = 0");
    return u.eval(w) - delta_bar / w.time();
  };
  if (u.has_exact()) {
    v.exact_dt = [u, delta_bar](const PathStub& w) {
      if (w.k() == 0) throw Error(Err::ZeroTime, "perturbation undefined at t = 0");
      const double t = w.time();
      return u.exact_dt(w) + delta_bar / (t * t);
    };
    v.exact_dx = u.exact_dx;
    v.exact_dxx = u.exact_dxx;
  }
  return out;
}

}  // namespace ppde
