#ifndef PPDE_VISCOSITY_HPP
#define PPDE_VISCOSITY_HPP

#include <set>

#include "ppde/jets.hpp"

namespace ppde {

enum class Assumption { H1, H2, H3, DE };

/// Nonlinearity G. Second-order generators expose eval2, first-order ones
/// eval1; the PathStub argument is null for path-independent forms.
struct Generator {
  std::string name;
  bool first_order = false;
  bool path_dependent = false;
  std::set<Assumption> assumptions;
  double sigma_eff = 0.0;  // effective sup volatility, drives the CFL bound
  std::function<double(const PathStub*, double, const Vec&, const Mat&)> eval2;
  std::function<double(const PathStub*, double, const Vec&)> eval1;
  std::function<double(double)> rho_g;  // path modulus of the omega dependence

  double operator()(double u, const Vec& p, const Mat& X) const {
    return eval2(nullptr, u, p, X);
  }
  double at(const PathStub& w, double u, const Vec& p, const Mat& X) const {
    return eval2(path_dependent ? &w : nullptr, u, p, X);
  }
  double at1(const PathStub& w, double u, const Vec& p) const {
    return eval1(path_dependent ? &w : nullptr, u, p);
  }
};

/// Names: linear_heat(sigma), g_heat(sigma_low, sigma_high) in d=1,
/// transport(c, lambda), path_weighted(c, lambda, kappa).
Generator builtin_generator(const std::string& name, const nlohmann::json& params);

struct MonotonicityReport {
  bool pass = true;
  int samples = 0;
  int violations = 0;
  double worst_margin = 0.0;  // most negative slack seen
  std::string witness;
};

/// Spot-verifies the declared assumptions on random samples with the
/// orientation of each condition as declared:
///   H1: u >= v, X <= Y  =>  G(w,u,p,X) <= G(w,v,p,Y)
///   H2: u <= v, X >= Y  =>  G(u,p,X) >= G(v,p,Y)
///   H3: u >= v          =>  G(u,p) <= G(v,p)
MonotonicityReport check_monotonicity(const Generator& g, int samples = 10000,
                                      std::uint64_t seed = 1, int dim = 1);

enum class JetSource { Exact, Numeric, Explicit };

const char* jet_source_name(JetSource s);

/// Default check tolerance per jet source.
double default_viscosity_tol(JetSource src);

struct ViscosityReport {
  bool pass = true;
  double worst_margin = 0.0;  // min over stubs of a + G (sub) / max (super)
  int checked = 0;
  int skipped = 0;         // boundary stubs and filtered-out jets
  int witness_index = -1;  // index of the worst stub in the sweep order
  std::string jet_source;
};

/// Checks a + G(u, p, X) >= -tol at every interior stub, with jets drawn
/// from the named source; Explicit jets are pre-filtered by superjet_test.
ViscosityReport is_subsolution(const PathFunctional& u, const Generator& g,
                               const std::vector<PathStub>& stubs, const SpatialGrid& q,
                               JetSource src, double tol,
                               const std::vector<std::pair<int, Jet>>* explicit_jets = nullptr);

/// Mirror over subjets: a + G(u, p, X) <= tol.
ViscosityReport is_supersolution(const PathFunctional& u, const Generator& g,
                                 const std::vector<PathStub>& stubs, const SpatialGrid& q,
                                 JetSource src, double tol,
                                 const std::vector<std::pair<int, Jet>>* explicit_jets = nullptr);

struct PerturbedFunctional {
  PathFunctional u_tilde;  // u - delta_bar / t, defined for k >= 1
  double c = 0.0;          // guaranteed strictness margin delta_bar / T^2
};

/// The strictness perturbation; evaluation at k = 0 throws ZeroTime.
PerturbedFunctional strictness_perturb(const PathFunctional& u, double delta_bar,
                                       double horizon);

}  // namespace ppde

#endif
