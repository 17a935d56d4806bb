#ifndef PPDE_COMPARISON_HPP
#define PPDE_COMPARISON_HPP

#include "ppde/frozen_max.hpp"
#include "ppde/viscosity.hpp"

namespace ppde {

struct DoublingConfig {
  std::vector<double> alpha_schedule{1e3, 1e5, 1e7};
  double delta_bar = 0.01;
  double C = 0.0;  // upper bound on u - v; 0 = estimate by sweep
  std::function<double(double)> rho;  // modulus for (u-Lip)
  double a_bar = std::numeric_limits<double>::infinity();  // 1st-order window
  double tube_radius = std::numeric_limits<double>::infinity();
  double tol = 1e-8;
  std::size_t cap = 4'000'000;
  int modulus_samples = 64;
  std::uint64_t seed = 1;
};

enum class Verdict { Ordered, Violated, Inconclusive };

const char* verdict_name(Verdict v);

struct LedgerEntry {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = true;
  bool required = true;  // informational entries are reported, not asserted
};

struct ComparisonReport {
  Verdict verdict = Verdict::Ordered;
  std::vector<LedgerEntry> ledger;
  bool has_witness = false;
  PathStub witness;
  PathStub witness2;
  MaximizationResult certificate;
  bool has_certificate = false;
  IshiiCertificate ishii;
  bool has_ishii = false;
  double alpha_used = 0.0;
  double m_tilde = 0.0;  // worst interior excess of u~ - v
  double c = 0.0;        // strictness margin
  std::string note;

  bool all_required_pass() const;
  const LedgerEntry* find(const std::string& name) const;
};

/// Every lattice stub: one singleton per grid point, plus all continuations
/// of interior starting points.
std::vector<PathStub> lattice_stubs(const TimeGrid& tg, const SpatialGrid& q,
                                    std::size_t cap = 1'000'000);

struct BoundaryCheck {
  bool ok = true;
  double worst = 0.0;  // max of u - v over boundary stubs
  int checked = 0;
};

BoundaryCheck boundary_ordering_check(const PathFunctional& u, const PathFunctional& v,
                                      const std::vector<PathStub>& stubs,
                                      const SpatialGrid& q, double tol = 1e-8);

/// Smooth-case comparison: perturb u, hunt an interior offender of u~ - v,
/// and if one exists replay the stationarity and contradiction inequalities
/// at its frozen maximizer.
ComparisonReport compare_smooth(const PathFunctional& u, const PathFunctional& v,
                                const Generator& g, double delta_bar, const TimeGrid& tg,
                                const SpatialGrid& q, double tol = 1e-8);

/// Synchronous doubled-variable objective u(w1) - v(w2) - phi_alpha with the
/// parabolic-metric penalty, plus the explicit derivatives of phi_alpha.
struct DoublingFunctional {
  double alpha = 0.0;
  PairFunctional w;  // throws TimeMismatch off the synchronous diagonal

  double penalty(const PathStub& w1, const PathStub& w2) const;
  double dt_phi(const PathStub& w1, const PathStub& w2) const;
  Vec dx_phi1(const PathStub& w1, const PathStub& w2) const;
  Mat d2_phi(int dim) const;  // alpha * J_{2d}
};

DoublingFunctional doubling_functional(const PathFunctional& u, const PathFunctional& v,
                                       double alpha);

/// Second-order viscosity comparison experiment: admissible alpha, modulus
/// probes, synchronous pair maximization, and the Ishii certificate built
/// from lattice second differences at the maximizer.
ComparisonReport compare_viscosity_2nd(const PathFunctional& u, const PathFunctional& v,
                                       const Generator& g, const DoublingConfig& cfg,
                                       const TimeGrid& tg, const SpatialGrid& q);

/// First-order comparison with the time-asymmetric metric, swept window by
/// window of length a_bar; per window a near-max pair is fixed first and
/// then refined by pair maximization.
ComparisonReport compare_viscosity_1st(const PathFunctional& u, const PathFunctional& v,
                                       const Generator& g, const DoublingConfig& cfg,
                                       const TimeGrid& tg, const SpatialGrid& q);

enum class PairMetric { Parabolic, FirstOrder };

struct ModulusReport {
  bool pass = true;
  double worst_excess = 0.0;  // max of |u(a)-u(b)| - rho(d(a,b))
  int checked = 0;
  int witness_index = -1;
};

ModulusReport modulus_probe(const PathFunctional& u, const std::function<double(double)>& rho,
                            const std::vector<std::pair<PathStub, PathStub>>& pairs,
                            PairMetric metric, double tol = 1e-8);

}  // namespace ppde

#endif
