#ifndef PPDE_FROZEN_MAX_HPP
#define PPDE_FROZEN_MAX_HPP

#include <limits>
#include <vector>

#include "ppde/functional.hpp"

namespace ppde {

enum class MaxMethod { Frozen, BruteForce };

/// Certificate stage: current value m_i and stage upper bound mbar_i.
struct CertEntry {
  double m = 0.0;
  double mbar = 0.0;
};

struct MaximizationResult {
  PathStub maximizer;
  PathStub maximizer2;  // second component for pair runs
  bool is_pair = false;
  double value = 0.0;
  std::vector<CertEntry> certificate;
  int iterations = 0;
  MaxMethod method = MaxMethod::Frozen;
};

/// Exact maximum over enumerate_continuations(w0); ties broken by first
/// position in the enumeration order.
MaximizationResult brute_force_sup(const PathFunctional& u, const PathStub& w0,
                                   const SpatialGrid& q, const EnumOptions& opt);

/// Staged left-frozen maximization. Stage 0 applies the terminal bump
/// maximization, then each stage advances to the shortest further
/// continuation prefix achieving at least (m_i + mbar_i)/2, stopping when
/// m_i = mbar_i. The past of w0 is never modified.
MaximizationResult left_frozen_maximize(const PathFunctional& u, const PathStub& w0,
                                        const SpatialGrid& q, const EnumOptions& opt);

using PairFunctional = std::function<double(const PathStub&, const PathStub&)>;

struct PairEnumOptions {
  int k_max1 = 0;
  int k_max2 = 0;
  bool synchronous = false;  // force equal time indices
  double tube_radius = std::numeric_limits<double>::infinity();  // sup-norm tube
  double window = std::numeric_limits<double>::infinity();       // |t - s| cap
  bool interior_only = false;
  std::size_t cap = 1'000'000;
};

MaximizationResult brute_force_sup_pair(const PairFunctional& u, const PathStub& w0,
                                        const PathStub& v0, const SpatialGrid& q,
                                        const PairEnumOptions& opt);

/// Two-path version: stages advance prefix pairs with strictly increasing
/// combined time index, balanced between the components.
MaximizationResult left_frozen_maximize_pair(const PairFunctional& u, const PathStub& w0,
                                             const PathStub& v0, const SpatialGrid& q,
                                             const PairEnumOptions& opt);

struct RmaxReport {
  bool ok = true;
  double worst_violation = 0.0;  // max over continuations of u - value, clipped at 0
};

/// Re-enumerates continuations of the maximizer and confirms none exceeds
/// the reported value.
RmaxReport verify_rmax(const PathFunctional& u, const MaximizationResult& r,
                       const SpatialGrid& q, const EnumOptions& opt);

RmaxReport verify_rmax_pair(const PairFunctional& u, const MaximizationResult& r,
                            const SpatialGrid& q, const PairEnumOptions& opt);

struct FirstOrderConditions {
  double dt_val = 0.0;
  double dx_norm = 0.0;
  double dxx_eig_max = 0.0;
  bool dt_ok = false;
  bool dx_ok = false;
  bool dxx_ok = false;
  bool all() const { return dt_ok && dx_ok && dxx_ok; }
};

/// Sign checks at a continuation-maximal interior stub: D_t <= tol,
/// |D_x| <= tol, lambda_max(D_xx) <= tol.
FirstOrderConditions first_order_conditions(const PathFunctional& u, const PathStub& wbar,
                                            const SpatialGrid& q, double tol = 1e-6);

}  // namespace ppde

#endif
