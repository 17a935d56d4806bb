#ifndef PPDE_JETS_HPP
#define PPDE_JETS_HPP

#include "ppde/functional.hpp"

namespace ppde {

/// Second-order jet candidate (a, p, X), X symmetric.
struct Jet {
  double a = 0.0;
  Vec p;
  Mat X;
};

struct FirstOrderJet {
  double a = 0.0;
  Vec p;
};

/// Data for the doubled-variable matrix conditions.
struct IshiiCertificate {
  double alpha = 1.0;
  double eps = 1.0;
  Mat A;        // 2d x 2d
  Mat X1, X2;   // d x d
  double b1 = 0.0, b2 = 0.0;
  double dt_phi = 0.0;  // bound for b1 - b2
};

struct JetProbeOptions {
  double radius = 0.125;  // coarsest spatial probe radius
  int levels = 3;         // radius ladder r, r/2, ...
  int max_dt_steps = 2;   // horizontal probes delta in {0, dt, .., max*dt}
  double tol = 1e-8;
};

struct JetTestReport {
  bool pass = false;
  double margin = 0.0;  // worst normalized excess at the finest radius
  int skipped = 0;      // probes escaping the closed box
};

/// Superjet membership probe: for every (delta, x) probe the excess
/// u((w^x)_{t,delta}) - [u(w) + a*delta + <p,x> + x'Xx/2], normalized by
/// delta + |x|^2, must be <= tol and nonincreasing down the radius ladder.
/// Semi-decision: finitely many probes can only falsify, never certify.
JetTestReport superjet_test(const PathFunctional& u, const PathStub& w, const Jet& jet,
                            const SpatialGrid& q, const JetProbeOptions& opt = {});

/// Mirror via P^{2,-}u = -P^{2,+}(-u).
JetTestReport subjet_test(const PathFunctional& u, const PathStub& w, const Jet& jet,
                          const SpatialGrid& q, const JetProbeOptions& opt = {});

/// Packs the exact derivatives of a smooth test function into a jet.
Jet jet_from_test_function(const PathFunctional& phi, const PathStub& w);

/// Touching condition for a test function: phi(w) = u(w) and phi >= u over
/// the probe set.
bool touch_check(const PathFunctional& phi, const PathFunctional& u, const PathStub& w,
                 const SpatialGrid& q, const JetProbeOptions& opt = {});

/// Searches lattice-representable approximating sequences for membership in
/// the jet closure: per shrinking radius, some nearby stub (bumps of w, or w
/// itself) must carry the jet. Semi-decision, may return false negatives.
bool closure_jet_search(const PathFunctional& u, const PathStub& w, const Jet& jet,
                        const SpatialGrid& q, int budget = 4);

struct IshiiReport {
  bool lower_ok = false;   // -(1/eps + |A|) I <= blockdiag(X1, -X2)
  bool upper_ok = false;   // blockdiag(X1, -X2) <= A + eps A^2
  bool scalar_ok = false;  // b1 - b2 <= dt_phi
  double lower_margin = 0.0;  // min eigenvalue of the slack matrix
  double upper_margin = 0.0;
  double scalar_margin = 0.0;  // dt_phi - (b1 - b2)
  Vec violating;               // eigenvector of the worst violated block check
  bool ok() const { return lower_ok && upper_ok && scalar_ok; }
};

IshiiReport verify_ishii(const IshiiCertificate& cert);

/// Second-order test for a spatial jet (p, X) of x -> u(w^x) at x = 0.
JetTestReport spatial_jet_test(const PathFunctional& u, const PathStub& w, const Vec& p,
                               const Mat& X, const SpatialGrid& q,
                               const JetProbeOptions& opt = {});

/// Lifts a spatial jet to a parabolic one with a = D_t u(w); membership is
/// confirmed separately via superjet_test.
Jet jet_lift(const PathFunctional& u, const PathStub& w, const Vec& p, const Mat& X,
             const SpatialGrid& q);

/// -u with derivatives negated; used by the subjet duality and tests.
PathFunctional negate(const PathFunctional& u);

}  // namespace ppde

#endif
