#pragma once

// Integrability of H(t) = B(t).S by reduction to H'(t) = D(t) Sz through a
// connecting curve confined to A_gamma = { exp(gamma sin(b) a1 - gamma cos(b) a2) }.
//
// With the field in polar form (B, theta, phi), the curve b(t) = phi(t) exists
// exactly when gamma is constant and
//   phi_dot = B sin(theta + gamma) / sin(gamma),
// and then
//   D = B cos(gamma/2 + theta) / cos(gamma/2).

#include <optional>
#include <string>
#include <vector>

#include "liespin/fields.hpp"
#include "liespin/liesys.hpp"
#include "liespin/spinrep.hpp"
#include "liespin/time_grid.hpp"

namespace liespin {

/// Sign of tan(gamma/2) in the quadratic relating it to tan(gamma).
enum class TanBranch { plus, minus };

struct GammaSolution {
  double gamma = 0.0;  // in (-pi, pi) \ {0}
  TanBranch branch = TanBranch::plus;
  double constancy_residual = 0.0;  // max |gamma(t) - gamma| over the track
};

enum class Verdict { integrable, not_integrable, degenerate };

std::string to_string(Verdict v);
std::string to_string(TanBranch b);

/// Residual tolerances. When `residual` is unset the differential/algebraic
/// tolerance is relative * (max |B| + max |phi_dot|) and the gamma constancy
/// tolerance is `relative` radians. An explicit `residual` is absolute; the
/// gamma tolerance then scales with it by the same field scale.
struct IntegrabilityTolerance {
  std::optional<double> residual;
  double relative = 1e-8;
};

struct ResolvedTolerance {
  double residual = 0.0;
  double gamma = 0.0;
};

ResolvedTolerance resolve_tolerance(const IntegrabilityTolerance& tol, const PolarTrack& track);

struct IntegrabilityReport {
  std::optional<double> gamma;            // gamma the residuals were evaluated for
  std::optional<GammaSolution> solution;  // present when gamma was solved for
  double r_algebraic_1 = 0.0;
  double r_algebraic_2 = 0.0;
  double r_differential = 0.0;
  std::vector<double> times;
  std::vector<double> d_samples;
  Verdict verdict = Verdict::degenerate;
  ResolvedTolerance tolerance;
  std::size_t samples_used = 0;
  std::size_t degenerate_samples = 0;
  std::string message;
};

/// Per-sample gamma(t) = atan2(sin(theta), phi_dot/B - cos(theta)). Returns the
/// representative in (-pi, pi) \ {0} with the smaller differential residual
/// (ties keep the value in (0, pi)); empty when gamma is not constant within
/// the tolerance or sin(gamma) vanishes. Throws DegenerateField for a track
/// without defined azimuth.
std::optional<GammaSolution> solve_gamma(const PolarTrack& track, const IntegrabilityTolerance& tol = {});

/// D = B cos(gamma/2 + theta) / cos(gamma/2). Throws PoleError where cos(gamma/2) = 0.
double compute_D(double magnitude, double theta, double gamma);

/// The two constant values D = omega +- sqrt(omega^2 - 2 omega B cos(theta) + B^2)
/// for a rotating field, with the gamma that produces each one via compute_D.
struct RotatingBranches {
  double d_plus = 0.0;
  double d_minus = 0.0;
  double gamma_plus = 0.0;   // gamma giving d_plus (tan(gamma/2) <= 0); NaN if undefined
  double gamma_minus = 0.0;  // gamma giving d_minus (tan(gamma/2) >= 0); NaN if undefined
};

RotatingBranches closed_form_D_rotating(double magnitude, double theta, double omega);

/// Samplewise residuals of the two algebraic conditions and of the
/// differential condition for the given gamma. Degenerate samples are skipped;
/// an everywhere-degenerate field yields Verdict::degenerate. Throws
/// PreconditionError when |sin(gamma)| <= 1e-9.
IntegrabilityReport check_integrability(const FieldSpec& field, double gamma, const TimeGrid& grid,
                                        const IntegrabilityTolerance& tol = {});

/// solve_gamma followed by check_integrability, or the check alone when gamma is given.
IntegrabilityReport analyze_integrability(const FieldSpec& field, const TimeGrid& grid,
                                          std::optional<double> gamma = std::nullopt,
                                          const IntegrabilityTolerance& tol = {});

/// t -> A_gamma(phi(t)) with its analytic derivative, phi taken from the
/// field's own polar parametrisation. No integrability check.
GroupCurve a_gamma_curve(const FieldSpec& field, double gamma);

/// a_gamma_curve after verifying integrability on `grid`; throws PreconditionError otherwise.
GroupCurve connecting_curve(const FieldSpec& field, double gamma, const TimeGrid& grid,
                            const IntegrabilityTolerance& tol = {});

struct PropagatorOptions {
  double reference_time = 0.0;    // U(reference_time) = I
  double quadrature_step = 1e-3;  // panel width for Simpson quadrature of D
};

/// U(t) = W(t) exp(-i Theta(t) Sz) W(t_ref)^-1 with W(t) = Phi(gbar(t)^-1),
/// gbar the A_gamma connecting curve and Theta the integral of D from t_ref.
/// The constructor does not check integrability; use exact_propagator for that.
class ExactPropagator {
 public:
  ExactPropagator(FieldSpec field, double gamma, SpinQuantumNumber spin, PropagatorOptions options = {});

  double gamma() const { return gamma_; }
  const SpinOperators& operators() const { return ops_; }
  const FieldSpec& field() const { return field_; }
  /// Set when B and theta are constant, making D constant.
  std::optional<double> constant_d() const { return constant_d_; }

  double d(double t) const;
  /// Integral of D from the reference time; exact for constant D, composite Simpson otherwise.
  double theta(double t) const;
  UnitaryMatrix w(double t) const;
  UnitaryMatrix operator()(double t) const;
  UnitaryMatrix evaluate(double t, double big_theta) const;

  /// U on every grid point, accumulating Theta step by step.
  std::vector<UnitaryMatrix> on_grid(const TimeGrid& grid) const;
  std::vector<double> theta_on_grid(const TimeGrid& grid) const;

 private:
  double simpson(double a, double b) const;

  FieldSpec field_;
  double gamma_;
  SpinOperators ops_;
  PropagatorOptions options_;
  std::optional<double> constant_d_;
  UnitaryMatrix w_ref_inverse_;
};

/// ExactPropagator after verifying integrability on `grid`.
ExactPropagator exact_propagator(const FieldSpec& field, double gamma, SpinQuantumNumber spin,
                                 const TimeGrid& grid, const IntegrabilityTolerance& tol = {},
                                 PropagatorOptions options = {});

}  // namespace liespin
