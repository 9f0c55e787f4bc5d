#include "liespin/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liespin/errors.hpp"

namespace liespin {
namespace {

constexpr double kMinSinGamma = 1e-9;
constexpr double kPoleMargin = 1e-9;

bool valid_gamma(double gamma) {
  return std::abs(std::sin(gamma)) > kMinSinGamma && std::abs(gamma) < M_PI - kPoleMargin;
}

double differential_rhs(double magnitude, double theta, double gamma) {
  return magnitude * std::sin(theta + gamma) / std::sin(gamma);
}

double max_differential_residual(const PolarTrack& track, double gamma) {
  double worst = 0.0;
  for (const auto& s : track.samples) {
    if (s.degenerate) continue;
    worst = std::max(worst, std::abs(s.phi_dot - differential_rhs(s.magnitude, s.theta, gamma)));
  }
  return worst;
}

double field_scale(const PolarTrack& track) {
  double max_phi_dot = 0.0;
  for (const auto& s : track.samples) {
    if (!s.degenerate) max_phi_dot = std::max(max_phi_dot, std::abs(s.phi_dot));
  }
  const double scale = track.max_magnitude + max_phi_dot;
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::integrable: return "integrable";
    case Verdict::not_integrable: return "not_integrable";
    case Verdict::degenerate: return "degenerate";
  }
  return "unknown";
}

std::string to_string(TanBranch b) { return b == TanBranch::plus ? "plus" : "minus"; }

ResolvedTolerance resolve_tolerance(const IntegrabilityTolerance& tol, const PolarTrack& track) {
  const double scale = field_scale(track);
  if (tol.residual) {
    if (!(*tol.residual > 0.0)) throw InvalidArgument("tolerance: residual tolerance must be positive");
    return {*tol.residual, *tol.residual / scale};
  }
  if (!(tol.relative > 0.0)) throw InvalidArgument("tolerance: relative tolerance must be positive");
  return {tol.relative * scale, tol.relative};
}

std::optional<GammaSolution> solve_gamma(const PolarTrack& track, const IntegrabilityTolerance& tol) {
  std::vector<double> per_sample;
  for (const auto& s : track.samples) {
    if (s.degenerate) continue;
    if (!(s.magnitude > 0.0)) throw DegenerateField("solve_gamma: vanishing field");
    per_sample.push_back(std::atan2(std::sin(s.theta), s.phi_dot / s.magnitude - std::cos(s.theta)));
  }
  if (per_sample.empty()) throw DegenerateField("solve_gamma: azimuth undefined at every sample");

  // Averaging deviations from the first sample keeps the mean exact for constant gamma.
  const double ref = per_sample.front();
  double deviation = 0.0;
  for (double g : per_sample) deviation += g - ref;
  const double mean = ref + deviation / static_cast<double>(per_sample.size());
  double spread = 0.0;
  for (double g : per_sample) spread = std::max(spread, std::abs(g - mean));

  const auto resolved = resolve_tolerance(tol, track);
  if (spread > resolved.gamma) return std::nullopt;

  // tan(gamma) fixes gamma only mod pi; the two representatives give the two
  // branches of tan(gamma/2).
  const double principal = mean;
  const double shifted = mean - M_PI;
  std::optional<double> best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (double candidate : {principal, shifted}) {
    if (!valid_gamma(candidate)) continue;
    const double r = max_differential_residual(track, candidate);
    if (!best || r < best_residual - resolved.residual) {
      best = candidate;
      best_residual = r;
    }
  }
  if (!best) return std::nullopt;
  return GammaSolution{*best, *best > 0.0 ? TanBranch::plus : TanBranch::minus, spread};
}

double compute_D(double magnitude, double theta, double gamma) {
  const double c = std::cos(0.5 * gamma);
  if (std::abs(c) < 0.5 * kPoleMargin) throw PoleError("compute_D: cos(gamma/2) vanishes");
  return magnitude * std::cos(0.5 * gamma + theta) / c;
}

RotatingBranches closed_form_D_rotating(double magnitude, double theta, double omega) {
  const double disc = omega * omega - 2.0 * omega * magnitude * std::cos(theta) + magnitude * magnitude;
  if (disc < -1e-12 * (omega * omega + magnitude * magnitude)) {
    throw ConsistencyError("closed_form_D_rotating: negative discriminant");
  }
  const double root = std::sqrt(std::max(0.0, disc));
  RotatingBranches out;
  out.d_plus = omega + root;
  out.d_minus = omega - root;
  // B tan(gamma/2) sin(theta) = -omega + B cos(theta) +- root; the + root gives D = omega - root.
  const double transverse = magnitude * std::sin(theta);
  if (transverse == 0.0) {
    out.gamma_plus = out.gamma_minus = std::numeric_limits<double>::quiet_NaN();
  } else {
    const double base = -omega + magnitude * std::cos(theta);
    out.gamma_minus = 2.0 * std::atan2(base + root, transverse);
    out.gamma_plus = 2.0 * std::atan2(base - root, transverse);
  }
  return out;
}

IntegrabilityReport check_integrability(const FieldSpec& field, double gamma, const TimeGrid& grid,
                                        const IntegrabilityTolerance& tol) {
  if (!std::isfinite(gamma) || std::abs(std::sin(gamma)) <= kMinSinGamma) {
    throw PreconditionError("check_integrability: sin(gamma) must not vanish");
  }
  IntegrabilityReport report;
  report.gamma = gamma;
  PolarTrack track;
  try {
    track = to_polar_track(field, grid);
  } catch (const DegenerateField& e) {
    report.verdict = Verdict::degenerate;
    report.degenerate_samples = grid.size();
    report.message = e.what();
    return report;
  }
  report.tolerance = resolve_tolerance(tol, track);
  report.degenerate_samples = track.degenerate_count;

  const double x1 = std::cos(0.5 * gamma);
  const double s = std::sin(0.5 * gamma);
  report.times.reserve(track.samples.size());
  report.d_samples.reserve(track.samples.size());
  for (const auto& p : track.samples) {
    const double d = compute_D(p.magnitude, p.theta, gamma);
    report.times.push_back(p.t);
    report.d_samples.push_back(d);
    if (p.degenerate) continue;
    ++report.samples_used;
    const Eigen::Vector3d b = eval_cartesian(field, p.t);
    const double x2 = -s * std::cos(p.phi);
    const double y2 = s * std::sin(p.phi);
    report.r_algebraic_1 = std::max(report.r_algebraic_1, std::abs(-b[1] * x2 - b[0] * y2));
    report.r_algebraic_2 = std::max(report.r_algebraic_2, std::abs((b[2] - d) * x1 + b[0] * x2 - b[1] * y2));
    report.r_differential = std::max(report.r_differential,
                                     std::abs(p.phi_dot - differential_rhs(p.magnitude, p.theta, gamma)));
  }
  const double t = report.tolerance.residual;
  const bool ok = report.r_algebraic_1 < t && report.r_algebraic_2 < t && report.r_differential < t;
  report.verdict = ok ? Verdict::integrable : Verdict::not_integrable;
  report.message = ok ? "all residuals below tolerance" : "integrability residuals exceed tolerance";
  return report;
}

IntegrabilityReport analyze_integrability(const FieldSpec& field, const TimeGrid& grid,
                                          std::optional<double> gamma, const IntegrabilityTolerance& tol) {
  if (gamma) return check_integrability(field, *gamma, grid, tol);

  PolarTrack track;
  try {
    track = to_polar_track(field, grid);
  } catch (const DegenerateField& e) {
    IntegrabilityReport report;
    report.verdict = Verdict::degenerate;
    report.degenerate_samples = grid.size();
    report.message = e.what();
    return report;
  }
  const auto solution = solve_gamma(track, tol);
  if (!solution) {
    IntegrabilityReport report;
    report.verdict = Verdict::not_integrable;
    report.tolerance = resolve_tolerance(tol, track);
    report.degenerate_samples = track.degenerate_count;
    report.message = "no constant gamma satisfies the differential condition";
    return report;
  }
  auto report = check_integrability(field, solution->gamma, grid, tol);
  report.solution = solution;
  return report;
}

GroupCurve a_gamma_curve(const FieldSpec& field, double gamma) {
  // Validates gamma once up front.
  (void)su2::AGammaElement(gamma, 0.0);
  GroupCurve curve;
  curve.value = [field, gamma](double t) { return su2::AGammaElement(gamma, polar_at(field, t).phi).embed(); };
  curve.derivative = [field, gamma](double t) -> Eigen::Vector4d {
    const auto p = polar_at(field, t);
    const double s = std::sin(0.5 * gamma);
    return {0.0, s * std::sin(p.phi) * p.phi_dot, 0.0, s * std::cos(p.phi) * p.phi_dot};
  };
  return curve;
}

GroupCurve connecting_curve(const FieldSpec& field, double gamma, const TimeGrid& grid,
                            const IntegrabilityTolerance& tol) {
  const auto report = check_integrability(field, gamma, grid, tol);
  if (report.verdict != Verdict::integrable) {
    throw PreconditionError("connecting_curve: field is " + to_string(report.verdict) + " for gamma = " +
                            std::to_string(gamma));
  }
  return a_gamma_curve(field, gamma);
}

ExactPropagator::ExactPropagator(FieldSpec field, double gamma, SpinQuantumNumber spin, PropagatorOptions options)
    : field_(std::move(field)), gamma_(gamma), ops_(build_spin_operators(spin)), options_(options) {
  if (!std::isfinite(gamma) || std::abs(std::sin(gamma)) <= kMinSinGamma) {
    throw PreconditionError("ExactPropagator: sin(gamma) must not vanish");
  }
  if (!(options_.quadrature_step > 0.0)) throw InvalidArgument("ExactPropagator: quadrature step must be positive");
  if (const auto bt = constant_magnitude_and_tilt(field_)) constant_d_ = compute_D(bt->first, bt->second, gamma_);
  const auto gbar_ref = su2::AGammaElement(gamma_, polar_at(field_, options_.reference_time).phi).embed();
  w_ref_inverse_ = represent(gbar_ref, ops_);
}

double ExactPropagator::d(double t) const {
  if (constant_d_) return *constant_d_;
  const auto p = polar_at(field_, t);
  return compute_D(p.magnitude, p.theta, gamma_);
}

double ExactPropagator::simpson(double a, double b) const {
  if (a == b) return 0.0;
  const auto panels = static_cast<std::size_t>(
      2 * std::max<double>(1.0, std::ceil(std::abs(b - a) / (2.0 * options_.quadrature_step))));
  const double h = (b - a) / static_cast<double>(panels);
  double acc = d(a) + d(b);
  for (std::size_t k = 1; k < panels; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * d(a + static_cast<double>(k) * h);
  return acc * h / 3.0;
}

double ExactPropagator::theta(double t) const {
  if (constant_d_) return *constant_d_ * (t - options_.reference_time);
  return simpson(options_.reference_time, t);
}

UnitaryMatrix ExactPropagator::w(double t) const {
  const auto gbar = su2::AGammaElement(gamma_, polar_at(field_, t).phi).embed();
  return represent(su2::inverse(gbar), ops_);
}

UnitaryMatrix ExactPropagator::evaluate(double t, double big_theta) const {
  const int n = ops_.dimension();
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i) phases[i] = std::polar(1.0, -big_theta * ops_.sz(i, i).real());
  return w(t) * phases.asDiagonal() * w_ref_inverse_;
}

UnitaryMatrix ExactPropagator::operator()(double t) const { return evaluate(t, theta(t)); }

std::vector<double> ExactPropagator::theta_on_grid(const TimeGrid& grid) const {
  std::vector<double> out(grid.size());
  out[0] = theta(grid.at(0));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    out[i] = constant_d_ ? theta(grid.at(i)) : out[i - 1] + simpson(grid.at(i - 1), grid.at(i));
  }
  return out;
}

std::vector<UnitaryMatrix> ExactPropagator::on_grid(const TimeGrid& grid) const {
  const auto thetas = theta_on_grid(grid);
  std::vector<UnitaryMatrix> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(evaluate(grid.at(i), thetas[i]));
  return out;
}

ExactPropagator exact_propagator(const FieldSpec& field, double gamma, SpinQuantumNumber spin, const TimeGrid& grid,
                                 const IntegrabilityTolerance& tol, PropagatorOptions options) {
  const auto report = check_integrability(field, gamma, grid, tol);
  if (report.verdict != Verdict::integrable) {
    throw PreconditionError("exact_propagator: field is " + to_string(report.verdict) + " for gamma = " +
                            std::to_string(gamma) + " (r_differential = " + std::to_string(report.r_differential) +
                            ")");
  }
  return ExactPropagator(field, gamma, spin, options);
}

}  // namespace liespin
