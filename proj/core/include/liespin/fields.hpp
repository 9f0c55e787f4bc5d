#pragma once

// Time-dependent magnetic fields B(t) and their polar decomposition
//   Bx = B sin(theta) cos(phi), By = B sin(theta) sin(phi), Bz = B cos(theta).

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "liespin/program.hpp"
#include "liespin/time_grid.hpp"

namespace liespin {

struct ConstantField {
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;
};

/// B (sin(theta) cos(omega t + phi0), sin(theta) sin(omega t + phi0), cos(theta)).
struct RotatingField {
  double magnitude = 1.0;
  double theta = 0.0;
  double omega = 0.0;
  double phi0 = 0.0;
};

/// Field given by programs for the modulus, the polar and the azimuthal angle.
/// The angles are used as given: theta may leave [0, pi] and phi is never wrapped.
struct PolarField {
  Program magnitude;
  Program theta;
  Program phi;
};

struct CartesianSample {
  double t = 0.0;
  double bx = 0.0;
  double by = 0.0;
  double bz = 0.0;
};

/// Componentwise linear interpolation between samples.
struct CartesianTable {
  std::vector<CartesianSample> samples;
};

/// Validated field description.
class FieldSpec {
 public:
  using Variant = std::variant<ConstantField, RotatingField, PolarField, CartesianTable>;

  FieldSpec(ConstantField f);
  FieldSpec(RotatingField f);
  FieldSpec(PolarField f);
  FieldSpec(CartesianTable f);

  const Variant& kind() const { return kind_; }

 private:
  Variant kind_;
};

struct PolarSample {
  double t = 0.0;
  double magnitude = 0.0;
  double theta = 0.0;
  double phi = 0.0;  // unwrapped
  double phi_dot = 0.0;
  bool degenerate = false;
};

struct PolarTrack {
  std::vector<PolarSample> samples;
  double max_magnitude = 0.0;
  std::size_t degenerate_count = 0;
};

/// Relative threshold on the transverse field B sin(theta) below which the
/// azimuth is considered undefined.
inline constexpr double kDegenerateRelative = 1e-12;

Eigen::Vector3d eval_cartesian(const FieldSpec& f, double t);

/// Polar samples on `grid`: B = |B|, theta = arccos(Bz / B), phi from atan2
/// unwrapped so consecutive samples differ by less than pi. Degenerate samples
/// carry the previous phi forward. Throws DegenerateField when every sample is
/// degenerate.
PolarTrack to_polar_track(const FieldSpec& f, const TimeGrid& grid);

/// d(phi)/dt: analytic for rotating and polar fields, zero for constant
/// fields, central differences (h = 1e-6 max(1, |t|)) for tables.
/// Throws DegenerateField where the azimuth is undefined.
double phi_dot(const FieldSpec& f, double t);

/// Polar parametrisation of the field as the field itself defines it (programs
/// for polar fields, closed form for rotating ones, atan2 otherwise). Unlike
/// to_polar_track it does not fold theta into [0, pi] or unwrap phi.
PolarSample polar_at(const FieldSpec& f, double t);

/// (B, theta) when both are constant in time, which makes D constant.
std::optional<std::pair<double, double>> constant_magnitude_and_tilt(const FieldSpec& f);

}  // namespace liespin
