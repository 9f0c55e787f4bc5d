#include "liespin/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liespin/detail/overloaded.hpp"
#include "liespin/errors.hpp"

namespace liespin {
namespace {

using detail::Overloaded;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string("field: non-finite ") + what);
}

// Wraps an angle difference into (-pi, pi].
double wrap_pi(double d) {
  d = std::remainder(d, 2.0 * M_PI);
  return d == -M_PI ? M_PI : d;
}

Eigen::Vector3d from_polar(double b, double theta, double phi) {
  const double st = std::sin(theta);
  return {b * st * std::cos(phi), b * st * std::sin(phi), b * std::cos(theta)};
}

Eigen::Vector3d table_eval(const CartesianTable& tab, double t) {
  const auto& s = tab.samples;
  if (t < s.front().t || t > s.back().t) {
    throw RangeError("field table: t = " + std::to_string(t) + " outside [" +
                     std::to_string(s.front().t) + ", " + std::to_string(s.back().t) + "]");
  }
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double x, const CartesianSample& p) { return x < p.t; });
  auto i = static_cast<std::size_t>(std::distance(s.begin(), it));
  i = std::min(i == 0 ? 0 : i - 1, s.size() - 2);
  const auto& a = s[i];
  const auto& b = s[i + 1];
  const double w = (t - a.t) / (b.t - a.t);
  return {a.bx + w * (b.bx - a.bx), a.by + w * (b.by - a.by), a.bz + w * (b.bz - a.bz)};
}

bool transverse_degenerate(const Eigen::Vector3d& b) {
  const double mag = b.norm();
  return mag == 0.0 || std::hypot(b[0], b[1]) <= kDegenerateRelative * mag;
}

double table_phi_dot(const CartesianTable& tab, double t) {
  const double lo = tab.samples.front().t;
  const double hi = tab.samples.back().t;
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  const double ta = std::max(lo, t - h);
  const double tb = std::min(hi, t + h);
  const auto ba = table_eval(tab, ta);
  const auto bb = table_eval(tab, tb);
  if (transverse_degenerate(ba) || transverse_degenerate(bb)) {
    throw DegenerateField("phi_dot: azimuth undefined near t = " + std::to_string(t));
  }
  const double d = wrap_pi(std::atan2(bb[1], bb[0]) - std::atan2(ba[1], ba[0]));
  return d / (tb - ta);
}

}  // namespace

FieldSpec::FieldSpec(ConstantField f) : kind_(f) {
  require_finite(f.bx, "Bx");
  require_finite(f.by, "By");
  require_finite(f.bz, "Bz");
}

FieldSpec::FieldSpec(RotatingField f) : kind_(f) {
  require_finite(f.magnitude, "B");
  require_finite(f.theta, "theta");
  require_finite(f.omega, "omega");
  require_finite(f.phi0, "phi0");
  if (f.magnitude < 0.0) throw InvalidArgument("rotating field: B must be non-negative");
  if (f.theta < 0.0 || f.theta > M_PI) throw InvalidArgument("rotating field: theta must lie in [0, pi]");
}

FieldSpec::FieldSpec(PolarField f) : kind_(std::move(f)) {}

FieldSpec::FieldSpec(CartesianTable f) : kind_(std::move(f)) {
  const auto& s = std::get<CartesianTable>(kind_).samples;
  if (s.size() < 2) throw InvalidArgument("field table: need at least two samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    require_finite(s[i].t, "table time");
    require_finite(s[i].bx, "Bx");
    require_finite(s[i].by, "By");
    require_finite(s[i].bz, "Bz");
    if (i > 0 && !(s[i].t > s[i - 1].t)) {
      throw InvalidArgument("field table: time stamps must be strictly increasing");
    }
  }
}

Eigen::Vector3d eval_cartesian(const FieldSpec& f, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantField& c) { return Eigen::Vector3d{c.bx, c.by, c.bz}; },
          [t](const RotatingField& r) {
            return from_polar(r.magnitude, r.theta, r.omega * t + r.phi0);
          },
          [t](const PolarField& p) {
            return from_polar(p.magnitude(t), p.theta(t), p.phi(t));
          },
          [t](const CartesianTable& tab) { return table_eval(tab, t); },
      },
      f.kind());
}

double phi_dot(const FieldSpec& f, double t) {
  const auto b = eval_cartesian(f, t);
  return std::visit(
      Overloaded{
          [&](const ConstantField&) {
            if (transverse_degenerate(b)) throw DegenerateField("phi_dot: field along the z axis");
            return 0.0;
          },
          [&](const RotatingField& r) {
            if (transverse_degenerate(b)) throw DegenerateField("phi_dot: field along the z axis");
            return r.omega;
          },
          [&](const PolarField& p) {
            if (transverse_degenerate(b)) {
              throw DegenerateField("phi_dot: azimuth undefined at t = " + std::to_string(t));
            }
            return p.phi.derivative(t);
          },
          [&](const CartesianTable& tab) { return table_phi_dot(tab, t); },
      },
      f.kind());
}

PolarTrack to_polar_track(const FieldSpec& f, const TimeGrid& grid) {
  PolarTrack track;
  track.samples.resize(grid.size());
  std::vector<Eigen::Vector3d> cart(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cart[i] = eval_cartesian(f, grid.at(i));
    track.max_magnitude = std::max(track.max_magnitude, cart[i].norm());
  }
  const double eps = kDegenerateRelative * track.max_magnitude;

  std::optional<double> prev_phi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto& s = track.samples[i];
    const auto& b = cart[i];
    s.t = grid.at(i);
    s.magnitude = b.norm();
    s.theta = s.magnitude > 0.0 ? std::acos(std::clamp(b[2] / s.magnitude, -1.0, 1.0)) : 0.0;
    const double transverse = std::hypot(b[0], b[1]);
    s.degenerate = s.magnitude == 0.0 || transverse <= eps;
    if (!s.degenerate) {
      try {
        s.phi_dot = phi_dot(f, s.t);
      } catch (const DegenerateField&) {
        s.degenerate = true;
      }
    }
    if (s.degenerate) {
      ++track.degenerate_count;
      s.phi = prev_phi.value_or(0.0);
      s.phi_dot = 0.0;
      continue;
    }
    const double raw = std::atan2(b[1], b[0]);
    s.phi = prev_phi ? *prev_phi + wrap_pi(raw - *prev_phi) : raw;
    if (!prev_phi) {
      // Leading degenerate samples take the first defined azimuth.
      for (std::size_t k = 0; k < i; ++k) track.samples[k].phi = s.phi;
    }
    prev_phi = s.phi;
  }
  if (track.degenerate_count == track.samples.size()) {
    throw DegenerateField("polar track: azimuth undefined at every sample");
  }
  return track;
}

PolarSample polar_at(const FieldSpec& f, double t) {
  PolarSample s;
  s.t = t;
  std::visit(Overloaded{
                 [&](const RotatingField& r) {
                   s.magnitude = r.magnitude;
                   s.theta = r.theta;
                   s.phi = r.omega * t + r.phi0;
                   s.phi_dot = r.omega;
                 },
                 [&](const PolarField& p) {
                   s.magnitude = p.magnitude(t);
                   s.theta = p.theta(t);
                   s.phi = p.phi(t);
                   s.phi_dot = p.phi.derivative(t);
                 },
                 [&](const auto&) {
                   const auto b = eval_cartesian(f, t);
                   s.magnitude = b.norm();
                   s.theta = s.magnitude > 0.0 ? std::acos(std::clamp(b[2] / s.magnitude, -1.0, 1.0)) : 0.0;
                   s.phi = std::atan2(b[1], b[0]);
                   try {
                     s.phi_dot = phi_dot(f, t);
                   } catch (const DegenerateField&) {
                     s.phi_dot = 0.0;
                   }
                 },
             },
             f.kind());
  s.degenerate = transverse_degenerate(from_polar(s.magnitude, s.theta, s.phi));
  return s;
}

std::optional<std::pair<double, double>> constant_magnitude_and_tilt(const FieldSpec& f) {
  return std::visit(
      Overloaded{
          [](const ConstantField& c) -> std::optional<std::pair<double, double>> {
            const Eigen::Vector3d b{c.bx, c.by, c.bz};
            const double mag = b.norm();
            return std::pair{mag, mag > 0.0 ? std::acos(std::clamp(c.bz / mag, -1.0, 1.0)) : 0.0};
          },
          [](const RotatingField& r) -> std::optional<std::pair<double, double>> {
            return std::pair{r.magnitude, r.theta};
          },
          [](const PolarField& p) -> std::optional<std::pair<double, double>> {
            const auto b = p.magnitude.constant_value();
            const auto theta = p.theta.constant_value();
            if (b && theta) return std::pair{*b, *theta};
            return std::nullopt;
          },
          [](const CartesianTable&) -> std::optional<std::pair<double, double>> {
            return std::nullopt;
          },
      },
      f.kind());
}

}  // namespace liespin
