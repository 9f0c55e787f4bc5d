#include "liespin/program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liespin/detail/overloaded.hpp"
#include "liespin/errors.hpp"

namespace liespin {
namespace {

using detail::Overloaded;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string("program: non-finite ") + what);
}

// Index i of the segment [t_i, t_{i+1}] containing t.
std::size_t segment(const Program::Table& tab, double t) {
  const auto& s = tab.samples;
  if (t < s.front().first || t > s.back().first) {
    throw RangeError("program table: t = " + std::to_string(t) + " outside [" +
                     std::to_string(s.front().first) + ", " + std::to_string(s.back().first) + "]");
  }
  auto it = std::upper_bound(s.begin(), s.end(), t,
                             [](double x, const auto& p) { return x < p.first; });
  auto i = static_cast<std::size_t>(std::distance(s.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, s.size() - 2);
}

double table_value(const Program::Table& tab, double t) {
  const auto i = segment(tab, t);
  const auto [ta, va] = tab.samples[i];
  const auto [tb, vb] = tab.samples[i + 1];
  return va + (vb - va) * (t - ta) / (tb - ta);
}

double table_integral_from_start(const Program::Table& tab, double t) {
  const auto i = segment(tab, t);
  double acc = 0.0;
  for (std::size_t k = 0; k < i; ++k) {
    const auto [ta, va] = tab.samples[k];
    const auto [tb, vb] = tab.samples[k + 1];
    acc += 0.5 * (va + vb) * (tb - ta);
  }
  const double ta = tab.samples[i].first;
  return acc + 0.5 * (tab.samples[i].second + table_value(tab, t)) * (t - ta);
}

}  // namespace

Program::Program(Const p) : kind_(p) { require_finite(p.value, "constant"); }

Program::Program(Linear p) : kind_(p) {
  require_finite(p.v0, "v0");
  require_finite(p.slope, "slope");
}

Program::Program(Sinusoid p) : kind_(p) {
  require_finite(p.amp, "amp");
  require_finite(p.freq, "freq");
  require_finite(p.phase, "phase");
  require_finite(p.offset, "offset");
}

Program::Program(Table p) : kind_(std::move(p)) {
  const auto& s = std::get<Table>(kind_).samples;
  if (s.size() < 2) throw InvalidArgument("program table: need at least two samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    require_finite(s[i].first, "table time");
    require_finite(s[i].second, "table value");
    if (i > 0 && !(s[i].first > s[i - 1].first)) {
      throw InvalidArgument("program table: time stamps must be strictly increasing");
    }
  }
}

Program::Program(Sum p) : kind_(std::move(p)) {
  if (std::get<Sum>(kind_).terms.empty()) throw InvalidArgument("program sum: no terms");
}

double Program::value(double t) const {
  return std::visit(
      Overloaded{
          [](const Const& p) { return p.value; },
          [t](const Linear& p) { return p.v0 + p.slope * t; },
          [t](const Sinusoid& p) { return p.amp * std::sin(p.freq * t + p.phase) + p.offset; },
          [t](const Table& p) { return table_value(p, t); },
          [t](const Sum& p) {
            double acc = 0.0;
            for (const auto& term : p.terms) acc += term.value(t);
            return acc;
          },
      },
      kind_);
}

double Program::derivative(double t) const {
  return std::visit(
      Overloaded{
          [](const Const&) { return 0.0; },
          [](const Linear& p) { return p.slope; },
          [t](const Sinusoid& p) { return p.amp * p.freq * std::cos(p.freq * t + p.phase); },
          [t](const Table& p) {
            // Right-hand slope at interior knots.
            const auto& s = p.samples;
            auto i = segment(p, t);
            if (t == s[i + 1].first && i + 2 < s.size()) ++i;
            return (s[i + 1].second - s[i].second) / (s[i + 1].first - s[i].first);
          },
          [t](const Sum& p) {
            double acc = 0.0;
            for (const auto& term : p.terms) acc += term.derivative(t);
            return acc;
          },
      },
      kind_);
}

double Program::integral(double a, double b) const {
  return std::visit(
      Overloaded{
          [a, b](const Const& p) { return p.value * (b - a); },
          [a, b](const Linear& p) { return p.v0 * (b - a) + 0.5 * p.slope * (b * b - a * a); },
          [a, b](const Sinusoid& p) {
            const double lin = p.offset * (b - a);
            if (p.freq == 0.0) return lin + p.amp * std::sin(p.phase) * (b - a);
            return lin - p.amp / p.freq *
                             (std::cos(p.freq * b + p.phase) - std::cos(p.freq * a + p.phase));
          },
          [a, b](const Table& p) {
            return table_integral_from_start(p, b) - table_integral_from_start(p, a);
          },
          [a, b](const Sum& p) {
            double acc = 0.0;
            for (const auto& term : p.terms) acc += term.integral(a, b);
            return acc;
          },
      },
      kind_);
}

bool Program::is_constant() const {
  return std::visit(
      Overloaded{
          [](const Const&) { return true; },
          [](const Linear& p) { return p.slope == 0.0; },
          [](const Sinusoid& p) { return p.amp == 0.0 || p.freq == 0.0; },
          [](const Table& p) {
            return std::all_of(p.samples.begin(), p.samples.end(),
                               [&](const auto& s) { return s.second == p.samples.front().second; });
          },
          [](const Sum& p) {
            return std::all_of(p.terms.begin(), p.terms.end(),
                               [](const Program& q) { return q.is_constant(); });
          },
      },
      kind_);
}

std::optional<double> Program::constant_value() const {
  if (!is_constant()) return std::nullopt;
  if (const auto* tab = std::get_if<Table>(&kind_)) return tab->samples.front().second;
  if (const auto* sum = std::get_if<Sum>(&kind_)) {
    double acc = 0.0;
    for (const auto& term : sum->terms) acc += *term.constant_value();
    return acc;
  }
  return value(0.0);
}

}  // namespace liespin
