#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace liespin {

/// Scalar function of time used for the polar field components and for the
/// D(t) coefficient of z-axis targets.
class Program {
 public:
  struct Const {
    double value = 0.0;
  };
  struct Linear {
    double v0 = 0.0;
    double slope = 0.0;
  };
  /// amp * sin(freq * t + phase) + offset
  struct Sinusoid {
    double amp = 0.0;
    double freq = 0.0;
    double phase = 0.0;
    double offset = 0.0;
  };
  /// Piecewise-linear interpolation through (t, v) samples.
  struct Table {
    std::vector<std::pair<double, double>> samples;
  };
  /// Pointwise sum of other programs.
  struct Sum {
    std::vector<Program> terms;
  };

  using Variant = std::variant<Const, Linear, Sinusoid, Table, Sum>;

  Program() : Program(Const{}) {}
  Program(double value) : Program(Const{value}) {}  // NOLINT: implicit constants read naturally
  Program(Const p);
  Program(Linear p);
  Program(Sinusoid p);
  Program(Table p);
  Program(Sum p);

  const Variant& kind() const { return kind_; }

  double value(double t) const;
  double derivative(double t) const;
  /// Exact integral over [a, b] for every kind.
  double integral(double a, double b) const;
  bool is_constant() const;
  /// The value of a constant program; empty otherwise.
  std::optional<double> constant_value() const;

  double operator()(double t) const { return value(t); }

 private:
  Variant kind_;
};

}  // namespace liespin
