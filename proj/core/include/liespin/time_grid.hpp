#pragma once

#include <cstddef>
#include <vector>

namespace liespin {

/// Uniform time grid t0, t0 + h, ..., t1 with `steps` intervals.
class TimeGrid {
 public:
  TimeGrid(double t0, double t1, std::size_t steps);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  std::size_t steps() const { return steps_; }
  std::size_t size() const { return steps_ + 1; }
  double step() const { return (t1_ - t0_) / static_cast<double>(steps_); }

  // Exact endpoints: the last point is t1, not t0 + steps*h.
  double at(std::size_t i) const;
  std::vector<double> points() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double t0_;
  double t1_;
  std::size_t steps_;
};

}  // namespace liespin
