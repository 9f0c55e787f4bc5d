#include "liespin/time_grid.hpp"

#include <cmath>

#include "liespin/errors.hpp"

namespace liespin {

TimeGrid::TimeGrid(double t0, double t1, std::size_t steps) : t0_(t0), t1_(t1), steps_(steps) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw InvalidArgument("time grid: non-finite endpoint");
  if (!(t1 > t0)) throw InvalidArgument("time grid: t1 must exceed t0");
  if (steps < 1) throw InvalidArgument("time grid: at least one step required");
}

double TimeGrid::at(std::size_t i) const {
  if (i >= steps_) return i == steps_ ? t1_ : t0_ + static_cast<double>(i) * step();
  return t0_ + static_cast<double>(i) * step();
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
  return out;
}

}  // namespace liespin
