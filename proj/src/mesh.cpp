#include "compactfd/mesh.hpp"

#include <cmath>
#include <string>

#include "compactfd/errors.hpp"

namespace compactfd {

Grid1D::Grid1D(double x_left, double x_right, std::size_t intervals)
    : x_left_(x_left), x_right_(x_right), intervals_(intervals), h_(0.0) {
  if (intervals < 2) {
    throw DegenerateDomain("grid needs at least 2 intervals, got " + std::to_string(intervals));
  }
  if (!(x_right > x_left) || !std::isfinite(x_left) || !std::isfinite(x_right)) {
    throw DegenerateDomain("grid needs x_right > x_left");
  }
  h_ = (x_right - x_left) / static_cast<double>(intervals);
}

double Grid1D::node(std::size_t j) const {
  if (j == intervals_) return x_right_;
  return x_left_ + static_cast<double>(j) * h_;
}

std::vector<double> Grid1D::node_positions() const {
  std::vector<double> x(nodes());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = node(j);
  return x;
}

Grid1D Grid1D::coarsened() const {
  if (intervals_ % 2 != 0) {
    throw IncompatibleGrids("cannot coarsen a grid with an odd interval count");
  }
  return Grid1D(x_left_, x_right_, intervals_ / 2);
}

TimeGrid::TimeGrid(double tau, std::size_t steps) : tau_(tau), steps_(steps) {
  if (!(tau > 0.0)) throw Error("time step must be positive");
}

TimeGrid TimeGrid::covering(double final_time, double nominal_tau) {
  if (!(nominal_tau > 0.0)) throw Error("time step must be positive");
  if (final_time < 0.0) throw Error("final time must be non-negative");
  if (final_time == 0.0) return TimeGrid(nominal_tau, 0);
  auto steps = static_cast<std::size_t>(std::llround(final_time / nominal_tau));
  if (steps == 0) steps = 1;
  return TimeGrid(final_time / static_cast<double>(steps), steps);
}

double courant(double diffusion, double tau, double h) {
  if (!(h > 0.0) || !(tau > 0.0)) throw Error("courant: h and tau must be positive");
  return diffusion * tau / (h * h);
}

double courant(double d1, double d2, double tau, double h) {
  return courant(std::max(d1, d2), tau, h);
}

double tau_for_courant(double nu, double diffusion, double h) {
  if (!(nu > 0.0) || !(diffusion > 0.0)) throw Error("tau_for_courant: nu and D must be positive");
  return nu * h * h / diffusion;
}

const char* to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::RealScalar: return "real-scalar";
    case ComponentKind::RealPair: return "real-pair";
    case ComponentKind::ComplexScalar: return "complex-scalar";
  }
  return "unknown";
}

std::size_t GridFunction::size() const {
  return std::visit([](const auto& v) { return v.size(); }, storage_);
}

double GridFunction::component(std::size_t j, int c) const {
  return std::visit(
      [&](const auto& v) {
        using V = typename std::decay_t<decltype(v)>::value_type;
        return ValueTraits<V>::component(v.at(j), c);
      },
      storage_);
}

double GridFunction::modulus(std::size_t j) const {
  return std::visit([&](const auto& v) { return magnitude(v.at(j)); }, storage_);
}

GridFunction restrict_to_coarse(const GridFunction& fine) {
  return std::visit(
      [](const auto& v) -> GridFunction {
        using V = typename std::decay_t<decltype(v)>::value_type;
        if (v.size() < 5 || (v.size() - 1) % 2 != 0) {
          throw IncompatibleGrids("restrict: fine function must have an even number (>= 4) of intervals, got " +
                                  std::to_string(v.empty() ? 0 : v.size() - 1));
        }
        std::vector<V> out((v.size() - 1) / 2 + 1);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = v[2 * j];
        return GridFunction(std::move(out));
      },
      fine.storage());
}

GridFunction restrict_by(const GridFunction& fine, std::size_t factor) {
  if (factor == 0 || (factor & (factor - 1)) != 0) {
    throw IncompatibleGrids("restrict: factor must be a power of two");
  }
  GridFunction out = fine;
  for (; factor > 1; factor /= 2) out = restrict_to_coarse(out);
  return out;
}

GridFunction difference(const GridFunction& a, const GridFunction& b) {
  if (a.kind() != b.kind() || a.size() != b.size()) {
    throw IncompatibleGrids("difference: grid functions differ in kind or size");
  }
  return std::visit(
      [&](const auto& va) -> GridFunction {
        using V = typename std::decay_t<decltype(va)>::value_type;
        auto vb = b.values<V>();
        std::vector<V> out(va.size());
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = va[j] - vb[j];
        return GridFunction(std::move(out));
      },
      a.storage());
}

}  // namespace compactfd
