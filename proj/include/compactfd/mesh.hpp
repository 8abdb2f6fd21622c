#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "compactfd/algebra.hpp"

namespace compactfd {

/// Uniform 1-D grid with N intervals on [x_left, x_right].
class Grid1D {
 public:
  /// Throws DegenerateDomain unless N >= 2 and x_right > x_left.
  Grid1D(double x_left, double x_right, std::size_t intervals);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  std::size_t intervals() const { return intervals_; }
  std::size_t nodes() const { return intervals_ + 1; }
  double spacing() const { return h_; }

  /// Endpoint-anchored node position; node(N) is exactly x_right.
  double node(std::size_t j) const;
  std::vector<double> node_positions() const;

  /// The grid with half as many intervals (N must be even).
  Grid1D coarsened() const;
  Grid1D refined() const { return Grid1D(x_left_, x_right_, 2 * intervals_); }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_left_;
  double x_right_;
  std::size_t intervals_;
  double h_;
};

inline Grid1D make_grid(double x_left, double x_right, std::size_t intervals) {
  return Grid1D(x_left, x_right, intervals);
}

/// Temporal ladder t_n = n * tau, n = 0..M.
class TimeGrid {
 public:
  TimeGrid(double tau, std::size_t steps);

  /// Steps of length close to `nominal_tau` landing exactly on `final_time`:
  /// M = max(1, round(T / nominal_tau)), tau = T / M. T = 0 gives M = 0.
  static TimeGrid covering(double final_time, double nominal_tau);

  double tau() const { return tau_; }
  std::size_t steps() const { return steps_; }
  double final_time() const { return tau_ * static_cast<double>(steps_); }
  double time(std::size_t n) const { return tau_ * static_cast<double>(n); }

 private:
  double tau_;
  std::size_t steps_;
};

/// nu = D tau / h^2.
double courant(double diffusion, double tau, double h);
/// System variant: max(D1, D2) tau / h^2.
double courant(double d1, double d2, double tau, double h);
/// Inverse use: the time step giving Courant number nu.
double tau_for_courant(double nu, double diffusion, double h);

enum class ComponentKind { RealScalar, RealPair, ComplexScalar };

const char* to_string(ComponentKind kind);

template <class V>
constexpr ComponentKind kind_of();
template <>
constexpr ComponentKind kind_of<double>() { return ComponentKind::RealScalar; }
template <>
constexpr ComponentKind kind_of<Vec2>() { return ComponentKind::RealPair; }
template <>
constexpr ComponentKind kind_of<Complex>() { return ComponentKind::ComplexScalar; }

/// Per-node state on a grid. The component kind is carried as the active
/// alternative of the storage variant and never changes after construction.
class GridFunction {
 public:
  using Storage = std::variant<std::vector<double>, std::vector<Vec2>, std::vector<Complex>>;

  GridFunction() = default;
  template <class V>
  explicit GridFunction(std::vector<V> values) : storage_(std::move(values)) {}

  ComponentKind kind() const { return static_cast<ComponentKind>(storage_.index()); }
  std::size_t size() const;
  /// Real components per node (1 or 2).
  int components() const { return kind() == ComponentKind::RealScalar ? 1 : 2; }
  double component(std::size_t j, int c) const;
  /// Euclidean modulus of the node value.
  double modulus(std::size_t j) const;

  /// Typed view; throws std::bad_variant_access on kind mismatch.
  template <class V>
  std::span<const V> values() const { return std::get<std::vector<V>>(storage_); }
  template <class V>
  std::span<V> values() { return std::get<std::vector<V>>(storage_); }

  const Storage& storage() const { return storage_; }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  Storage storage_;
};

/// Keeps every second node: output(j) = fine(2j). The fine function must have
/// an even number of intervals. Throws IncompatibleGrids otherwise.
GridFunction restrict_to_coarse(const GridFunction& fine);
/// Applies restrict_to_coarse until `factor` (a power of two) is consumed.
GridFunction restrict_by(const GridFunction& fine, std::size_t factor);

/// Pointwise a - b; sizes and kinds must match.
GridFunction difference(const GridFunction& a, const GridFunction& b);

}  // namespace compactfd
