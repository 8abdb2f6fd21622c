#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "compactfd/algebra.hpp"
#include "compactfd/mesh.hpp"
#include "compactfd/scheme.hpp"

namespace compactfd {

/// Dirichlet data at both ends of the segment.
template <class V>
class BoundaryData {
 public:
  enum class Kind { StaticZero, StaticValues, TimeDependent };
  using Evaluator = std::function<std::pair<V, V>(double)>;

  static BoundaryData zero() { return BoundaryData(Kind::StaticZero, V{}, V{}, {}); }
  static BoundaryData values(V left, V right) { return BoundaryData(Kind::StaticValues, left, right, {}); }
  static BoundaryData time_dependent(Evaluator f) { return BoundaryData(Kind::TimeDependent, V{}, V{}, std::move(f)); }

  Kind kind() const { return kind_; }
  std::pair<V, V> at(double t) const {
    if (kind_ == Kind::TimeDependent) return evaluator_(t);
    return {left_, right_};
  }

 private:
  BoundaryData(Kind kind, V left, V right, Evaluator f)
      : kind_(kind), left_(left), right_(right), evaluator_(std::move(f)) {}

  Kind kind_;
  V left_;
  V right_;
  Evaluator evaluator_;
};

/// A weakly nonlinear problem u_t = D u_xx + F(u) with Dirichlet data.
///
/// `diffusion` is D as it multiplies u_xx: a positive real, one positive real
/// per pair component, or the imaginary unit for the Schroedinger equation.
template <class V>
struct Problem {
  using Value = V;

  std::string name;
  CoefOf<V> diffusion{};
  Nonlinearity<V> nonlinearity;
  JacobianMode jacobian_mode = JacobianMode::Diagonal;
  std::function<V(double x)> initial;
  BoundaryData<V> boundary = BoundaryData<V>::zero();
  /// Analytic solution (t, x) -> value; empty when none is known.
  std::function<V(double t, double x)> exact;
  double x_left = 0.0;
  double x_right = 1.0;
  double final_time = 1.0;
  /// Choices made while constructing the problem, reported with run output.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Largest |D| over components; sets tau = nu h^2 / max|D|.
  double max_diffusion() const {
    if constexpr (std::is_same_v<CoefOf<V>, Vec2>) {
      return std::max(std::abs(diffusion.u), std::abs(diffusion.w));
    } else {
      return std::abs(diffusion);
    }
  }

  /// Courant scalar nu_c = D tau / h^2 in the coefficient algebra.
  CoefOf<V> courant_scalar(double tau, double h) const { return diffusion * (tau / (h * h)); }

  /// Nominal time step for the (max-diffusion) Courant number nu.
  double tau_for(double nu, double h) const { return nu * h * h / max_diffusion(); }

  Grid1D grid(std::size_t intervals) const { return Grid1D(x_left, x_right, intervals); }
};

using AnyProblem = std::variant<Problem<double>, Problem<Vec2>, Problem<Complex>>;

/// Initial data sampled at the nodes; the two end nodes are overwritten with
/// the boundary data at t = 0.
template <class V>
std::vector<V> sample_initial(const Problem<V>& problem, const Grid1D& grid) {
  std::vector<V> u(grid.nodes());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = problem.initial(grid.node(j));
  auto [left, right] = problem.boundary.at(0.0);
  u.front() = left;
  u.back() = right;
  return u;
}

/// The analytic solution sampled at the nodes at time t.
template <class V>
std::vector<V> sample_exact(const Problem<V>& problem, const Grid1D& grid, double t) {
  std::vector<V> u(grid.nodes());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = problem.exact(t, grid.node(j));
  return u;
}

}  // namespace compactfd
