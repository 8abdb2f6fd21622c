#pragma once

// Reference solvers used only by the tests. They are written from the compact
// Crank-Nicolson form of the scheme,
//
//   (U - u)[j-1] + 10 (U - u)[j] + (U - u)[j+1]
//     = 6 nu ((U + u)[j-1] - 2 (U + u)[j] + (U + u)[j+1])
//       + tau/2 ((F(U) + F(u))[j-1] + 10 (F(U) + F(u))[j] + (F(U) + F(u))[j+1]),
//
// and share no code with the library's relaxation kernels.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "compactfd/problem.hpp"

namespace oracle {

/// Thomas algorithm for a tridiagonal system; sub[0] and sup[n-1] are unused.
inline std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                                  std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

/// One step of the source-free scheme for u_t = D u_xx with Dirichlet values
/// (left, right) at the new level, solved directly.
inline std::vector<double> linear_step(const std::vector<double>& u, double nu, double left, double right) {
  const std::size_t n = u.size() - 2;
  std::vector<double> sub(n, 1.0 - 6.0 * nu), diag(n, 10.0 + 12.0 * nu), sup(n, 1.0 - 6.0 * nu), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + 1;
    rhs[i] = (1.0 + 6.0 * nu) * (u[j - 1] + u[j + 1]) + (10.0 - 12.0 * nu) * u[j];
  }
  rhs.front() -= (1.0 - 6.0 * nu) * left;
  rhs.back() -= (1.0 - 6.0 * nu) * right;
  const auto inner = thomas(sub, diag, sup, rhs);
  std::vector<double> out(u.size());
  out.front() = left;
  out.back() = right;
  for (std::size_t i = 0; i < n; ++i) out[i + 1] = inner[i];
  return out;
}

template <class V>
constexpr int components() {
  return std::is_same_v<V, double> ? 1 : 2;
}

template <class V>
double get(const V& v, int c) {
  if constexpr (std::is_same_v<V, double>) {
    return v;
  } else if constexpr (std::is_same_v<V, compactfd::Vec2>) {
    return c == 0 ? v.u : v.w;
  } else {
    return c == 0 ? v.real() : v.imag();
  }
}

template <class V>
V make(const double* c) {
  if constexpr (std::is_same_v<V, double>) {
    return c[0];
  } else {
    return V{c[0], c[1]};
  }
}

/// Equations of the implicit step, one block per interior node.
template <class V>
Eigen::VectorXd step_equations(const compactfd::Problem<V>& problem, const std::vector<V>& u,
                               const std::vector<V>& next, double tau, double h) {
  const auto nu = problem.diffusion * (tau / (h * h));
  const auto& f = problem.nonlinearity.value;
  constexpr int k = components<V>();
  const std::size_t n = u.size() - 2;
  Eigen::VectorXd e(static_cast<Eigen::Index>(n * k));
  for (std::size_t j = 1; j <= n; ++j) {
    const V d_left = next[j - 1] - u[j - 1];
    const V d_mid = next[j] - u[j];
    const V d_right = next[j + 1] - u[j + 1];
    const V s_left = next[j - 1] + u[j - 1];
    const V s_mid = next[j] + u[j];
    const V s_right = next[j + 1] + u[j + 1];
    const V fsum = (f(next[j - 1]) + f(u[j - 1])) + 10.0 * (f(next[j]) + f(u[j])) + (f(next[j + 1]) + f(u[j + 1]));
    const V eq = (d_left + 10.0 * d_mid + d_right) - 6.0 * (nu * (s_left - 2.0 * s_mid + s_right)) -
                 (0.5 * tau) * fsum;
    for (int c = 0; c < k; ++c) e[static_cast<Eigen::Index>((j - 1) * k + c)] = get(eq, c);
  }
  return e;
}

/// Dense Newton solve of the implicit step with a finite-difference Jacobian,
/// started from the old level. Throws if it does not reach `tolerance`.
template <class V>
std::vector<V> newton_step(const compactfd::Problem<V>& problem, const compactfd::Grid1D& grid,
                           const std::vector<V>& u, double t_n, double tau, double tolerance = 1e-14) {
  constexpr int k = components<V>();
  const std::size_t n = u.size() - 2;
  std::vector<V> x = u;
  const auto [left, right] = problem.boundary.at(t_n + tau);
  x.front() = left;
  x.back() = right;

  const auto unpack = [&](const Eigen::VectorXd& z) {
    std::vector<V> out = x;
    for (std::size_t j = 1; j <= n; ++j) out[j] = make<V>(z.data() + (j - 1) * k);
    return out;
  };
  Eigen::VectorXd z(static_cast<Eigen::Index>(n * k));
  for (std::size_t j = 1; j <= n; ++j) {
    for (int c = 0; c < k; ++c) z[static_cast<Eigen::Index>((j - 1) * k + c)] = get(x[j], c);
  }

  const double h = grid.spacing();
  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::VectorXd e = step_equations(problem, u, unpack(z), tau, h);
    Eigen::MatrixXd jac(e.size(), e.size());
    for (Eigen::Index c = 0; c < z.size(); ++c) {
      const double eps = 1e-7 * std::max(1.0, std::abs(z[c]));
      Eigen::VectorXd zp = z, zm = z;
      zp[c] += eps;
      zm[c] -= eps;
      jac.col(c) = (step_equations(problem, u, unpack(zp), tau, h) - step_equations(problem, u, unpack(zm), tau, h)) /
                   (2.0 * eps);
    }
    const Eigen::VectorXd dz = jac.partialPivLu().solve(e);
    // Backtracking on the residual norm keeps the iteration from wandering
    // when the step is large compared with the curvature of the source.
    double lambda = 1.0;
    const double e0 = e.norm();
    while (lambda > 1e-4 && step_equations(problem, u, unpack(z - lambda * dz), tau, h).norm() > e0 &&
           e0 > 1e-13) {
      lambda *= 0.5;
    }
    z -= lambda * dz;
    if (lambda == 1.0 && dz.lpNorm<Eigen::Infinity>() <= tolerance) return unpack(z);
  }
  throw std::runtime_error("oracle Newton iteration did not converge");
}

}  // namespace oracle
