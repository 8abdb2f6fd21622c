#pragma once

// Kernels of the implicit fourth-order compact scheme
//
//   a0 (U[j-1] + U[j+1]) + b0 U[j]
//     = a1 (u[j-1] + u[j+1]) + b1 u[j]
//       + p (f(u[j-1]) + f(u[j+1]) + f(U[j-1]) + f(U[j+1])) + q (f(U[j]) + f(u[j]))
//
// where u is the known level, U the unknown level and f the nonlinearity.
// With nu = D tau / h^2 the weights are
//   a0 = 2(6nu - 1), a1 = -2(6nu + 1), b0 = -4(6nu + 5), b1 = 4(6nu - 5),
//   p = -tau, q = -10 tau.
// For the Schroedinger case D = i and every weight except p, q is complex.

#include <functional>
#include <type_traits>

#include "compactfd/algebra.hpp"

namespace compactfd {

template <class C>
struct CompactCoefficients {
  C a0{}, a1{}, b0{}, b1{};
  double p = 0.0;
  double q = 0.0;
};

/// Weights for Courant scalar `nu` (real, complex, or one real per pair
/// component) and time step `tau`.
template <class C>
CompactCoefficients<C> compact_coefficients(const C& nu, double tau) {
  if constexpr (std::is_same_v<C, Vec2>) {
    auto a = compact_coefficients(nu.u, tau);
    auto b = compact_coefficients(nu.w, tau);
    return {{a.a0, b.a0}, {a.a1, b.a1}, {a.b0, b.b0}, {a.b1, b.b1}, a.p, a.q};
  } else {
    const C one = C(1.0);
    const C five = C(5.0);
    return {2.0 * (6.0 * nu - one), -2.0 * (6.0 * nu + one), -4.0 * (6.0 * nu + five),
            4.0 * (6.0 * nu - five), -tau, -10.0 * tau};
  }
}

/// Source term of the PDE with its derivative. For pair and complex states the
/// Jacobian is the real 2x2 matrix d(F_1, F_2)/d(u, w).
template <class V>
struct Nonlinearity {
  std::function<V(const V&)> value;
  std::function<JacobianOf<V>(const V&)> jacobian;
};

/// How the 2x2 linearization is used for pair states. Complex states always
/// use the full block because the linear coupling is off-diagonal there.
enum class JacobianMode { Diagonal, Block };

/// Previous-level values and the current guess around node j.
template <class V>
struct NodeStencil {
  V prev_left{}, prev_center{}, prev_right{};
  V guess_left{}, guess_center{}, guess_right{};
};

/// Residual of equation j: right side minus left side. Zero iff the guess
/// satisfies that equation exactly.
template <class V>
V residual(const NodeStencil<V>& s, const CompactCoefficients<CoefOf<V>>& c, const Nonlinearity<V>& phi) {
  const auto& f = phi.value;
  return c.a1 * (s.prev_left + s.prev_right) + c.b1 * s.prev_center +
         c.p * (f(s.prev_left) + f(s.prev_right) + f(s.guess_left) + f(s.guess_right)) +
         c.q * (f(s.guess_center) + f(s.prev_center)) - c.a0 * (s.guess_left + s.guess_right) -
         c.b0 * s.guess_center;
}

/// Guards against near-singular linearizations.
struct LinearizationLimits {
  /// Scalar case: |b0 - q f'| must exceed floor_scale * max(1, |b0|).
  double floor_scale = 1e-8;
  /// Pair/complex case: Frobenius condition number cap of (B0 - q J).
  double condition_cap = 1e12;
};

/// Pointwise linearized correction
///   scalar:       delta = omega r / (b0 - q f'(U))
///   pair/complex: delta = omega (B0 - q J)^{-1} r
/// Throws SingularLinearization when the denominator is below the floor.
double correction(double r, double b0, double q, double jac, double omega, const LinearizationLimits& limits = {});
Vec2 correction(const Vec2& r, const Vec2& b0, double q, const Mat2& jac, double omega, JacobianMode mode,
                const LinearizationLimits& limits = {});
Complex correction(const Complex& r, const Complex& b0, double q, const Mat2& jac, double omega,
                   const LinearizationLimits& limits = {});

/// Solves a 2x2 system, rejecting matrices whose condition number exceeds the cap.
Vec2 solve_2x2(const Mat2& a, const Vec2& rhs, const LinearizationLimits& limits);

}  // namespace compactfd
