#include "compactfd/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "compactfd/errors.hpp"

namespace compactfd {

namespace {

[[noreturn]] void throw_singular(const char* what, double value) {
  std::ostringstream msg;
  msg << "singular linearization (" << what << " = " << value << "); the time step is likely too large";
  throw SingularLinearization(msg.str());
}

}  // namespace

double correction(double r, double b0, double q, double jac, double omega, const LinearizationLimits& limits) {
  const double denom = b0 - q * jac;
  if (!(std::abs(denom) > limits.floor_scale * std::max(1.0, std::abs(b0)))) {
    throw_singular("b0 - q*f'", denom);
  }
  return omega * r / denom;
}

Vec2 solve_2x2(const Mat2& a, const Vec2& rhs, const LinearizationLimits& limits) {
  const double det = a.det();
  if (det == 0.0 || !std::isfinite(det)) throw_singular("det", det);
  const Mat2 inv{a.a22 / det, -a.a12 / det, -a.a21 / det, a.a11 / det};
  const double cond = a.frobenius() * inv.frobenius();
  if (!(cond <= limits.condition_cap)) throw_singular("condition number", cond);
  return inv * rhs;
}

Vec2 correction(const Vec2& r, const Vec2& b0, double q, const Mat2& jac, double omega, JacobianMode mode,
                const LinearizationLimits& limits) {
  if (mode == JacobianMode::Diagonal) {
    return {correction(r.u, b0.u, q, jac.a11, omega, limits), correction(r.w, b0.w, q, jac.a22, omega, limits)};
  }
  const Mat2 a = Mat2::diagonal(b0.u, b0.w) - q * jac;
  return omega * solve_2x2(a, r, limits);
}

Complex correction(const Complex& r, const Complex& b0, double q, const Mat2& jac, double omega,
                   const LinearizationLimits& limits) {
  const Mat2 a = Mat2::from_complex(b0) - q * jac;
  return as_complex(omega * solve_2x2(a, as_vec2(r), limits));
}

}  // namespace compactfd
