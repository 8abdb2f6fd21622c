#pragma once

// Small scalar algebra shared by the scheme kernels: a node value is either a
// real scalar, a real pair (two coupled real equations) or a complex scalar.

#include <array>
#include <cmath>
#include <complex>

namespace compactfd {

using Complex = std::complex<double>;

/// Real 2-vector. Products between two Vec2 are componentwise, which is how
/// per-component scheme weights act on a pair state.
struct Vec2 {
  double u = 0.0;
  double w = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { u += o.u; w += o.w; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { u -= o.u; w -= o.w; return *this; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.u, -a.w}; }
constexpr Vec2 operator*(const Vec2& a, const Vec2& b) { return {a.u * b.u, a.w * b.w}; }
constexpr Vec2 operator*(double s, const Vec2& a) { return {s * a.u, s * a.w}; }
constexpr Vec2 operator*(const Vec2& a, double s) { return {s * a.u, s * a.w}; }
constexpr Vec2 operator/(const Vec2& a, double s) { return {a.u / s, a.w / s}; }

/// Row-major real 2x2 matrix.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  /// Real representation of multiplication by a complex number.
  static constexpr Mat2 from_complex(Complex z) { return {z.real(), -z.imag(), z.imag(), z.real()}; }

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  double frobenius() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
constexpr Mat2 operator*(double s, const Mat2& a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }
constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a.a11 * v.u + a.a12 * v.w, a.a21 * v.u + a.a22 * v.w};
}

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Vec2& v) { return std::hypot(v.u, v.w); }
inline double magnitude(const Complex& v) { return std::abs(v); }

inline Vec2 as_vec2(const Complex& z) { return {z.real(), z.imag()}; }
inline Complex as_complex(const Vec2& v) { return {v.u, v.w}; }

/// Compile-time description of each node-value algebra.
///   Coef     - type of the scheme weights and Courant scalar acting on a value
///   Jacobian - derivative of the nonlinearity at a node
template <class V>
struct ValueTraits;

template <>
struct ValueTraits<double> {
  using Coef = double;
  using Jacobian = double;
  static constexpr int components = 1;
  static double component(double v, int) { return v; }
  static double lift(double s) { return s; }
};

template <>
struct ValueTraits<Vec2> {
  using Coef = Vec2;
  using Jacobian = Mat2;
  static constexpr int components = 2;
  static double component(const Vec2& v, int c) { return c == 0 ? v.u : v.w; }
  static Vec2 lift(double s) { return {s, s}; }
};

template <>
struct ValueTraits<Complex> {
  using Coef = Complex;
  using Jacobian = Mat2;
  static constexpr int components = 2;
  static double component(const Complex& v, int c) { return c == 0 ? v.real() : v.imag(); }
  static Complex lift(double s) { return {s, 0.0}; }
};

template <class V>
using CoefOf = typename ValueTraits<V>::Coef;
template <class V>
using JacobianOf = typename ValueTraits<V>::Jacobian;

}  // namespace compactfd
