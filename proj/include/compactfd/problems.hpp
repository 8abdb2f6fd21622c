#pragma once

// Benchmark problems: Fisher-KPP, FitzHugh-Nagumo and the cubic nonlinear
// Schroedinger equation with its bright soliton.

#include <functional>
#include <string>

#include "compactfd/problem.hpp"

namespace compactfd {

enum class FkppBoundary {
  InitialEndpoints,  ///< Dirichlet values u0(0), u0(pi/2) held for all t
  Zero,              ///< homogeneous data, overriding u0 at the ends
};

/// u_t = D u_xx + u(1 - u) on [0, pi/2].
/// Default initial data cos^2(x), final time 4.63.
Problem<double> fkpp(double diffusion = 0.01, std::function<double(double)> initial = {},
                     FkppBoundary boundary = FkppBoundary::InitialEndpoints);

struct FhnParams {
  double epsilon = 2.0;
  double alpha = 2.0;
  double beta = 1.0;
  double mu = 2.0;
  double d1 = 1.0;
  double d2 = 1.0;
};

/// FitzHugh-Nagumo system on [0, 2 pi]:
///   F_1(u, w) = eps (w - alpha u - beta),  F_2(u, w) = -(u - mu w + w^3),
/// zero Dirichlet data, u0 = sin x, w0 = sin^2 x, final time 0.2467.
Problem<Vec2> fhn(const FhnParams& params = {}, JacobianMode mode = JacobianMode::Diagonal);

struct SolitonParams {
  double alpha = 1.0;  ///< amplitude / inverse width
  double beta = 1.0;   ///< nonlinearity strength
  double velocity = 1.0;
};

/// Phase convention exp(i (s U x / 2 + sigma (alpha - U^2/4) t)).
struct SolitonPhase {
  int space_sign = 1;
  int time_sign = 1;
  std::string to_string() const;
};

/// Sech soliton of i psi_t + psi_xx + beta |psi|^2 psi = 0 with amplitude
/// sqrt(2 alpha / beta) travelling at `velocity`. The phase is chosen on
/// construction as the unique member of the candidate family that satisfies
/// the PDE according to verify_analytic.
class Soliton {
 public:
  explicit Soliton(const SolitonParams& params);
  Soliton(const SolitonParams& params, SolitonPhase phase);

  Complex operator()(double t, double x) const;
  const SolitonPhase& phase() const { return phase_; }
  const SolitonParams& params() const { return params_; }

 private:
  SolitonParams params_;
  SolitonPhase phase_;
};

Complex soliton(double t, double x, const SolitonParams& params);

enum class NlseNonlinearity {
  Cubic,  ///< beta |psi|^2 psi
  Fermi,  ///< -(5/2) |psi|^(10/3) psi; no analytic solution, not used in acceptance runs
};

/// psi_t = i psi_xx + i N(psi) written with D = i and
///   F_re = -beta (u^2 w + w^3),  F_im = beta (u^3 + u w^2)
/// for the cubic case. Initial and time-dependent boundary data come from the
/// soliton; default domain [-20, 20], final time 1.25.
Problem<Complex> nlse(const SolitonParams& params = {}, NlseNonlinearity kind = NlseNonlinearity::Cubic,
                      double x_left = -20.0, double x_right = 20.0);

/// Nonlinearity i g(|psi|^2) psi with its real 2x2 Jacobian.
Nonlinearity<Complex> schroedinger_nonlinearity(std::function<double(double)> g,
                                                std::function<double(double)> dg);

struct SampleBox {
  double t0 = 0.0, t1 = 1.0;
  double x0 = -5.0, x1 = 5.0;
  std::size_t nt = 11;
  std::size_t nx = 21;
  /// Finite-difference spacing in both t and x.
  double spacing = 1e-3;
};

/// Max over a lattice in `box` of |c_t - D c_xx - F(c)|, with an 8th-order
/// central second difference in x and a 6th-order central first difference in t.
template <class V>
double verify_analytic(const std::function<V(double, double)>& candidate, const Problem<V>& pde,
                       const SampleBox& box);

}  // namespace compactfd
