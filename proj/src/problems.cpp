#include "compactfd/problems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "compactfd/errors.hpp"

namespace compactfd {

Problem<double> fkpp(double diffusion, std::function<double(double)> initial, FkppBoundary boundary) {
  if (!(diffusion > 0.0)) throw ConfigError("fkpp: diffusion must be positive");
  Problem<double> p;
  p.name = "fkpp";
  p.diffusion = diffusion;
  p.nonlinearity.value = [](const double& u) { return u * (1.0 - u); };
  p.nonlinearity.jacobian = [](const double& u) { return 1.0 - 2.0 * u; };
  p.jacobian_mode = JacobianMode::Diagonal;
  p.initial = initial ? std::move(initial) : [](double x) {
    const double c = std::cos(x);
    return c * c;
  };
  p.x_left = 0.0;
  p.x_right = std::numbers::pi / 2.0;
  p.final_time = 4.63;
  if (boundary == FkppBoundary::Zero) {
    p.boundary = BoundaryData<double>::zero();
    p.metadata.emplace_back("boundary", "zero");
  } else {
    p.boundary = BoundaryData<double>::values(p.initial(p.x_left), p.initial(p.x_right));
    p.metadata.emplace_back("boundary", "initial_endpoints");
  }
  return p;
}

Problem<Vec2> fhn(const FhnParams& params, JacobianMode mode) {
  if (!(params.epsilon > 0.0 && params.alpha > 0.0 && params.beta > 0.0)) {
    throw ConfigError("fhn: epsilon, alpha, beta must be positive");
  }
  if (!(params.d1 > 0.0 && params.d2 > 0.0)) throw ConfigError("fhn: D1, D2 must be positive");
  Problem<Vec2> p;
  p.name = "fhn";
  p.diffusion = {params.d1, params.d2};
  p.nonlinearity.value = [params](const Vec2& s) {
    return Vec2{params.epsilon * (s.w - params.alpha * s.u - params.beta), -(s.u - params.mu * s.w + s.w * s.w * s.w)};
  };
  p.nonlinearity.jacobian = [params](const Vec2& s) {
    return Mat2{-params.epsilon * params.alpha, params.epsilon, -1.0, params.mu - 3.0 * s.w * s.w};
  };
  p.jacobian_mode = mode;
  p.initial = [](double x) {
    const double s = std::sin(x);
    return Vec2{s, s * s};
  };
  p.boundary = BoundaryData<Vec2>::zero();
  p.x_left = 0.0;
  p.x_right = 2.0 * std::numbers::pi;
  p.final_time = 0.2467;
  p.metadata.emplace_back("jacobian_mode", mode == JacobianMode::Diagonal ? "diagonal" : "block");
  return p;
}

std::string SolitonPhase::to_string() const {
  std::ostringstream out;
  out << "exp(i(" << (space_sign > 0 ? "+" : "-") << "Ux/2 " << (time_sign > 0 ? "+" : "-") << " (alpha-U^2/4)t))";
  return out.str();
}

Nonlinearity<Complex> schroedinger_nonlinearity(std::function<double(double)> g, std::function<double(double)> dg) {
  Nonlinearity<Complex> n;
  // F = i g(m) psi with m = u^2 + w^2, i.e. F_re = -g w, F_im = g u.
  n.value = [g](const Complex& z) {
    const double m = std::norm(z);
    return Complex(0.0, 1.0) * (g(m) * z);
  };
  n.jacobian = [g, dg](const Complex& z) {
    const double u = z.real();
    const double w = z.imag();
    const double m = u * u + w * w;
    const double gm = g(m);
    const double d = dg(m);
    return Mat2{-2.0 * d * u * w, -gm - 2.0 * d * w * w, gm + 2.0 * d * u * u, 2.0 * d * u * w};
  };
  return n;
}

namespace {

Complex soliton_value(double t, double x, const SolitonParams& p, const SolitonPhase& phase) {
  const double amplitude = std::sqrt(2.0 * p.alpha / p.beta) / std::cosh(std::sqrt(p.alpha) * (x - p.velocity * t));
  const double theta = phase.space_sign * 0.5 * p.velocity * x +
                       phase.time_sign * (p.alpha - 0.25 * p.velocity * p.velocity) * t;
  return std::polar(amplitude, theta);
}

void check_params(const SolitonParams& p) {
  if (!(p.alpha > 0.0 && p.beta > 0.0)) throw ConfigError("soliton: alpha and beta must be positive");
}

Problem<Complex> cubic_nlse_equation(const SolitonParams& params) {
  Problem<Complex> p;
  p.name = "nlse";
  p.diffusion = Complex(0.0, 1.0);
  const double beta = params.beta;
  p.nonlinearity = schroedinger_nonlinearity([beta](double m) { return beta * m; }, [beta](double) { return beta; });
  p.jacobian_mode = JacobianMode::Block;
  return p;
}

SolitonPhase select_phase(const SolitonParams& params) {
  const Problem<Complex> pde = cubic_nlse_equation(params);
  SampleBox box;
  box.t0 = 0.0;
  box.t1 = 1.0;
  box.x0 = -5.0;
  box.x1 = 5.0;
  std::vector<SolitonPhase> accepted;
  for (int s : {1, -1}) {
    for (int sigma : {1, -1}) {
      const SolitonPhase phase{s, sigma};
      const std::function<Complex(double, double)> candidate = [&](double t, double x) {
        return soliton_value(t, x, params, phase);
      };
      if (verify_analytic(candidate, pde, box) <= 1e-6) accepted.push_back(phase);
    }
  }
  if (accepted.size() != 1) {
    throw ConfigError("soliton: expected exactly one admissible phase, found " + std::to_string(accepted.size()));
  }
  return accepted.front();
}

}  // namespace

Soliton::Soliton(const SolitonParams& params) : params_(params) {
  check_params(params);
  phase_ = select_phase(params);
}

Soliton::Soliton(const SolitonParams& params, SolitonPhase phase) : params_(params), phase_(phase) {
  check_params(params);
}

Complex Soliton::operator()(double t, double x) const { return soliton_value(t, x, params_, phase_); }

Complex soliton(double t, double x, const SolitonParams& params) { return Soliton(params)(t, x); }

Problem<Complex> nlse(const SolitonParams& params, NlseNonlinearity kind, double x_left, double x_right) {
  const Soliton wave(params);
  Problem<Complex> p = cubic_nlse_equation(params);
  if (kind == NlseNonlinearity::Fermi) {
    p.name = "nlse_fermi";
    p.nonlinearity = schroedinger_nonlinearity([](double m) { return -2.5 * std::pow(m, 5.0 / 3.0); },
                                               [](double m) { return -2.5 * (5.0 / 3.0) * std::pow(m, 2.0 / 3.0); });
  } else {
    p.exact = [wave](double t, double x) { return wave(t, x); };
  }
  p.initial = [wave](double x) { return wave(0.0, x); };
  p.boundary = BoundaryData<Complex>::time_dependent(
      [wave, x_left, x_right](double t) { return std::pair{wave(t, x_left), wave(t, x_right)}; });
  p.x_left = x_left;
  p.x_right = x_right;
  p.final_time = 1.25;
  p.metadata.emplace_back("soliton_phase", wave.phase().to_string());
  return p;
}

template <class V>
double verify_analytic(const std::function<V(double, double)>& candidate, const Problem<V>& pde,
                       const SampleBox& box) {
  static constexpr double kSecond[] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  static constexpr double kFirst[] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  const double e = box.spacing;
  double worst = 0.0;
  for (std::size_t a = 0; a < box.nt; ++a) {
    const double t = box.nt > 1 ? box.t0 + (box.t1 - box.t0) * static_cast<double>(a) / static_cast<double>(box.nt - 1)
                                : box.t0;
    for (std::size_t b = 0; b < box.nx; ++b) {
      const double x = box.nx > 1
                           ? box.x0 + (box.x1 - box.x0) * static_cast<double>(b) / static_cast<double>(box.nx - 1)
                           : box.x0;
      const V center = candidate(t, x);
      V uxx = kSecond[0] * center;
      for (int k = 1; k <= 4; ++k) uxx += kSecond[k] * (candidate(t, x - k * e) + candidate(t, x + k * e));
      uxx = (1.0 / (e * e)) * uxx;
      V ut{};
      for (int k = 1; k <= 3; ++k) ut += kFirst[k - 1] * (candidate(t + k * e, x) - candidate(t - k * e, x));
      ut = (1.0 / e) * ut;
      const V r = ut - pde.diffusion * uxx - pde.nonlinearity.value(center);
      worst = std::max(worst, magnitude(r));
    }
  }
  return worst;
}

template double verify_analytic<double>(const std::function<double(double, double)>&, const Problem<double>&,
                                        const SampleBox&);
template double verify_analytic<Vec2>(const std::function<Vec2(double, double)>&, const Problem<Vec2>&,
                                      const SampleBox&);
template double verify_analytic<Complex>(const std::function<Complex(double, double)>&, const Problem<Complex>&,
                                         const SampleBox&);

}  // namespace compactfd
