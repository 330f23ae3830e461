#include "hawkes/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hawkes/error.hpp"
#include "hawkes/special.hpp"

namespace hawkes {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

// erf(b) - erf(a) for a <= b, switching to erfc where both tails agree in
// sign so the difference does not cancel.
double erf_diff(double a, double b) {
  if (a >= 0.0) return std::erfc(a) - std::erfc(b);
  if (b <= 0.0) return std::erfc(-b) - std::erfc(-a);
  return std::erf(b) - std::erf(a);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

KernelSpec::KernelSpec(Exponential e) : v_(e) {
  if (!positive(e.beta)) throw Error(ErrorCode::InvalidKernel, "exponential beta must be > 0");
}

KernelSpec::KernelSpec(GammaKernel g) : v_(g) {
  if (!positive(g.k)) throw Error(ErrorCode::InvalidKernel, "gamma k must be > 0");
  if (!positive(g.beta)) throw Error(ErrorCode::InvalidKernel, "gamma beta must be > 0");
}

KernelSpec::KernelSpec(Gaussian g) : v_(g) {
  if (!std::isfinite(g.tau) || g.tau < 0.0)
    throw Error(ErrorCode::InvalidKernel, "gaussian tau must be >= 0");
  if (!positive(g.sigma)) throw Error(ErrorCode::InvalidKernel, "gaussian sigma must be > 0");
  if (!positive(g.beta)) throw Error(ErrorCode::InvalidKernel, "gaussian beta must be > 0");
}

bool KernelSpec::is_monotone() const noexcept {
  return std::visit(overloaded{[](const Exponential&) { return true; },
                               [](const GammaKernel& g) { return g.k <= 1.0; },
                               [](const Gaussian& g) { return g.tau == 0.0; }},
                    v_);
}

bool KernelSpec::is_bounded() const noexcept {
  if (const auto* g = std::get_if<GammaKernel>(&v_)) return g->k >= 1.0;
  return true;
}

double KernelSpec::mode() const noexcept {
  return std::visit(
      overloaded{[](const Exponential&) { return 0.0; },
                 [](const GammaKernel& g) { return g.k > 1.0 ? (g.k - 1.0) / g.beta : 0.0; },
                 [](const Gaussian& g) { return g.tau; }},
      v_);
}

double evaluate(const KernelSpec& spec, double dt) {
  if (dt < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [dt](const Exponential& e) { return e.beta * std::exp(-e.beta * dt); },
          [dt](const GammaKernel& g) {
            if (dt == 0.0) {
              if (g.k == 1.0) return g.beta;
              return g.k > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
            }
            return std::exp(g.k * std::log(g.beta) + (g.k - 1.0) * std::log(dt) - g.beta * dt -
                            std::lgamma(g.k));
          },
          [dt](const Gaussian& g) {
            const double d = dt - g.tau;
            return std::exp(-g.beta * d * d / g.sigma) /
                   std::sqrt(2.0 * std::numbers::pi * g.sigma);
          }},
      spec.variant());
}

double cumulative(const KernelSpec& spec, double dt) {
  if (!(dt > 0.0)) return 0.0;
  return std::visit(
      overloaded{[dt](const Exponential& e) { return -std::expm1(-e.beta * dt); },
                 [dt](const GammaKernel& g) { return special::gamma_p(g.k, g.beta * dt); },
                 [dt](const Gaussian& g) {
                   const double s = std::sqrt(g.beta / g.sigma);
                   const double scale = 1.0 / (2.0 * std::sqrt(2.0 * g.beta));
                   return scale * erf_diff(-s * g.tau, s * (dt - g.tau));
                 }},
      spec.variant());
}

double total_mass(const KernelSpec& spec) {
  if (const auto* g = std::get_if<Gaussian>(&spec.variant())) {
    const double s = std::sqrt(g->beta / g->sigma);
    return (1.0 + std::erf(s * g->tau)) / (2.0 * std::sqrt(2.0 * g->beta));
  }
  return 1.0;
}

double supremum(const KernelSpec& spec, double lo, double hi) {
  lo = std::max(lo, 0.0);
  hi = std::max(hi, lo);
  return evaluate(spec, std::clamp(spec.mode(), lo, hi));
}

}  // namespace hawkes
