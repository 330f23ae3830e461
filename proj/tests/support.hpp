// Independent reference implementations and random instance generators
// used across the unit tests.  Nothing here calls into the library's
// numerical code paths except where noted.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/params.hpp"

namespace testing_support {

using hawkes::KernelSpec;

inline double phi(const KernelSpec& spec, double dt) {
  if (dt < 0.0) return 0.0;
  if (const auto* e = std::get_if<hawkes::Exponential>(&spec.variant()))
    return e->beta * std::exp(-e->beta * dt);
  if (const auto* g = std::get_if<hawkes::GammaKernel>(&spec.variant()))
    return std::exp(g->k * std::log(g->beta) + (g->k - 1.0) * std::log(dt) - g->beta * dt -
                    std::lgamma(g->k));
  const auto& s = std::get<hawkes::Gaussian>(spec.variant());
  return std::exp(-s.beta * (dt - s.tau) * (dt - s.tau) / s.sigma) /
         std::sqrt(2.0 * M_PI * s.sigma);
}

/// Composite Gauss-Legendre (5 points per panel) on [a, b].
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int panels) {
  static const double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                              0.9061798459386640};
  static const double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double m = a + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) s += w[q] * f(m + 0.5 * h * x[q]);
  }
  return 0.5 * h * s;
}

/// Integral over [a, b] split at every point of `cuts` inside it.
inline double piecewise_quadrature(const std::function<double(double)>& f, double a, double b,
                                   std::vector<double> cuts, int panels_per_piece) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(a, cuts[k]);
    const double hi = std::min(b, cuts[k + 1]);
    // Kernels can be non-smooth just after an event (gamma shape < 2), so
    // grade the nodes toward the left end with t = lo + (hi - lo) u^4.
    if (hi > lo)
      s += gauss_legendre(
          [&](double u) {
            const double u3 = u * u * u;
            return 4.0 * u3 * (hi - lo) * f(lo + (hi - lo) * u3 * u);
          },
          0.0, 1.0, panels_per_piece);
  }
  return s;
}

/// eta_i(t) by direct summation over the strict past.
inline Eigen::VectorXd brute_eta(const hawkes::EventSequence& seq, const hawkes::KernelGrid& k,
                                 int i, double t) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(seq.node_count());
  for (std::size_t e = 0; e < seq.size(); ++e) {
    if (!(seq.times()[e] < t)) break;
    out(seq.nodes()[e]) += phi(k(i, seq.nodes()[e]), t - seq.times()[e]);
  }
  return out;
}

inline double brute_intensity(const hawkes::ModelParams& p, const hawkes::EventSequence& seq,
                              int i, double t) {
  return p.mu(i) + p.alpha.row(i).dot(brute_eta(seq, p.kernels, i, t));
}

/// Uniformly scattered events (not a Hawkes sample); enough for checking
/// identities that hold for any event configuration.
inline hawkes::EventSequence random_events(std::mt19937_64& rng, int d, double horizon,
                                           double rate) {
  std::uniform_real_distribution<double> u(0.0, horizon);
  std::poisson_distribution<int> count(rate * horizon);
  std::uniform_int_distribution<int> node(0, d - 1);
  std::vector<hawkes::Event> ev;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) ev.push_back({u(rng), node(rng)});
  return hawkes::EventSequence(std::move(ev), horizon, d);
}

/// Nonnegative matrix rescaled to the given spectral radius.
inline Eigen::MatrixXd random_influence(std::mt19937_64& rng, int d, double radius,
                                        double density = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i == j || u(rng) < density) a(i, j) = 0.1 + u(rng);
  return a * (radius / hawkes::spectral_radius(a));
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int d, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(d);
  for (int k = 0; k < d; ++k) v(k) = u(rng);
  return v;
}

}  // namespace testing_support

namespace testing_support {

/// (1/(T - burn_in)) * integral over [burn_in, T] of eta eta^T, where
/// eta_j(t) = sum over node-j events before t of beta e^{-beta (t - t_e)}.
/// Exact between events since eta decays as a whole at rate beta.
inline Eigen::MatrixXd time_average_eta_outer(const hawkes::EventSequence& seq, double beta,
                                              double burn_in) {
  const int d = seq.node_count();
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  double now = 0.0;
  auto advance = [&](double t) {
    const double a = std::max(now, burn_in);
    if (t > a) {
      const Eigen::VectorXd start = eta * std::exp(-beta * (a - now));
      acc += start * start.transpose() * (-std::expm1(-2.0 * beta * (t - a)) / (2.0 * beta));
    }
    eta *= std::exp(-beta * (t - now));
    now = t;
  };
  for (std::size_t k = 0; k < seq.size(); ++k) {
    advance(seq.times()[k]);
    eta(seq.nodes()[k]) += beta;
  }
  advance(seq.horizon());
  return acc / (seq.horizon() - burn_in);
}

}  // namespace testing_support
