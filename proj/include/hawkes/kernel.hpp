#pragma once

#include <variant>

namespace hawkes {

/// phi(dt) = beta * exp(-beta dt).  Unit mass.
struct Exponential {
  double beta;
  friend bool operator==(const Exponential&, const Exponential&) = default;
};

/// phi(dt) = beta^k dt^(k-1) exp(-beta dt) / Gamma(k).  Rate form, so k = 1
/// reproduces Exponential{beta}.  Unit mass.
struct GammaKernel {
  double k;
  double beta;
  friend bool operator==(const GammaKernel&, const GammaKernel&) = default;
};

/// phi(dt) = exp(-beta (dt - tau)^2 / sigma) / sqrt(2 pi sigma) on dt >= 0.
/// Not normalised; see total_mass().
struct Gaussian {
  double tau;
  double sigma;
  double beta;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

/// Influence function of one (target, source) pair.  Immutable value;
/// parameters are validated on construction.
class KernelSpec {
 public:
  using Variant = std::variant<Exponential, GammaKernel, Gaussian>;

  KernelSpec() : KernelSpec(Exponential{1.0}) {}
  KernelSpec(Exponential e);
  KernelSpec(GammaKernel g);
  KernelSpec(Gaussian g);

  const Variant& variant() const noexcept { return v_; }

  bool is_exponential() const noexcept { return std::holds_alternative<Exponential>(v_); }
  /// Nonincreasing on [0, inf): exponential, or gamma with k <= 1.
  bool is_monotone() const noexcept;
  /// Finite at dt = 0+ (everything except gamma with k < 1).
  bool is_bounded() const noexcept;
  /// Location of the maximum on [0, inf).
  double mode() const noexcept;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  Variant v_;
};

/// phi(dt); zero for dt < 0.
double evaluate(const KernelSpec& spec, double dt);

/// Integral of phi over [0, dt]; zero for dt <= 0.
double cumulative(const KernelSpec& spec, double dt);

/// Limit of cumulative() as dt -> inf.
double total_mass(const KernelSpec& spec);

/// sup of phi over [lo, hi] (lo <= hi, clamped at 0 from below).
double supremum(const KernelSpec& spec, double lo, double hi);

}  // namespace hawkes
