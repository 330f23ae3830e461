#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/mle.hpp"
#include "hawkes/process.hpp"
#include "hawkes/report.hpp"

namespace hawkes {

/// Piecewise-constant direction process z(t) on [0, T].
///
/// Segment s covers (starts[s], starts[s+1]] (the first one also contains
/// t = 0); the last segment ends at `horizon`.  Row s of `z` is the value.
struct DirectionSchedule {
  int sign = 1;   // +1 or -1
  int axis = 0;   // coordinate j the direction bounds
  double horizon = 0.0;
  std::vector<double> starts;
  Eigen::MatrixXd z;

  int segment_of(double t) const;
  Eigen::VectorXd at(double t) const { return z.row(segment_of(t)).transpose(); }
  /// Contiguous, non-overlapping, covers [0, T], finite values.
  bool valid() const;
};

/// One direction held fixed over [0, T].
DirectionSchedule constant_schedule(const Eigen::VectorXd& z, double horizon);

/// Linearised confidence polyhedron {alpha : G alpha <= h, alpha >= 0}.
struct Polyhedron {
  struct DroppedRow {
    int k;
    std::string reason;
  };
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  std::vector<int> direction;       // direction index k of each kept row
  std::vector<DroppedRow> dropped;
  bool overflow = false;
};

struct VIntegral {
  double value = 0.0;
  bool overflow = false;  // exponent passed kOverflowExponent; value is +inf
};

/// Exponents of exp(z^T eta / lambda) above this are reported as overflow.
inline constexpr double kOverflowExponent = 700.0;

/// Direction index k in [0, 2D): axis k / 2, sign + for even k, - for odd.
inline int direction_axis(int k) { return k / 2; }
inline int direction_sign(int k) { return k % 2 == 0 ? 1 : -1; }

/// Everything the martingale confidence set of one node needs, with the
/// alpha-independent parts (eta at node events, eta integrals) cached.
/// Holds a reference to `seq`, which must outlive it.
class ConcentrationProblem {
 public:
  ConcentrationProblem(const EventSequence& seq, int node, double mu,
                       std::span<const KernelSpec> kernel_row, double epsilon);

  int node() const noexcept { return data_.node(); }
  int dimension() const noexcept { return data_.dimension(); }
  double mu() const noexcept { return mu_; }
  double epsilon() const noexcept { return epsilon_; }
  double horizon() const noexcept { return data_.horizon(); }
  /// ln(2D / epsilon).
  double threshold() const noexcept { return threshold_; }
  const NodeData& data() const noexcept { return data_; }

  /// The 2D adapted schedules for `alpha`, indexed as direction_axis/sign.
  std::vector<DirectionSchedule> schedules(const Eigen::VectorXd& alpha) const;

  /// Integral of z^T dS_t(alpha) over [0, T].
  double pair_score(const DirectionSchedule& z, const Eigen::VectorXd& alpha) const;
  /// Intrinsic variance V(z, alpha).
  VIntegral v_integral(const DirectionSchedule& z, const Eigen::VectorXd& alpha) const;
  /// V for several schedules at once (shared quadrature nodes).
  std::vector<VIntegral> v_integrals(std::span<const DirectionSchedule> zs,
                                     const Eigen::VectorXd& alpha) const;

  /// g_k(alpha) for all k; -inf where the V integral overflowed.
  Eigen::VectorXd g(const Eigen::VectorXd& alpha, bool* overflow = nullptr) const;
  bool exact_membership(const Eigen::VectorXd& alpha) const;

  /// First-order expansion of every g_k at alpha_hat, as linear constraints.
  Polyhedron polyhedral_set(const Eigen::VectorXd& alpha_hat) const;

 private:
  const EventSequence* seq_;
  NodeData data_;
  EtaTracker tracker_;
  double mu_;
  double epsilon_;
  double threshold_;
  // Integral of eta over [0, tau_m] at each node event (row m), then [0, T].
  Eigen::MatrixXd breakpoint_integrals_;
};

// Free-function forms of the operations above.

std::vector<DirectionSchedule> build_schedule(const EventSequence& seq, int node,
                                              const Eigen::VectorXd& alpha, double mu,
                                              std::span<const KernelSpec> kernel_row,
                                              double epsilon);
double pair_score(const DirectionSchedule& z, const Eigen::VectorXd& alpha,
                  const EventSequence& seq, int node, double mu,
                  std::span<const KernelSpec> kernel_row);
VIntegral v_integral(const DirectionSchedule& z, const Eigen::VectorXd& alpha,
                     const EventSequence& seq, int node, double mu,
                     std::span<const KernelSpec> kernel_row);
double g(int k, const Eigen::VectorXd& alpha, const EventSequence& seq, int node, double mu,
         std::span<const KernelSpec> kernel_row, double epsilon);
bool exact_membership(const Eigen::VectorXd& alpha, const EventSequence& seq, int node, double mu,
                      std::span<const KernelSpec> kernel_row, double epsilon);
Polyhedron polyhedral_set(const Eigen::VectorXd& alpha_hat, const EventSequence& seq, int node,
                          double mu, std::span<const KernelSpec> kernel_row, double epsilon);

struct AxisInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded = false;
  Eigen::VectorXd argmin;
  Eigen::VectorXd argmax;  // empty when unbounded
};

/// [min alpha_j, max alpha_j] over the polyhedron intersected with alpha >= 0.
/// Throws Infeasible when the polyhedron is empty.
AxisInterval entry_ci(const Polyhedron& poly, int axis);

struct ConcentrationOptions {
  SolverOptions solver;
  /// Re-test the LP endpoints against the exact (non-linearised) set.
  bool endpoint_diagnostics = true;
};

struct ConcentrationResult {
  ConfidenceReport report;
  NodeFit fit;
  Polyhedron polyhedron;
  Eigen::VectorXd g_at_estimate;
};

/// fit_node -> polyhedral_set -> entry_ci for every axis.
ConcentrationResult concentration_ci(const EventSequence& seq, int node, double mu,
                                     std::span<const KernelSpec> kernel_row, double epsilon,
                                     const ConcentrationOptions& opts = {});
/// Same, reusing an existing fit.
ConcentrationResult concentration_ci(const ConcentrationProblem& problem, const NodeFit& fit,
                                     const ConcentrationOptions& opts = {});

// Fixed-direction sets (arbitrary z_1..z_K held constant over [0, T]).

/// z_k^T S(alpha) - V(z_k, alpha) for each fixed direction.
Eigen::VectorXd fixed_direction_statistics(const ConcentrationProblem& problem,
                                           std::span<const Eigen::VectorXd> zs,
                                           const Eigen::VectorXd& alpha);
/// All statistics <= ln(K / epsilon).
bool fixed_direction_membership(const ConcentrationProblem& problem,
                                std::span<const Eigen::VectorXd> zs, const Eigen::VectorXd& alpha);
/// +/- sqrt(2 ln(2D/eps) / (T sigma_jj)) I^{-1} e_j, ordered like direction_axis/sign.
std::vector<Eigen::VectorXd> optimal_directions(const Eigen::MatrixXd& fisher, double horizon,
                                                double epsilon);

}  // namespace hawkes
