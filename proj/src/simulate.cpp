#include "hawkes/simulate.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "hawkes/error.hpp"
#include "hawkes/parallel.hpp"

namespace hawkes {

namespace {

// Thinning state.  Exponential pairs are carried as decaying sums; other
// pairs are summed over the source node's history on demand.
class Thinner {
 public:
  explicit Thinner(const ModelParams& params)
      : params_(params),
        d_(params.node_count()),
        rate_(Eigen::MatrixXd::Zero(d_, d_)),
        state_(Eigen::MatrixXd::Zero(d_, d_)),
        history_(static_cast<std::size_t>(d_)) {
    all_monotone_ = true;
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        const KernelSpec& k = params.kernels(i, j);
        if (!k.is_bounded())
          throw Error(ErrorCode::KernelUnsupported,
                      "simulation needs kernels bounded at 0 (gamma k >= 1)");
        if (const auto* e = std::get_if<Exponential>(&k.variant())) rate_(i, j) = e->beta;
        if (params.alpha(i, j) > 0.0 && !k.is_monotone()) all_monotone_ = false;
      }
    }
  }

  bool all_monotone() const { return all_monotone_; }

  void advance(double t) {
    const double dt = t - now_;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        if (rate_(i, j) > 0.0) state_(i, j) *= std::exp(-rate_(i, j) * dt);
    now_ = t;
  }

  void add_event(int node) {
    history_[node].push_back(now_);
    for (int i = 0; i < d_; ++i)
      if (rate_(i, node) > 0.0) state_(i, node) += rate_(i, node);
  }

  // Intensities at now_ counting only events strictly before now_.
  Eigen::VectorXd intensities() const {
    Eigen::VectorXd lam = params_.mu;
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        const double a = params_.alpha(i, j);
        if (a == 0.0) continue;
        if (rate_(i, j) > 0.0) {
          lam(i) += a * state_(i, j);
        } else {
          double s = 0.0;
          for (double te : history_[j])
            if (te < now_) s += evaluate(params_.kernels(i, j), now_ - te);
          lam(i) += a * s;
        }
      }
    }
    return lam;
  }

  // Upper bound on the total intensity over (now_, now_ + window], where all
  // events so far (including any at now_) count.
  double majorant(double window) const {
    double m = params_.mu.sum();
    for (int i = 0; i < d_; ++i) {
      for (int j = 0; j < d_; ++j) {
        const double a = params_.alpha(i, j);
        if (a == 0.0) continue;
        if (rate_(i, j) > 0.0) {
          m += a * state_(i, j);
        } else {
          double s = 0.0;
          for (double te : history_[j])
            s += supremum(params_.kernels(i, j), now_ - te, now_ + window - te);
          m += a * s;
        }
      }
    }
    return m;
  }

 private:
  const ModelParams& params_;
  int d_;
  Eigen::MatrixXd rate_;
  Eigen::MatrixXd state_;
  std::vector<std::vector<double>> history_;
  double now_ = 0.0;
  bool all_monotone_ = true;
};

}  // namespace

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t replication) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (replication + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EventSequence simulate(const ModelParams& params, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  const double radius = params.branching_radius();
  if (radius >= 1.0)
    throw Error(ErrorCode::ExplosiveProcess,
                "branching spectral radius " + std::to_string(radius) + " >= 1");

  Rng rng(seed);
  Thinner thin(params);
  std::vector<Event> events;
  double t = 0.0;
  while (true) {
    double window = std::numeric_limits<double>::infinity();
    if (!thin.all_monotone()) window = 2.0 / thin.intensities().sum();
    const double bound = thin.majorant(window);
    const double wait = rng.exponential(bound);
    if (wait > window) {
      t += window;
      if (t > horizon) break;
      thin.advance(t);
      continue;
    }
    t += wait;
    if (t > horizon) break;
    thin.advance(t);
    const Eigen::VectorXd lam = thin.intensities();
    const double total = lam.sum();
    if (total > bound * (1.0 + 1e-9))
      throw Error(ErrorCode::RateBoundViolation,
                  "intensity " + std::to_string(total) + " exceeds majorant " +
                      std::to_string(bound));
    const double u = rng.uniform() * bound;
    if (u >= total) continue;
    int node = 0;
    double acc = lam(0);
    while (u >= acc && node + 1 < params.node_count()) acc += lam(++node);
    thin.add_event(node);
    events.push_back({t, node});
  }
  return EventSequence(std::move(events), horizon, params.node_count());
}

std::vector<EventSequence> simulate_many(const ModelParams& params, double horizon, int n_reps,
                                         std::uint64_t seed) {
  if (n_reps < 1) throw Error(ErrorCode::InvalidArgument, "n_reps must be >= 1");
  std::vector<std::optional<EventSequence>> slots(static_cast<std::size_t>(n_reps));
  parallel_for(slots.size(), [&](std::size_t r) {
    slots[r].emplace(simulate(params, horizon, child_seed(seed, r)));
  });
  std::vector<EventSequence> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace hawkes
