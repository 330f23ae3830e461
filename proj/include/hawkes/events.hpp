#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hawkes {

struct Event {
  double time;
  int node;
};

/// Time-ordered marked events on [0, T] over D nodes.  Times are strictly
/// increasing: exact ties are broken at construction by nudging the later
/// event up by one ulp (stable order), and `perturbed()` reports it.
class EventSequence {
 public:
  EventSequence(std::vector<Event> events, double horizon, int node_count);

  double horizon() const noexcept { return horizon_; }
  int node_count() const noexcept { return node_count_; }
  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  bool perturbed() const noexcept { return perturbed_; }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const int> nodes() const noexcept { return nodes_; }
  Event operator[](std::size_t k) const noexcept { return {times_[k], nodes_[k]}; }

  /// Event times on one node, increasing.
  std::span<const double> node_times(int node) const;
  /// Number of events with time strictly before t (all nodes).
  std::size_t count_before(double t) const noexcept;
  /// Number of events on `node` with time strictly before t.
  std::size_t count_before(int node, double t) const;

  /// Same events, different horizon (events beyond it are dropped).
  EventSequence truncated(double horizon) const;

 private:
  std::vector<double> times_;
  std::vector<int> nodes_;
  std::vector<std::vector<double>> per_node_;
  double horizon_;
  int node_count_;
  bool perturbed_ = false;
};

}  // namespace hawkes
