#include "hawkes/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/error.hpp"

namespace hawkes {

EventSequence::EventSequence(std::vector<Event> events, double horizon, int node_count)
    : per_node_(node_count > 0 ? node_count : 0), horizon_(horizon), node_count_(node_count) {
  if (node_count <= 0) throw Error(ErrorCode::InvalidArgument, "node count must be positive");
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "horizon must be positive");

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });

  times_.reserve(events.size());
  nodes_.reserve(events.size());
  for (const Event& e : events) {
    if (!std::isfinite(e.time) || e.time < 0.0 || e.time > horizon)
      throw Error(ErrorCode::InvalidArgument,
                  "event time " + std::to_string(e.time) + " outside [0, T]");
    if (e.node < 0 || e.node >= node_count)
      throw Error(ErrorCode::NodeOutOfRange, "event node " + std::to_string(e.node));
    double t = e.time;
    if (!times_.empty() && t <= times_.back()) {
      t = std::nextafter(times_.back(), std::numeric_limits<double>::infinity());
      perturbed_ = true;
      if (t > horizon)
        throw Error(ErrorCode::InvalidArgument, "tied events at the horizon cannot be separated");
    }
    times_.push_back(t);
    nodes_.push_back(e.node);
    per_node_[e.node].push_back(t);
  }
}

std::span<const double> EventSequence::node_times(int node) const {
  if (node < 0 || node >= node_count_)
    throw Error(ErrorCode::NodeOutOfRange, "node " + std::to_string(node));
  return per_node_[node];
}

std::size_t EventSequence::count_before(double t) const noexcept {
  return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), t) -
                                  times_.begin());
}

std::size_t EventSequence::count_before(int node, double t) const {
  const auto ts = node_times(node);
  return static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
}

EventSequence EventSequence::truncated(double horizon) const {
  std::vector<Event> kept;
  for (std::size_t k = 0; k < times_.size() && times_[k] <= horizon; ++k)
    kept.push_back({times_[k], nodes_[k]});
  return EventSequence(std::move(kept), horizon, node_count_);
}

}  // namespace hawkes
