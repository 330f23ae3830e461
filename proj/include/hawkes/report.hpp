#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hawkes {

enum class CiMethod { Asymptotic, Concentration };

std::string_view to_string(CiMethod m) noexcept;
CiMethod ci_method_from_string(std::string_view s);

struct EntryInterval {
  int i = 0;
  int j = 0;
  double point = 0.0;
  double lo = 0.0;  // raw (asymptotic lower bounds may be negative)
  double hi = 0.0;  // +inf when unbounded
  bool unbounded = false;
  bool valid = true;  // false when the interval could not be computed

  double width() const { return hi - lo; }
  double lo_clipped() const { return lo < 0.0 ? 0.0 : lo; }
  bool contains(double value) const { return valid && lo <= value && value <= hi; }
};

struct ReportFlags {
  bool singular_fisher = false;
  bool unbounded = false;
  bool infeasible = false;          // linearised polyhedron was empty
  bool overflow = false;            // V integrand exponent exceeded its guard
  int dropped_rows = 0;             // degenerate constraint gradients
  bool endpoint_outside_exact_set = false;
};

struct ConfidenceReport {
  CiMethod method = CiMethod::Asymptotic;
  double epsilon = 0.05;
  std::vector<EntryInterval> entries;
  ReportFlags flags;

  double level() const { return 1.0 - epsilon; }

  /// Entry (i, j), or nullptr.
  const EntryInterval* find(int i, int j) const;
  /// Appends another report's entries and ORs its flags.
  void merge(const ConfidenceReport& other);
  /// D x D matrices assembled from the entries (NaN where absent).
  Eigen::MatrixXd lower(int d) const;
  Eigen::MatrixXd upper(int d) const;
};

}  // namespace hawkes
