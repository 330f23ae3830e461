#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"

#include "hawkes/events.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/params.hpp"
#include "hawkes/report.hpp"

namespace hawkes::io {

using nlohmann::json;

/// Experiment description shared by simulation and fitting.
///
///   {"D": 2, "T": 100, "mu": [...], "A": [[...], [...]],
///    "kernel": {"type": "exponential", "beta": 1}}
///
/// "kernels" (a D x D array of kernel objects) may replace "kernel".
struct ExperimentConfig {
  int node_count = 0;
  double horizon = 0.0;
  Eigen::VectorXd mu;
  std::optional<Eigen::MatrixXd> alpha;
  KernelGrid kernels;

  /// Throws InvalidArgument when "A" was absent.
  ModelParams params() const;
};

/// Parse errors name the offending field ("mu[1]: must be > 0") or, for
/// malformed JSON, the line and column.
ExperimentConfig parse_config(std::string_view text, bool require_alpha = true);
ExperimentConfig load_config(const std::filesystem::path& path, bool require_alpha = true);

json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const json& j, const std::string& field = "kernel");

/// "%.17g".
std::string format_number(double x);
/// Serialises with every float at 17 significant digits; NaN and
/// infinities become null.
std::string dump(const json& j, int indent = 2);

/// CSV with header "time,node".
void write_events_csv(std::ostream& out, const EventSequence& seq);
EventSequence read_events_csv(std::istream& in, double horizon, int node_count);

/// `<dir>/<stem>.manifest.json` next to an event file.
std::filesystem::path manifest_path(const std::filesystem::path& events);
/// Writes the CSV and its manifest {"T": ..., "D": ...}.
void save_events(const std::filesystem::path& path, const EventSequence& seq);
/// Horizon and node count come from the manifest when present, else from
/// the fallbacks; Io error when neither is available.
EventSequence load_events(const std::filesystem::path& path,
                          std::optional<double> horizon = std::nullopt,
                          std::optional<int> node_count = std::nullopt);

json report_to_json(const ConfidenceReport& r);
ConfidenceReport report_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXd& m);
json vector_to_json(const Eigen::VectorXd& v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace hawkes::io
