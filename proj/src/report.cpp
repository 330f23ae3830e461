#include "hawkes/report.hpp"

#include <limits>

#include "hawkes/error.hpp"

namespace hawkes {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::InvalidKernel: return "InvalidKernel";
    case ErrorCode::ExplosiveProcess: return "ExplosiveProcess";
    case ErrorCode::RateBoundViolation: return "RateBoundViolation";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::SingularFisher: return "SingularFisher";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NonStationary: return "NonStationary";
    case ErrorCode::KernelUnsupported: return "KernelUnsupported";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(CiMethod m) noexcept {
  return m == CiMethod::Asymptotic ? "asymptotic" : "concentration";
}

CiMethod ci_method_from_string(std::string_view s) {
  if (s == "asymptotic") return CiMethod::Asymptotic;
  if (s == "concentration") return CiMethod::Concentration;
  throw Error(ErrorCode::Parse, "unknown CI method '" + std::string(s) + "'");
}

const EntryInterval* ConfidenceReport::find(int i, int j) const {
  for (const auto& e : entries)
    if (e.i == i && e.j == j) return &e;
  return nullptr;
}

void ConfidenceReport::merge(const ConfidenceReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
  flags.singular_fisher |= other.flags.singular_fisher;
  flags.unbounded |= other.flags.unbounded;
  flags.infeasible |= other.flags.infeasible;
  flags.overflow |= other.flags.overflow;
  flags.dropped_rows += other.flags.dropped_rows;
  flags.endpoint_outside_exact_set |= other.flags.endpoint_outside_exact_set;
}

Eigen::MatrixXd ConfidenceReport::lower(int d) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  for (const auto& e : entries) m(e.i, e.j) = e.lo;
  return m;
}

Eigen::MatrixXd ConfidenceReport::upper(int d) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
  for (const auto& e : entries) m(e.i, e.j) = e.hi;
  return m;
}

}  // namespace hawkes
