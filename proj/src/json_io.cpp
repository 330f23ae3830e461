#include "hawkes/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hawkes/error.hpp"

namespace hawkes::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Parse, field + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(field.empty() ? key : field + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) field_error(field, "must be finite");
  return x;
}

double positive(const json& obj, const std::string& key, const std::string& field) {
  const double x = number(require(obj, key, field), field + "." + key);
  if (!(x > 0.0)) field_error(field + "." + key, "must be > 0");
  return x;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void emit(std::ostream& out, const json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * level), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << json(key).dump() << (indent > 0 ? ": " : ":");
        emit(out, value, indent, level + 1);
      }
      out << nl << close << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const json& v) { return v.is_structured(); });
      if (flat) {
        out << '[';
        for (std::size_t k = 0; k < j.size(); ++k) {
          if (k) out << (indent > 0 ? ", " : ",");
          emit(out, j[k], indent, level + 1);
        }
        out << ']';
        return;
      }
      out << '[' << nl;
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out << ',' << nl;
        out << pad;
        emit(out, j[k], indent, level + 1);
      }
      out << nl << close << ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x))
        out << "null";
      else
        out << format_number(x);
      return;
    }
    default:
      out << j.dump();
  }
}

double nullable_number(const json& j, const std::string& field, double if_null) {
  if (j.is_null()) return if_null;
  return number(j, field);
}

}  // namespace

ModelParams ExperimentConfig::params() const {
  if (!alpha) throw Error(ErrorCode::InvalidArgument, "config has no influence matrix A");
  return ModelParams(mu, *alpha, kernels);
}

json kernel_to_json(const KernelSpec& spec) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Exponential>)
          return {{"type", "exponential"}, {"beta", k.beta}};
        else if constexpr (std::is_same_v<K, GammaKernel>)
          return {{"type", "gamma"}, {"k", k.k}, {"beta", k.beta}};
        else
          return {{"type", "gaussian"}, {"tau", k.tau}, {"sigma", k.sigma}, {"beta", k.beta}};
      },
      spec.variant());
}

KernelSpec kernel_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) field_error(field, "must be an object");
  const json& type = require(j, "type", field);
  if (!type.is_string()) field_error(field + ".type", "must be a string");
  const auto name = type.get<std::string>();
  try {
    if (name == "exponential") return Exponential{positive(j, "beta", field)};
    if (name == "gamma") return GammaKernel{positive(j, "k", field), positive(j, "beta", field)};
    if (name == "gaussian") {
      const double tau = number(require(j, "tau", field), field + ".tau");
      if (tau < 0.0) field_error(field + ".tau", "must be >= 0");
      return Gaussian{tau, positive(j, "sigma", field), positive(j, "beta", field)};
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    field_error(field, e.what());
  }
  field_error(field + ".type", "unknown kernel type '" + name + "'");
}

ExperimentConfig parse_config(std::string_view text, bool require_alpha) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::Parse, "config: malformed JSON at line " + std::to_string(line) +
                                      ", column " + std::to_string(col));
  }
  if (!root.is_object()) field_error("config", "must be a JSON object");

  ExperimentConfig c;
  const json& d = require(root, "D", "");
  if (!d.is_number_integer() || d.get<long long>() < 1) field_error("D", "must be an integer >= 1");
  c.node_count = d.get<int>();
  const int n = c.node_count;
  c.horizon = positive(root, "T", "");

  const json& mu = require(root, "mu", "");
  if (!mu.is_array() || static_cast<int>(mu.size()) != n)
    field_error("mu", "must be an array of D numbers");
  c.mu.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::string f = "mu[" + std::to_string(i) + "]";
    c.mu(i) = number(mu[static_cast<std::size_t>(i)], f);
    if (!(c.mu(i) > 0.0)) field_error(f, "must be > 0");
  }

  if (const auto a = root.find("A"); a != root.end()) {
    if (!a->is_array() || static_cast<int>(a->size()) != n)
      field_error("A", "must be a D x D array");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      const json& row = (*a)[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        field_error("A[" + std::to_string(i) + "]", "must be an array of D numbers");
      for (int j = 0; j < n; ++j) {
        const std::string f = "A[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        m(i, j) = number(row[static_cast<std::size_t>(j)], f);
        if (m(i, j) < 0.0) field_error(f, "must be >= 0");
      }
    }
    c.alpha = m;
  } else if (require_alpha) {
    field_error("A", "missing");
  }

  const bool shared = root.contains("kernel");
  const bool grid = root.contains("kernels");
  if (shared == grid) field_error("kernel", "give exactly one of 'kernel' or 'kernels'");
  if (shared) {
    c.kernels = KernelGrid(n, kernel_from_json(root["kernel"], "kernel"));
  } else {
    const json& k = root["kernels"];
    if (!k.is_array() || static_cast<int>(k.size()) != n)
      field_error("kernels", "must be a D x D array of kernel objects");
    std::vector<KernelSpec> specs;
    for (int i = 0; i < n; ++i) {
      const json& row = k[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        field_error("kernels[" + std::to_string(i) + "]", "must be an array of D kernels");
      for (int j = 0; j < n; ++j)
        specs.push_back(kernel_from_json(row[static_cast<std::size_t>(j)],
                                         "kernels[" + std::to_string(i) + "][" +
                                             std::to_string(j) + "]"));
    }
    c.kernels = KernelGrid(n, std::move(specs));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, bool require_alpha) {
  return parse_config(read_text(path), require_alpha);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const json& j, int indent) {
  std::ostringstream out;
  emit(out, j, indent, 0);
  out << '\n';
  return out.str();
}

void write_events_csv(std::ostream& out, const EventSequence& seq) {
  out << "time,node\n";
  for (std::size_t k = 0; k < seq.size(); ++k)
    out << format_number(seq.times()[k]) << ',' << seq.nodes()[k] << '\n';
}

EventSequence read_events_csv(std::istream& in, double horizon, int node_count) {
  std::string line;
  if (!std::getline(in, line)) return EventSequence({}, horizon, node_count);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time,node")
    throw Error(ErrorCode::Parse, "events: line 1: expected header 'time,node'");
  std::vector<Event> events;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = "events: line " + std::to_string(lineno);
    if (comma == std::string::npos) throw Error(ErrorCode::Parse, where + ": expected time,node");
    Event e{};
    try {
      std::size_t used = 0;
      const std::string t = line.substr(0, comma);
      e.time = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument("trailing");
      const std::string nd = line.substr(comma + 1);
      e.node = std::stoi(nd, &used);
      if (used != nd.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, where + ": expected time,node");
    }
    events.push_back(e);
  }
  try {
    return EventSequence(std::move(events), horizon, node_count);
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, std::string("events: ") + e.what());
  }
}

std::filesystem::path manifest_path(const std::filesystem::path& events) {
  auto p = events;
  p.replace_filename(events.stem().string() + ".manifest.json");
  return p;
}

void save_events(const std::filesystem::path& path, const EventSequence& seq) {
  std::ostringstream csv;
  write_events_csv(csv, seq);
  write_text(path, csv.str());
  json m = {{"T", seq.horizon()}, {"D", seq.node_count()}};
  write_text(manifest_path(path), dump(m));
}

EventSequence load_events(const std::filesystem::path& path, std::optional<double> horizon,
                          std::optional<int> node_count) {
  const auto mp = manifest_path(path);
  if (std::filesystem::exists(mp)) {
    json m;
    try {
      m = json::parse(read_text(mp));
    } catch (const json::parse_error&) {
      throw Error(ErrorCode::Parse, "manifest: malformed JSON in " + mp.string());
    }
    if (!m.is_object()) field_error("manifest", "must be a JSON object");
    horizon = positive(m, "T", "manifest");
    const json& d = require(m, "D", "manifest");
    if (!d.is_number_integer() || d.get<long long>() < 1)
      field_error("manifest.D", "must be an integer >= 1");
    node_count = d.get<int>();
  }
  if (!horizon || !node_count)
    throw Error(ErrorCode::Io, "no manifest for " + path.string() + " and no T/D given");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_events_csv(in, *horizon, *node_count);
}

json report_to_json(const ConfidenceReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"i", e.i},
                       {"j", e.j},
                       {"point", e.point},
                       {"lo", e.lo},
                       {"hi", e.hi},
                       {"lo_clipped", e.valid ? json(e.lo_clipped()) : json(nullptr)},
                       {"unbounded", e.unbounded},
                       {"valid", e.valid}});
  }
  return {{"method", std::string(to_string(r.method))},
          {"epsilon", r.epsilon},
          {"level", r.level()},
          {"flags",
           {{"singular_fisher", r.flags.singular_fisher},
            {"unbounded", r.flags.unbounded},
            {"infeasible", r.flags.infeasible},
            {"overflow", r.flags.overflow},
            {"dropped_rows", r.flags.dropped_rows},
            {"endpoint_outside_exact_set", r.flags.endpoint_outside_exact_set}}},
          {"entries", entries}};
}

ConfidenceReport report_from_json(const json& j) {
  if (!j.is_object()) field_error("report", "must be a JSON object");
  ConfidenceReport r;
  const json& method = require(j, "method", "report");
  if (!method.is_string()) field_error("report.method", "must be a string");
  try {
    r.method = ci_method_from_string(method.get<std::string>());
  } catch (const Error&) {
    field_error("report.method", "must be 'asymptotic' or 'concentration'");
  }
  r.epsilon = number(require(j, "epsilon", "report"), "report.epsilon");
  if (!(r.epsilon > 0.0 && r.epsilon < 1.0)) field_error("report.epsilon", "must be in (0, 1)");

  if (const auto f = j.find("flags"); f != j.end() && f->is_object()) {
    r.flags.singular_fisher = f->value("singular_fisher", false);
    r.flags.unbounded = f->value("unbounded", false);
    r.flags.infeasible = f->value("infeasible", false);
    r.flags.overflow = f->value("overflow", false);
    r.flags.dropped_rows = f->value("dropped_rows", 0);
    r.flags.endpoint_outside_exact_set = f->value("endpoint_outside_exact_set", false);
  }

  const json& entries = require(j, "entries", "report");
  if (!entries.is_array()) field_error("report.entries", "must be an array");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string f = "report.entries[" + std::to_string(k) + "]";
    const json& e = entries[k];
    if (!e.is_object()) field_error(f, "must be an object");
    EntryInterval iv;
    const json& i = require(e, "i", f);
    const json& jj = require(e, "j", f);
    if (!i.is_number_integer() || i.get<long long>() < 0) field_error(f + ".i", "must be an index");
    if (!jj.is_number_integer() || jj.get<long long>() < 0)
      field_error(f + ".j", "must be an index");
    iv.i = i.get<int>();
    iv.j = jj.get<int>();
    iv.valid = e.value("valid", true);
    iv.unbounded = e.value("unbounded", false);
    iv.point = nullable_number(require(e, "point", f), f + ".point", nan);
    iv.lo = nullable_number(require(e, "lo", f), f + ".lo", nan);
    iv.hi = nullable_number(require(e, "hi", f), f + ".hi",
                            iv.unbounded ? std::numeric_limits<double>::infinity() : nan);
    r.entries.push_back(iv);
  }
  return r;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace hawkes::io
