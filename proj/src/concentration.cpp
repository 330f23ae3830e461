#include "hawkes/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hawkes/error.hpp"
#include "hawkes/lp.hpp"
#include "hawkes/special.hpp"

namespace hawkes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kVRelTol = 1e-8;
constexpr int kVMaxDepth = 30;
constexpr double kDegenerateGradient = 1e-12;

// Vector-valued adaptive Simpson: every component must meet the tolerance
// before a panel is accepted.
template <class F>
class VectorSimpson {
 public:
  VectorSimpson(const F& f, Eigen::Index k) : f_(f), k_(k) {}

  Eigen::ArrayXd integrate(double a, double b) {
    const Eigen::ArrayXd fa = f_(a);
    const Eigen::ArrayXd fb = f_(b);
    const double m = 0.5 * (a + b);
    const Eigen::ArrayXd fm = f_(m);
    const Eigen::ArrayXd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, kVMaxDepth, 1);
  }

 private:
  Eigen::ArrayXd refine(double a, double b, const Eigen::ArrayXd& fa, const Eigen::ArrayXd& fm,
                        const Eigen::ArrayXd& fb, const Eigen::ArrayXd& whole, int depth,
                        int forced) {
    const double m = 0.5 * (a + b);
    const Eigen::ArrayXd flm = f_(0.5 * (a + m));
    const Eigen::ArrayXd frm = f_(0.5 * (m + b));
    const Eigen::ArrayXd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Eigen::ArrayXd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Eigen::ArrayXd both = left + right;
    const Eigen::ArrayXd diff = both - whole;
    const double abs_tol = 1e-15 * (b - a);
    const bool done =
        (diff.abs() <= 15.0 * (kVRelTol * both.abs()).max(abs_tol)).all() || !both.allFinite();
    if (forced <= 0 && (done || depth <= 0)) return both + diff / 15.0;
    return refine(a, m, fa, flm, fm, left, depth - 1, forced - 1) +
           refine(m, b, fm, frm, fb, right, depth - 1, forced - 1);
  }

  const F& f_;
  Eigen::Index k_;
};

void check_alpha(const NodeData& data, const Eigen::VectorXd& alpha) {
  if (alpha.size() != data.dimension())
    throw Error(ErrorCode::InvalidArgument, "alpha must have D entries");
  if (!alpha.allFinite()) throw Error(ErrorCode::NonFinite, "alpha must be finite");
}

Eigen::VectorXd positive_intensity(const NodeData& data, double mu, const Eigen::VectorXd& alpha) {
  Eigen::VectorXd lam = data.event_intensity(mu, alpha);
  if ((lam.array() <= 0.0).any())
    throw Error(ErrorCode::NonFinite, "intensity is not positive at this alpha");
  return lam;
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectionSchedule

int DirectionSchedule::segment_of(double t) const {
  const auto first = starts.begin() + 1;
  const auto idx = std::lower_bound(first, starts.end(), t) - first;
  return static_cast<int>(std::min<std::ptrdiff_t>(idx, z.rows() - 1));
}

bool DirectionSchedule::valid() const {
  if (starts.empty() || static_cast<Eigen::Index>(starts.size()) != z.rows()) return false;
  if (starts.front() != 0.0 || !(horizon > 0.0)) return false;
  for (std::size_t s = 1; s < starts.size(); ++s)
    if (starts[s] < starts[s - 1]) return false;
  if (starts.back() > horizon) return false;
  return z.allFinite() && (sign == 1 || sign == -1);
}

DirectionSchedule constant_schedule(const Eigen::VectorXd& z, double horizon) {
  DirectionSchedule s;
  s.horizon = horizon;
  s.starts = {0.0};
  s.z = z.transpose();
  return s;
}

// ---------------------------------------------------------------------------
// ConcentrationProblem

ConcentrationProblem::ConcentrationProblem(const EventSequence& seq, int node, double mu,
                                           std::span<const KernelSpec> kernel_row,
                                           double epsilon)
    : seq_(&seq),
      data_(seq, node, kernel_row),
      tracker_(seq, kernel_row),
      mu_(mu),
      epsilon_(epsilon) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1)");
  threshold_ = std::log(2.0 * data_.dimension() / epsilon);

  const auto times = data_.event_times();
  breakpoint_integrals_.resize(static_cast<Eigen::Index>(times.size()) + 1, data_.dimension());
  for (std::size_t m = 0; m < times.size(); ++m)
    breakpoint_integrals_.row(static_cast<Eigen::Index>(m)) =
        tracker_.integral_to(times[m]).transpose();
  breakpoint_integrals_.row(static_cast<Eigen::Index>(times.size())) =
      data_.eta_integral().transpose();
}

std::vector<DirectionSchedule> ConcentrationProblem::schedules(const Eigen::VectorXd& alpha) const {
  check_alpha(data_, alpha);
  const int d = dimension();
  const auto times = data_.event_times();
  const auto n = static_cast<Eigen::Index>(times.size());
  const double horizon = data_.horizon();
  const Eigen::VectorXd lam = positive_intensity(data_, mu_, alpha);

  std::vector<DirectionSchedule> out(static_cast<std::size_t>(2 * d));
  for (int k = 0; k < 2 * d; ++k) {
    auto& s = out[static_cast<std::size_t>(k)];
    s.sign = direction_sign(k);
    s.axis = direction_axis(k);
    s.horizon = horizon;
    s.starts.reserve(static_cast<std::size_t>(n) + 1);
    s.starts.push_back(0.0);
    s.starts.insert(s.starts.end(), times.begin(), times.end());
    s.z.resize(n + 1, d);
  }

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd inv(d, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  for (Eigen::Index seg = 0; seg <= n; ++seg) {
    bool identity = true;
    if (seg > 0) {
      const Eigen::VectorXd w = data_.event_eta().row(seg - 1).transpose() / lam(seg - 1);
      sum.noalias() += w * w.transpose();
      es.compute(sum);
      const auto& ev = es.eigenvalues();
      const double hi = ev.maxCoeff();
      if (hi > 0.0 && ev.minCoeff() >= 1e-10 * hi) {
        // Fisher estimate sum / tau_seg, so its inverse is tau_seg * sum^{-1}.
        inv.noalias() = times[seg - 1] * es.eigenvectors() * ev.cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
        identity = false;
      }
    }
    if (identity) inv.setIdentity();
    for (int j = 0; j < d; ++j) {
      const double c = std::sqrt(2.0 * threshold_ / (horizon * inv(j, j)));
      const Eigen::VectorXd v = c * inv.col(j);
      out[static_cast<std::size_t>(2 * j)].z.row(seg) = v.transpose();
      out[static_cast<std::size_t>(2 * j + 1)].z.row(seg) = -v.transpose();
    }
  }
  return out;
}

double ConcentrationProblem::pair_score(const DirectionSchedule& z,
                                        const Eigen::VectorXd& alpha) const {
  check_alpha(data_, alpha);
  if (z.z.cols() != dimension()) throw Error(ErrorCode::InvalidArgument, "z must have D columns");
  const auto times = data_.event_times();
  const Eigen::VectorXd lam = positive_intensity(data_, mu_, alpha);

  double jumps = 0.0;
  for (Eigen::Index e = 0; e < lam.size(); ++e)
    jumps += z.z.row(z.segment_of(times[e])).dot(data_.event_eta().row(e)) / lam(e);

  // Drift: sum over segments of z_s^T (F(end) - F(start)), F = integral of eta.
  const bool standard =
      z.starts.size() == times.size() + 1 &&
      std::equal(times.begin(), times.end(), z.starts.begin() + 1);
  const auto segments = static_cast<Eigen::Index>(z.starts.size());
  double drift = 0.0;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(dimension());
  for (Eigen::Index s = 0; s < segments; ++s) {
    const double end = s + 1 < segments ? z.starts[static_cast<std::size_t>(s) + 1] : z.horizon;
    Eigen::VectorXd cur;
    if (standard)
      cur = breakpoint_integrals_.row(s).transpose();
    else
      cur = tracker_.integral_to(std::min(end, data_.horizon()));
    drift += z.z.row(s).dot(cur - prev);
    prev = std::move(cur);
  }
  return jumps - drift;
}

VIntegral ConcentrationProblem::v_integral(const DirectionSchedule& z,
                                           const Eigen::VectorXd& alpha) const {
  return v_integrals(std::span<const DirectionSchedule>(&z, 1), alpha).front();
}

std::vector<VIntegral> ConcentrationProblem::v_integrals(std::span<const DirectionSchedule> zs,
                                                         const Eigen::VectorXd& alpha) const {
  check_alpha(data_, alpha);
  const int d = dimension();
  const auto k = static_cast<Eigen::Index>(zs.size());
  for (const auto& z : zs)
    if (z.z.cols() != d) throw Error(ErrorCode::InvalidArgument, "z must have D columns");

  // Cut points: every event (eta jumps) and every schedule breakpoint.
  const double horizon = data_.horizon();
  std::vector<double> cuts(seq_->times().begin(), seq_->times().end());
  for (const auto& z : zs) cuts.insert(cuts.end(), z.starts.begin(), z.starts.end());
  cuts.push_back(0.0);
  cuts.push_back(horizon);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  while (!cuts.empty() && cuts.back() > horizon) cuts.pop_back();

  std::vector<bool> overflow(static_cast<std::size_t>(k), false);
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(k);
  Eigen::MatrixXd zmat(k, d);
  Eigen::VectorXd eta_t(d);
  std::ptrdiff_t last = -1;

  auto integrand = [&](double t) {
    tracker_.eta_after(last, t, eta_t);
    const double lam = mu_ + alpha.dot(eta_t);
    if (!(lam > 0.0)) throw Error(ErrorCode::NonFinite, "intensity is not positive at this alpha");
    Eigen::ArrayXd out = (zmat * eta_t).array() / lam;
    for (Eigen::Index q = 0; q < k; ++q) {
      if (out(q) > kOverflowExponent) {
        overflow[static_cast<std::size_t>(q)] = true;
        out(q) = 0.0;
      } else {
        out(q) = lam * special::exp_excess(out(q));
      }
    }
    return out;
  };
  VectorSimpson<decltype(integrand)> quad(integrand, k);

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    if (!(b > a)) continue;
    last = static_cast<std::ptrdiff_t>(seq_->count_before(b)) - 1;
    const double mid = 0.5 * (a + b);
    for (Eigen::Index q = 0; q < k; ++q)
      zmat.row(q) = zs[static_cast<std::size_t>(q)].z.row(zs[static_cast<std::size_t>(q)].segment_of(mid));
    if ((zmat.array() == 0.0).all() || last < 0) continue;  // integrand is identically 0
    total += quad.integrate(a, b);
  }

  std::vector<VIntegral> out(static_cast<std::size_t>(k));
  for (Eigen::Index q = 0; q < k; ++q) {
    auto& v = out[static_cast<std::size_t>(q)];
    v.overflow = overflow[static_cast<std::size_t>(q)];
    v.value = v.overflow ? kInf : total(q);
  }
  return out;
}

Eigen::VectorXd ConcentrationProblem::g(const Eigen::VectorXd& alpha, bool* overflow) const {
  const auto zs = schedules(alpha);
  const auto vs = v_integrals(zs, alpha);
  Eigen::VectorXd out(static_cast<Eigen::Index>(zs.size()));
  bool any = false;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    if (vs[k].overflow) {
      out(static_cast<Eigen::Index>(k)) = -kInf;
      any = true;
    } else {
      out(static_cast<Eigen::Index>(k)) = pair_score(zs[k], alpha) - vs[k].value;
    }
  }
  if (overflow) *overflow = any;
  return out;
}

bool ConcentrationProblem::exact_membership(const Eigen::VectorXd& alpha) const {
  return (g(alpha).array() <= threshold_).all();
}

Polyhedron ConcentrationProblem::polyhedral_set(const Eigen::VectorXd& alpha_hat) const {
  const int d = dimension();
  const int kdim = 2 * d;
  bool overflow = false;
  const Eigen::VectorXd g0 = g(alpha_hat, &overflow);

  Eigen::MatrixXd grad(kdim, d);
  for (int j = 0; j < d; ++j) {
    const double h = 1e-5 * (1.0 + alpha_hat(j));
    Eigen::VectorXd up = alpha_hat;
    up(j) += h;
    if (alpha_hat(j) - h >= 0.0) {
      Eigen::VectorXd down = alpha_hat;
      down(j) -= h;
      grad.col(j) = (g(up) - g(down)) / (2.0 * h);
    } else {
      // One-sided second-order stencil keeps alpha inside the orthant.
      Eigen::VectorXd up2 = alpha_hat;
      up2(j) += 2.0 * h;
      grad.col(j) = (-3.0 * g0 + 4.0 * g(up) - g(up2)) / (2.0 * h);
    }
  }

  Polyhedron poly;
  poly.overflow = overflow;
  std::vector<int> kept;
  for (int k = 0; k < kdim; ++k) {
    if (!std::isfinite(g0(k))) {
      poly.dropped.push_back({k, "overflow: constraint satisfied"});
      continue;
    }
    if (!grad.row(k).allFinite()) {
      poly.dropped.push_back({k, "non-finite gradient"});
      continue;
    }
    if (grad.row(k).norm() < kDegenerateGradient) {
      poly.dropped.push_back({k, "degenerate gradient"});
      continue;
    }
    kept.push_back(k);
  }
  poly.G.resize(static_cast<Eigen::Index>(kept.size()), d);
  poly.h.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const int k = kept[r];
    const auto row = static_cast<Eigen::Index>(r);
    poly.G.row(row) = grad.row(k);
    poly.h(row) = threshold_ - g0(k) + grad.row(k).dot(alpha_hat);
    poly.direction.push_back(k);
  }
  return poly;
}

// ---------------------------------------------------------------------------
// Free-function forms

std::vector<DirectionSchedule> build_schedule(const EventSequence& seq, int node,
                                              const Eigen::VectorXd& alpha, double mu,
                                              std::span<const KernelSpec> kernel_row,
                                              double epsilon) {
  return ConcentrationProblem(seq, node, mu, kernel_row, epsilon).schedules(alpha);
}

double pair_score(const DirectionSchedule& z, const Eigen::VectorXd& alpha,
                  const EventSequence& seq, int node, double mu,
                  std::span<const KernelSpec> kernel_row) {
  return ConcentrationProblem(seq, node, mu, kernel_row, 0.5).pair_score(z, alpha);
}

VIntegral v_integral(const DirectionSchedule& z, const Eigen::VectorXd& alpha,
                     const EventSequence& seq, int node, double mu,
                     std::span<const KernelSpec> kernel_row) {
  return ConcentrationProblem(seq, node, mu, kernel_row, 0.5).v_integral(z, alpha);
}

double g(int k, const Eigen::VectorXd& alpha, const EventSequence& seq, int node, double mu,
         std::span<const KernelSpec> kernel_row, double epsilon) {
  const ConcentrationProblem p(seq, node, mu, kernel_row, epsilon);
  if (k < 0 || k >= 2 * p.dimension())
    throw Error(ErrorCode::InvalidArgument, "direction index out of range");
  return p.g(alpha)(k);
}

bool exact_membership(const Eigen::VectorXd& alpha, const EventSequence& seq, int node, double mu,
                      std::span<const KernelSpec> kernel_row, double epsilon) {
  return ConcentrationProblem(seq, node, mu, kernel_row, epsilon).exact_membership(alpha);
}

Polyhedron polyhedral_set(const Eigen::VectorXd& alpha_hat, const EventSequence& seq, int node,
                          double mu, std::span<const KernelSpec> kernel_row, double epsilon) {
  return ConcentrationProblem(seq, node, mu, kernel_row, epsilon).polyhedral_set(alpha_hat);
}

AxisInterval entry_ci(const Polyhedron& poly, int axis) {
  const auto d = poly.G.cols();
  if (axis < 0 || axis >= d) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c(axis) = 1.0;

  AxisInterval out;
  const lp::Result lo = lp::minimize(c, poly.G, poly.h);
  if (lo.status == lp::Status::Infeasible)
    throw Error(ErrorCode::Infeasible, "linearised confidence polyhedron is empty");
  out.lo = lo.value;
  out.argmin = lo.x;

  const lp::Result hi = lp::maximize(c, poly.G, poly.h);
  if (hi.status == lp::Status::Infeasible)
    throw Error(ErrorCode::Infeasible, "linearised confidence polyhedron is empty");
  if (hi.status == lp::Status::Unbounded) {
    out.hi = kInf;
    out.unbounded = true;
  } else {
    out.hi = hi.value;
    out.argmax = hi.x;
  }
  return out;
}

ConcentrationResult concentration_ci(const ConcentrationProblem& problem, const NodeFit& fit,
                                     const ConcentrationOptions& opts) {
  ConcentrationResult res;
  res.fit = fit;
  res.polyhedron = problem.polyhedral_set(fit.alpha);
  res.g_at_estimate = problem.g(fit.alpha);

  ConfidenceReport& r = res.report;
  r.method = CiMethod::Concentration;
  r.epsilon = problem.epsilon();
  r.flags.overflow = res.polyhedron.overflow;
  r.flags.dropped_rows = static_cast<int>(res.polyhedron.dropped.size());

  const int d = problem.dimension();
  for (int j = 0; j < d; ++j) {
    EntryInterval e;
    e.i = problem.node();
    e.j = j;
    e.point = fit.alpha(j);
    try {
      const AxisInterval iv = entry_ci(res.polyhedron, j);
      e.lo = iv.lo;
      e.hi = iv.hi;
      e.unbounded = iv.unbounded;
      r.flags.unbounded |= iv.unbounded;
      if (opts.endpoint_diagnostics) {
        bool outside = !problem.exact_membership(iv.argmin);
        if (!iv.unbounded) outside |= !problem.exact_membership(iv.argmax);
        r.flags.endpoint_outside_exact_set |= outside;
      }
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Infeasible) throw;
      r.flags.infeasible = true;
      e.valid = false;
      e.lo = e.hi = std::numeric_limits<double>::quiet_NaN();
    }
    r.entries.push_back(e);
  }
  return res;
}

ConcentrationResult concentration_ci(const EventSequence& seq, int node, double mu,
                                     std::span<const KernelSpec> kernel_row, double epsilon,
                                     const ConcentrationOptions& opts) {
  const ConcentrationProblem problem(seq, node, mu, kernel_row, epsilon);
  const NodeFit fit = fit_node(problem.data(), mu, opts.solver);
  return concentration_ci(problem, fit, opts);
}

// ---------------------------------------------------------------------------
// Fixed directions

Eigen::VectorXd fixed_direction_statistics(const ConcentrationProblem& problem,
                                           std::span<const Eigen::VectorXd> zs,
                                           const Eigen::VectorXd& alpha) {
  std::vector<DirectionSchedule> schedules;
  schedules.reserve(zs.size());
  for (const auto& z : zs) schedules.push_back(constant_schedule(z, problem.horizon()));
  const auto vs = problem.v_integrals(schedules, alpha);
  Eigen::VectorXd out(static_cast<Eigen::Index>(zs.size()));
  for (std::size_t k = 0; k < zs.size(); ++k)
    out(static_cast<Eigen::Index>(k)) =
        vs[k].overflow ? -kInf : problem.pair_score(schedules[k], alpha) - vs[k].value;
  return out;
}

bool fixed_direction_membership(const ConcentrationProblem& problem,
                                std::span<const Eigen::VectorXd> zs, const Eigen::VectorXd& alpha) {
  if (zs.empty()) return true;
  const double bound = std::log(static_cast<double>(zs.size()) / problem.epsilon());
  return (fixed_direction_statistics(problem, zs, alpha).array() <= bound).all();
}

std::vector<Eigen::VectorXd> optimal_directions(const Eigen::MatrixXd& fisher, double horizon,
                                                double epsilon) {
  const auto d = fisher.rows();
  if (fisher.cols() != d || d == 0) throw Error(ErrorCode::InvalidArgument, "fisher must be square");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw Error(ErrorCode::InvalidArgument, "epsilon must be in (0, 1)");
  const Eigen::LLT<Eigen::MatrixXd> llt(fisher);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularFisher, "Fisher information is not positive definite");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
  const double bound = std::log(2.0 * static_cast<double>(d) / epsilon);
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index j = 0; j < d; ++j) {
    const Eigen::VectorXd v = std::sqrt(2.0 * bound / (horizon * inv(j, j))) * inv.col(j);
    out.push_back(v);
    out.push_back(-v);
  }
  return out;
}

}  // namespace hawkes
