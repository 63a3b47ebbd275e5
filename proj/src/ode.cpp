#include "spacing/ode.hpp"

#include "spacing/error.hpp"

#include <boost/multiprecision/float128.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <cstdio>
#include <mutex>
#include <string>
#include <tuple>

// multiprecision numbers expose value_type as themselves; stop the
// recursion odeint uses to find the scalar type.
namespace boost::numeric::odeint::detail {
template <>
struct extract_value_type<boost::multiprecision::float128, void> {
  using type = boost::multiprecision::float128;
};
}  // namespace boost::numeric::odeint::detail

namespace spacing {

namespace {

namespace odeint = boost::numeric::odeint;
using Real = boost::multiprecision::float128;

// sigma, sigma', sigma'', int sigma/t
template <class T>
using StateT = std::array<T, 4>;
template <class T>
using StepperT = odeint::runge_kutta_fehlberg78<StateT<T>, T, StateT<T>, T>;

// Pilot tolerances for the amplification estimate; the tight one must be
// far enough below the loose one that its own error is negligible.
constexpr long double kPilotLoose = 1e-24L;
constexpr long double kPilotTight = 1e-27L;
// The seed series must be accurate to well below any local tolerance in use.
constexpr long double kSeedTolerance = 1e-32L;
constexpr long double kHandoffTolerance = 1e-12L;
constexpr int kGeometricMarks = 96;
constexpr int kLinearMarks = 160;

std::string num(long double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6Lg", v);
  return buf;
}
std::string num(const Real& v) { return num(static_cast<long double>(v)); }

template <class T>
int sign_of(const T& v) {
  return v < 0 ? -1 : 1;
}

template <class T>
T sigma_dd_impl(const TranscendentSpec& spec, const T& s, const T& sigma, const T& first,
                int branch, const T& eps_manifold) {
  using std::sqrt;
  const T f = forcing<T>(spec, s, sigma, first);
  if (f >= 0) return (branch < 0 ? -1 : 1) * sqrt(f) / s;
  const T scale = residual_scale<T>(spec, s, sigma, first, T(0));
  if (-f <= eps_manifold * scale) return T(0);
  throw Error(ErrorCode::kBranchAmbiguity,
              std::string(name(spec.id)) + ": F = " + num(f) + " < 0 at s = " + num(s));
}

template <class T>
class System {
 public:
  System(const TranscendentSpec& spec, IntegrationForm form, int branch)
      : spec_(spec), form_(form), branch_(branch) {}

  void operator()(const StateT<T>& y, StateT<T>& dydx, const T& x) const {
    dydx[0] = y[1];
    if (form_ == IntegrationForm::kThirdOrder) {
      dydx[1] = y[2];
      dydx[2] = third_derivative<T>(spec_, x, y[0], y[1], y[2]);
    } else {
      dydx[1] = sigma_dd_impl<T>(spec_, x, y[0], y[1], branch_, T(kManifoldTolerance));
      dydx[2] = 0;
    }
    dydx[3] = y[0] / x;
  }

 private:
  const TranscendentSpec& spec_;
  IntegrationForm form_;
  int branch_;
};

struct Seed {
  Real s0;
  StateT<Real> y;
};

Seed make_seed(const SeriesExpansion& tight, const Real& s0) {
  using std::pow;
  using std::sqrt;
  const Real tau = sqrt(s0);
  Seed seed{s0, {0, 0, 0, 0}};
  for (const auto& t : tight.terms) {
    const Real c = t.exact.to_bin_float().convert_to<Real>();
    const Real e = Real(t.tau_exponent) / 2;
    const Real p = pow(tau, t.tau_exponent);
    seed.y[0] += c * p;
    seed.y[1] += c * e * p / s0;
    seed.y[2] += c * e * (e - 1) * p / (s0 * s0);
    seed.y[3] += c * 2 / t.tau_exponent * p;
  }
  return seed;
}

TrajectoryNode to_node(const Real& x, const StateT<Real>& y) {
  return {static_cast<long double>(x), static_cast<long double>(y[0]),
          static_cast<long double>(y[1]), static_cast<long double>(y[2]),
          static_cast<long double>(y[3])};
}

struct Pass {
  std::vector<TrajectoryNode> nodes;
  std::vector<BranchFlip> flips;
  std::vector<StateT<Real>> at_marks;
  long double max_residual = 0;
  long double max_residual_at = 0;
  std::size_t steps = 0;
};

// One adaptive sweep from the seed through every mark (increasing, the last
// being s_end); steps are shortened to land exactly on each mark.
Pass run_pass(const TranscendentSpec& spec, const Seed& seed, const std::vector<Real>& marks,
              const Real& rel, const Real& abs, IntegrationForm form, std::size_t max_steps,
              bool record) {
  using std::fabs;
  const std::string who(name(spec.id));
  const int branch = sign_of(seed.y[2]);
  System<Real> sys(spec, form, branch);
  auto controlled = odeint::make_controlled(abs, rel, StepperT<Real>());

  Pass pass;
  StateT<Real> y = seed.y;
  Real x = seed.s0;
  Real dt = x / 8;
  if (record) pass.nodes.push_back(to_node(x, y));

  for (const Real& target : marks) {
    while (x < target) {
      if (++pass.steps > max_steps) {
        throw Error(ErrorCode::kStiffnessFailure, who + ": step budget exhausted at s = " + num(x));
      }
      const bool landing = x + dt >= target;
      Real h = landing ? Real(target - x) : dt;
      const Real x_before = x;
      const StateT<Real> y_before = y;
      if (controlled.try_step(sys, y, x, h) == odeint::fail) {
        dt = h;
        if (dt < Real(1e-26L) * x) {
          throw Error(ErrorCode::kStiffnessFailure, who + ": step size underflow at s = " + num(x));
        }
        continue;
      }
      if (landing) {
        x = target;
      } else {
        dt = h;
      }
      if (form == IntegrationForm::kSquareRoot) {
        y[2] = sigma_dd_impl<Real>(spec, x, y[0], y[1], branch, Real(kManifoldTolerance));
      }

      const Real scale = residual_scale<Real>(spec, x, y[0], y[1], y[2]);
      if (scale > 0) {
        const Real r = fabs(residual_expr<Real>(spec, x, y[0], y[1], y[2])) / scale;
        if (static_cast<long double>(r) >= pass.max_residual) {
          pass.max_residual = static_cast<long double>(r);
          pass.max_residual_at = static_cast<long double>(x);
        }
      }
      if (sign_of(y_before[2]) != sign_of(y[2]) && y_before[2] != 0 && y[2] != 0) {
        const Real w = y_before[2] / (y_before[2] - y[2]);
        const Real f_scale = residual_scale<Real>(spec, x, y[0], y[1], Real(0));
        const Real f = forcing<Real>(spec, x, y[0], y[1]);
        pass.flips.push_back({static_cast<long double>(x_before + w * (x - x_before)),
                              static_cast<long double>(f_scale > 0 ? f / f_scale : f),
                              static_cast<long double>(x - x_before)});
      }
      if (record) pass.nodes.push_back(to_node(x, y));
    }
    pass.at_marks.push_back(y);
  }
  return pass;
}

std::vector<Real> pilot_marks(const Real& s0, const Real& s_end) {
  using std::exp;
  using std::log;
  std::vector<Real> marks;
  const Real l0 = log(s0), l1 = log(s_end);
  for (int i = 1; i <= kGeometricMarks; ++i) {
    marks.push_back(exp(l0 + (l1 - l0) * i / kGeometricMarks));
  }
  for (int i = 1; i <= kLinearMarks; ++i) marks.push_back(s0 + (s_end - s0) * i / kLinearMarks);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  while (!marks.empty() && marks.back() >= s_end) marks.pop_back();
  marks.push_back(s_end);
  return marks;
}

// Relative distance between two states, weighting sigma against its natural
// size |sigma| + |s sigma'| and the integral against 1 + |I|.
long double state_distance(const Real& s, const StateT<Real>& a, const StateT<Real>& b) {
  using std::fabs;
  const Real ds = fabs(a[0] - b[0]) / (fabs(b[0]) + fabs(s * b[1]));
  const Real di = fabs(a[3] - b[3]) / (1 + fabs(b[3]));
  return static_cast<long double>(std::max(ds, di));
}

using PilotKey = std::tuple<const TranscendentSpec*, IntegrationForm, long double, long double>;

long double measure_amplification(const TranscendentSpec& spec, const Seed& seed,
                                  long double s_end, IntegrationForm form, std::size_t max_steps) {
  static std::mutex mutex;
  static std::map<PilotKey, long double> cache;
  const PilotKey key{&spec, form, s_end, static_cast<long double>(seed.s0)};
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const std::vector<Real> marks = pilot_marks(seed.s0, Real(s_end));
  const Pass loose =
      run_pass(spec, seed, marks, Real(kPilotLoose), Real(0), form, max_steps, false);
  const Pass tight =
      run_pass(spec, seed, marks, Real(kPilotTight), Real(0), form, max_steps, false);
  long double worst = 0;
  for (std::size_t i = 0; i < marks.size(); ++i) {
    worst = std::max(worst, state_distance(marks[i], loose.at_marks[i], tight.at_marks[i]));
  }
  const long double amplification = std::max(1.0L, worst / kPilotLoose);
  std::lock_guard lock(mutex);
  cache.emplace(key, amplification);
  return amplification;
}

}  // namespace

long double sigma_dd(const TranscendentSpec& spec, long double s, long double sigma,
                     long double first, int branch, long double eps_manifold) {
  return sigma_dd_impl<long double>(spec, s, sigma, first, branch, eps_manifold);
}

SolutionTrajectory::SolutionTrajectory(TranscendentSpec spec, SeriesExpansion series,
                                       IntegrationOptions options,
                                       std::vector<TrajectoryNode> nodes,
                                       std::vector<BranchFlip> flips,
                                       IntegrationDiagnostics diagnostics)
    : spec_(std::move(spec)),
      series_(std::move(series)),
      options_(options),
      nodes_(std::move(nodes)),
      flips_(std::move(flips)),
      diagnostics_(diagnostics) {}

DenseValue SolutionTrajectory::at(long double s) const {
  if (s < 0 || s > end() * (1 + 1e-15L)) {
    throw Error(ErrorCode::kRangeExceeded, std::string(name(spec_.id)) + ": argument " + num(s) +
                                               " outside [0, " + num(end()) + "]");
  }
  if (s == 0) return {0, 0, 0, 0};
  if (s <= start()) {
    const SeriesValue v = eval_series(series_, s);
    return {v.value, v.first, v.second, series_integral_term(series_, s)};
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s,
                             [](long double v, const TrajectoryNode& n) { return v < n.s; });
  const TrajectoryNode& n = *std::prev(it);
  if (n.s == s || it == nodes_.end()) return {n.sigma, n.first, n.second, n.integral};

  const int branch = sign_of(n.second);
  System<long double> sys(spec_, options_.form, branch);
  StepperT<long double> stepper;
  StateT<long double> y{n.sigma, n.first, n.second, n.integral};
  StateT<long double> out{};
  stepper.do_step(sys, y, n.s, out, s - n.s);
  if (options_.form == IntegrationForm::kSquareRoot) {
    out[2] = sigma_dd(spec_, s, out[0], out[1], branch);
  }
  return {out[0], out[1], out[2], out[3]};
}

SolutionTrajectory integrate(const TranscendentSpec& spec, const SeriesExpansion& series,
                             long double s_end, const IntegrationOptions& options) {
  const std::string who(name(spec.id));
  if (!(s_end > series.trust_radius)) {
    throw Error(ErrorCode::kInvalidArgument,
                who + ": s_end " + num(s_end) + " lies inside the series trust radius");
  }
  if (!(options.rel_tol >= kMinRelTol && options.rel_tol <= kMaxRelTol)) {
    throw Error(ErrorCode::kInvalidArgument, "rel_tol must lie in [1e-13, 1e-6]");
  }
  if (!(options.abs_tol >= 0)) throw Error(ErrorCode::kInvalidArgument, "abs_tol must be >= 0");

  const SeriesExpansion tight = extend_series(spec, series.order_tau, kSeedTolerance);
  const Seed seed =
      make_seed(tight, Real(std::min(tight.trust_radius, series.trust_radius) / 2));

  IntegrationDiagnostics diag;
  diag.seed_point = static_cast<long double>(seed.s0);
  diag.amplification = measure_amplification(spec, seed, s_end, options.form, options.max_steps);
  diag.local_tolerance = std::max(options.rel_tol / diag.amplification, kLocalToleranceFloor);
  diag.estimated_error = diag.amplification * diag.local_tolerance;

  const long double audit_s = series.trust_radius;
  const std::vector<Real> marks{Real(audit_s), Real(s_end)};
  Pass pass = run_pass(spec, seed, marks, Real(diag.local_tolerance),
                       Real(options.abs_tol / diag.amplification), options.form,
                       options.max_steps, true);
  diag.max_relative_residual = pass.max_residual;
  diag.max_residual_at = pass.max_residual_at;
  diag.steps = pass.steps;

  // Handoff audit: the integrator must reproduce the series at its trust radius,
  // to the requested accuracy but never looser than kHandoffTolerance demands.
  const long double handoff_tol = std::max(kHandoffTolerance, options.rel_tol);
  const SeriesValue sv = eval_series(series, audit_s);
  const long double err =
      std::fabs(static_cast<long double>(pass.at_marks.front()[0]) - sv.value) /
      std::fabs(sv.value);
  if (!(err <= handoff_tol)) {
    throw Error(ErrorCode::kInconsistentSeed,
                who + ": series and integrator disagree at the trust radius (relative " +
                    num(err) + ", allowed " + num(handoff_tol) + ")");
  }
  return SolutionTrajectory(spec, series, options, std::move(pass.nodes), std::move(pass.flips),
                            diag);
}

}  // namespace spacing
