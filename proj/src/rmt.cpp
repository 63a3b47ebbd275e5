#include "spacing/rmt.hpp"

#include "spacing/distributions.hpp"
#include "spacing/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <random>
#include <thread>

namespace spacing {

double semicircle_density(double x, int n) {
  const double r2 = 4.0 * n - x * x;
  return r2 > 0 ? std::sqrt(r2) / (2 * std::numbers::pi) : 0.0;
}

std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diagonal,
                                            const std::vector<double>& off_diagonal) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  if (n == 0) return {};
  if (off_diagonal.size() + 1 != diagonal.size()) {
    throw Error(ErrorCode::kInvalidArgument, "off-diagonal must have n - 1 entries");
  }
  if (n == 1) return diagonal;
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diagonal.data(), n);
  const Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(off_diagonal.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kEigensolverNoConvergence,
                "implicit QR did not converge for n = " + std::to_string(n));
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + n};
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + index * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EnsembleSample sample_spectrum(int beta, int n, std::uint64_t seed, double window_fraction) {
  if (beta != 1 && beta != 2 && beta != 4) {
    throw Error(ErrorCode::kInvalidArgument, "beta must be 1, 2 or 4");
  }
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / beta));
  std::vector<double> diag(n), off(n - 1);
  for (int k = 0; k < n; ++k) diag[k] = normal(rng);
  for (int k = 1; k < n; ++k) {
    // chi_nu = sqrt(2 Gamma(nu/2, 1))
    std::gamma_distribution<double> gamma(beta * (n - k) / 2.0, 1.0);
    off[k - 1] = std::sqrt(2 * gamma(rng) / beta);
  }
  EnsembleSample sample;
  sample.beta = beta;
  sample.dimension = n;
  sample.seed = seed;
  sample.eigenvalues = tridiagonal_eigenvalues(diag, off);
  if (n >= 4) sample.bulk_spacings = unfold_bulk(sample.eigenvalues, window_fraction).spacings;
  return sample;
}

Unfolded unfold_bulk(const std::vector<double>& eigenvalues, double window_fraction) {
  if (!(window_fraction > 0 && window_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "window fraction must lie in (0, 1)");
  }
  const auto n = static_cast<long>(eigenvalues.size());
  const long count = std::lround(window_fraction * n);
  if (count < 2) {
    throw Error(ErrorCode::kWindowTooSmall,
                "window of " + std::to_string(window_fraction) + " holds " +
                    std::to_string(count) + " of " + std::to_string(n) + " eigenvalues");
  }
  const long lo = (n - count) / 2;
  Unfolded out;
  out.spacings.reserve(count - 1);
  for (long i = lo; i + 1 < lo + count; ++i) {
    const double gap = eigenvalues[i + 1] - eigenvalues[i];
    const double mid = (eigenvalues[i + 1] + eigenvalues[i]) / 2;
    if (gap <= 0) ++out.zero_spacings;
    out.spacings.push_back(std::max(gap, 0.0) * semicircle_density(mid, static_cast<int>(n)));
  }
  return out;
}

Unfolded unfold_bulk(const EnsembleSample& sample, double window_fraction) {
  return unfold_bulk(sample.eigenvalues, window_fraction);
}

std::vector<double> sample_bulk_spacings(int beta, int n, std::size_t samples, std::uint64_t seed,
                                         double window_fraction, unsigned workers) {
  std::vector<std::vector<double>> per(samples);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(samples, 1)));
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < samples; i += workers) {
            per[i] = sample_spectrum(beta, n, stream_seed(seed, i), window_fraction).bulk_spacings;
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<double> all;
  for (const auto& v : per) all.insert(all.end(), v.begin(), v.end());
  return all;
}

double ks_distance(std::vector<double> spacings, int beta, const SpacingModel& model) {
  constexpr std::size_t kMinSpacings = 1000;
  if (spacings.size() < kMinSpacings) {
    throw Error(ErrorCode::kInsufficientData, std::to_string(spacings.size()) +
                                                  " spacings, need at least " +
                                                  std::to_string(kMinSpacings));
  }
  std::sort(spacings.begin(), spacings.end());
  const long double cov = model.coverage(beta);
  const auto total = static_cast<double>(spacings.size());
  double worst = 0;
  for (std::size_t i = 0; i < spacings.size(); ++i) {
    const long double s = spacings[i];
    const double f = s >= cov ? 1.0 : static_cast<double>(model.spacing_cdf(beta, s));
    worst = std::max({worst, std::fabs((i + 1) / total - f), std::fabs(i / total - f)});
  }
  return worst;
}

std::vector<HistogramBin> histogram(const std::vector<double>& spacings, int beta,
                                    const SpacingModel& model, double s_max, double bin_width) {
  if (!(bin_width > 0) || !(s_max > bin_width)) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < bin width < s_max");
  }
  const auto bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
  std::vector<HistogramBin> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out[b].left = b * bin_width;
    out[b].right = (b + 1) * bin_width;
    out[b].count = 0;
  }
  for (double s : spacings) {
    if (s < 0 || s >= bins * bin_width) continue;
    ++out[std::min(bins - 1, static_cast<std::size_t>(s / bin_width))].count;
  }
  const double total = spacings.empty() ? 1.0 : static_cast<double>(spacings.size());
  const long double cov = model.coverage(beta);
  for (HistogramBin& h : out) {
    h.density = h.count / (total * bin_width);
    const long double mid = (h.left + h.right) / 2;
    h.exact_p = mid > cov ? 0.0 : static_cast<double>(model.spacing_density(beta, mid));
  }
  return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_left,bin_right,count,density,exact_p\n";
  char buf[160];
  for (const HistogramBin& h : bins) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%.17g,%.17g\n", h.left, h.right, h.count,
                  h.density, h.exact_p);
    out += buf;
  }
  return out;
}

}  // namespace spacing
