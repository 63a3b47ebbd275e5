#ifndef SPACING_RMT_HPP
#define SPACING_RMT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spacing {

class SpacingModel;

inline constexpr double kDefaultWindow = 0.25;

/// Tridiagonal Gaussian beta-ensemble: diagonal N(0, 2/beta), off-diagonal
/// chi_{beta(n-k)} / sqrt(beta), k = 1..n-1. With this scaling the spectrum
/// fills [-2 sqrt(n), 2 sqrt(n)] with density sqrt(4n - x^2) / (2 pi).
struct EnsembleSample {
  int beta = 2;
  int dimension = 0;
  std::vector<double> eigenvalues;    // ascending
  std::vector<double> bulk_spacings;  // unfolded, central window
  std::uint64_t seed = 0;
};

/// Semicircle density of the tridiagonal model, integrating to n.
double semicircle_density(double x, int n);

/// Eigenvalues of the symmetric tridiagonal matrix (ascending).
/// kEigensolverNoConvergence if the QR iteration cap is hit.
std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diagonal,
                                            const std::vector<double>& off_diagonal);

/// Samples one matrix and fills bulk_spacings with unfold_bulk(window).
/// For n < 4 the window cannot hold two eigenvalues and bulk_spacings is left
/// empty. Deterministic in (beta, n, seed).
EnsembleSample sample_spectrum(int beta, int n, std::uint64_t seed,
                               double window_fraction = kDefaultWindow);

struct Unfolded {
  std::vector<double> spacings;
  std::size_t zero_spacings = 0;  // degenerate pairs, kept in spacings
};

/// Consecutive spacings among eigenvalues whose 1-based index lies in the
/// central window_fraction of [1, n], each multiplied by the semicircle
/// density at its midpoint. kWindowTooSmall with fewer than two eigenvalues
/// in the window, kInvalidArgument for a fraction outside (0, 1).
Unfolded unfold_bulk(const std::vector<double>& eigenvalues, double window_fraction);
Unfolded unfold_bulk(const EnsembleSample& sample, double window_fraction);

/// Seed of the i-th matrix in a run: splitmix64 of (base + i).
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

/// Bulk spacings of `samples` matrices, concatenated in sample order.
/// Parallel over samples; identical output for any worker count.
std::vector<double> sample_bulk_spacings(int beta, int n, std::size_t samples, std::uint64_t seed,
                                         double window_fraction = kDefaultWindow,
                                         unsigned workers = 0);

/// sup |F_emp - F| against the exact spacing CDF 1 + E'(s) (1 beyond the
/// model's coverage). kInsufficientData below 1000 spacings.
double ks_distance(std::vector<double> spacings, int beta, const SpacingModel& model);

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
  double density;  // count / (total * width)
  double exact_p;  // p_beta at the bin centre
};

/// Uniform bins on [0, s_max). Spacings at or beyond s_max are counted in the
/// total (so densities stay comparable with p_beta) but in no bin.
std::vector<HistogramBin> histogram(const std::vector<double>& spacings, int beta,
                                    const SpacingModel& model, double s_max = 4,
                                    double bin_width = 0.1);

/// Header `bin_left,bin_right,count,density,exact_p`, 17 significant digits.
std::string histogram_csv(const std::vector<HistogramBin>& bins);

}  // namespace spacing

#endif  // SPACING_RMT_HPP
