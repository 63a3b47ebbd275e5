#include "spacing/fredholm.hpp"

#include "spacing/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <thread>

namespace spacing {

namespace {

constexpr long double kPi = boost::math::constants::pi<long double>();

long double sinc_pi(long double d) {
  if (d == 0) return 1;
  return std::sin(kPi * d) / (kPi * d);
}

// In-place Cholesky; returns false when a pivot is not positive.
bool cholesky_log_det(std::vector<long double> a, int n, long double& log_det) {
  log_det = 0;
  for (int j = 0; j < n; ++j) {
    long double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0)) return false;
    const long double l = std::sqrt(d);
    a[j * n + j] = l;
    log_det += 2 * std::log(l);
    for (int i = j + 1; i < n; ++i) {
      long double v = a[i * n + j];
      for (int k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / l;
    }
  }
  return true;
}

long double lu_log_det(std::vector<long double> a, int n) {
  long double log_det = 0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[p * n + c])) p = r;
    }
    if (a[p * n + c] == 0) return -INFINITY;
    if (p != c) {
      for (int k = 0; k < n; ++k) std::swap(a[p * n + k], a[c * n + k]);
    }
    log_det += std::log(std::fabs(a[c * n + c]));
    for (int r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  // det(I - K) is positive for the sine kernel; the sign is not tracked.
  return log_det;
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "quadrature needs at least one node");
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    // Recompute the derivative at the converged node.
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0;
  return rule;
}

std::vector<long double> sine_kernel_matrix(long double s, const QuadratureRule& rule) {
  const int n = rule.order;
  std::vector<long double> x(n), sw(n);
  for (int i = 0; i < n; ++i) {
    x[i] = s * (rule.nodes[i] + 1) / 2;
    sw[i] = std::sqrt(s * rule.weights[i] / 2);
  }
  std::vector<long double> k(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const long double v = sw[i] * sinc_pi(x[i] - x[j]) * sw[j];
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  return k;
}

long double sine_kernel_log_det(long double s, int n_nodes) {
  if (n_nodes < 8) {
    throw Error(ErrorCode::kInvalidArgument, "n_nodes must be at least 8");
  }
  if (s < 0) throw Error(ErrorCode::kInvalidArgument, "negative interval length");
  if (s == 0) return 0;
  const QuadratureRule rule = gauss_legendre(n_nodes);
  std::vector<long double> a = sine_kernel_matrix(s, rule);
  for (auto& v : a) v = -v;
  for (int i = 0; i < n_nodes; ++i) a[i * n_nodes + i] += 1;
  long double log_det = 0;
  if (cholesky_log_det(a, n_nodes, log_det)) return log_det;
  return lu_log_det(std::move(a), n_nodes);
}

long double sine_kernel_det(long double s, int n_nodes) {
  return std::exp(sine_kernel_log_det(s, n_nodes));
}

std::vector<OracleRow> oracle_compare(const std::function<long double(long double)>& e2_painleve,
                                      const std::vector<long double>& grid, int n_nodes) {
  std::vector<OracleRow> rows(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  auto eval = [&](std::size_t i) {
    const long double s = grid[i];
    if (s < 0) throw Error(ErrorCode::kInvalidArgument, "negative s in oracle grid");
    if (s == 0) {
      rows[i] = {0, 1, 1, 0};
      return;
    }
    const long double p = e2_painleve(s);
    const long double f = sine_kernel_det(s, n_nodes);
    rows[i] = {s, p, f, p - f};
  };
  {
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(grid.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < grid.size(); i += workers) {
          try {
            eval(i);
          } catch (...) {
            failures[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

std::string oracle_csv(const std::vector<OracleRow>& rows) {
  std::string out = "s,E2_painleve,E2_fredholm,diff\n";
  char buf[128];
  for (const OracleRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", static_cast<double>(r.s),
                  static_cast<double>(r.e2_painleve), static_cast<double>(r.e2_fredholm),
                  static_cast<double>(r.diff));
    out += buf;
  }
  return out;
}

}  // namespace spacing
