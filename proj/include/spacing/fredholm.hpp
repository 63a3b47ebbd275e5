#ifndef SPACING_FREDHOLM_HPP
#define SPACING_FREDHOLM_HPP

#include <functional>
#include <string>
#include <vector>

namespace spacing {

/// Gauss-Legendre rule on (-1, 1).
struct QuadratureRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
  int order = 0;  // number of nodes; exact through degree 2*order - 1
};

QuadratureRule gauss_legendre(int n);

/// Symmetrized Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j) of the sine
/// kernel sin(pi(x-y))/(pi(x-y)) on [0, s], row-major n x n.
std::vector<long double> sine_kernel_matrix(long double s, const QuadratureRule& rule);

/// log det(I - K) for the sine kernel on [0, s] from a Cholesky factorization
/// (LU with partial pivoting if the matrix is not numerically positive definite).
long double sine_kernel_log_det(long double s, int n_nodes);

/// det(I - K): the Painleve-free value of E_2(0; s). Requires n_nodes >= 8.
long double sine_kernel_det(long double s, int n_nodes = 80);

struct OracleRow {
  long double s;
  long double e2_painleve;
  long double e2_fredholm;
  long double diff;  // painleve - fredholm
};

/// Evaluates both routes on `grid` (points in parallel). The Painleve side is
/// passed in so the oracle itself stays free of it; its errors propagate.
/// s = 0 gives 1 on both sides without calling either.
std::vector<OracleRow> oracle_compare(const std::function<long double(long double)>& e2_painleve,
                                      const std::vector<long double>& grid, int n_nodes = 80);

/// Header `s,E2_painleve,E2_fredholm,diff`, 17 significant digits.
std::string oracle_csv(const std::vector<OracleRow>& rows);

}  // namespace spacing

#endif  // SPACING_FREDHOLM_HPP
