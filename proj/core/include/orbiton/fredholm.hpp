#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orbiton/errors.hpp"

namespace orbiton {

// Two uniform grids s_j = -L + j h, j < N, on [-L, L]; node j is x = +e^{s_j}
// and node N + j is x = -e^{s_j}. Since dx/|x| = ds the weights are the
// trapezoid weights in s.
struct LogGrid {
  double L = 0.0;
  int N = 0;
  double h = 0.0;
  Eigen::VectorXd s;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Throws Error(BadParams) unless L > 0 and N >= 2.
LogGrid build_grid(double L, int N);

// f -> f(x) - 2 exp(-x^2/2) Int_{-1}^{1} f(xa) |a| (sgn a)^{i-1} da.
// With a = +-e^{-u} the nodes x a land on the grid when u is a multiple of
// h, so the integral is a weighted sum of shifts and no interpolation is
// needed. Writing the operator on (f+, f-) as [[I - K, -sK], [-sK, I - K]]
// with s = (-1)^{i-1}, only the lower triangular N x N block K is stored.
struct DiscreteOperator {
  LogGrid grid;
  int which = 1;
  Eigen::MatrixXd K;
  // Gregory-rule error on Int_0^{2L} e^{-2u} du and e^{-4u} du.
  double quadrature_error = 0.0;

  double parity_sign() const { return which == 1 ? 1.0 : -1.0; }
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;
};

// Throws Error(BadParams) for i outside {1, 2} or N < 16; with `strict`,
// Error(GridTooCoarse) when the quadrature error exceeds 1e-6.
DiscreteOperator assemble_operator(int which, const LogGrid& grid, bool strict = false);

struct ThresholdPolicy {
  // Only singular values below cutoff * sigma_max can be discarded.
  double relative_cutoff = 1e-3;
  double min_gap = 100.0;
  // A singular vector with more than `boundary_mass` of its weighted mass
  // within `boundary_width` of s = +-L is a truncation artifact.
  double boundary_width = 1.0;
  double boundary_mass = 0.5;
  // Dense SVD of the full 2N x 2N matrix up to this N, block subspace
  // iteration above it.
  int dense_limit = 512;
  int block = 8;
  int max_iterations = 30;
};

struct IndexResult {
  int dim_ker = 0;
  int dim_coker = 0;
  int index = 0;
  std::vector<double> sing_vals_near_zero;
  double threshold = 0.0;
  double gap_ratio = 0.0;
  double sigma_max = 0.0;
  // Smallest computed singular values, ascending.
  std::vector<double> smallest;
  // Function values on the 2N nodes (unweighted).
  std::vector<Eigen::VectorXd> kernel_vectors;
  std::vector<Eigen::VectorXd> coker_vectors;
  std::vector<double> kernel_boundary_mass;
  std::vector<double> coker_boundary_mass;
  int rejected_kernel = 0;
  int rejected_coker = 0;
  std::string method;
};

class GapTooSmallError : public Error {
 public:
  GapTooSmallError(const std::string& detail, IndexResult result);
  const IndexResult& result() const noexcept { return result_; }

 private:
  IndexResult result_;
};

// Throws GapTooSmallError when the singular-value gap is below policy.min_gap.
IndexResult numerical_index(const DiscreteOperator& op, const ThresholdPolicy& policy = {});
// Dense variant for an arbitrary square matrix with measure weights; no
// artifact rejection.
IndexResult numerical_index(const Eigen::MatrixXd& m, const Eigen::VectorXd& weights,
                            const ThresholdPolicy& policy = {});

// All singular values of the weighted 2N x 2N matrix, descending.
Eigen::VectorXd weighted_singular_values(const DiscreteOperator& op);
// The same for the compact part K_full = I - S(phi_i).
Eigen::VectorXd compact_singular_values(const DiscreteOperator& op);

struct ParityReport {
  double even_residual = 0.0;
  double odd_residual = 0.0;
  bool degenerate = false;
  // The residual matching i is below 1e-6.
  bool ok = false;
};

// Reflection x -> -x swaps the halves of a 2N-vector.
ParityReport parity_check(const Eigen::VectorXd& f, int which);

struct OracleReport {
  Eigen::VectorXd x;
  Eigen::VectorXd f;
  Eigen::VectorXd log_f;
  double slope_zero = 0.0;
  double slope_infinity = 0.0;
  // Relative spread of f/x^2 over the first decade and of f x^2 e^{x^2/2}
  // over the last one.
  double spread_zero = 0.0;
  double spread_infinity = 0.0;
  // Largest gap between the quadrature ln F and the closed form through E1.
  double expint_crosscheck = 0.0;
};

// Kernel of the continuous operator on x > 0: with F(x) = Int_0^x xi f dxi,
// ln F(x) = 4 Int_0^{ln x} exp(-e^{2 sigma}/2) d sigma and
// f = 4 exp(-x^2/2) F / x^2. Throws Error(AsymptoticMismatch) when the
// slopes miss 2 and -2 by more than 0.05 or a spread exceeds 5%.
OracleReport ode_kernel_oracle(const LogGrid& grid);

// Oracle extended to all 2N nodes with the parity of operator i.
Eigen::VectorXd oracle_full(const OracleReport& oracle, int which);

// |cos| between the symmetrized positive half of a kernel vector and the
// oracle, in the weighted inner product.
double oracle_similarity(const Eigen::VectorXd& kernel_vector, const OracleReport& oracle,
                         const LogGrid& grid, int which);

}  // namespace orbiton
