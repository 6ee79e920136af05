#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace orbiton {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense c[i][j][k] with [X_i, X_j] = sum_k c[i][j][k] X_k.
class StructureConstants {
 public:
  StructureConstants() = default;
  explicit StructureConstants(int n);

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double max_abs() const;

  // Sets c[i][j][k] = v and c[j][i][k] = -v.
  void set_bracket(int i, int j, int k, double v);

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> data_;
};

// Immutable once constructed: the constructor checks antisymmetry and the
// Jacobi identity and throws orbiton::Error on violation.
class LieAlgebra {
 public:
  explicit LieAlgebra(StructureConstants c, std::vector<std::string> labels = {});

  int dim() const { return c_.dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureConstants& constants() const { return c_; }
  double c(int i, int j, int k) const { return c_(i, j, k); }

 private:
  StructureConstants c_;
  std::vector<std::string> labels_;
};

// Column space of `basis`; columns are kept orthonormal.
struct Subspace {
  Matrix basis;

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(basis.rows()); }
  // Norm of the component of v orthogonal to the subspace.
  double residual(const Vector& v) const;
  // Largest residual over the basis of `other`.
  double containment_residual(const Subspace& other) const;
};

// Rank decisions use tau = max(rows, cols) * max(sigma_max, scale) * 1e-10.
// A positive scale is the size the entries would have if nothing cancelled,
// so a matrix of pure rounding noise gets rank 0.
double rank_tolerance(const Eigen::VectorXd& singular_values, Eigen::Index extent, double scale = 0.0);
int numerical_rank(const Matrix& m);
Matrix orthonormal_range(const Matrix& m, double scale = 0.0);
Matrix null_space(const Matrix& m);
Subspace span_of(const Matrix& columns, double scale = 0.0);
// Orthonormal basis of the orthogonal complement of s in R^n.
Matrix orthogonal_complement(const Subspace& s);

LieAlgebra validate_algebra(const std::vector<std::vector<std::vector<double>>>& c,
                            std::vector<std::string> labels = {});

Vector bracket(const LieAlgebra& g, const Vector& u, const Vector& v);
// Column j holds the coordinates of [u, X_j].
Matrix ad_matrix(const LieAlgebra& g, const Vector& u);
Subspace derived_subalgebra(const LieAlgebra& g, int k);
Matrix exp_ad(const LieAlgebra& g, const Vector& u);

// Worst Jacobi defect over all basis triples.
double jacobi_residual(const LieAlgebra& g);

// Structure constants in the basis given by the columns of p (old coordinates).
LieAlgebra change_basis(const LieAlgebra& g, const Matrix& p);

// Smallest derived ideal reached within dim steps is zero.
bool is_solvable(const LieAlgebra& g);

Vector basis_vector(int dim, int i);

LieAlgebra algebra_from_json(const std::string& text);
std::string algebra_to_json(const LieAlgebra& g);

}  // namespace orbiton
