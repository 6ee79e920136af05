#include "orbiton/lie_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "orbiton/errors.hpp"

namespace orbiton {

namespace {

constexpr double kStructureTol = 1e-12;
// The Jacobi sum adds 3n products of constants that a basis change of
// condition kappa leaves with relative error about kappa * eps, so it gets
// room for kappa up to about 1e4.
constexpr double kJacobiTol = 1e-9;

std::string default_label(int i, int n) {
  if (n == 4) {
    static const char* names[] = {"X", "Y", "Z", "T"};
    return names[i];
  }
  return "e" + std::to_string(i);
}

}  // namespace

StructureConstants::StructureConstants(int n)
    : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {
  if (n <= 0) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
}

double StructureConstants::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

void StructureConstants::set_bracket(int i, int j, int k, double v) {
  (*this)(i, j, k) = v;
  (*this)(j, i, k) = -v;
}

LieAlgebra::LieAlgebra(StructureConstants c, std::vector<std::string> labels)
    : c_(std::move(c)), labels_(std::move(labels)) {
  const int n = c_.dim();
  if (n <= 0) throw Error(ErrorKind::DimensionMismatch, "empty algebra");
  if (labels_.empty()) {
    for (int i = 0; i < n; ++i) labels_.push_back(default_label(i, n));
  }
  if (static_cast<int>(labels_.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "label count differs from dimension");
  }
  // Tolerances scale with the size of the constants so that algebras written
  // in badly conditioned bases are not rejected for rounding noise.
  const double scale = std::max(1.0, c_.max_abs());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double defect = std::abs(c_(i, j, k) + c_(j, i, k));
        if (defect > kStructureTol * scale) {
          std::ostringstream os;
          os << "c[" << i << "][" << j << "][" << k << "] + c[" << j << "][" << i << "]["
             << k << "] = " << defect;
          throw Error(ErrorKind::AntisymmetryViolation, os.str(), defect);
        }
      }
    }
  }
  double worst = 0.0;
  int wi = 0, wj = 0, wl = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int l = j + 1; l < n; ++l) {
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += c_(j, l, m) * c_(i, m, k) + c_(l, i, m) * c_(j, m, k) +
                 c_(i, j, m) * c_(l, m, k);
          }
          if (std::abs(s) > worst) {
            worst = std::abs(s);
            wi = i, wj = j, wl = l;
          }
        }
      }
    }
  }
  if (worst > kJacobiTol * scale * scale) {
    std::ostringstream os;
    os << "triple (" << wi << "," << wj << "," << wl << ") residual " << worst;
    throw Error(ErrorKind::JacobiViolation, os.str(), worst);
  }
}

double Subspace::residual(const Vector& v) const {
  if (basis.cols() == 0) return v.norm();
  return (v - basis * (basis.transpose() * v)).norm();
}

double Subspace::containment_residual(const Subspace& other) const {
  double worst = 0.0;
  for (int c = 0; c < other.basis.cols(); ++c) {
    worst = std::max(worst, residual(other.basis.col(c)));
  }
  return worst;
}

double rank_tolerance(const Eigen::VectorXd& singular_values, Eigen::Index extent, double scale) {
  const double smax = singular_values.size() ? singular_values.maxCoeff() : 0.0;
  return static_cast<double>(extent) * std::max(smax, scale) * 1e-10;
}

int numerical_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double tau = rank_tolerance(s, std::max(m.rows(), m.cols()));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau && s(i) > 0.0) ++r;
  }
  return r;
}

Matrix orthonormal_range(const Matrix& m, double scale) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double tau = rank_tolerance(s, std::max(m.rows(), m.cols()), scale);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau && s(i) > 0.0) ++r;
  }
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double tau = rank_tolerance(s, std::max(m.rows(), m.cols()));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau && s(i) > 0.0) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

Subspace span_of(const Matrix& columns, double scale) { return Subspace{orthonormal_range(columns, scale)}; }

Matrix orthogonal_complement(const Subspace& s) {
  const int n = s.ambient_dim();
  if (s.dim() == 0) return Matrix::Identity(n, n);
  return null_space(s.basis.transpose());
}

LieAlgebra validate_algebra(const std::vector<std::vector<std::vector<double>>>& c,
                            std::vector<std::string> labels) {
  const int n = static_cast<int>(c.size());
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "empty structure constant array");
  StructureConstants sc(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(c[i].size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "structure constants are not cubic");
    }
    for (int j = 0; j < n; ++j) {
      if (static_cast<int>(c[i][j].size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "structure constants are not cubic");
      }
      for (int k = 0; k < n; ++k) sc(i, j, k) = c[i][j][k];
    }
  }
  return LieAlgebra(std::move(sc), std::move(labels));
}

namespace {

void check_dim(const LieAlgebra& g, const Vector& v) {
  if (v.size() != g.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) + " in algebra of dimension " +
                    std::to_string(g.dim()));
  }
}

}  // namespace

Vector bracket(const LieAlgebra& g, const Vector& u, const Vector& v) {
  check_dim(g, u);
  check_dim(g, v);
  return ad_matrix(g, u) * v;
}

Matrix ad_matrix(const LieAlgebra& g, const Vector& u) {
  check_dim(g, u);
  const int n = g.dim();
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (u(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) m(k, j) += u(i) * g.c(i, j, k);
    }
  }
  return m;
}

Subspace derived_subalgebra(const LieAlgebra& g, int k) {
  const int n = g.dim();
  // Brackets of orthonormal vectors are bounded by this; without it an
  // abelian step would read its own rounding noise as rank.
  const double scale = g.constants().max_abs();
  Subspace s{Matrix::Identity(n, n)};
  for (int step = 0; step < k && s.dim() > 0; ++step) {
    const int r = s.dim();
    Matrix brackets(n, std::max(1, r * (r - 1) / 2));
    brackets.setZero();
    int col = 0;
    for (int a = 0; a < r; ++a) {
      for (int b = a + 1; b < r; ++b) {
        brackets.col(col++) = bracket(g, s.basis.col(a), s.basis.col(b));
      }
    }
    s = span_of(brackets.leftCols(col), scale);
  }
  return s;
}

Matrix exp_ad(const LieAlgebra& g, const Vector& u) {
  const Matrix ad = ad_matrix(g, u);
  return ad.exp();
}

double jacobi_residual(const LieAlgebra& g) {
  const int n = g.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const Vector xi = basis_vector(n, i), xj = basis_vector(n, j), xl = basis_vector(n, l);
        const Vector s = bracket(g, xi, bracket(g, xj, xl)) + bracket(g, xj, bracket(g, xl, xi)) +
                         bracket(g, xl, bracket(g, xi, xj));
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

LieAlgebra change_basis(const LieAlgebra& g, const Matrix& p) {
  const int n = g.dim();
  if (p.rows() != n || p.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "basis change must be square of algebra dimension");
  }
  const Eigen::PartialPivLU<Matrix> lu(p);
  StructureConstants sc(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vector coords = lu.solve(bracket(g, p.col(i), p.col(j)));
      for (int k = 0; k < n; ++k) sc.set_bracket(i, j, k, coords(k));
    }
  }
  return LieAlgebra(std::move(sc), g.labels());
}

bool is_solvable(const LieAlgebra& g) {
  return derived_subalgebra(g, g.dim()).dim() == 0;
}

Vector basis_vector(int dim, int i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

LieAlgebra algebra_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  try {
    const int n = doc.at("dim").get<int>();
    if (n <= 0) throw Error(ErrorKind::DimensionMismatch, "dim must be positive");
    std::vector<std::string> labels;
    if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
    if (!labels.empty() && static_cast<int>(labels.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch, "labels length differs from dim");
    }
    StructureConstants sc(n);
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    if (doc.contains("brackets")) {
      for (const auto& entry : doc.at("brackets")) {
        const int i = entry.at("i").get<int>();
        const int j = entry.at("j").get<int>();
        if (i < 0 || j < 0 || i >= n || j >= n) {
          throw Error(ErrorKind::DimensionMismatch, "bracket index out of range");
        }
        std::vector<double> coeffs(n, 0.0);
        for (const auto& [key, value] : entry.at("coeffs").items()) {
          std::size_t used = 0;
          int k = -1;
          try {
            k = std::stoi(key, &used);
          } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "coefficient key '" + key + "' is not an index");
          }
          if (used != key.size() || k < 0 || k >= n) {
            throw Error(ErrorKind::DimensionMismatch, "coefficient index '" + key + "' out of range");
          }
          coeffs[k] = value.get<double>();
        }
        if (i == j) {
          for (double v : coeffs) {
            if (v != 0.0) {
              throw Error(ErrorKind::AntisymmetryViolation,
                          "nonzero self-bracket for index " + std::to_string(i));
            }
          }
          continue;
        }
        const std::size_t pair = static_cast<std::size_t>(std::min(i, j)) * n + std::max(i, j);
        const double sign = i < j ? 1.0 : -1.0;
        for (int k = 0; k < n; ++k) {
          const double v = sign * coeffs[k];
          if (seen[pair] && sc(std::min(i, j), std::max(i, j), k) != v) {
            throw Error(ErrorKind::AntisymmetryViolation,
                        "brackets (" + std::to_string(i) + "," + std::to_string(j) +
                            ") and its reverse disagree");
          }
          sc.set_bracket(std::min(i, j), std::max(i, j), k, v);
        }
        seen[pair] = 1;
      }
    }
    return LieAlgebra(std::move(sc), std::move(labels));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string algebra_to_json(const LieAlgebra& g) {
  using nlohmann::json;
  const int n = g.dim();
  json doc;
  doc["dim"] = n;
  doc["labels"] = g.labels();
  json brackets = json::array();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      json coeffs = json::object();
      for (int k = 0; k < n; ++k) {
        if (g.c(i, j, k) != 0.0) coeffs[std::to_string(k)] = g.c(i, j, k);
      }
      if (!coeffs.empty()) brackets.push_back({{"i", i}, {"j", j}, {"coeffs", coeffs}});
    }
  }
  doc["brackets"] = brackets;
  return doc.dump(2);
}

}  // namespace orbiton
