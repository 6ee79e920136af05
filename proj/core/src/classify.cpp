#include "orbiton/classify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "orbiton/coadjoint.hpp"
#include "orbiton/errors.hpp"

namespace orbiton {

namespace {

constexpr double kPi = std::numbers::pi;
// Clusters are measured against the spectral radius, which a basis change
// leaves alone. Rounding noise scales with |A| instead: a defective pair
// splits like its square root, and in the 3x3 case each eigenvalue carries
// its own condition number.
constexpr double kClusterRel = 1e-4;
constexpr double kNoiseFloor2 = 1e-6;
// Assumed relative rounding level of the restricted action, with margin.
constexpr double kEigenNoise = 1e-11;
constexpr double kImagRel = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Vector random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v / v.norm();
}

// Action of ad_u on the invariant subspace spanned by the orthonormal columns of s.
Matrix restricted_action(const LieAlgebra& g, const Vector& u, const Matrix& s) {
  return s.transpose() * ad_matrix(g, u) * s;
}

int rank_rel(const Matrix& m, double scale, double rel) {
  Eigen::JacobiSVD<Matrix> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > rel * scale) ++r;
  }
  return r;
}

// Rank of the nilpotent part n of a cluster whose entries carry noise nu:
// singular values up to nu are zero, those from 100 nu on are structural.
int jordan_rank(const Matrix& n, double nu, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(n);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double sv = svd.singularValues()(i);
    if (sv <= nu) continue;
    if (sv < 100.0 * nu) {
      std::ostringstream os;
      os << what << ": singular value " << sv << " of the nilpotent part lies between the noise level " << nu
         << " and " << 100.0 * nu;
      throw Error(ErrorKind::DegenerateJordan, os.str(), sv);
    }
    ++r;
  }
  return r;
}

bool lex_key_less(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double tol = 1e-9 * (1.0 + std::abs(a[0]) + std::abs(b[0]));
  if (std::abs(a[0] - b[0]) > tol) return a[0] < b[0];
  return a[1] < b[1];
}

// Pfaffian of B_F as a quadratic form in F (dimension 4 only).
Matrix pfaffian_form(const LieAlgebra& g) {
  auto col = [&](int i, int j) {
    Vector v(4);
    for (int k = 0; k < 4; ++k) v(k) = g.c(i, j, k);
    return v;
  };
  const Matrix q = col(0, 1) * col(2, 3).transpose() - col(0, 2) * col(1, 3).transpose() +
                   col(0, 3) * col(1, 2).transpose();
  return 0.5 * (q + q.transpose());
}

struct MDCheck {
  bool md = true;
  std::optional<Vector> witness;
};

// Orbits of a 4-dimensional algebra have dimension at most 2 unless the
// Pfaffian is not identically zero; then they all reach dimension 4 off the
// annihilator of g^1 exactly when the Pfaffian is definite on (g^1)*.
MDCheck md_property(const LieAlgebra& g, const Subspace& g1) {
  MDCheck out;
  const Matrix q = pfaffian_form(g);
  const double scale = std::max(1.0, g.constants().max_abs());
  if (q.norm() <= 1e-10 * scale * scale || g1.dim() == 0) return out;
  const Matrix qr = g1.basis.transpose() * q * g1.basis;
  Eigen::SelfAdjointEigenSolver<Matrix> es(qr);
  const Vector& ev = es.eigenvalues();
  const double tol = 1e-9 * q.norm();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (lo > tol || hi < -tol) return out;
  out.md = false;
  Vector w;
  if (lo < -tol && hi > tol) {
    const Eigen::Index n = ev.size() - 1;
    w = std::sqrt(hi) * es.eigenvectors().col(0) + std::sqrt(-lo) * es.eigenvectors().col(n);
  } else {
    Eigen::Index idx = 0;
    ev.cwiseAbs().minCoeff(&idx);
    w = es.eigenvectors().col(idx);
  }
  out.witness = g1.basis * w;
  return out;
}

std::optional<Decomposition> abelian_factor(const LieAlgebra& g, const Subspace& g1) {
  const int n = g.dim();
  Matrix stacked(n * n, n);
  for (int i = 0; i < n; ++i) stacked.block(i * n, 0, n, n) = ad_matrix(g, basis_vector(n, i));
  // Center = common kernel of all ad_{X_i}, i.e. vectors v with [X_i, v] = 0.
  const Subspace center{null_space(stacked)};
  Matrix both(n, center.dim() + g1.dim());
  both << center.basis, g1.basis;
  const int split = numerical_rank(both) - g1.dim();
  if (split <= 0) return std::nullopt;
  return Decomposition{split, n - split == 0 ? "0" : "dim " + std::to_string(n - split)};
}

struct Jordan2 {
  Family family = Family::Unclassified;
  std::vector<double> params;
};

Jordan2 classify_2x2(const Matrix& a, ClassifyReport& report) {
  const double s = a.norm();
  const double tr = a.trace(), det = a.determinant();
  const double disc = tr * tr - 4.0 * det;
  Jordan2 out;
  if (std::abs(det) < 1e-9 * s * s) return out;
  const double half = 0.5 * std::sqrt(std::abs(disc));
  const double rho = disc < 0 ? std::sqrt(std::abs(det)) : std::abs(tr) / 2 + half;
  const double tol = std::max(kClusterRel * rho, kNoiseFloor2 * s);
  report.cluster_tol = tol;
  report.eigenvalues = disc < 0 ? std::vector<std::complex<double>>{{tr / 2, half}, {tr / 2, -half}}
                                : std::vector<std::complex<double>>{{tr / 2 + half, 0}, {tr / 2 - half, 0}};
  report.min_cluster_gap = 2.0 * half;
  if (2.0 * half > tol && 2.0 * half < 100.0 * tol) {
    throw Error(ErrorKind::DegenerateJordan,
                "eigenvalue separation " + fmt(2.0 * half) + " is within 100x of the cluster gap " + fmt(tol),
                2.0 * half);
  }
  if (2.0 * half <= tol) {
    const double mu = tr / 2;
    const Matrix shifted = a - mu * Matrix::Identity(2, 2);
    out.family = jordan_rank(shifted, kEigenNoise * s, "2x2 block") == 0 ? Family::g421 : Family::g422;
    if (out.family == Family::g421) out.params = {1.0};
    return out;
  }
  if (disc < 0) {
    const double re = tr / 2;
    out.family = Family::g423;
    out.params = {std::acos(re / std::hypot(re, half))};
    return out;
  }
  out.family = Family::g421;
  out.params = {(tr / 2 + half) / (tr / 2 - half)};
  return out;
}

Jordan2 classify_3x3(const Matrix& a, ClassifyReport& report) {
  const double s = a.norm();
  Jordan2 out;
  Eigen::EigenSolver<Matrix> es(a, true);
  // Eigenvalue i moves by about kappa_i |dA| with kappa_i = 1 / |y_i^* x_i|
  // for unit right and left eigenvectors. A defective block has nearly
  // orthogonal x and y and so a huge kappa.
  std::array<double, 3> kappa{};
  for (int i = 0; i < 3; ++i) {
    const Eigen::MatrixXcd shifted =
        a.cast<std::complex<double>>() - es.eigenvalues()(i) * Eigen::MatrixXcd::Identity(3, 3);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullU);
    const Eigen::VectorXcd y = svd.matrixU().col(2);
    const Eigen::VectorXcd x = es.eigenvectors().col(i).normalized();
    const double overlap = std::abs(y.dot(x));
    kappa[i] = overlap > 0.0 ? 1.0 / overlap : std::numeric_limits<double>::infinity();
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return es.eigenvalues()(x).imag() < es.eigenvalues()(y).imag(); });
  std::vector<std::complex<double>> ev;
  double rho = 0.0;
  for (int i : order) {
    ev.push_back(es.eigenvalues()(i));
    rho = std::max(rho, std::abs(ev.back()));
  }
  report.eigenvalues = ev;
  const auto pair_tol = [&](int i, int j) {
    return std::max(kClusterRel * rho, (kappa[order[i]] + kappa[order[j]]) * kEigenNoise * s);
  };
  // The mean of a cluster moves with its spectral projector I - P_t, whose
  // norm is at most 1 + kappa_t for the remaining eigenvalue t.
  const auto cluster_tol = [&](int t) {
    return std::max(kClusterRel * rho, (2.0 * kappa[order[t]] + 1.0) * kEigenNoise * s);
  };
  for (const auto& e : ev) {
    if (std::abs(e) < 1e-9 * s) return out;
  }
  const double im = ev[2].imag();
  const double tol_c = pair_tol(0, 2);
  report.cluster_tol = tol_c;
  if (im > tol_c) {
    if (im < 100.0 * tol_c) {
      throw Error(ErrorKind::DegenerateJordan,
                  "complex pair imaginary part " + fmt(im) + " is within 100x of its uncertainty " + fmt(tol_c),
                  im);
    }
    const double re = 0.5 * (ev[0].real() + ev[2].real());
    const double mu = ev[1].real();
    const double r = std::hypot(re, im);
    report.min_cluster_gap = 2.0 * im;
    out.family = Family::g434;
    out.params = {mu / r, std::acos(re / r)};
    return out;
  }
  std::array<int, 3> by_real{0, 1, 2};
  std::sort(by_real.begin(), by_real.end(), [&](int x, int y) { return ev[x].real() < ev[y].real(); });
  const std::array<double, 3> r{ev[by_real[0]].real(), ev[by_real[1]].real(), ev[by_real[2]].real()};
  const double d01 = r[1] - r[0], d12 = r[2] - r[1];
  const double tol01 = pair_tol(by_real[0], by_real[1]), tol12 = pair_tol(by_real[1], by_real[2]);
  const auto ambiguous = [](double d, double tol) {
    throw Error(ErrorKind::DegenerateJordan,
                "eigenvalue gap " + fmt(d) + " is within 100x of its uncertainty " + fmt(tol), d);
  };
  // Grow clusters from the closest pair; the other gap is then measured
  // against the cluster mean.
  const bool low_first = d01 <= d12;
  const double d_near = low_first ? d01 : d12, d_far = low_first ? d12 : d01;
  const double tol_near = low_first ? tol01 : tol12;
  bool near_cluster = d_near <= tol_near, far_cluster = false;
  double tol_far = low_first ? tol12 : tol01;
  if (near_cluster) tol_far = cluster_tol(low_first ? by_real[2] : by_real[0]);
  far_cluster = d_far <= tol_far;
  if (far_cluster && !near_cluster) ambiguous(d_near, tol_near);
  if (!near_cluster && d_near < 100.0 * tol_near) ambiguous(d_near, tol_near);
  if (!far_cluster && d_far < 100.0 * tol_far) ambiguous(d_far, tol_far);
  report.cluster_tol = std::max(tol_near, tol_far);
  report.min_cluster_gap = !near_cluster ? d_near : (!far_cluster ? d_far : 1e300);
  const bool m01 = low_first ? near_cluster : far_cluster;
  const bool m12 = low_first ? far_cluster : near_cluster;
  const Matrix id = Matrix::Identity(3, 3);
  if (!m01 && !m12) {
    out.family = Family::g431;
    out.params = {r[0], r[1], r[2]};
    return out;
  }
  if (m01 && m12) {
    const double mu = (r[0] + r[1] + r[2]) / 3.0;
    const Matrix shifted = a - mu * id;
    const int rank = jordan_rank(shifted, kEigenNoise * s, "triple eigenvalue");
    if (rank == 0) {
      out.family = Family::g431;
      out.params = {mu, mu, mu};
    } else if (rank == 1) {
      out.family = Family::g432;
      out.params = {1.0};
    } else {
      out.family = Family::g433;
    }
    return out;
  }
  const int t = m01 ? by_real[2] : by_real[0];
  const double single = ev[t].real();
  const double pair = 0.5 * (a.trace() - single);
  // Project away the simple eigenvalue with P = I - x y^T / (y^T x).
  const Vector x = es.eigenvectors().col(order[t]).real().normalized();
  const Eigen::JacobiSVD<Matrix> left_svd(a.transpose() - single * id, Eigen::ComputeFullV);
  const Vector y = left_svd.matrixV().col(2);
  const Matrix projector = id - x * y.transpose() / y.dot(x);
  const double nu = (2.0 * kappa[order[t]] + 1.0) * kEigenNoise * s;
  if (jordan_rank((a - pair * id) * projector, nu, "double eigenvalue") == 0) {
    out.family = Family::g431;
    out.params = {pair, pair, single};
  } else {
    out.family = Family::g432;
    out.params = {pair / single};
  }
  return out;
}

std::array<double, 2> canonical_431(const std::array<double, 3>& m) {
  std::array<double, 2> best{};
  bool first = true;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    for (const std::array<double, 2>& cand :
         {std::array<double, 2>{m[i] / m[k], m[j] / m[k]}, std::array<double, 2>{m[j] / m[k], m[i] / m[k]}}) {
      if (first || lex_key_less(cand, best)) {
        best = cand;
        first = false;
      }
    }
  }
  return best;
}

}  // namespace

std::string md_bar_name(MDBarTag tag) {
  switch (tag) {
    case MDBarTag::Abelian: return "Abelian";
    case MDBarTag::AffR: return "AffR";
    case MDBarTag::AffC: return "AffC";
    case MDBarTag::NotMDBar: return "NotMDBar";
  }
  return "NotMDBar";
}

CriterionResult is_md_bar(const LieAlgebra& g, std::uint64_t seed) {
  const int n = g.dim();
  const Subspace g1 = derived_subalgebra(g, 1);
  std::mt19937_64 rng(seed);
  CriterionResult out;
  for (int trial = 0; trial < n + 200; ++trial) {
    const Vector x = trial < n ? basis_vector(n, trial) : random_unit(n, rng);
    const Matrix ad = ad_matrix(g, x);
    const Subspace image = span_of(ad, g.constants().max_abs());
    const bool inside = g1.containment_residual(image) <= 1e-9 * std::max(1.0, ad.norm());
    if (image.dim() != g1.dim() || !inside) {
      out.holds = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

AffCReduction reduce_aff_c(const LieAlgebra& g) {
  AffCReduction out;
  if (g.dim() != 4) return out;
  const Subspace g1 = derived_subalgebra(g, 1);
  if (g1.dim() != 2) return out;
  const double scale = std::max(1.0, g.constants().max_abs());
  const Matrix comp = orthogonal_complement(g1);
  const Matrix a0 = restricted_action(g, comp.col(0), g1.basis);
  const Matrix a1 = restricted_action(g, comp.col(1), g1.basis);
  // Solve a0 * x0 + a1 * x1 = Id for the element acting as the identity on g^1.
  Matrix sys(4, 2);
  sys.col(0) = a0.reshaped();
  sys.col(1) = a1.reshaped();
  const Vector rhs = Matrix::Identity(2, 2).reshaped();
  const Vector coef = sys.colPivHouseholderQr().solve(rhs);
  if ((sys * coef - rhs).norm() > 1e-8) return out;
  const Vector x1 = coef(0) * comp.col(0) + coef(1) * comp.col(1);
  const Matrix ker = null_space(ad_matrix(g, x1));
  if (ker.cols() != 2) return out;
  Vector v = ker.col(0);
  if (std::abs(v.dot(x1)) > 0.9 * v.norm() * x1.norm()) v = ker.col(1);
  Vector x2p = v - (v.dot(x1) / x1.squaredNorm()) * x1;
  const Matrix b = restricted_action(g, x2p, g1.basis);
  const double re = 0.5 * b.trace();
  const double disc = b.trace() * b.trace() - 4.0 * b.determinant();
  if (disc >= 0.0) return out;
  const double im = 0.5 * std::sqrt(-disc);
  if (im < 1e-8 * b.norm()) return out;
  const Vector x2 = (x2p - re * x1) / im;
  const Vector y1 = g1.basis.col(0);
  const Vector y2 = bracket(g, x2, y1);
  Matrix p(4, 4);
  p << x1, x2, y1, y2;
  if (numerical_rank(p) < 4) return out;
  const LieAlgebra reduced = change_basis(g, p);
  const LieAlgebra target = aff_c();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(reduced.c(i, j, k) - target.c(i, j, k)));
  out.basis = p;
  out.residual = worst;
  out.ok = worst < 1e-8 * scale;
  return out;
}

MDBarTag classify_md_bar(const LieAlgebra& g, std::uint64_t seed) {
  const int k = derived_subalgebra(g, 1).dim();
  if (k == 0) return MDBarTag::Abelian;
  if (!is_md_bar(g, seed).holds) return MDBarTag::NotMDBar;
  if (g.dim() == 2 && k == 1) return MDBarTag::AffR;
  if (g.dim() == 4 && k == 2 && reduce_aff_c(g).ok) return MDBarTag::AffC;
  return MDBarTag::NotMDBar;
}

MD4Label canonical_label(Family f, const std::vector<double>& params) {
  MD4Label label{f, params, std::nullopt};
  switch (f) {
    case Family::g421:
      if (params.size() == 1) label.params = {std::min(params[0], 1.0 / params[0])};
      break;
    case Family::g423:
      if (params.size() == 1) label.params = {std::min(params[0], kPi - params[0])};
      break;
    case Family::g431:
      if (params.size() == 2) {
        const auto best = canonical_431({params[0], params[1], 1.0});
        label.params = {best[0], best[1]};
      } else if (params.size() == 3) {
        const auto best = canonical_431({params[0], params[1], params[2]});
        label.params = {best[0], best[1]};
      }
      break;
    case Family::g434:
      if (params.size() == 2) {
        double lambda = params[0], phi = params[1];
        if (std::abs(phi - kPi / 2) <= 1e-8) {
          lambda = std::abs(lambda);
        } else if (phi > kPi / 2) {
          lambda = -lambda;
          phi = kPi - phi;
        }
        label.params = {lambda, phi};
      }
      break;
    default:
      break;
  }
  return label;
}

ClassifyReport classify_md4_report(const LieAlgebra& g, std::uint64_t seed) {
  if (g.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "MD4 classification needs dimension 4");
  if (!is_solvable(g)) throw Error(ErrorKind::NotSolvable, "derived series does not reach 0 within 4 steps");
  ClassifyReport report;
  const Subspace g1 = derived_subalgebra(g, 1);
  const int k = g1.dim();
  report.derived_dim = k;

  std::mt19937_64 rng(seed);
  for (int i = 0; i < 200; ++i) report.sampled_ranks.push_back(orbit_dimension(g, random_unit(4, rng)));
  const MDCheck md = md_property(g, g1);
  report.md_property = md.md;
  if (md.witness) {
    report.md_witness = md.witness;
    report.sampled_ranks.push_back(orbit_dimension(g, *md.witness));
  }

  auto finish = [&](Family f, std::vector<double> params, std::string branch) {
    report.branch = std::move(branch);
    report.label = canonical_label(f, params);
    return report;
  };

  if (k == 0) {
    report.label = MD4Label{Family::DecomposableRnPlus, {}, Decomposition{4, "0"}};
    report.branch = "abelian";
    return report;
  }
  if (!md.md) {
    report.label = MD4Label{Family::NotMD4, {}, std::nullopt};
    report.branch = "MD property fails";
    return report;
  }

  const double scale = std::max(1.0, g.constants().max_abs());
  const Matrix comp = orthogonal_complement(g1);

  if (k == 1) {
    const Vector z = g1.basis.col(0);
    double act = 0.0;
    for (int i = 0; i < 4; ++i) act = std::max(act, bracket(g, basis_vector(4, i), z).norm());
    return finish(act <= 1e-9 * scale ? Family::g411 : Family::g412, {}, "dim g1 = 1");
  }

  if (k == 2) {
    const double comm = bracket(g, g1.basis.col(0), g1.basis.col(1)).norm();
    if (comm > 1e-9 * scale) return finish(Family::Unclassified, {}, "dim g1 = 2, g1 not abelian");
    const Matrix a0 = restricted_action(g, comp.col(0), g1.basis);
    const Matrix a1 = restricted_action(g, comp.col(1), g1.basis);
    Matrix m(4, 2);
    m.col(0) = a0.reshaped();
    m.col(1) = a1.reshaped();
    const int r = rank_rel(m, std::max(a0.norm(), a1.norm()), 1e-9);
    if (r == 2) {
      if (reduce_aff_c(g).ok) return finish(Family::g424, {}, "dim g1 = 2, aff C relations");
      return finish(Family::Unclassified, {}, "dim g1 = 2, two-dimensional action");
    }
    if (r == 0) return finish(Family::Unclassified, {}, "dim g1 = 2, trivial action");
    const Matrix ker = null_space(m);
    const Vector coef = ker.col(0);
    const Vector t = -coef(1) * comp.col(0) + coef(0) * comp.col(1);
    const Matrix at = restricted_action(g, t, g1.basis);
    // An invertible action of T lets a central complement of span(T, g^1)
    // be found, so g = R + (R T + g^1).
    const Jordan2 j = classify_2x2(at, report);
    return finish(j.family, j.params, "dim g1 = 2, action of T on g1");
  }

  if (k == 3) {
    const Subspace g2 = derived_subalgebra(g, 2);
    const Vector t = comp.col(0);
    if (g2.dim() == 0) {
      const Matrix a = restricted_action(g, t, g1.basis);
      const Jordan2 j = classify_3x3(a, report);
      return finish(j.family, j.params, "dim g1 = 3 abelian, action of T on g1");
    }
    if (g2.dim() == 1) {
      // g1 is the Heisenberg algebra with center g2; the action of T on g1/g2
      // is trace free with eigenvalues +-mu (real diamond) or +-i mu.
      const Matrix e = orthonormal_range(g1.basis * (g1.basis.transpose() *
                                                      orthogonal_complement(g2)));
      if (e.cols() != 2) return finish(Family::Unclassified, {}, "dim g1 = 3, quotient mismatch");
      const Matrix m = e.transpose() * ad_matrix(g, t) * e;
      const double det = m.determinant();
      Eigen::EigenSolver<Matrix> es(m, false);
      for (int i = 0; i < 2; ++i) report.eigenvalues.push_back(es.eigenvalues()(i));
      const double s = m.norm();
      if (std::abs(det) < 1e-6 * s * s) {
        throw Error(ErrorKind::DegenerateJordan, "action on g1/g2 is singular", det);
      }
      return finish(det > 0 ? Family::g441 : Family::g442, {}, "g1 Heisenberg, sign of the quotient action");
    }
    return finish(Family::Unclassified, {}, "dim g1 = 3, g2 too large");
  }
  report.label = MD4Label{Family::Unclassified, {}, abelian_factor(g, g1)};
  report.branch = "dim g1 = 4";
  return report;
}

MD4Label classify_md4(const LieAlgebra& g) { return classify_md4_report(g).label; }

ExponentialResult is_exponential(const LieAlgebra& g, std::uint64_t seed) {
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  ExponentialResult out;
  for (int trial = 0; trial < n + 500; ++trial) {
    const Vector u = trial < n ? basis_vector(n, trial) : random_unit(n, rng);
    Matrix ad = ad_matrix(g, u);
    const double s = ad.norm();
    if (s == 0.0) continue;
    // The criterion is scale invariant; normalizing keeps the spurious
    // imaginary parts of nilpotent blocks (about sqrt(eps)) below the cutoff.
    ad /= s;
    Eigen::EigenSolver<Matrix> es(ad, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const std::complex<double> e = es.eigenvalues()(i);
      if (std::abs(e.real()) < 1e-10 && std::abs(e.imag()) > kImagRel) {
        out.exponential = false;
        out.witness = u;
        const auto& evs = es.eigenvalues();
        for (Eigen::Index j = 0; j < evs.size(); ++j) out.witness_eigenvalues.push_back(evs(j) * s);
        return out;
      }
    }
  }
  return out;
}

}  // namespace orbiton
