#include "orbiton/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

namespace orbiton {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kGregory[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};

// Weight of node k in a rule on nodes 0..m with spacing h: Gregory end
// corrections once there are at least 8 nodes, trapezoid below.
double rule_weight(int k, int m, double h) {
  if (m == 0) return 0.0;
  if (m + 1 < 8) return (k == 0 || k == m) ? 0.5 * h : h;
  if (k < 3) return kGregory[k] * h;
  if (m - k < 3) return kGregory[m - k] * h;
  return h;
}

double quadrature_error(int nodes, double h, double rate) {
  const int m = nodes - 1;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) sum += rule_weight(k, m, h) * std::exp(-rate * k * h);
  const double exact = (1.0 - std::exp(-rate * m * h)) / rate;
  return std::abs(sum - exact);
}

// Weighted block W^{1/2} (I - c K) W^{-1/2}; lower triangular.
MatrixXd weighted_block(const DiscreteOperator& op, double c) {
  const int n = op.grid.N;
  const VectorXd w = op.grid.weights.head(n).cwiseSqrt();
  MatrixXd b = -c * op.K;
  b.diagonal().array() += 1.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l <= j; ++l) b(j, l) *= w(j) / w(l);
  return b;
}

// Singular triplet in weighted coordinates of the full 2N space.
struct Triplet {
  double sigma;
  VectorXd right;
  VectorXd left;
};

struct Spectrum {
  double sigma_max = 0.0;
  std::vector<Triplet> small;  // ascending
  bool complete = false;
};

VectorXd lift_block(const VectorXd& v, double parity) {
  VectorXd out(2 * v.size());
  out << v, parity * v;
  return out / std::sqrt(2.0);
}

Spectrum dense_spectrum(const MatrixXd& b, double cutoff) {
  Eigen::BDCSVD<MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  Spectrum sp;
  sp.complete = true;
  sp.sigma_max = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = sv.size() - 1; i >= 0; --i) {
    const bool keep_vectors = sv(i) < cutoff * sp.sigma_max;
    sp.small.push_back({sv(i), keep_vectors ? VectorXd(svd.matrixV().col(i)) : VectorXd(),
                        keep_vectors ? VectorXd(svd.matrixU().col(i)) : VectorXd()});
  }
  return sp;
}

// Smallest singular triplets of a lower triangular b by subspace iteration
// on (b^T b)^{-1}, with Rayleigh-Ritz extraction; largest by Lanczos on
// b^T b.
Spectrum triangular_spectrum(const MatrixXd& b, int block, int max_iterations) {
  const Eigen::Index n = b.rows();
  const int p = static_cast<int>(std::min<Eigen::Index>(block, n));
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  const auto lower = b.triangularView<Eigen::Lower>();

  VectorXd previous = VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  Eigen::JacobiSVD<MatrixXd> ritz;
  for (int it = 0; it < max_iterations; ++it) {
    MatrixXd z = lower.transpose().solve(x);
    z = lower.solve(z);
    Eigen::HouseholderQR<MatrixXd> qr(z);
    x = qr.householderQ() * MatrixXd::Identity(n, p);
    const MatrixXd c = lower * x;
    ritz.compute(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = ritz.singularValues();
    const double change = ((sv - previous).cwiseAbs().array() / sv.array().max(1e-300)).maxCoeff();
    previous = sv;
    if (change < 1e-10) break;
  }
  Spectrum sp;
  const VectorXd& sv = ritz.singularValues();
  const MatrixXd right = x * ritz.matrixV();
  for (int i = p - 1; i >= 0; --i) sp.small.push_back({sv(i), right.col(i), ritz.matrixU().col(i)});

  // Lanczos on L^T L with full reorthogonalisation. The operator is the
  // identity minus a compact part, so most singular values crowd near 1 and
  // power or subspace iteration stalls there; the extreme Ritz value does not.
  const Eigen::Index steps = std::min<Eigen::Index>(n, 300);
  MatrixXd basis(n, steps);
  VectorXd alpha(steps), beta(steps);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  basis.col(0) = v.normalized();
  double lambda = 0.0;
  for (Eigen::Index j = 0; j < steps; ++j) {
    const VectorXd lv = lower * basis.col(j);
    VectorXd w = lower.transpose() * lv;
    alpha(j) = basis.col(j).dot(w);
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    beta(j) = w.norm();
    Eigen::SelfAdjointEigenSolver<MatrixXd> tri;
    MatrixXd t = MatrixXd::Zero(j + 1, j + 1);
    t.diagonal() = alpha.head(j + 1);
    for (Eigen::Index i = 0; i < j; ++i) t(i, i + 1) = t(i + 1, i) = beta(i);
    tri.compute(t, Eigen::EigenvaluesOnly);
    const double top = tri.eigenvalues()(j);
    const bool done = j > 0 && std::abs(top - lambda) <= 1e-14 * top;
    lambda = top;
    if (done || j + 1 == steps || beta(j) <= 1e-14 * top) break;
    basis.col(j + 1) = w / beta(j);
  }
  sp.sigma_max = std::sqrt(lambda);
  return sp;
}

double boundary_mass(const VectorXd& weighted, const LogGrid& grid, double width) {
  const int n = grid.N;
  double edge = 0.0;
  const double total = weighted.squaredNorm();
  for (int half = 0; half < 2; ++half)
    for (int j = 0; j < n; ++j)
      if (std::abs(grid.s(j)) >= grid.L - width) edge += weighted(half * n + j) * weighted(half * n + j);
  return total > 0.0 ? edge / total : 0.0;
}

IndexResult resolve(const Spectrum& sp, const VectorXd& weights, const LogGrid* grid,
                    const ThresholdPolicy& policy, const std::string& method) {
  IndexResult r;
  r.method = method;
  r.sigma_max = sp.sigma_max;
  for (const Triplet& t : sp.small) r.smallest.push_back(t.sigma);
  const double cutoff = policy.relative_cutoff * sp.sigma_max;
  const std::size_t len = sp.small.size();

  std::size_t discard = 0;
  double best = 0.0;
  bool undetermined = false;
  for (std::size_t k = 1; k <= len; ++k) {
    if (!(sp.small[k - 1].sigma < cutoff)) break;
    if (k == len) {
      if (!sp.complete) undetermined = true;
      break;
    }
    const double lo = sp.small[k - 1].sigma, hi = sp.small[k].sigma;
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (ratio > best) {
      best = ratio;
      discard = k;
    }
  }
  if (discard == 0) {
    r.threshold = cutoff;
    r.gap_ratio = (len && sp.small[0].sigma < cutoff) ? best : std::numeric_limits<double>::infinity();
  } else {
    r.threshold = std::sqrt(std::max(sp.small[discard - 1].sigma, 1e-300) * sp.small[discard].sigma);
    r.gap_ratio = best;
  }
  for (std::size_t k = 0; k < discard; ++k) r.sing_vals_near_zero.push_back(sp.small[k].sigma);

  const VectorXd inv_sqrt_w = weights.cwiseSqrt().cwiseInverse();
  for (std::size_t k = 0; k < discard; ++k) {
    const Triplet& t = sp.small[k];
    const double mr = grid ? boundary_mass(t.right, *grid, policy.boundary_width) : 0.0;
    const double ml = grid ? boundary_mass(t.left, *grid, policy.boundary_width) : 0.0;
    r.kernel_boundary_mass.push_back(mr);
    r.coker_boundary_mass.push_back(ml);
    if (mr > policy.boundary_mass) {
      ++r.rejected_kernel;
    } else {
      ++r.dim_ker;
      r.kernel_vectors.push_back(t.right.cwiseProduct(inv_sqrt_w));
    }
    if (ml > policy.boundary_mass) {
      ++r.rejected_coker;
    } else {
      ++r.dim_coker;
      r.coker_vectors.push_back(t.left.cwiseProduct(inv_sqrt_w));
    }
  }
  r.index = r.dim_ker - r.dim_coker;
  if (undetermined && discard == 0) {
    throw GapTooSmallError("every computed singular value lies below the cutoff; enlarge the block", r);
  }
  if (discard > 0 && r.gap_ratio < policy.min_gap) {
    throw GapTooSmallError("singular-value gap " + std::to_string(r.gap_ratio) + " below " +
                               std::to_string(policy.min_gap) + "; refine the grid",
                           r);
  }
  return r;
}

MatrixXd weighted_dense(const MatrixXd& m, const VectorXd& weights) {
  const VectorXd w = weights.cwiseSqrt();
  return w.asDiagonal() * m * w.cwiseInverse().asDiagonal();
}

}  // namespace

GapTooSmallError::GapTooSmallError(const std::string& detail, IndexResult result)
    : Error(ErrorKind::GapTooSmall, detail, result.gap_ratio), result_(std::move(result)) {}

LogGrid build_grid(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L) || N < 2) throw Error(ErrorKind::BadParams, "need L > 0 and N >= 2");
  LogGrid g;
  g.L = L;
  g.N = N;
  g.h = 2.0 * L / (N - 1);
  g.s.resize(N);
  g.nodes.resize(2 * N);
  g.weights.resize(2 * N);
  for (int j = 0; j < N; ++j) {
    g.s(j) = j == N - 1 ? L : -L + j * g.h;
    const double x = std::exp(g.s(j));
    g.nodes(j) = x;
    g.nodes(N + j) = -x;
    const double w = (j == 0 || j == N - 1) ? 0.5 * g.h : g.h;
    g.weights(j) = w;
    g.weights(N + j) = w;
  }
  return g;
}

MatrixXd DiscreteOperator::dense() const {
  const int n = grid.N;
  MatrixXd m(2 * n, 2 * n);
  const MatrixXd id = MatrixXd::Identity(n, n);
  m << id - K, -parity_sign() * K, -parity_sign() * K, id - K;
  return m;
}

VectorXd DiscreteOperator::apply(const VectorXd& f) const {
  const int n = grid.N;
  if (f.size() != 2 * n) throw Error(ErrorKind::DimensionMismatch, "vector does not match the grid");
  const auto lower = K.triangularView<Eigen::Lower>();
  const VectorXd kp = lower * f.head(n), km = lower * f.tail(n);
  VectorXd out(2 * n);
  out << f.head(n) - kp - parity_sign() * km, f.tail(n) - km - parity_sign() * kp;
  return out;
}

DiscreteOperator assemble_operator(int which, const LogGrid& grid, bool strict) {
  if (which != 1 && which != 2) throw Error(ErrorKind::BadParams, "operator index must be 1 or 2");
  if (grid.N < 16) throw Error(ErrorKind::BadParams, "operator assembly needs N >= 16");
  DiscreteOperator op;
  op.grid = grid;
  op.which = which;
  const int n = grid.N;
  const double h = grid.h;
  op.quadrature_error = std::max(quadrature_error(n, h, 2.0), quadrature_error(n, h, 4.0));
  if (strict && op.quadrature_error > 1e-6) {
    throw Error(ErrorKind::GridTooCoarse, "quadrature error " + std::to_string(op.quadrature_error) + " exceeds 1e-6",
                op.quadrature_error);
  }
  // Row j: u = k h runs over 0..j, landing on s_{j-k}. The a-integral below
  // e^{-(s_j + L)} is dropped; nodes beyond e^L are absent, where the factor
  // exp(-x^2/2) is below 1e-14 once L >= 3.
  op.K = MatrixXd::Zero(n, n);
  std::vector<double> decay(n);
  for (int k = 0; k < n; ++k) decay[k] = std::exp(-2.0 * k * h);
  for (int j = 0; j < n; ++j) {
    const double gauss = 2.0 * std::exp(-0.5 * std::exp(2.0 * grid.s(j)));
    if (gauss == 0.0) continue;
    for (int k = 0; k <= j; ++k) op.K(j, j - k) = gauss * rule_weight(k, j, h) * decay[k];
  }
  return op;
}

IndexResult numerical_index(const DiscreteOperator& op, const ThresholdPolicy& policy) {
  const int n = op.grid.N;
  if (n <= policy.dense_limit) {
    const Spectrum sp = dense_spectrum(weighted_dense(op.dense(), op.grid.weights), policy.relative_cutoff);
    return resolve(sp, op.grid.weights, &op.grid, policy, "dense-svd");
  }
  // [[I - K, -sK], [-sK, I - K]] is orthogonally equivalent to
  // diag(I - (1 + s) K, I - (1 - s) K) on the even and odd parts.
  Spectrum sp;
  const double sgn = op.parity_sign();
  const double coeffs[2] = {1.0 + sgn, 1.0 - sgn};
  const double parities[2] = {1.0, -1.0};
  for (int part = 0; part < 2; ++part) {
    if (coeffs[part] == 0.0) {
      // Identity block.
      sp.sigma_max = std::max(sp.sigma_max, 1.0);
      for (int i = 0; i < std::min(policy.block, n); ++i) sp.small.push_back({1.0, VectorXd(), VectorXd()});
      continue;
    }
    Spectrum block = triangular_spectrum(weighted_block(op, coeffs[part]), policy.block, policy.max_iterations);
    sp.sigma_max = std::max(sp.sigma_max, block.sigma_max);
    for (Triplet& t : block.small) {
      sp.small.push_back({t.sigma, lift_block(t.right, parities[part]), lift_block(t.left, parities[part])});
    }
  }
  std::stable_sort(sp.small.begin(), sp.small.end(),
                   [](const Triplet& a, const Triplet& b) { return a.sigma < b.sigma; });
  return resolve(sp, op.grid.weights, &op.grid, policy, "block-subspace-iteration");
}

IndexResult numerical_index(const MatrixXd& m, const VectorXd& weights, const ThresholdPolicy& policy) {
  if (m.rows() != m.cols() || weights.size() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix and weights do not match");
  }
  if ((weights.array() <= 0.0).any()) throw Error(ErrorKind::BadParams, "weights must be positive");
  const Spectrum sp = dense_spectrum(weighted_dense(m, weights), policy.relative_cutoff);
  return resolve(sp, weights, nullptr, policy, "dense-svd");
}

VectorXd weighted_singular_values(const DiscreteOperator& op) {
  const double sgn = op.parity_sign();
  const VectorXd a = Eigen::BDCSVD<MatrixXd>(weighted_block(op, 1.0 + sgn)).singularValues();
  const VectorXd b = Eigen::BDCSVD<MatrixXd>(weighted_block(op, 1.0 - sgn)).singularValues();
  VectorXd all(a.size() + b.size());
  all << a, b;
  std::sort(all.data(), all.data() + all.size(), std::greater<double>());
  return all;
}

VectorXd compact_singular_values(const DiscreteOperator& op) {
  const int n = op.grid.N;
  const VectorXd w = op.grid.weights.head(n).cwiseSqrt();
  const MatrixXd kw = w.asDiagonal() * op.K * w.cwiseInverse().asDiagonal();
  // I - S = [[K, sK], [sK, K]] ~ diag((1 + s) K, (1 - s) K).
  const VectorXd sv = Eigen::BDCSVD<MatrixXd>(kw).singularValues() * 2.0;
  VectorXd all = VectorXd::Zero(2 * n);
  all.head(n) = sv;
  return all;
}

ParityReport parity_check(const VectorXd& f, int which) {
  if (f.size() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "vector length must be even");
  const Eigen::Index n = f.size() / 2;
  ParityReport r;
  const double norm = f.norm();
  if (norm == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.even_residual = (f.head(n) - f.tail(n)).norm() / (std::sqrt(2.0) * norm);
  r.odd_residual = (f.head(n) + f.tail(n)).norm() / (std::sqrt(2.0) * norm);
  r.ok = (which == 1 ? r.even_residual : r.odd_residual) < 1e-6;
  return r;
}

OracleReport ode_kernel_oracle(const LogGrid& grid) {
  using boost::math::quadrature::gauss_kronrod;
  const int n = grid.N;
  auto density = [](double sigma) { return 4.0 * std::exp(-0.5 * std::exp(2.0 * sigma)); };
  auto piece = [&](double a, double b) { return gauss_kronrod<double, 31>::integrate(density, a, b, 5, 1e-14); };

  // ln F(s_j) = Int_0^{s_j}, accumulated outwards from the first node past 0.
  VectorXd ln_f_cap(n);
  int anchor = 0;
  while (anchor < n - 1 && grid.s(anchor) < 0.0) ++anchor;
  ln_f_cap(anchor) = piece(0.0, grid.s(anchor));
  for (int j = anchor + 1; j < n; ++j) ln_f_cap(j) = ln_f_cap(j - 1) + piece(grid.s(j - 1), grid.s(j));
  for (int j = anchor - 1; j >= 0; --j) ln_f_cap(j) = ln_f_cap(j + 1) - piece(grid.s(j), grid.s(j + 1));

  OracleReport r;
  r.x = grid.nodes.head(n);
  r.log_f.resize(n);
  r.f.resize(n);
  const double e1_half = boost::math::expint(1, 0.5);
  for (int j = 0; j < n; ++j) {
    const double s = grid.s(j), x2 = std::exp(2.0 * s);
    r.log_f(j) = std::log(4.0) - 0.5 * x2 + ln_f_cap(j) - 2.0 * s;
    r.f(j) = std::exp(r.log_f(j));
    const double closed = 2.0 * (e1_half - boost::math::expint(1, 0.5 * x2));
    r.expint_crosscheck = std::max(r.expint_crosscheck, std::abs(closed - ln_f_cap(j)));
  }

  const double decade = std::log(10.0);
  auto fit = [&](bool near_zero, auto value) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int j = 0; j < n; ++j) {
      const double s = grid.s(j);
      if (near_zero ? s > grid.s(0) + decade : s < grid.s(n - 1) - decade) continue;
      const double y = value(j);
      sx += s;
      sy += y;
      sxx += s * s;
      sxy += s * y;
      ++count;
    }
    const double slope = count > 1 ? (count * sxy - sx * sy) / (count * sxx - sx * sx) : 0.0;
    return std::pair<double, int>(slope, count);
  };
  auto spread = [&](bool near_zero, auto value) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < n; ++j) {
      const double s = grid.s(j);
      if (near_zero ? s > grid.s(0) + decade : s < grid.s(n - 1) - decade) continue;
      const double v = std::exp(value(j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi / lo - 1.0;
  };
  const auto log_f = [&](int j) { return r.log_f(j); };
  const auto log_tail = [&](int j) { return r.log_f(j) + 0.5 * std::exp(2.0 * grid.s(j)); };
  const auto [slope0, count0] = fit(true, log_f);
  const auto [slope1, count1] = fit(false, log_tail);
  r.slope_zero = slope0;
  r.slope_infinity = slope1;
  r.spread_zero = spread(true, [&](int j) { return r.log_f(j) - 2.0 * grid.s(j); });
  r.spread_infinity = spread(false, [&](int j) { return log_tail(j) + 2.0 * grid.s(j); });

  if (count0 < 2 || count1 < 2 || 2.0 * grid.L < 2.0 * decade) {
    throw Error(ErrorKind::AsymptoticMismatch, "the grid must span more than two decades");
  }
  if (std::abs(r.slope_zero - 2.0) > 0.05 || std::abs(r.slope_infinity + 2.0) > 0.05) {
    throw Error(ErrorKind::AsymptoticMismatch,
                "asymptotic slopes " + std::to_string(r.slope_zero) + ", " + std::to_string(r.slope_infinity));
  }
  if (r.spread_zero > 0.05 || r.spread_infinity > 0.05) {
    throw Error(ErrorKind::AsymptoticMismatch, "asymptotic constants vary by more than 5%",
                std::max(r.spread_zero, r.spread_infinity));
  }
  return r;
}

VectorXd oracle_full(const OracleReport& oracle, int which) {
  const double sgn = which == 1 ? 1.0 : -1.0;
  VectorXd out(2 * oracle.f.size());
  out << oracle.f, sgn * oracle.f;
  return out;
}

double oracle_similarity(const VectorXd& kernel_vector, const OracleReport& oracle, const LogGrid& grid,
                         int which) {
  const int n = grid.N;
  if (kernel_vector.size() != 2 * n || oracle.f.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "kernel vector or oracle does not match the grid");
  }
  const double sgn = which == 1 ? 1.0 : -1.0;
  const VectorXd g = 0.5 * (kernel_vector.head(n) + sgn * kernel_vector.tail(n));
  const VectorXd w = grid.weights.head(n);
  const double dot = (w.array() * g.array() * oracle.f.array()).sum();
  const double ng = std::sqrt((w.array() * g.array().square()).sum());
  const double no = std::sqrt((w.array() * oracle.f.array().square()).sum());
  if (ng == 0.0 || no == 0.0) return 0.0;
  return std::abs(dot) / (ng * no);
}

}  // namespace orbiton
