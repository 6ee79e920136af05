#include "orbiton/kindex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "orbiton/errors.hpp"

namespace orbiton {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

long long checked_mul(long long a, long long b) {
  long long out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::BadParams, "integer overflow");
  return out;
}

long long checked_add(long long a, long long b) {
  long long out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::BadParams, "integer overflow");
  return out;
}

using Wide = __int128;

Wide wide_mul(Wide a, Wide b) {
  Wide out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::BadParams, "integer overflow");
  return out;
}

Wide wide_sub(Wide a, Wide b) {
  Wide out;
  if (__builtin_sub_overflow(a, b, &out)) throw Error(ErrorKind::BadParams, "integer overflow");
  return out;
}

// Row-major 128-bit work matrix for the Smith reduction.
struct WideMatrix {
  Eigen::Index rows = 0, cols = 0;
  std::vector<Wide> a;

  WideMatrix(Eigen::Index r, Eigen::Index c) : rows(r), cols(c), a(r * c, 0) {}
  explicit WideMatrix(const IntMatrix& m) : WideMatrix(m.rows(), m.cols()) {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) (*this)(i, j) = m(i, j);
  }
  static WideMatrix identity(Eigen::Index n) {
    WideMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  Wide& operator()(Eigen::Index i, Eigen::Index j) { return a[i * cols + j]; }
  Wide operator()(Eigen::Index i, Eigen::Index j) const { return a[i * cols + j]; }

  void swap_rows(Eigen::Index x, Eigen::Index y) {
    for (Eigen::Index j = 0; j < cols; ++j) std::swap((*this)(x, j), (*this)(y, j));
  }
  void swap_cols(Eigen::Index x, Eigen::Index y) {
    for (Eigen::Index i = 0; i < rows; ++i) std::swap((*this)(i, x), (*this)(i, y));
  }
  // row dst -= q * row src
  void row_axpy(Eigen::Index dst, Eigen::Index src, Wide q) {
    for (Eigen::Index j = 0; j < cols; ++j) (*this)(dst, j) = wide_sub((*this)(dst, j), wide_mul(q, (*this)(src, j)));
  }
  void col_axpy(Eigen::Index dst, Eigen::Index src, Wide q) {
    for (Eigen::Index i = 0; i < rows; ++i) (*this)(i, dst) = wide_sub((*this)(i, dst), wide_mul(q, (*this)(i, src)));
  }
  IntMatrix narrow() const {
    constexpr Wide lo = std::numeric_limits<long long>::min(), hi = std::numeric_limits<long long>::max();
    IntMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) {
        const Wide v = (*this)(i, j);
        if (v < lo || v > hi) throw Error(ErrorKind::BadParams, "integer overflow: entry exceeds int64");
        out(i, j) = static_cast<long long>(v);
      }
    return out;
  }
};

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

IntMatrix checked_product(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = IntMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
  return out;
}

}  // namespace

bool AbelianGroup::valid() const {
  if (rank < 0) return false;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2) return false;
    if (i + 1 < torsion.size() && torsion[i + 1] % torsion[i] != 0) return false;
  }
  return true;
}

std::string AbelianGroup::to_string() const {
  std::ostringstream out;
  if (rank == 0 && torsion.empty()) return "0";
  bool first = true;
  if (rank > 0) {
    out << "Z";
    if (rank > 1) out << "^" << rank;
    first = false;
  }
  for (long long t : torsion) {
    out << (first ? "" : " + ") << "Z/" << t;
    first = false;
  }
  return out.str();
}

AbelianGroup free_group(int rank) { return AbelianGroup{rank, {}}; }

void GroupHom::check_shape() const {
  if (!src.valid() || !dst.valid()) throw Error(ErrorKind::ShapeMismatch, "invalid group");
  if (matrix.rows() != dst.rank || matrix.cols() != src.rank) {
    throw Error(ErrorKind::ShapeMismatch, "matrix is " + std::to_string(matrix.rows()) + "x" +
                                              std::to_string(matrix.cols()) + ", expected " +
                                              std::to_string(dst.rank) + "x" + std::to_string(src.rank));
  }
}

GroupHom make_hom(int src_rank, int dst_rank, const std::vector<std::vector<long long>>& rows) {
  GroupHom h{free_group(src_rank), free_group(dst_rank), IntMatrix::Zero(dst_rank, src_rank)};
  if (static_cast<int>(rows.size()) != dst_rank) throw Error(ErrorKind::ShapeMismatch, "row count");
  for (int r = 0; r < dst_rank; ++r) {
    if (static_cast<int>(rows[r].size()) != src_rank) throw Error(ErrorKind::ShapeMismatch, "row length");
    for (int c = 0; c < src_rank; ++c) h.matrix(r, c) = rows[r][c];
  }
  return h;
}

GroupHom zero_hom(int src_rank, int dst_rank) {
  return GroupHom{free_group(src_rank), free_group(dst_rank), IntMatrix::Zero(dst_rank, src_rank)};
}

namespace {

// LLL reduction (delta = 0.99) of rows from..rows-1 of t. Gram-Schmidt is
// recomputed in long double; the basis itself stays exact.
std::vector<std::vector<long double>> gram_schmidt(const WideMatrix& t, Eigen::Index from,
                                                   std::vector<long double>& norm2,
                                                   std::vector<std::vector<long double>>& mu) {
  const Eigen::Index n = t.rows - from;
  std::vector<std::vector<long double>> star(n, std::vector<long double>(t.cols));
  norm2.assign(n, 0);
  mu.assign(n, std::vector<long double>(n, 0));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < t.cols; ++k) star[i][k] = static_cast<long double>(t(from + i, k));
    for (Eigen::Index j = 0; j < i; ++j) {
      long double d = 0;
      for (Eigen::Index k = 0; k < t.cols; ++k) d += static_cast<long double>(t(from + i, k)) * star[j][k];
      mu[i][j] = norm2[j] > 0 ? d / norm2[j] : 0;
      for (Eigen::Index k = 0; k < t.cols; ++k) star[i][k] -= mu[i][j] * star[j][k];
    }
    for (Eigen::Index k = 0; k < t.cols; ++k) norm2[i] += star[i][k] * star[i][k];
  }
  return star;
}

void lll_rows(WideMatrix& t, Eigen::Index from) {
  const Eigen::Index n = t.rows - from;
  if (n < 2) return;
  std::vector<long double> norm2;
  std::vector<std::vector<long double>> mu;
  gram_schmidt(t, from, norm2, mu);
  Eigen::Index k = 1;
  for (int guard = 0; k < n && guard < 100000; ++guard) {
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const long double q = std::round(mu[k][j]);
      if (q == 0) continue;
      t.row_axpy(from + k, from + j, static_cast<Wide>(q));
      for (Eigen::Index l = 0; l <= j; ++l) mu[k][l] -= q * (l == j ? 1 : mu[j][l]);
    }
    if (norm2[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
      ++k;
    } else {
      t.swap_rows(from + k, from + k - 1);
      gram_schmidt(t, from, norm2, mu);
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
}

// Nearest-plane reduction of rows 0..from-1 of t against the rows from..end.
void size_reduce_rows(WideMatrix& t, Eigen::Index from) {
  const Eigen::Index n = t.rows - from;
  if (n == 0 || from == 0) return;
  std::vector<long double> norm2;
  std::vector<std::vector<long double>> mu;
  const auto star = gram_schmidt(t, from, norm2, mu);
  for (Eigen::Index i = 0; i < from; ++i) {
    for (Eigen::Index j = n - 1; j >= 0; --j) {
      if (norm2[j] <= 0) continue;
      long double d = 0;
      for (Eigen::Index k = 0; k < t.cols; ++k) d += static_cast<long double>(t(i, k)) * star[j][k];
      const long double q = std::round(d / norm2[j]);
      if (q != 0) t.row_axpy(i, from + j, static_cast<Wide>(q));
    }
  }
}

WideMatrix transpose(const WideMatrix& m) {
  WideMatrix out(m.cols, m.rows);
  for (Eigen::Index i = 0; i < m.rows; ++i)
    for (Eigen::Index j = 0; j < m.cols; ++j) out(j, i) = m(i, j);
  return out;
}

// |a - q b| <= |b| / 2
Wide nearest_div(Wide a, Wide b) {
  Wide q = a / b;
  const Wide r = a - q * b;
  if (2 * wide_abs(r) > wide_abs(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
  return q;
}

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Row Hermite form a <- T a with pivots positive and the entries above each
// pivot reduced into [0, pivot). For full row rank T = H m^{-1} is bounded
// by the minors of m whatever path the elimination took; the left kernel
// rows of T are not unique, so they are LLL-reduced and the remaining rows
// are reduced against them.
void hermite_rows(WideMatrix& a, WideMatrix& t) {
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < a.cols && r < a.rows; ++c) {
    // Euclid on column c: the product of the quotients is bounded by the
    // entries, so the other columns grow far less than with Bezout steps.
    bool any = false;
    for (;;) {
      Eigen::Index p = -1;
      for (Eigen::Index i = r; i < a.rows; ++i)
        if (a(i, c) != 0 && (p < 0 || wide_abs(a(i, c)) < wide_abs(a(p, c)))) p = i;
      if (p < 0) break;
      any = true;
      a.swap_rows(r, p);
      t.swap_rows(r, p);
      bool clean = true;
      for (Eigen::Index i = r + 1; i < a.rows; ++i) {
        if (a(i, c) == 0) continue;
        const Wide q = nearest_div(a(i, c), a(r, c));
        a.row_axpy(i, r, q);
        t.row_axpy(i, r, q);
        if (a(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!any) continue;
    if (a(r, c) < 0) {
      for (Eigen::Index j = 0; j < a.cols; ++j) a(r, j) = -a(r, j);
      for (Eigen::Index j = 0; j < t.cols; ++j) t(r, j) = -t(r, j);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      const Wide q = floor_div(a(i, c), a(r, c));
      if (q == 0) continue;
      a.row_axpy(i, r, q);
      t.row_axpy(i, r, q);
    }
    ++r;
  }
  lll_rows(t, r);
  size_reduce_rows(t, r);
}

bool off_diagonal_zero(const WideMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows; ++i)
    for (Eigen::Index j = 0; j < a.cols; ++j)
      if (i != j && a(i, j) != 0) return false;
  return true;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  // Alternating row and column Hermite forms reach a diagonal matrix; the
  // work runs in 128 bits and only the final entries have to fit in int64.
  WideMatrix A(m);
  WideMatrix U = WideMatrix::identity(rows);
  WideMatrix V = WideMatrix::identity(cols);
  const Eigen::Index k = std::min(rows, cols);
  Eigen::Index front = 0;
  for (int round = 0;; ++round) {
    if (round > 1000) throw Error(ErrorKind::BadParams, "Smith reduction did not converge");
    if (!off_diagonal_zero(A)) {
      if (round % 2 == 0) {
        hermite_rows(A, U);
      } else {
        WideMatrix at = transpose(A), vt = transpose(V);
        hermite_rows(at, vt);
        A = transpose(at);
        V = transpose(vt);
      }
      continue;
    }
    // Move the nonzero diagonal entries to the front.
    front = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (A(i, i) == 0) continue;
      if (i != front) {
        A.swap_rows(i, front);
        U.swap_rows(i, front);
        A.swap_cols(i, front);
        V.swap_cols(i, front);
      }
      ++front;
    }
    // Divisibility: when d_i does not divide d_j, adding column j to column
    // i puts d_j below d_i and the next Hermite round replaces d_i by the gcd.
    Eigen::Index bi = -1, bj = -1;
    for (Eigen::Index i = 0; i < front && bi < 0; ++i)
      for (Eigen::Index j = i + 1; j < front; ++j)
        if (A(j, j) % A(i, i) != 0) {
          bi = i;
          bj = j;
          break;
        }
    if (bi < 0) break;
    A.col_axpy(bi, bj, -1);
    V.col_axpy(bi, bj, -1);
    round = -1;
  }
  for (Eigen::Index i = 0; i < front; ++i) {
    if (A(i, i) < 0) {
      A(i, i) = -A(i, i);
      for (Eigen::Index j = 0; j < rows; ++j) U(i, j) = -U(i, j);
    }
  }
  SmithForm s;
  s.D = A.narrow();
  s.U = U.narrow();
  s.V = V.narrow();
  s.rank = static_cast<int>(front);
  return s;
}

long long determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  // Fraction-free Bareiss elimination in 128-bit arithmetic.
  std::vector<__int128> a(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  __int128 prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (a[i * n + k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (Eigen::Index j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
      }
    }
    prev = a[k * n + k];
  }
  const __int128 det = sign * a[(n - 1) * n + (n - 1)];
  if (det > std::numeric_limits<long long>::max() || det < std::numeric_limits<long long>::min()) {
    throw Error(ErrorKind::BadParams, "integer overflow");
  }
  return static_cast<long long>(det);
}

bool in_image_lattice(const IntMatrix& m, const IntVector& v) {
  if (v.size() != m.rows()) throw Error(ErrorKind::ShapeMismatch, "vector does not match the target");
  const SmithForm s = smith_normal_form(m);
  const IntMatrix y = checked_product(s.U, v);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    if (i < s.rank) {
      if (y(i, 0) % s.D(i, i) != 0) return false;
    } else if (y(i, 0) != 0) {
      return false;
    }
  }
  return true;
}

IntMatrix kernel_lattice(const IntMatrix& m) {
  const SmithForm s = smith_normal_form(m);
  return s.V.rightCols(m.cols() - s.rank);
}

bool ExactnessReport::all_exact() const {
  return std::all_of(exact.begin(), exact.end(), [](bool b) { return b; });
}

namespace {

// Exactness at the node between f and g (im f = ker g), free parts only.
void exact_at(const GroupHom& f, const GroupHom& g, ExactnessReport& rep) {
  f.check_shape();
  g.check_shape();
  if (f.dst.rank != g.src.rank) throw Error(ErrorKind::ShapeMismatch, "consecutive maps do not compose");
  const IntMatrix comp = checked_product(g.matrix, f.matrix);
  const bool zero = comp.size() == 0 || comp.cwiseAbs().maxCoeff() == 0;
  bool exact = zero;
  if (exact) {
    const IntMatrix ker = kernel_lattice(g.matrix);
    for (Eigen::Index c = 0; c < ker.cols() && exact; ++c) exact = in_image_lattice(f.matrix, ker.col(c));
  }
  rep.composition_zero.push_back(zero);
  rep.exact.push_back(exact);
}

}  // namespace

ExactnessReport check_exact(const std::vector<GroupHom>& seq) {
  ExactnessReport rep;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) exact_at(seq[i], seq[i + 1], rep);
  return rep;
}

ExactnessReport six_term_check(const SixTermDiagram& d) {
  if (d.nodes.size() != 6 || d.maps.size() != 6) throw Error(ErrorKind::ShapeMismatch, "a hexagon has 6 nodes and 6 maps");
  for (int i = 0; i < 6; ++i) {
    if (d.maps[i].src.rank != d.nodes[i].rank || d.maps[i].dst.rank != d.nodes[(i + 1) % 6].rank) {
      throw Error(ErrorKind::ShapeMismatch, "map " + std::to_string(i) + " does not match its nodes");
    }
  }
  ExactnessReport rep;
  for (int i = 0; i < 6; ++i) exact_at(d.maps[(i + 5) % 6], d.maps[i], rep);
  return rep;
}

namespace {

// Maps the unit parameter s onto the loop's interval, leaving eps at each
// infinite end.
struct Compactifier {
  double a, b, eps;
  bool inf_a, inf_b;

  double s0() const { return inf_a ? eps : 0.0; }
  double s1() const { return inf_b ? 1.0 - eps : 1.0; }
  double t(double s) const {
    if (inf_a && inf_b) return std::tan(0.5 * kTwoPi * (s - 0.5));
    if (inf_b) return a + s / (1.0 - s);
    if (inf_a) return b - (1.0 - s) / s;
    return a + s * (b - a);
  }
};

std::complex<double> det_of(const CMatrix& m) { return m.rows() == 0 ? 1.0 : m.determinant(); }

struct Setup {
  Compactifier map;
  double tail = 0.0;
};

Setup setup(const MatrixLoop& loop) {
  if (!loop.sampler) throw Error(ErrorKind::BadParams, "loop has no sampler");
  const bool inf_a = std::isinf(loop.a), inf_b = std::isinf(loop.b);
  if (!(loop.a < loop.b)) throw Error(ErrorKind::BadParams, "loop interval is empty");
  if ((inf_a && !loop.limit_a) || (inf_b && !loop.limit_b)) {
    throw Error(ErrorKind::BadParams, "infinite ends need limit values");
  }
  Setup st{Compactifier{loop.a, loop.b, 1e-4, inf_a, inf_b}, 0.0};
  if (!inf_a && !inf_b) return st;
  for (;;) {
    double tail = 0.0;
    if (inf_b) tail += std::arg(det_of(*loop.limit_b) / det_of(loop.sampler(st.map.t(st.map.s1())))) / kTwoPi;
    if (inf_a) tail += std::arg(det_of(loop.sampler(st.map.t(st.map.s0()))) / det_of(*loop.limit_a)) / kTwoPi;
    st.tail = tail;
    if (std::abs(tail) < 1e-8 || st.map.eps < 1e-12) break;
    st.map.eps *= 0.1;
  }
  return st;
}

// A determinant turning by a quarter circle or more between adjacent nodes
// means the loop passes through or close to a singular matrix there; a
// real determinant changing sign is the extreme case.
void check_phase_step(std::complex<double> before, std::complex<double> after) {
  const double step = std::abs(std::arg(after / before));
  if (step >= kTwoPi / 4.0) {
    std::ostringstream os;
    os << "det turns by " << step << " rad between adjacent nodes; the loop passes near a singular matrix";
    throw Error(ErrorKind::SingularLoop, os.str(), step);
  }
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

WindingResult winding_number(const MatrixLoop& loop, int grid) {
  if (grid < 3) throw Error(ErrorKind::BadParams, "winding grid needs at least 3 nodes");
  const Setup st = setup(loop);
  const Compactifier& map = st.map;
  const double s0 = map.s0(), s1 = map.s1();
  const double ds = (s1 - s0) / (grid - 1);
  auto sample = [&](int k) { return loop.sampler(map.t(k == grid - 1 ? s1 : s0 + k * ds)); };

  WindingResult res;
  res.min_abs_det = std::numeric_limits<double>::infinity();
  res.epsilon = (std::isinf(loop.a) || std::isinf(loop.b)) ? map.eps : 0.0;
  CMatrix prev = sample(0), cur = sample(1), next = sample(2);
  Kahan acc;
  std::complex<double> last_det = 0.0;
  // Called once per node, in order.
  auto integrand = [&](const CMatrix& f, const CMatrix& df) {
    const std::complex<double> det = det_of(f);
    res.min_abs_det = std::min(res.min_abs_det, std::abs(det));
    if (std::abs(det) < 1e-8) throw Error(ErrorKind::SingularLoop, "loop is singular on the grid", std::abs(det));
    if (last_det != 0.0) check_phase_step(last_det, det);
    last_det = det;
    return (df * f.partialPivLu().inverse()).trace().imag();
  };
  // Trapezoid weights: ds / 2 at both ends.
  acc.add(0.5 * ds * integrand(prev, (-3.0 * prev + 4.0 * cur - next) / (2.0 * ds)));
  for (int k = 1; k < grid - 1; ++k) {
    if (k > 1) {
      prev = std::move(cur);
      cur = std::move(next);
      next = sample(k + 1);
    }
    acc.add(ds * integrand(cur, (next - prev) / (2.0 * ds)));
  }
  // Now prev, cur, next are the last three samples.
  acc.add(0.5 * ds * integrand(next, (3.0 * next - 4.0 * cur + prev) / (2.0 * ds)));

  res.tail = st.tail;
  res.raw = acc.sum / kTwoPi + st.tail;
  res.winding = std::llround(res.raw);
  if (std::abs(res.raw - static_cast<double>(res.winding)) > 1e-6) {
    std::ostringstream os;
    os.precision(10);
    os << "winding " << res.raw << " is not within 1e-6 of an integer";
    throw Error(ErrorKind::NonIntegerResult, os.str(), res.raw);
  }
  return res;
}

double winding_by_phase(const MatrixLoop& loop, int grid) {
  if (grid < 2) throw Error(ErrorKind::BadParams, "winding grid needs at least 2 nodes");
  const Setup st = setup(loop);
  const double s0 = st.map.s0(), s1 = st.map.s1();
  const double ds = (s1 - s0) / (grid - 1);
  std::complex<double> prev = det_of(loop.sampler(st.map.t(s0)));
  Kahan acc;
  for (int k = 1; k < grid; ++k) {
    const std::complex<double> cur = det_of(loop.sampler(st.map.t(k == grid - 1 ? s1 : s0 + k * ds)));
    if (std::abs(cur) < 1e-8) throw Error(ErrorKind::SingularLoop, "loop is singular on the grid", std::abs(cur));
    check_phase_step(prev, cur);
    acc.add(std::arg(cur / prev));
    prev = cur;
  }
  return acc.sum / kTwoPi + st.tail;
}

MatrixLoop loop_product(const MatrixLoop& l, const MatrixLoop& r) {
  if (l.a != r.a || l.b != r.b) throw Error(ErrorKind::ShapeMismatch, "loops live on different intervals");
  MatrixLoop out;
  out.a = l.a;
  out.b = l.b;
  out.sampler = [ls = l.sampler, rs = r.sampler](double t) -> CMatrix { return ls(t) * rs(t); };
  if (l.limit_a && r.limit_a) out.limit_a = CMatrix(*l.limit_a * *r.limit_a);
  if (l.limit_b && r.limit_b) out.limit_b = CMatrix(*l.limit_b * *r.limit_b);
  out.endpoints_equal_or_limit = l.endpoints_equal_or_limit && r.endpoints_equal_or_limit;
  return out;
}

MatrixLoop loop_inverse(const MatrixLoop& l) {
  MatrixLoop out = l;
  out.sampler = [s = l.sampler](double t) -> CMatrix { return s(t).inverse(); };
  if (l.limit_a) out.limit_a = CMatrix(l.limit_a->inverse());
  if (l.limit_b) out.limit_b = CMatrix(l.limit_b->inverse());
  return out;
}

double idempotent_residual(const std::function<CMatrix(double, double)>& p, int grid) {
  if (grid < 1) throw Error(ErrorKind::BadParams, "grid must be positive");
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double u = grid == 1 ? 0.0 : static_cast<double>(i) / (grid - 1);
      const double v = grid == 1 ? 0.0 : static_cast<double>(j) / (grid - 1);
      const CMatrix m = p(u, v);
      worst = std::max(worst, (m * m - m).norm());
    }
  }
  return worst;
}

GroupHom delta0_via_winding(const std::vector<LiftedGenerator>& gens, int grid) {
  const int cols = static_cast<int>(gens.size());
  const int rows = gens.empty() ? 0 : static_cast<int>(gens.front().pieces.size());
  GroupHom h = zero_hom(cols, rows);
  for (int j = 0; j < cols; ++j) {
    if (static_cast<int>(gens[j].pieces.size()) != rows) {
      throw Error(ErrorKind::ShapeMismatch, "generators are lifted over different pieces");
    }
    for (int i = 0; i < rows; ++i) h.matrix(i, j) = winding_number(gens[j].pieces[i], grid).winding;
  }
  return h;
}

KPair connes_thom_shift(const KPair& k, int n) {
  if (n < 0) throw Error(ErrorKind::BadParams, "shift must be non-negative");
  return n % 2 == 0 ? k : KPair{k.k1, k.k0};
}

}  // namespace orbiton
