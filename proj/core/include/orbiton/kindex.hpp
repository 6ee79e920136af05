#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace orbiton {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Equal shapes and entries; Eigen's == requires equal shapes.
inline bool same_matrix(const IntMatrix& a, const IntMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using CMatrix = Eigen::MatrixXcd;

// Z^rank plus the cyclic factors Z/t_i, each t_i dividing the next.
struct AbelianGroup {
  int rank = 0;
  std::vector<long long> torsion;

  bool valid() const;
  bool operator==(const AbelianGroup& o) const = default;
  std::string to_string() const;
};

AbelianGroup free_group(int rank);

// Acts on column vectors of source coordinates: matrix is dst.rank x src.rank.
struct GroupHom {
  AbelianGroup src;
  AbelianGroup dst;
  IntMatrix matrix;

  // Throws Error(ShapeMismatch).
  void check_shape() const;
};

GroupHom make_hom(int src_rank, int dst_rank, const std::vector<std::vector<long long>>& rows);
GroupHom zero_hom(int src_rank, int dst_rank);

// Cyclic order K0(I), K0(E), K0(A), K1(I), K1(E), K1(A); maps[i] runs from
// nodes[i] to nodes[(i + 1) % 6].
struct SixTermDiagram {
  std::string name;
  std::vector<AbelianGroup> nodes;
  std::vector<GroupHom> maps;
};

struct SmithForm {
  IntMatrix U, D, V;
  int rank = 0;
};

// U * m * V = D with U, V unimodular and the diagonal of D a divisibility
// chain of non-negative entries. Throws Error(BadParams) on int64 overflow.
SmithForm smith_normal_form(const IntMatrix& m);

long long determinant(const IntMatrix& m);

// True when `v` lies in the column lattice of m.
bool in_image_lattice(const IntMatrix& m, const IntVector& v);
// Basis of the integer kernel of m as columns.
IntMatrix kernel_lattice(const IntMatrix& m);

struct ExactnessReport {
  // One entry per interior node (between maps i and i + 1).
  std::vector<bool> exact;
  std::vector<bool> composition_zero;
  bool all_exact() const;
};

// Throws Error(ShapeMismatch) when consecutive maps do not compose.
ExactnessReport check_exact(const std::vector<GroupHom>& seq);
// Exactness at all six nodes of the hexagon; entry i is node i.
ExactnessReport six_term_check(const SixTermDiagram& d);

// Parameter interval of a loop; either end may be infinite.
struct MatrixLoop {
  std::function<CMatrix(double)> sampler;
  double a = 0.0;
  double b = 1.0;
  // Values at infinite ends (required there).
  std::optional<CMatrix> limit_a;
  std::optional<CMatrix> limit_b;
  bool endpoints_equal_or_limit = true;
};

struct WindingResult {
  double raw = 0.0;
  long long winding = 0;
  double tail = 0.0;
  double min_abs_det = 0.0;
  double epsilon = 0.0;
};

constexpr int kDefaultWindingGrid = 1 << 17;

// (1/2 pi i) * integral of Tr(f' f^{-1}) by the trapezoid rule with central
// differences. Infinite ends are compactified; the remaining tail is the
// principal phase of det(limit) / det(f(end)). Throws Error(SingularLoop)
// when |det| < 1e-8 on the grid and Error(NonIntegerResult) when the raw
// value is more than 1e-6 from an integer.
WindingResult winding_number(const MatrixLoop& loop, int grid = kDefaultWindingGrid);

// Sum of principal phase increments of det f on the same grid.
double winding_by_phase(const MatrixLoop& loop, int grid = kDefaultWindingGrid);

MatrixLoop loop_product(const MatrixLoop& l, const MatrixLoop& r);
MatrixLoop loop_inverse(const MatrixLoop& l);

// Max Frobenius norm of p^2 - p over a grid x grid lattice of [0,1]^2.
double idempotent_residual(const std::function<CMatrix(double, double)>& p, int grid);

// One generator lifted over each complement piece: pieces[i] is the loop
// exp(2 pi i * lift) restricted to piece i.
struct LiftedGenerator {
  std::string name;
  std::vector<MatrixLoop> pieces;
};

// Entry (i, j) is the winding of generator j on piece i.
GroupHom delta0_via_winding(const std::vector<LiftedGenerator>& gens, int grid = kDefaultWindingGrid);

struct KPair {
  AbelianGroup k0;
  AbelianGroup k1;
  bool operator==(const KPair& o) const = default;
};

// Swaps k0 and k1 iff n is odd. Throws Error(BadParams) for n < 0.
KPair connes_thom_shift(const KPair& k, int n);

// Throws Error(UnknownSpace).
KPair k_table(const std::string& space);
std::vector<std::string> k_table_names();

// Fixtures.

// (1/2) [[1 - cos r pi, e^{i phi} sin r pi], [e^{-i phi} sin r pi, 1 + cos r pi]].
CMatrix p_idempotent(double phi, double r);
// exp(2 pi i * t / sqrt(1 + t^2)) on [0, inf).
MatrixLoop u_plus();
// exp(2 pi i * t / sqrt(1 + t^2)) on (-inf, 0].
MatrixLoop u_minus();
MatrixLoop constant_loop(const CMatrix& m);
// Hat function on the circle, 1 at (j - 1) pi / 2 and 0 at the neighbours.
double ell_lift(int j, double theta);
// exp(2 pi i * ell_j) on the quarter interval ((i - 1) pi/2, i pi/2), i, j in 1..4.
MatrixLoop ell_loop(int j, int interval);
std::vector<LiftedGenerator> ell_generators();
// exp(2 pi i * h(z / |(x, y)|) * p) on z in R+ and R-, with h(t) = t / sqrt(1 + t^2).
LiftedGenerator p_lift(double phi = 0.7, double r = 0.3);

SixTermDiagram gamma4_hexagon();
SixTermDiagram gamma123_hexagon();
SixTermDiagram aff_c_hexagon();
std::vector<SixTermDiagram> fixture_hexagons();

// Four rows (-1,1,0,0), (0,-1,1,0), (0,0,-1,1), (1,0,0,-1).
IntMatrix gamma4_delta0();

struct Mutation {
  std::string diagram;
  int map = 0;
  int row = 0;
  int col = 0;
  long long value = 0;
  std::string label() const;
};

// Twenty single-entry mutations of the fixture hexagons, each breaking
// exactness.
std::vector<Mutation> fixture_mutations();
SixTermDiagram apply_mutation(const SixTermDiagram& d, const Mutation& m);

// JSON round trip for fixture files.
std::string diagram_to_json(const SixTermDiagram& d);
SixTermDiagram diagram_from_json(const std::string& text);
std::string k_table_json();
std::map<std::string, KPair> k_table_from_json(const std::string& text);
std::string lifts_json();

}  // namespace orbiton
