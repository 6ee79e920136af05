#include <cmath>
#include <limits>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "orbiton/errors.hpp"
#include "orbiton/kindex.hpp"

namespace orbiton {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
const std::complex<double> kI(0.0, 1.0);

KPair pair(int r0, int r1) { return KPair{free_group(r0), free_group(r1)}; }

const std::map<std::string, KPair>& table() {
  static const std::map<std::string, KPair> t = {
      {"point", pair(1, 0)},  {"R", pair(0, 1)},      {"R2", pair(1, 0)},     {"R3", pair(0, 1)},
      {"S1", pair(1, 1)},     {"S2", pair(2, 0)},     {"R3*", pair(0, 2)},    {"R2*", pair(1, 1)},
      {"R2xR*", pair(0, 2)},  {"I1", pair(0, 4)},     {"C4", pair(4, 0)},
  };
  return t;
}

double profile(double t) { return t / std::sqrt(1.0 + t * t); }

CMatrix scalar(std::complex<double> z) {
  CMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

nlohmann::json group_json(const AbelianGroup& g) { return {{"rank", g.rank}, {"torsion", g.torsion}}; }

AbelianGroup group_from(const nlohmann::json& j) {
  AbelianGroup g{j.at("rank").get<int>(), j.value("torsion", std::vector<long long>{})};
  if (!g.valid()) throw Error(ErrorKind::ParseError, "invalid abelian group");
  return g;
}

}  // namespace

KPair k_table(const std::string& space) {
  const auto it = table().find(space);
  if (it == table().end()) throw Error(ErrorKind::UnknownSpace, "no K-groups tabulated for '" + space + "'");
  return it->second;
}

std::vector<std::string> k_table_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : table()) out.push_back(name);
  return out;
}

CMatrix p_idempotent(double phi, double r) {
  const double c = std::cos(r * kPi), s = std::sin(r * kPi);
  const std::complex<double> e = std::polar(1.0, phi);
  CMatrix p(2, 2);
  p << 0.5 * (1.0 - c), 0.5 * e * s, 0.5 * std::conj(e) * s, 0.5 * (1.0 + c);
  return p;
}

MatrixLoop u_plus() {
  MatrixLoop l;
  l.a = 0.0;
  l.b = kInf;
  l.sampler = [](double t) { return scalar(std::exp(2.0 * kPi * kI * profile(t))); };
  l.limit_b = scalar(1.0);
  return l;
}

MatrixLoop u_minus() {
  MatrixLoop l;
  l.a = -kInf;
  l.b = 0.0;
  l.sampler = [](double t) { return scalar(std::exp(2.0 * kPi * kI * profile(t))); };
  l.limit_a = scalar(1.0);
  return l;
}

MatrixLoop constant_loop(const CMatrix& m) {
  MatrixLoop l;
  l.sampler = [m](double) { return m; };
  return l;
}

double ell_lift(int j, double theta) {
  const double centre = (j - 1) * 0.5 * kPi;
  double d = std::fmod(std::abs(theta - centre), 2.0 * kPi);
  d = std::min(d, 2.0 * kPi - d);
  return std::max(0.0, 1.0 - d / (0.5 * kPi));
}

MatrixLoop ell_loop(int j, int interval) {
  if (j < 1 || j > 4 || interval < 1 || interval > 4) throw Error(ErrorKind::BadParams, "lift indices run over 1..4");
  MatrixLoop l;
  l.a = (interval - 1) * 0.5 * kPi;
  l.b = interval * 0.5 * kPi;
  l.sampler = [j](double theta) { return scalar(std::exp(2.0 * kPi * kI * ell_lift(j, theta))); };
  return l;
}

std::vector<LiftedGenerator> ell_generators() {
  std::vector<LiftedGenerator> out;
  for (int j = 1; j <= 4; ++j) {
    LiftedGenerator g{"v" + std::to_string(j), {}};
    for (int i = 1; i <= 4; ++i) g.pieces.push_back(ell_loop(j, i));
    out.push_back(std::move(g));
  }
  return out;
}

LiftedGenerator p_lift(double phi, double r) {
  const CMatrix p = p_idempotent(phi, r);
  // The planar point (x, y) sits on the unit circle, so z / |(x, y)| = z.
  auto lifted = [p](double c) -> CMatrix { return CMatrix(2.0 * kPi * kI * c * p).exp(); };
  LiftedGenerator g{"p", {}};
  MatrixLoop plus;
  plus.a = 0.0;
  plus.b = kInf;
  plus.sampler = [lifted](double z) { return lifted(profile(z)); };
  plus.limit_b = lifted(1.0);
  MatrixLoop minus;
  minus.a = -kInf;
  minus.b = 0.0;
  minus.sampler = [lifted](double z) { return lifted(profile(z)); };
  minus.limit_a = lifted(-1.0);
  g.pieces = {plus, minus};
  return g;
}

IntMatrix gamma4_delta0() {
  IntMatrix m(4, 4);
  m << -1, 1, 0, 0, 0, -1, 1, 0, 0, 0, -1, 1, 1, 0, 0, -1;
  return m;
}

SixTermDiagram gamma4_hexagon() {
  SixTermDiagram d;
  d.name = "gamma4";
  d.nodes = {free_group(0), free_group(1), free_group(4), free_group(4), free_group(1), free_group(0)};
  GroupHom delta0 = zero_hom(4, 4);
  delta0.matrix = gamma4_delta0();
  d.maps = {zero_hom(0, 1),
            make_hom(1, 4, {{1}, {1}, {1}, {1}}),
            delta0,
            make_hom(4, 1, {{1, 1, 1, 1}}),
            zero_hom(1, 0),
            zero_hom(0, 0)};
  return d;
}

SixTermDiagram gamma123_hexagon() {
  SixTermDiagram d;
  d.name = "gamma123";
  d.nodes = {free_group(0), free_group(0), free_group(1), free_group(2), free_group(2), free_group(1)};
  d.maps = {zero_hom(0, 0),
            zero_hom(0, 1),
            make_hom(1, 2, {{1}, {1}}),
            make_hom(2, 2, {{1, -1}, {1, -1}}),
            make_hom(2, 1, {{1, -1}}),
            zero_hom(1, 0)};
  return d;
}

SixTermDiagram aff_c_hexagon() {
  SixTermDiagram d;
  d.name = "aff-c";
  d.nodes = {free_group(1), free_group(1), free_group(1), free_group(1), free_group(0), free_group(0)};
  d.maps = {make_hom(1, 1, {{1}}), make_hom(1, 1, {{0}}), make_hom(1, 1, {{1}}),
            zero_hom(1, 0),        zero_hom(0, 0),        zero_hom(0, 1)};
  return d;
}

std::vector<SixTermDiagram> fixture_hexagons() { return {gamma4_hexagon(), gamma123_hexagon(), aff_c_hexagon()}; }

std::string Mutation::label() const {
  return diagram + ".map" + std::to_string(map) + "[" + std::to_string(row) + "," + std::to_string(col) +
         "]=" + std::to_string(value);
}

std::vector<Mutation> fixture_mutations() {
  std::vector<Mutation> out;
  const IntMatrix d0 = gamma4_delta0();
  const int cells[10][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 3}, {2, 0}, {2, 2}, {2, 3}, {3, 0}, {3, 3}};
  for (const auto& c : cells) out.push_back({"gamma4", 2, c[0], c[1], d0(c[0], c[1]) + 1});
  out.push_back({"gamma4", 1, 2, 0, 2});
  out.push_back({"gamma4", 3, 0, 1, 2});
  out.push_back({"gamma123", 2, 0, 0, 2});
  out.push_back({"gamma123", 3, 0, 0, 2});
  out.push_back({"gamma123", 3, 1, 1, 0});
  out.push_back({"gamma123", 4, 0, 0, 2});
  out.push_back({"aff-c", 0, 0, 0, 2});
  out.push_back({"aff-c", 1, 0, 0, 1});
  out.push_back({"aff-c", 2, 0, 0, 2});
  out.push_back({"aff-c", 2, 0, 0, 0});
  return out;
}

SixTermDiagram apply_mutation(const SixTermDiagram& d, const Mutation& m) {
  if (m.map < 0 || m.map >= static_cast<int>(d.maps.size())) throw Error(ErrorKind::ShapeMismatch, "no such map");
  SixTermDiagram out = d;
  IntMatrix& mat = out.maps[m.map].matrix;
  if (m.row < 0 || m.row >= mat.rows() || m.col < 0 || m.col >= mat.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "mutation outside the matrix");
  }
  mat(m.row, m.col) = m.value;
  return out;
}

std::string diagram_to_json(const SixTermDiagram& d) {
  nlohmann::json j;
  j["schema"] = 1;
  j["name"] = d.name;
  j["nodes"] = nlohmann::json::array();
  for (const AbelianGroup& g : d.nodes) j["nodes"].push_back(group_json(g));
  j["maps"] = nlohmann::json::array();
  for (const GroupHom& h : d.maps) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
      std::vector<long long> row(h.matrix.cols());
      for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) row[c] = h.matrix(r, c);
      rows.push_back(row);
    }
    j["maps"].push_back({{"rows", h.matrix.rows()}, {"cols", h.matrix.cols()}, {"entries", rows}});
  }
  return j.dump(2);
}

SixTermDiagram diagram_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    SixTermDiagram d;
    d.name = j.value("name", "");
    for (const auto& n : j.at("nodes")) d.nodes.push_back(group_from(n));
    if (d.nodes.size() != 6 || j.at("maps").size() != 6) {
      throw Error(ErrorKind::ShapeMismatch, "a hexagon has 6 nodes and 6 maps");
    }
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& m = j.at("maps")[i];
      const int rows = m.at("rows").get<int>(), cols = m.at("cols").get<int>();
      GroupHom h{d.nodes[i], d.nodes[(i + 1) % 6], IntMatrix::Zero(rows, cols)};
      const auto& entries = m.at("entries");
      if (static_cast<int>(entries.size()) != rows) throw Error(ErrorKind::ShapeMismatch, "row count");
      for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(entries[r].size()) != cols) throw Error(ErrorKind::ShapeMismatch, "row length");
        for (int c = 0; c < cols; ++c) h.matrix(r, c) = entries[r][c].get<long long>();
      }
      h.check_shape();
      d.maps.push_back(h);
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string k_table_json() {
  nlohmann::json j;
  j["schema"] = 1;
  for (const auto& [name, k] : table()) j["spaces"][name] = {{"k0", group_json(k.k0)}, {"k1", group_json(k.k1)}};
  return j.dump(2);
}

std::map<std::string, KPair> k_table_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::map<std::string, KPair> out;
    for (const auto& [name, v] : j.at("spaces").items()) out[name] = KPair{group_from(v.at("k0")), group_from(v.at("k1"))};
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string lifts_json() {
  nlohmann::json j;
  j["schema"] = 1;
  j["ell"]["centres"] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi};
  j["ell"]["intervals"] = nlohmann::json::array();
  for (int i = 1; i <= 4; ++i) j["ell"]["intervals"].push_back({(i - 1) * 0.5 * kPi, i * 0.5 * kPi});
  j["ell"]["shape"] = "hat, 1 at the centre, 0 at distance pi/2";
  const IntMatrix d0 = gamma4_delta0();
  for (int r = 0; r < 4; ++r) j["ell"]["expected_delta0"].push_back({d0(r, 0), d0(r, 1), d0(r, 2), d0(r, 3)});
  j["p"]["phi"] = 0.7;
  j["p"]["r"] = 0.3;
  j["p"]["profile"] = "t / sqrt(1 + t^2)";
  j["p"]["pieces"] = {"z > 0", "z < 0"};
  j["p"]["expected_delta0"] = {{1}, {1}};
  j["u_plus"] = {{"interval", "[0, inf)"}, {"expected_winding", 1}};
  return j.dump(2);
}

}  // namespace orbiton
