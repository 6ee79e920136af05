#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orbiton/classify.hpp"
#include "orbiton/coadjoint.hpp"
#include "orbiton/errors.hpp"
#include "orbiton/families.hpp"
#include "orbiton/fredholm.hpp"
#include "orbiton/kindex.hpp"
#include "orbiton/orbit_atlas.hpp"

namespace orbiton {

namespace {

using nlohmann::json;

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Common {
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string output;
};

struct Outcome {
  json report;
  bool passed = true;
  std::vector<std::string> lines;
  // Only the atlas command has a CSV rendering.
  std::string csv;
};

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json int_matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IOError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IOError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IOError, "write failed for " + path);
}

Functional parse_functional(const std::string& text, int dim) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "'" + item + "' is not a number");
    }
  }
  if (static_cast<int>(values.size()) != dim) {
    throw Error(ErrorKind::DimensionMismatch, "functional needs " + std::to_string(dim) + " coordinates");
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), dim);
}

// classify

Outcome classify_algebra(const LieAlgebra& g, const std::string& source, std::uint64_t seed) {
  Outcome o;
  json& r = o.report;
  r["schema"] = 1;
  r["command"] = "classify";
  r["source"] = source;
  r["dim"] = g.dim();
  r["solvable"] = is_solvable(g);
  if (!is_solvable(g)) {
    r["family"] = nullptr;
    r["error"] = "NotSolvable";
    o.passed = false;
    o.lines.push_back(source + ": not solvable");
    return o;
  }
  r["md_bar"] = md_bar_name(classify_md_bar(g, seed));
  if (g.dim() == 4) {
    try {
      const ClassifyReport rep = classify_md4_report(g, seed);
      r["family"] = family_name(rep.label.family);
      r["params"] = rep.label.params;
      r["label"] = rep.label.to_string();
      r["decomposition"] = rep.label.decomposition
                               ? json{{"n", rep.label.decomposition->n}, {"inner", rep.label.decomposition->inner}}
                               : json(nullptr);
      r["branch"] = rep.branch;
      r["derived_dim"] = rep.derived_dim;
      r["md_property"] = rep.md_property;
      r["md_witness"] = rep.md_witness ? vec_json(*rep.md_witness) : json(nullptr);
      json eig = json::array();
      for (const auto& z : rep.eigenvalues) eig.push_back({z.real(), z.imag()});
      r["eigenvalues"] = eig;
      o.passed = rep.label.family != Family::NotMD4 && rep.label.family != Family::Unclassified;
    } catch (const Error& e) {
      r["family"] = nullptr;
      r["error"] = error_kind_name(e.kind());
      r["detail"] = e.detail();
      o.passed = false;
    }
  } else {
    r["family"] = nullptr;
  }
  const ExponentialResult ex = is_exponential(g, seed);
  r["exponential"] = ex.exponential;
  r["exponential_witness"] = ex.witness ? vec_json(*ex.witness) : json(nullptr);
  o.lines.push_back(source + ": family " + (r["family"].is_null() ? std::string("-") : r["label"].get<std::string>()) +
                    ", md_bar " + r["md_bar"].get<std::string>() + ", exponential " +
                    (ex.exponential ? "yes" : "no"));
  return o;
}

// atlas

struct AtlasOptions {
  std::string family;
  std::vector<std::string> functionals;
  int random = 0;
  int samples = 500;
  double step = 0.5;
  double tolerance = 1e-8;
  std::string out_dir;
};

json atlas_orbit(const LieAlgebra& g, const MD4Label& label, const Functional& f, const AtlasOptions& opt,
                 std::uint64_t seed, const std::string& csv_path, double& worst, bool& ok) {
  const OrbitModel model = orbit_model(label, f);
  const OrbitSample sample = sample_orbit(g, f, opt.samples, opt.step, seed);
  double residual = 0.0;
  for (const Functional& p : sample.points) residual = std::max(residual, orbit_membership(model, p));
  const int rank = orbit_dimension(g, f);
  const bool dims = rank == model.dim();
  worst = std::max(worst, residual);
  ok = ok && dims && residual < opt.tolerance;
  json j{{"base", vec_json(f)},        {"kind", orbit_kind_name(model.kind)}, {"stratum", model.stratum},
         {"model_dim", model.dim()},  {"rank", rank},                        {"max_residual", residual},
         {"near_boundary", model.near_boundary}};
  if (!csv_path.empty()) {
    if (model.kind == OrbitKind::Point) {
      OrbitSample single = sample;
      single.points = {f};
      write_file(csv_path, orbit_sample_csv(single));
    } else {
      write_file(csv_path, orbit_sample_csv(sample));
    }
    j["csv"] = csv_path;
  }
  return j;
}

Outcome run_atlas(const AtlasOptions& opt, std::uint64_t seed) {
  const Family fam = family_from_name(opt.family);
  if (!is_md4_family(fam)) throw Error(ErrorKind::UnknownFamily, opt.family + " has no orbit picture");
  const MD4Label label{fam, default_params(fam), std::nullopt};
  const LieAlgebra g = family_algebra(label);
  std::vector<Functional> bases;
  for (const std::string& text : opt.functionals) bases.push_back(parse_functional(text, 4));
  std::mt19937_64 rng(seed);
  for (int k = 0; k < opt.random; ++k) {
    const auto strata = family_strata(fam);
    bases.push_back(sample_stratum_point(strata[k % strata.size()], rng));
  }
  if (bases.empty()) bases.push_back((Functional(4) << 1.0, 1.0, 1.0, 0.0).finished());
  if (!opt.out_dir.empty()) std::filesystem::create_directories(opt.out_dir);

  Outcome o;
  json& r = o.report;
  r["schema"] = 1;
  r["command"] = "atlas";
  r["family"] = opt.family;
  r["params"] = label.params;
  r["samples"] = opt.samples;
  r["orbits"] = json::array();
  double worst = 0.0;
  bool ok = true;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const std::string csv =
        opt.out_dir.empty() ? "" : (std::filesystem::path(opt.out_dir) / (opt.family + "_orbit_" + std::to_string(k) + ".csv")).string();
    r["orbits"].push_back(atlas_orbit(g, label, bases[k], opt, seed + k, csv, worst, ok));
    const json& last = r["orbits"].back();
    std::ostringstream line;
    line << opt.family << " orbit " << k << ": " << last["kind"].get<std::string>() << ", rank "
         << last["rank"].get<int>() << ", max residual " << last["max_residual"].get<double>();
    o.lines.push_back(line.str());
  }
  r["max_residual"] = worst;
  r["passed"] = ok;
  std::ostringstream csv;
  csv.precision(17);
  csv << "orbit,kind,rank,model_dim,max_residual,alpha,beta,gamma,delta\n";
  for (std::size_t k = 0; k < bases.size(); ++k) {
    const json& e = r["orbits"][k];
    csv << k << "," << e["kind"].get<std::string>() << "," << e["rank"].get<int>() << ","
        << e["model_dim"].get<int>() << "," << e["max_residual"].get<double>();
    for (int i = 0; i < 4; ++i) csv << "," << bases[k](i);
    csv << "\n";
  }
  o.csv = csv.str();
  if (!opt.out_dir.empty()) {
    const std::string path = (std::filesystem::path(opt.out_dir) / (opt.family + "_model.json")).string();
    json model = json::parse(atlas_json(fam));
    model["orbits"] = r["orbits"];
    write_file(path, model.dump(2) + "\n");
    r["model_file"] = path;
  }
  o.passed = ok;
  o.lines.push_back("max residual " + num(worst) + (ok ? " PASS" : " FAIL"));
  return o;
}

// foliation

Outcome run_foliation(const std::vector<std::string>& families, int points, std::uint64_t seed, double tolerance) {
  Outcome o;
  json& r = o.report;
  r["schema"] = 1;
  r["command"] = "foliation";
  r["systems"] = json::array();
  bool all_ok = true;
  for (const std::string& name : families) {
    const Family fam = family_from_name(name);
    const MD4Label label{fam, default_params(fam), std::nullopt};
    const LieAlgebra g = family_algebra(label);
    const DistributionSpec spec = distribution_spec(label);
    const int expected = fam == Family::g424 ? 4 : 2;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    int lo = 4, hi = 0, generic = 0;
    double min_multivector = std::numeric_limits<double>::infinity();
    double tangency = 0.0;
    std::vector<Functional> orbit_bases;
    while (generic < points) {
      Eigen::Vector4d p;
      for (int i = 0; i < 4; ++i) p(i) = normal(rng);
      if (orbit_dimension(g, p) == 0) continue;
      ++generic;
      const int rank = distribution_rank_at(spec, p);
      lo = std::min(lo, rank);
      hi = std::max(hi, rank);
      min_multivector = std::min(min_multivector, multivector_norm_at(spec, p));
      if (orbit_bases.size() < 10) orbit_bases.push_back(p);
    }
    for (std::size_t k = 0; k < orbit_bases.size(); ++k) {
      const OrbitSample sample = sample_orbit(g, orbit_bases[k], 20, 0.3, seed + k);
      tangency = std::max(tangency, check_tangency(g, spec, sample));
    }
    const bool ok = lo == expected && hi == expected && tangency < tolerance;
    all_ok = all_ok && ok;
    r["systems"].push_back({{"family", name},
                            {"system", spec.system},
                            {"expected_rank", expected},
                            {"min_rank", lo},
                            {"max_rank", hi},
                            {"points", generic},
                            {"tangency_residual", tangency},
                            {"min_multivector_norm", min_multivector},
                            {"topological_type", topological_type(fam)},
                            {"passed", ok}});
    std::ostringstream line;
    line << spec.system << " (" << name << "): rank " << lo << ".." << hi << ", tangency " << tangency
         << (ok ? " PASS" : " FAIL");
    o.lines.push_back(line.str());
  }
  r["passed"] = all_ok;
  o.passed = all_ok;
  return o;
}

// fredholm

struct FredholmOptions {
  int which = 0;
  double L = 8.0;
  int N = 2048;
  bool ladder = true;
  bool strict = false;
};

json operator_report(int which, double L, int N, bool strict, bool& ok, std::vector<std::string>& lines) {
  json j{{"which", which}, {"L", L}, {"N", N}};
  const LogGrid grid = build_grid(L, N);
  const DiscreteOperator op = assemble_operator(which, grid, strict);
  j["quadrature_error"] = op.quadrature_error;
  json warnings = json::array();
  if (op.quadrature_error > 1e-6) warnings.push_back("grid too coarse: quadrature error above 1e-6");
  auto fill = [&](const IndexResult& res) {
    j["dim_ker"] = res.dim_ker;
    j["dim_coker"] = res.dim_coker;
    j["index"] = res.index;
    j["threshold"] = res.threshold;
    j["gap_ratio"] = res.gap_ratio;
    j["sigma_max"] = res.sigma_max;
    j["sing_vals_near_zero"] = res.sing_vals_near_zero;
    std::vector<double> tail(res.smallest.begin(), res.smallest.begin() + std::min<std::size_t>(8, res.smallest.size()));
    j["singular_value_tail"] = tail;
    j["kernel_boundary_mass"] = res.kernel_boundary_mass;
    j["coker_boundary_mass"] = res.coker_boundary_mass;
    j["rejected_artifacts"] = {{"kernel", res.rejected_kernel}, {"coker", res.rejected_coker}};
    j["method"] = res.method;
  };
  try {
    const IndexResult res = numerical_index(op);
    fill(res);
    json parity = json::array();
    json similarity = json::array();
    std::optional<OracleReport> oracle;
    try {
      oracle = ode_kernel_oracle(grid);
    } catch (const Error& e) {
      warnings.push_back(std::string("oracle: ") + e.what());
    }
    bool vectors_ok = true;
    for (const Eigen::VectorXd& v : res.kernel_vectors) {
      const ParityReport p = parity_check(v, which);
      parity.push_back({{"even", p.even_residual}, {"odd", p.odd_residual}, {"ok", p.ok}});
      vectors_ok = vectors_ok && p.ok;
      if (oracle) {
        const double s = oracle_similarity(v, *oracle, grid, which);
        similarity.push_back(s);
        vectors_ok = vectors_ok && s > 0.999;
      }
    }
    j["parity"] = parity;
    j["oracle_similarity"] = similarity;
    const bool this_ok = res.dim_ker == 1 && res.dim_coker == 0 && vectors_ok;
    ok = ok && this_ok;
    std::ostringstream line;
    line << "S(phi" << which << ") L=" << L << " N=" << N << ": ker " << res.dim_ker << ", coker "
         << res.dim_coker << ", index " << res.index << ", gap " << res.gap_ratio << (this_ok ? " PASS" : " FAIL");
    lines.push_back(line.str());
  } catch (const GapTooSmallError& e) {
    fill(e.result());
    j["error"] = "GapTooSmall";
    j["detail"] = e.detail();
    j["suggestion"] = {{"L", L}, {"N", 2 * N}};
    ok = false;
    lines.push_back("S(phi" + std::to_string(which) + ") L=" + num(L) + " N=" + std::to_string(N) +
                    ": GapTooSmall, try N=" + std::to_string(2 * N));
  }
  j["warnings"] = warnings;
  return j;
}

Outcome run_fredholm(const FredholmOptions& opt) {
  Outcome o;
  json& r = o.report;
  r["schema"] = 1;
  r["command"] = "fredholm";
  r["operators"] = json::array();
  bool ok = true;
  std::vector<int> which = opt.which == 0 ? std::vector<int>{1, 2} : std::vector<int>{opt.which};
  for (int i : which) r["operators"].push_back(operator_report(i, opt.L, opt.N, opt.strict, ok, o.lines));
  if (which.size() == 2 && ok) {
    r["index"] = {r["operators"][0]["index"], r["operators"][1]["index"]};
    o.lines.push_back("index (" + std::to_string(r["index"][0].get<int>()) + "," +
                      std::to_string(r["index"][1].get<int>()) + ")");
  }
  if (opt.ladder) {
    r["ladder"] = json::array();
    const std::pair<double, int> rungs[] = {{6.0, 1024}, {8.0, 2048}, {10.0, 4096}};
    for (int i : which) {
      for (const auto& [L, N] : rungs) {
        std::vector<std::string> sink;
        const json rep = operator_report(i, L, N, false, ok, sink);
        r["ladder"].push_back({{"which", i},
                               {"L", L},
                               {"N", N},
                               {"index", rep.value("index", 0)},
                               {"gap_ratio", rep.value("gap_ratio", 0.0)},
                               {"error", rep.value("error", "")}});
        o.lines.insert(o.lines.end(), sink.begin(), sink.end());
      }
    }
  }
  r["passed"] = ok;
  o.passed = ok;
  return o;
}

// kindex

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

// Writes the hexagons, the K-group table and the lift data as JSON files.
Outcome export_fixtures(const std::string& dir) {
  std::filesystem::create_directories(dir);
  Outcome o;
  o.report["schema"] = 1;
  o.report["command"] = "kindex";
  json files = json::array();
  auto put = [&](const std::string& name, const std::string& text) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    write_file(path, text + "\n");
    files.push_back(path);
    o.lines.push_back("wrote " + path);
  };
  for (const SixTermDiagram& d : fixture_hexagons()) put(d.name + ".json", diagram_to_json(d));
  put("k_table.json", k_table_json());
  put("lifts.json", lifts_json());
  o.report["exported"] = files;
  return o;
}

Outcome run_kindex(int grid, const std::string& which_case) {
  Outcome o;
  json& r = o.report;
  r["schema"] = 1;
  r["command"] = "kindex";
  r["grid"] = grid;
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, const std::function<Check()>& body) {
    try {
      checks.push_back(body());
    } catch (const Error& e) {
      std::string hint = e.kind() == ErrorKind::NonIntegerResult ? "; refine with a larger --grid" : "";
      checks.push_back({name, false, std::string(e.what()) + hint});
    }
  };

  if (which_case == "all" || which_case == "kgroups") {
    guarded("k_table", [] {
      const bool ok = k_table("point") == KPair{free_group(1), free_group(0)} &&
                      k_table("R2") == KPair{free_group(1), free_group(0)} &&
                      k_table("S1") == KPair{free_group(1), free_group(1)};
      return Check{"k_table", ok, "point (Z,0), R2 (Z,0), S1 (Z,Z)"};
    });
    guarded("connes_thom", [] {
      const KPair k{free_group(2), free_group(1)};
      const bool ok = connes_thom_shift(KPair{free_group(1), free_group(0)}, 1) == KPair{free_group(0), free_group(1)} &&
                      connes_thom_shift(k, 2) == k && connes_thom_shift(k, 3) == KPair{free_group(1), free_group(2)};
      return Check{"connes_thom", ok, "parity shift"};
    });
    guarded("snf_delta0_gamma4", [] {
      const SmithForm s = smith_normal_form(gamma4_delta0());
      IntMatrix expected = IntMatrix::Zero(4, 4);
      expected.diagonal() << 1, 1, 1, 0;
      return Check{"snf_delta0_gamma4", s.D == expected, "diag(1,1,1,0), rank " + std::to_string(s.rank)};
    });
  }
  if (which_case == "all" || which_case == "winding") {
    guarded("winding_u_plus", [grid] {
      const WindingResult w = winding_number(u_plus(), grid);
      std::ostringstream d;
      d.precision(12);
      d << "raw " << w.raw;
      return Check{"winding_u_plus", w.winding == 1, d.str()};
    });
    guarded("winding_u_minus", [grid] {
      const WindingResult w = winding_number(u_minus(), grid);
      return Check{"winding_u_minus", w.winding == 1, "winding " + std::to_string(w.winding)};
    });
    guarded("ell_lift_windings", [grid] {
      const long long w1 = winding_number(ell_loop(1, 1), grid).winding;
      const long long w4 = winding_number(ell_loop(1, 4), grid).winding;
      return Check{"ell_lift_windings", w1 == -1 && w4 == 1,
                   "(" + std::to_string(w1) + ", " + std::to_string(w4) + ")"};
    });
    guarded("delta0_gamma4", [grid, &r] {
      const GroupHom d = delta0_via_winding(ell_generators(), grid);
      const bool ok = same_matrix(d.matrix, gamma4_delta0());
      r["delta0_gamma4"] = int_matrix_json(d.matrix);
      return Check{"delta0_gamma4", ok, ok ? "matrix matches" : "matrix differs"};
    });
    guarded("delta0_p", [grid, &r] {
      const GroupHom d = delta0_via_winding({p_lift()}, grid);
      const bool ok = d.matrix.rows() == 2 && d.matrix(0, 0) == 1 && d.matrix(1, 0) == 1;
      r["delta0_p"] = int_matrix_json(d.matrix);
      return Check{"delta0_p", ok, "(" + std::to_string(d.matrix(0, 0)) + "," + std::to_string(d.matrix(1, 0)) + ")"};
    });
    guarded("idempotent_p", [] {
      const double res = idempotent_residual(
          [](double u, double v) { return p_idempotent(2.0 * 3.14159265358979323846 * u, v); }, 101);
      std::ostringstream d;
      d << "residual " << res;
      return Check{"idempotent_p", res < 1e-12, d.str()};
    });
  }
  if (which_case == "all" || which_case == "exactness") {
    for (const SixTermDiagram& d : fixture_hexagons()) {
      guarded("six_term_" + d.name, [&d] {
        const ExactnessReport rep = six_term_check(d);
        return Check{"six_term_" + d.name, rep.all_exact(), rep.all_exact() ? "exact" : "not exact"};
      });
    }
    guarded("mutations", [] {
      int rejected = 0, total = 0;
      const auto hexagons = fixture_hexagons();
      for (const Mutation& m : fixture_mutations()) {
        for (const SixTermDiagram& d : hexagons) {
          if (d.name != m.diagram) continue;
          ++total;
          if (!six_term_check(apply_mutation(d, m)).all_exact()) ++rejected;
        }
      }
      return Check{"mutations", rejected == total && total == 20,
                   std::to_string(rejected) + "/" + std::to_string(total) + " rejected"};
    });
  }
  if (which_case == "affR") {
    FredholmOptions fo;
    fo.ladder = false;
    const Outcome fr = run_fredholm(fo);
    const bool ok = fr.passed && fr.report.contains("index");
    std::string detail = ok ? "index (" + std::to_string(fr.report["index"][0].get<int>()) + "," +
                                  std::to_string(fr.report["index"][1].get<int>()) + ")"
                            : "fredholm checks failed";
    checks.push_back({"aff_r_index", ok, detail});
    r["fredholm"] = fr.report;
  }
  r["checks"] = json::array();
  for (const Check& c : checks) {
    r["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    o.lines.push_back(c.name + ": " + (c.pass ? "PASS" : "FAIL") + " (" + c.detail + ")");
    o.passed = o.passed && c.pass;
  }
  if (checks.empty()) throw Error(ErrorKind::BadParams, "unknown case '" + which_case + "'");
  r["passed"] = o.passed;
  return o;
}

int emit(const Outcome& o, const Common& c, std::ostream& out) {
  std::string text;
  if (c.format == "csv") {
    if (o.csv.empty()) throw Error(ErrorKind::BadParams, "csv output is only available for atlas");
    text = o.csv;
  } else if (c.format == "text") {
    for (const std::string& line : o.lines) text += line + "\n";
  } else {
    text = o.report.dump(2) + "\n";
  }
  if (c.output.empty()) {
    out << text;
  } else {
    write_file(c.output, text);
  }
  return o.passed ? kExitOk : kExitCheckFailed;
}

std::uint64_t resolve_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("ORBITON_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "ORBITON_SEED is not an integer");
    }
  }
  return seed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"orbiton: coadjoint orbits, MD4 classification, K-theory and Fredholm checks"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed (ORBITON_SEED overrides)");
    sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("-o,--output", common.output, "Write the report to this file");
  };

  std::string builtin, input;
  CLI::App* classify = app.add_subcommand("classify", "Classify an algebra");
  classify->add_option("--builtin", builtin, "Builtin algebra name");
  classify->add_option("--input", input, "Algebra JSON file");
  add_common(classify);

  AtlasOptions atlas_opt;
  CLI::App* atlas = app.add_subcommand("atlas", "Sample coadjoint orbits against their models");
  atlas->add_option("--family", atlas_opt.family, "MD4 family name")->required();
  atlas->add_option("--F", atlas_opt.functionals, "Base functional a,b,c,d (repeatable)");
  atlas->add_option("--random", atlas_opt.random, "Additional random base points across strata");
  atlas->add_option("--samples", atlas_opt.samples, "Orbit points per base");
  atlas->add_option("--step", atlas_opt.step, "Scale of the random group words");
  atlas->add_option("--membership-tol", atlas_opt.tolerance, "Residual tolerance");
  atlas->add_option("--out", atlas_opt.out_dir, "Directory for CSV point clouds and model JSON");
  add_common(atlas);

  std::vector<std::string> fol_families;
  int fol_points = 1000;
  double fol_tol = 1e-6;
  CLI::App* foliation = app.add_subcommand("foliation", "Rank and tangency of the foliation systems");
  foliation->add_option("--family", fol_families, "Families (default: all twelve)");
  foliation->add_option("--points", fol_points, "Generic points per system");
  foliation->add_option("--tangency-tol", fol_tol, "Tangency tolerance");
  add_common(foliation);

  int grid = kDefaultWindingGrid;
  std::string kcase = "all";
  CLI::App* kindex = app.add_subcommand("kindex", "K-theory fixture checks");
  kindex->add_option("--grid", grid, "Winding quadrature nodes");
  kindex->add_option("--case", kcase, "all, kgroups, winding, exactness or affR");
  std::string export_dir;
  kindex->add_option("--export-fixtures", export_dir, "Write the fixture JSON files to this directory and exit");
  add_common(kindex);

  FredholmOptions fo;
  bool no_ladder = false;
  CLI::App* fredholm = app.add_subcommand("fredholm", "Fredholm indices of S(phi_1), S(phi_2)");
  fredholm->add_option("--which", fo.which, "1, 2 or 0 for both")->check(CLI::IsMember({0, 1, 2}));
  fredholm->add_option("--L", fo.L, "Log-grid half width");
  fredholm->add_option("--N", fo.N, "Nodes per half-line");
  fredholm->add_flag("--no-ladder", no_ladder, "Skip the (L, N) convergence ladder");
  fredholm->add_flag("--strict", fo.strict, "Fail on coarse grids instead of warning");
  fredholm->add_option("--report", common.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  add_common(fredholm);

  CLI::App* all = app.add_subcommand("all", "Run every suite with default settings");
  add_common(all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    common.seed = resolve_seed(common.seed);
    if (app.got_subcommand(classify)) {
      if (builtin.empty() == input.empty()) throw Error(ErrorKind::BadParams, "give exactly one of --builtin, --input");
      const LieAlgebra g = builtin.empty() ? algebra_from_json(read_file(input)) : builtin_algebra(builtin);
      return emit(classify_algebra(g, builtin.empty() ? input : builtin, common.seed), common, out);
    }
    if (app.got_subcommand(atlas)) return emit(run_atlas(atlas_opt, common.seed), common, out);
    if (app.got_subcommand(foliation)) {
      if (fol_families.empty()) {
        for (Family f : md4_families()) fol_families.push_back(family_name(f));
      }
      return emit(run_foliation(fol_families, fol_points, common.seed, fol_tol), common, out);
    }
    if (app.got_subcommand(kindex)) {
      if (!export_dir.empty()) return emit(export_fixtures(export_dir), common, out);
      return emit(run_kindex(grid, kcase), common, out);
    }
    if (app.got_subcommand(fredholm)) {
      fo.ladder = !no_ladder;
      return emit(run_fredholm(fo), common, out);
    }
    // all
    Outcome combined;
    combined.report["schema"] = 1;
    combined.report["command"] = "all";
    json classified = json::array();
    for (const std::string& name : builtin_names()) {
      const Outcome c = classify_algebra(builtin_algebra(name), name, common.seed);
      classified.push_back(c.report);
      combined.passed = combined.passed && c.passed;
      combined.lines.insert(combined.lines.end(), c.lines.begin(), c.lines.end());
    }
    combined.report["classify"] = classified;
    json atlases = json::array();
    for (Family f : md4_families()) {
      AtlasOptions ao;
      ao.family = family_name(f);
      ao.random = static_cast<int>(family_strata(f).size());
      ao.samples = 200;
      const Outcome a = run_atlas(ao, common.seed);
      atlases.push_back(a.report);
      combined.passed = combined.passed && a.passed;
      combined.lines.insert(combined.lines.end(), a.lines.begin(), a.lines.end());
    }
    combined.report["atlas"] = atlases;
    std::vector<std::string> names;
    for (Family f : md4_families()) names.push_back(family_name(f));
    const Outcome fol = run_foliation(names, 200, common.seed, 1e-6);
    const Outcome kin = run_kindex(kDefaultWindingGrid, "all");
    FredholmOptions fdef;
    fdef.ladder = false;
    const Outcome fr = run_fredholm(fdef);
    for (const Outcome* part : {&fol, &kin, &fr}) {
      combined.passed = combined.passed && part->passed;
      combined.lines.insert(combined.lines.end(), part->lines.begin(), part->lines.end());
    }
    combined.report["foliation"] = fol.report;
    combined.report["kindex"] = kin.report;
    combined.report["fredholm"] = fr.report;
    combined.report["passed"] = combined.passed;
    return emit(combined, common, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::NotSolvable:
      case ErrorKind::DegenerateJordan:
      case ErrorKind::GapTooSmall:
      case ErrorKind::SingularLoop:
      case ErrorKind::NonIntegerResult:
      case ErrorKind::AsymptoticMismatch:
        return kExitCheckFailed;
      default:
        return kExitInputError;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: IOError: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace orbiton
