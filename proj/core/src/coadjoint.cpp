#include "orbiton/coadjoint.hpp"

#include <sstream>

#include "json.hpp"
#include "orbiton/errors.hpp"

namespace orbiton {

GroupWord GroupWord::inverse() const {
  GroupWord w;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) w.steps.emplace_back(it->first, -it->second);
  return w;
}

Matrix kirillov_form(const LieAlgebra& g, const Functional& f) {
  const int n = g.dim();
  if (f.size() != n) throw Error(ErrorKind::DimensionMismatch, "functional length differs from dimension");
  Matrix b = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += f(k) * g.c(i, j, k);
      b(i, j) = s;
      b(j, i) = -s;
    }
  }
  return b;
}

int orbit_dimension(const LieAlgebra& g, const Functional& f) {
  const int r = numerical_rank(kirillov_form(g, f));
  // Singular values of a skew matrix come in pairs; an odd count means the
  // tolerance split a pair, so round up to the pair.
  return r % 2 ? r + 1 : r;
}

Subspace stabilizer_algebra(const LieAlgebra& g, const Functional& f) {
  return Subspace{null_space(kirillov_form(g, f))};
}

Functional coadjoint_flow(const LieAlgebra& g, const Functional& f, const GroupWord& w) {
  const int n = g.dim();
  if (f.size() != n) throw Error(ErrorKind::DimensionMismatch, "functional length differs from dimension");
  Eigen::RowVectorXd row = f.transpose();
  for (const auto& [i, t] : w.steps) {
    if (i < 0 || i >= n) throw Error(ErrorKind::DimensionMismatch, "generator index out of range");
    row = row * exp_ad(g, t * basis_vector(n, i));
  }
  return row.transpose();
}

Matrix orbit_tangents(const LieAlgebra& g, const Functional& f) { return kirillov_form(g, f); }

GroupWord random_word(int dim, int length, double step_scale, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, dim - 1);
  std::uniform_real_distribution<double> time(-step_scale, step_scale);
  GroupWord w;
  for (int s = 0; s < length; ++s) {
    const int i = pick(rng);
    w.steps.emplace_back(i, time(rng));
  }
  return w;
}

OrbitSample sample_orbit(const LieAlgebra& g, const Functional& f, int n, double step_scale,
                         std::uint64_t seed, int word_length) {
  if (n < 1) throw Error(ErrorKind::BadParams, "sample count must be positive");
  const int length = word_length < 0 ? 2 * g.dim() : word_length;
  OrbitSample out;
  out.base = f;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  for (int p = 0; p < n; ++p) {
    out.points.push_back(coadjoint_flow(g, f, random_word(g.dim(), length, step_scale, rng)));
  }
  // The tangent span {xi_k(F)} is the row space of B_F.
  out.est_dim = orbit_dimension(g, f);
  return out;
}

std::map<int, std::vector<Functional>> stratify(const LieAlgebra& g,
                                                const std::vector<Functional>& fs) {
  std::map<int, std::vector<Functional>> strata;
  for (const Functional& f : fs) strata[orbit_dimension(g, f)].push_back(f);
  return strata;
}

std::string orbit_sample_csv(const OrbitSample& s) {
  std::ostringstream os;
  os.precision(17);
  const Eigen::Index n = s.base.size();
  for (Eigen::Index k = 0; k < n; ++k) os << (k ? "," : "") << "f" << k;
  os << "\n";
  for (const Functional& p : s.points) {
    for (Eigen::Index k = 0; k < n; ++k) os << (k ? "," : "") << p(k);
    os << "\n";
  }
  return os.str();
}

std::string orbit_sample_json(const OrbitSample& s) {
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["base"] = std::vector<double>(s.base.data(), s.base.data() + s.base.size());
  doc["est_dim"] = s.est_dim;
  doc["seed"] = s.seed;
  nlohmann::json pts = nlohmann::json::array();
  for (const Functional& p : s.points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  doc["points"] = pts;
  return doc.dump(2);
}

}  // namespace orbiton
