#include "orbiton/orbit_atlas.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "json.hpp"
#include "orbiton/errors.hpp"

namespace orbiton {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

double inf_norm(const Functional& f) { return f.size() ? f.cwiseAbs().maxCoeff() : 0.0; }

double hinge(double signed_value) { return std::max(0.0, -signed_value); }

double sign(double v) { return v < 0 ? -1.0 : 1.0; }

// Position (x, y, z) reached by the T-flow for time s; t is free on every
// parameterized cylinder.
Vec3 predict(Family f, const std::vector<double>& p, const Functional& b, double s) {
  const double al = b(0), be = b(1), ga = b(2);
  switch (f) {
    case Family::g421: return {al, be * std::exp(p[0] * s), ga * std::exp(s)};
    case Family::g422: return {al, be * std::exp(s), (be * s + ga) * std::exp(s)};
    case Family::g423: {
      const cplx w = cplx(be, ga) * std::exp(s * std::polar(1.0, p[0]));
      return {al, w.real(), w.imag()};
    }
    case Family::g431:
      return {al * std::exp(p[0] * s), be * std::exp(p[1] * s), ga * std::exp(s)};
    case Family::g432: {
      const double e = std::exp(p[0] * s);
      return {al * e, (al * s + be) * e, ga * std::exp(s)};
    }
    case Family::g433: {
      const double e = std::exp(s);
      return {al * e, (al * s + be) * e, (0.5 * al * s * s + be * s + ga) * e};
    }
    case Family::g434: {
      const cplx w = cplx(al, be) * std::exp(s * std::polar(1.0, p[1]));
      return {w.real(), w.imag(), ga * std::exp(p[0] * s)};
    }
    default: return {al, be, ga};
  }
}

struct Candidates {
  std::vector<double> s;
  double infeasible = 0.0;

  void from_log(double c0, double pc, double kappa, double tol) {
    if (std::abs(c0) < tol) return;
    const double ratio = pc / c0;
    if (ratio > 0) {
      s.push_back(std::log(ratio) / kappa);
    } else {
      infeasible = std::max(infeasible, std::abs(pc) + std::abs(c0));
    }
  }

  // w = w0 * exp(s * e^{i phi}).
  void from_rotation(cplx w0, cplx w, double phi, double tol) {
    if (std::abs(w0) < tol) return;
    if (std::abs(w) == 0.0) {
      infeasible = std::max(infeasible, std::abs(w0));
      return;
    }
    const cplx ratio = w / w0;
    const double rho = std::log(std::abs(ratio)), theta = std::arg(ratio);
    const double c = std::cos(phi), sn = std::sin(phi);
    double k0 = 0.0;
    if (std::abs(c) > 1e-12) {
      const double s0 = rho / c;
      s.push_back(s0);
      k0 = std::round((s0 * sn - theta) / kTwoPi);
    }
    for (double k = k0 - 1; k <= k0 + 1; k += 1.0) s.push_back((theta + kTwoPi * k) / sn);
  }
};

Candidates curve_candidates(Family f, const std::vector<double>& p, const Functional& b,
                            const Functional& q, double tol) {
  Candidates c;
  const double al = b(0), be = b(1), ga = b(2);
  const double x = q(0), y = q(1), z = q(2);
  switch (f) {
    case Family::g421:
      c.from_log(be, y, p[0], tol);
      c.from_log(ga, z, 1.0, tol);
      break;
    case Family::g422:
      c.from_log(be, y, 1.0, tol);
      if (std::abs(be) < tol) c.from_log(ga, z, 1.0, tol);
      break;
    case Family::g423:
      c.from_rotation(cplx(be, ga), cplx(y, z), p[0], tol);
      break;
    case Family::g431:
      c.from_log(al, x, p[0], tol);
      c.from_log(be, y, p[1], tol);
      c.from_log(ga, z, 1.0, tol);
      break;
    case Family::g432:
      c.from_log(al, x, p[0], tol);
      if (std::abs(al) < tol) c.from_log(be, y, p[0], tol);
      c.from_log(ga, z, 1.0, tol);
      break;
    case Family::g433:
      c.from_log(al, x, 1.0, tol);
      if (std::abs(al) < tol) c.from_log(be, y, 1.0, tol);
      if (std::abs(al) < tol && std::abs(be) < tol) c.from_log(ga, z, 1.0, tol);
      break;
    case Family::g434:
      c.from_rotation(cplx(al, be), cplx(x, y), p[1], tol);
      c.from_log(ga, z, p[0], tol);
      break;
    default:
      break;
  }
  return c;
}

double curve_residual(const OrbitModel& m, const Functional& q) {
  const Family f = m.family.family;
  const std::vector<double>& p = m.family.params;
  const double tol = boundary_tolerance(m.base);
  const Candidates c = curve_candidates(f, p, m.base, q, tol);
  const double qn = inf_norm(q.head(3));
  double best = std::numeric_limits<double>::infinity();
  for (double s : c.s) {
    if (!std::isfinite(s)) continue;
    const Vec3 pred = predict(f, p, m.base, s);
    double defect = 0.0, mag = qn;
    for (int i = 0; i < 3; ++i) {
      defect = std::max(defect, std::abs(q(i) - pred[i]));
      mag = std::max(mag, std::abs(pred[i]));
    }
    best = std::min(best, defect / (1.0 + mag));
  }
  if (std::isfinite(best)) return best;
  return std::max(c.infeasible, 1.0) / (1.0 + qn + inf_norm(m.base));
}

struct Zero {
  bool a, b, c;
};

std::vector<std::pair<std::string, double>> base_coeffs(const Functional& f) {
  return {{"alpha", f(0)}, {"beta", f(1)}, {"gamma", f(2)}, {"delta", f(3)}};
}

AffineField field(std::initializer_list<std::tuple<int, int, double>> linear,
                  std::initializer_list<std::pair<int, double>> constant = {}) {
  AffineField out;
  for (const auto& [row, col, v] : linear) out.linear(row, col) += v;
  for (const auto& [row, v] : constant) out.constant(row) += v;
  return out;
}

constexpr int x = 0, y = 1, z = 2, t = 3;

Matrix field_matrix(const DistributionSpec& spec, const Eigen::Vector4d& p) {
  Matrix m(4, spec.fields.size());
  for (std::size_t i = 0; i < spec.fields.size(); ++i) m.col(i) = spec.fields[i].at(p);
  return m;
}

}  // namespace

std::string orbit_kind_name(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::Point: return "Point";
    case OrbitKind::HalfPlane: return "HalfPlane";
    case OrbitKind::Plane2D: return "Plane2D";
    case OrbitKind::Cylinder: return "Cylinder";
    case OrbitKind::Paraboloid: return "Paraboloid";
    case OrbitKind::HyperbolicParaboloid: return "HyperbolicParaboloid";
    case OrbitKind::HyperbolicCylinder: return "HyperbolicCylinder";
    case OrbitKind::OpenDense4D: return "OpenDense4D";
    case OrbitKind::ParamCurveCylinder: return "ParamCurveCylinder";
  }
  return "Point";
}

int orbit_kind_dim(OrbitKind kind) {
  switch (kind) {
    case OrbitKind::Point: return 0;
    case OrbitKind::OpenDense4D: return 4;
    default: return 2;
  }
}

double boundary_tolerance(const Functional& f) { return 1e-9 * (1.0 + inf_norm(f)); }

OrbitModel orbit_model(const MD4Label& label, const Functional& f) {
  if (!is_md4_family(label.family)) {
    throw Error(ErrorKind::UnknownFamily, family_name(label.family) + " has no orbit picture");
  }
  if (f.size() != 4) throw Error(ErrorKind::DimensionMismatch, "MD4 functionals have 4 coordinates");
  if (static_cast<int>(label.params.size()) != param_count(label.family)) {
    throw Error(ErrorKind::BadParams, "parameter count does not match " + family_name(label.family));
  }
  const double tol = boundary_tolerance(f);
  OrbitModel m;
  m.base = f;
  m.family = label;
  m.predicate_coeffs = base_coeffs(f);
  for (std::size_t i = 0; i < label.params.size(); ++i) {
    m.predicate_coeffs.emplace_back("param" + std::to_string(i), label.params[i]);
  }
  for (int i = 0; i < 4; ++i) {
    if (f(i) != 0.0 && std::abs(f(i)) < tol) m.near_boundary = true;
  }
  const Zero zero{std::abs(f(0)) < tol, std::abs(f(1)) < tol, std::abs(f(2)) < tol};
  auto set = [&](OrbitKind k, const char* stratum) {
    m.kind = k;
    m.stratum = stratum;
    return m;
  };
  switch (label.family) {
    case Family::g411:
      return zero.c ? set(OrbitKind::Point, "gamma = 0") : set(OrbitKind::Plane2D, "gamma != 0");
    case Family::g412:
      return zero.c ? set(OrbitKind::Point, "gamma = 0") : set(OrbitKind::HalfPlane, "gamma != 0");
    case Family::g421:
    case Family::g422:
    case Family::g423:
      return zero.b && zero.c ? set(OrbitKind::Point, "beta = gamma = 0")
                              : set(OrbitKind::ParamCurveCylinder, "beta^2 + gamma^2 != 0");
    case Family::g424:
      return zero.b && zero.c ? set(OrbitKind::Point, "beta = gamma = 0")
                              : set(OrbitKind::OpenDense4D, "beta^2 + gamma^2 != 0");
    case Family::g431:
    case Family::g432:
    case Family::g433:
    case Family::g434:
      return zero.a && zero.b && zero.c ? set(OrbitKind::Point, "alpha = beta = gamma = 0")
                                        : set(OrbitKind::ParamCurveCylinder, "alpha^2 + beta^2 + gamma^2 != 0");
    case Family::g441:
      if (!zero.c) return set(OrbitKind::Paraboloid, "gamma != 0");
      return zero.a && zero.b ? set(OrbitKind::Point, "alpha = beta = gamma = 0")
                              : set(OrbitKind::Cylinder, "gamma = 0, alpha^2 + beta^2 != 0");
    case Family::g442:
      if (!zero.c) return set(OrbitKind::HyperbolicParaboloid, "gamma != 0");
      if (zero.a && zero.b) return set(OrbitKind::Point, "alpha = beta = gamma = 0");
      if (zero.b) return set(OrbitKind::HalfPlane, "gamma = beta = 0, alpha != 0");
      if (zero.a) return set(OrbitKind::HalfPlane, "gamma = alpha = 0, beta != 0");
      return set(OrbitKind::HyperbolicCylinder, "gamma = 0, alpha beta != 0");
    default:
      break;
  }
  throw Error(ErrorKind::UnknownFamily, family_name(label.family));
}

OrbitModel aff_r_orbit_model(const Functional& f) {
  if (f.size() != 2) throw Error(ErrorKind::DimensionMismatch, "aff R functionals have 2 coordinates");
  OrbitModel m;
  m.base = f;
  m.aff_r = true;
  m.predicate_coeffs = {{"alpha", f(0)}, {"beta", f(1)}};
  if (std::abs(f(1)) < boundary_tolerance(f)) {
    m.kind = OrbitKind::Point;
    m.stratum = "beta = 0";
  } else {
    m.kind = OrbitKind::HalfPlane;
    m.stratum = "beta != 0";
  }
  return m;
}

double orbit_membership(const OrbitModel& m, const Functional& q) {
  if (q.size() != m.base.size()) throw Error(ErrorKind::DimensionMismatch, "point and model dimensions differ");
  const Functional& b = m.base;
  const double scale = 1.0 + std::max(inf_norm(q), inf_norm(b));
  if (m.kind == OrbitKind::Point) return (q - b).cwiseAbs().maxCoeff() / scale;
  if (m.aff_r) return hinge(sign(b(1)) * q(1)) / scale;

  const double al = b(0), be = b(1), ga = b(2), de = b(3);
  const double px = q(0), py = q(1), pz = q(2), pt = q(3);
  switch (m.kind) {
    case OrbitKind::Plane2D:
      return std::max(std::abs(py - be), std::abs(pz - ga)) / scale;
    case OrbitKind::HalfPlane:
      if (m.family.family == Family::g412) {
        return std::max({std::abs(px - al), std::abs(py - be), hinge(sign(ga) * pz)}) / scale;
      }
      if (std::abs(al) >= boundary_tolerance(b)) {
        return std::max({std::abs(py), std::abs(pz), hinge(sign(al) * px)}) / scale;
      }
      return std::max({std::abs(px), std::abs(pz), hinge(sign(be) * py)}) / scale;
    case OrbitKind::OpenDense4D:
      return std::hypot(py, pz) > boundary_tolerance(q) ? 0.0 : std::hypot(be, ga) / scale;
    case OrbitKind::Cylinder: {
      const double lhs = px * px + py * py, rhs = al * al + be * be;
      return std::max(std::abs(lhs - rhs) / (1.0 + lhs + rhs), std::abs(pz) / scale);
    }
    case OrbitKind::Paraboloid: {
      const double lhs = px * px + py * py - 2.0 * ga * pt;
      const double rhs = al * al + be * be - 2.0 * ga * de;
      const double mag = 1.0 + px * px + py * py + 2.0 * std::abs(ga * pt) + al * al + be * be +
                         2.0 * std::abs(ga * de);
      return std::max(std::abs(pz - ga) / scale, std::abs(lhs - rhs) / mag);
    }
    case OrbitKind::HyperbolicParaboloid: {
      const double defect = px * py - al * be - ga * (pt - de);
      const double mag = 1.0 + std::abs(px * py) + std::abs(al * be) + std::abs(ga) * (std::abs(pt) + std::abs(de));
      return std::max(std::abs(pz - ga) / scale, std::abs(defect) / mag);
    }
    case OrbitKind::HyperbolicCylinder: {
      const double defect = px * py - al * be;
      const double mag = 1.0 + std::abs(px * py) + std::abs(al * be);
      return std::max({std::abs(defect) / mag, std::abs(pz) / scale, hinge(sign(al) * px) / scale,
                       hinge(sign(be) * py) / scale});
    }
    case OrbitKind::ParamCurveCylinder:
      return curve_residual(m, q);
    default:
      return 0.0;
  }
}

std::vector<StratumSpec> family_strata(Family f) {
  using K = OrbitKind;
  switch (f) {
    case Family::g411: return {{"**z*", K::Point, "gamma = 0"}, {"**n*", K::Plane2D, "gamma != 0"}};
    case Family::g412: return {{"**z*", K::Point, "gamma = 0"}, {"**n*", K::HalfPlane, "gamma != 0"}};
    case Family::g421:
    case Family::g422:
    case Family::g423:
      return {{"*zz*", K::Point, "beta = gamma = 0"},
              {"*nn*", K::ParamCurveCylinder, "beta gamma != 0"},
              {"*nz*", K::ParamCurveCylinder, "beta != 0, gamma = 0"},
              {"*zn*", K::ParamCurveCylinder, "beta = 0, gamma != 0"}};
    case Family::g424:
      return {{"*zz*", K::Point, "beta = gamma = 0"},
              {"*nn*", K::OpenDense4D, "beta gamma != 0"},
              {"*zn*", K::OpenDense4D, "beta = 0, gamma != 0"}};
    case Family::g431:
    case Family::g432:
    case Family::g433:
    case Family::g434:
      return {{"zzz*", K::Point, "alpha = beta = gamma = 0"},
              {"nnn*", K::ParamCurveCylinder, "alpha beta gamma != 0"},
              {"nzz*", K::ParamCurveCylinder, "alpha != 0, beta = gamma = 0"},
              {"znz*", K::ParamCurveCylinder, "beta != 0, alpha = gamma = 0"},
              {"zzn*", K::ParamCurveCylinder, "gamma != 0, alpha = beta = 0"},
              {"nnz*", K::ParamCurveCylinder, "alpha beta != 0, gamma = 0"}};
    case Family::g441:
      return {{"zzz*", K::Point, "alpha = beta = gamma = 0"},
              {"nnz*", K::Cylinder, "gamma = 0, alpha beta != 0"},
              {"nzz*", K::Cylinder, "gamma = beta = 0, alpha != 0"},
              {"**n*", K::Paraboloid, "gamma != 0"}};
    case Family::g442:
      return {{"zzz*", K::Point, "alpha = beta = gamma = 0"},
              {"nzz*", K::HalfPlane, "gamma = beta = 0, alpha != 0"},
              {"znz*", K::HalfPlane, "gamma = alpha = 0, beta != 0"},
              {"nnz*", K::HyperbolicCylinder, "gamma = 0, alpha beta != 0"},
              {"**n*", K::HyperbolicParaboloid, "gamma != 0"}};
    default:
      throw Error(ErrorKind::UnknownFamily, family_name(f) + " has no orbit picture");
  }
}

Functional sample_stratum_point(const StratumSpec& s, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  std::bernoulli_distribution coin;
  Functional f(4);
  for (int i = 0; i < 4; ++i) {
    switch (s.pattern[i]) {
      case 'z': f(i) = 0.0; break;
      case 'n': f(i) = (coin(rng) ? 1.0 : -1.0) * mag(rng); break;
      default: f(i) = normal(rng); break;
    }
  }
  return f;
}

std::string atlas_json(Family f) {
  nlohmann::json doc;
  doc["schema"] = 1;
  doc["family"] = family_name(f);
  doc["topological_type"] = topological_type(f);
  nlohmann::json strata = nlohmann::json::array();
  for (const StratumSpec& s : family_strata(f)) {
    strata.push_back({{"pattern", s.pattern},
                      {"kind", orbit_kind_name(s.kind)},
                      {"dim", orbit_kind_dim(s.kind)},
                      {"description", s.description}});
  }
  doc["strata"] = strata;
  const DistributionSpec spec = distribution_spec(MD4Label{f, default_params(f), std::nullopt});
  nlohmann::json fields = nlohmann::json::array();
  for (const AffineField& af : spec.fields) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
      rows.push_back({af.constant(r), af.linear(r, 0), af.linear(r, 1), af.linear(r, 2), af.linear(r, 3)});
    }
    fields.push_back(rows);
  }
  doc["system"] = spec.system;
  doc["fields"] = fields;
  doc["multivector"] = spec.multivector;
  return doc.dump(2);
}

DistributionSpec distribution_spec(const MD4Label& label) {
  if (!is_md4_family(label.family)) {
    throw Error(ErrorKind::UnknownFamily, family_name(label.family) + " has no foliation system");
  }
  if (static_cast<int>(label.params.size()) != param_count(label.family)) {
    throw Error(ErrorKind::BadParams, "parameter count does not match " + family_name(label.family));
  }
  DistributionSpec s;
  s.family = label;
  const std::vector<double>& p = label.params;
  const std::vector<std::vector<int>> pair12 = {{0, 1}};
  const std::vector<std::vector<int>> fan3 = {{0, 1}, {0, 2}};
  const std::vector<std::vector<int>> fan4 = {{0, 1}, {0, 2}, {0, 3}};
  const std::vector<std::vector<int>> triangle = {{0, 1}, {0, 2}, {1, 2}};
  switch (label.family) {
    case Family::g411:
      s.system = "S11";
      // Tangent to the orbits wherever x != 0; the Kirillov row of T is (z,0,0,0).
      s.fields = {field({{x, x, 1}}), field({{t, z, -1}})};
      s.multivector = pair12;
      break;
    case Family::g412:
      s.system = "S12";
      s.fields = {field({{z, z, 1}}), field({{t, z, -1}})};
      s.multivector = pair12;
      break;
    case Family::g421:
      s.system = "S21";
      s.fields = {field({{y, y, p[0]}, {z, z, 1}}), field({{t, y, -p[0]}}), field({{t, z, -1}})};
      s.multivector = fan3;
      s.notes = {"second and third fields act in the t slot"};
      break;
    case Family::g422:
      s.system = "S22";
      s.fields = {field({{y, y, 1}, {z, y, 1}, {z, z, 1}}), field({{t, y, -1}}),
                  field({{t, y, -1}, {t, z, -1}})};
      s.multivector = fan3;
      s.notes = {"second and third fields act in the t slot"};
      break;
    case Family::g423: {
      const double c = std::cos(p[0]), sn = std::sin(p[0]);
      s.system = "S23";
      s.fields = {field({{y, y, c}, {y, z, -sn}, {z, y, sn}, {z, z, c}}),
                  field({{t, y, -c}, {t, z, sn}}), field({{t, y, -sn}, {t, z, -c}})};
      s.multivector = fan3;
      s.notes = {"second and third fields act in the t slot"};
      break;
    }
    case Family::g424:
      s.system = "S24";
      s.fields = {field({}, {{t, 1}}), field({}, {{x, 1}}), field({{y, y, 1}, {z, z, 1}}),
                  field({{y, z, -1}, {z, y, 1}})};
      s.multivector = {{0, 1, 2, 3}};
      break;
    case Family::g431:
      s.system = "S31";
      s.fields = {field({{x, x, p[0]}, {y, y, p[1]}, {z, z, 1}}), field({{t, x, -p[0]}}),
                  field({{t, y, -p[1]}}), field({{t, z, -1}})};
      s.multivector = fan4;
      break;
    case Family::g432:
      s.system = "S32";
      s.fields = {field({{x, x, p[0]}, {y, x, 1}, {y, y, p[0]}, {z, z, 1}}), field({{t, x, -p[0]}}),
                  field({{t, x, -1}, {t, y, -p[0]}}), field({{t, z, -1}})};
      s.multivector = fan4;
      break;
    case Family::g433:
      s.system = "S33";
      s.fields = {field({{x, x, 1}, {y, x, 1}, {y, y, 1}, {z, y, 1}, {z, z, 1}}), field({{t, x, -1}}),
                  field({{t, x, -1}, {t, y, -1}}), field({{t, y, -1}, {t, z, -1}})};
      s.multivector = fan4;
      break;
    case Family::g434: {
      const double c = std::cos(p[1]), sn = std::sin(p[1]);
      s.system = "S34";
      s.fields = {field({{x, x, c}, {x, y, -sn}, {y, x, sn}, {y, y, c}, {z, z, p[0]}}),
                  field({{t, x, -c}, {t, y, sn}}), field({{t, x, -sn}, {t, y, -c}}),
                  field({{t, z, -p[0]}})};
      s.multivector = fan4;
      break;
    }
    case Family::g441:
      s.system = "S41";
      s.fields = {field({{x, y, -1}, {y, x, 1}}), field({{y, z, 1}, {t, y, 1}}),
                  field({{x, z, -1}, {t, x, -1}})};
      s.multivector = triangle;
      s.notes = {"third field pairs -z with -x, the Kirillov row of Y"};
      break;
    case Family::g442:
      s.system = "S42";
      s.fields = {field({{x, x, -1}, {y, y, 1}}), field({{y, z, 1}, {t, x, 1}}),
                  field({{x, z, -1}, {t, y, -1}})};
      s.multivector = triangle;
      break;
    default:
      break;
  }
  return s;
}

int distribution_rank_at(const DistributionSpec& spec, const Eigen::Vector4d& p) {
  return numerical_rank(field_matrix(spec, p));
}

double multivector_norm_at(const DistributionSpec& spec, const Eigen::Vector4d& p) {
  const Matrix m = field_matrix(spec, p);
  if (spec.multivector.empty()) return 0.0;
  const int k = static_cast<int>(spec.multivector.front().size());
  // Components on the sorted index sets of size k.
  std::vector<std::vector<int>> subsets;
  for (int mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> idx;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) idx.push_back(i);
    }
    subsets.push_back(idx);
  }
  double sum2 = 0.0;
  for (const auto& rows : subsets) {
    double comp = 0.0;
    for (const auto& term : spec.multivector) {
      Matrix minor(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) minor(r, c) = m(rows[r], term[c]);
      comp += minor.determinant();
    }
    sum2 += comp * comp;
  }
  return std::sqrt(sum2);
}

double check_tangency(const LieAlgebra& g, const DistributionSpec& spec, const OrbitSample& sample,
                      double h) {
  if (g.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "foliation checks need dimension 4");
  double worst = 0.0;
  for (const Functional& pt : sample.points) {
    if (orbit_dimension(g, pt) == 0) {
      throw Error(ErrorKind::StratumMismatch, "sample point lies on the 0-dimensional stratum");
    }
    if (h == 0.0) continue;
    const Matrix range = orthonormal_range(field_matrix(spec, pt));
    const double pn = pt.norm();
    for (int i = 0; i < 4; ++i) {
      const Functional fwd = coadjoint_flow(g, pt, GroupWord{{{i, h}}});
      const Functional bwd = coadjoint_flow(g, pt, GroupWord{{{i, -h}}});
      const Vector v = (fwd - bwd) / (2.0 * h);
      const Vector r = v - range * (range.transpose() * v);
      const double denom = std::max({v.norm(), 1e-3 * pn, std::numeric_limits<double>::min()});
      worst = std::max(worst, r.norm() / denom);
    }
  }
  return worst;
}

PolarizationReport check_polarization(const LieAlgebra& g, const Functional& f, const Subspace& h,
                                      const std::optional<OrbitModel>& model, std::uint64_t seed) {
  const int n = g.dim();
  if (f.size() != n || h.ambient_dim() != n) {
    throw Error(ErrorKind::DimensionMismatch, "functional or subspace does not match the algebra");
  }
  PolarizationReport rep;
  const double scale = std::max(1.0, g.constants().max_abs()) * (1.0 + inf_norm(f));
  const double tol = 1e-9 * scale;
  for (int a = 0; a < h.dim(); ++a) {
    for (int b = a + 1; b < h.dim(); ++b) {
      const Vector br = bracket(g, h.basis.col(a), h.basis.col(b));
      rep.closure_residual = std::max(rep.closure_residual, h.residual(br));
      rep.isotropy_residual = std::max(rep.isotropy_residual, std::abs(f.dot(br)));
    }
  }
  rep.is_subalgebra = rep.closure_residual <= tol;
  rep.isotropic = rep.isotropy_residual <= tol;
  const Subspace stab = stabilizer_algebra(g, f);
  rep.stabilizer_residual = h.containment_residual(stab);
  rep.contains_stabilizer = rep.stabilizer_residual <= 1e-9;
  const int orbit_dim = orbit_dimension(g, f);
  rep.codim_ok = 2 * (n - h.dim()) == orbit_dim;
  if (model) {
    rep.pukanszky_sampled = true;
    // h^perp: functionals vanishing on h, i.e. the orthogonal complement.
    const Matrix perp = orthogonal_complement(h);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const double spread = 1.0 + inf_norm(f);
    for (int s = 0; s < 100; ++s) {
      Functional q = f;
      for (int c = 0; c < perp.cols(); ++c) q += coef(rng) * spread * perp.col(c);
      rep.pukanszky_residual = std::max(rep.pukanszky_residual, orbit_membership(*model, q));
      ++rep.pukanszky_samples;
    }
    rep.pukanszky_ok = rep.pukanszky_residual < 1e-8;
  }
  return rep;
}

}  // namespace orbiton
