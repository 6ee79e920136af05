#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orbiton/coadjoint.hpp"
#include "orbiton/families.hpp"

namespace orbiton {

enum class OrbitKind {
  Point,
  HalfPlane,
  Plane2D,
  Cylinder,
  Paraboloid,
  HyperbolicParaboloid,
  HyperbolicCylinder,
  OpenDense4D,
  ParamCurveCylinder,
};

std::string orbit_kind_name(OrbitKind kind);
int orbit_kind_dim(OrbitKind kind);

struct OrbitModel {
  OrbitKind kind = OrbitKind::Point;
  Functional base;
  std::vector<std::pair<std::string, double>> predicate_coeffs;
  MD4Label family;
  // 2-dimensional aff R model (used by the polarization checks).
  bool aff_r = false;
  std::string stratum;
  // Set when some coordinate of the base sits within the boundary tolerance
  // of a case split without being exactly zero.
  bool near_boundary = false;

  int dim() const { return orbit_kind_dim(kind); }
};

// Coordinates count as zero when |c| < 1e-9 * (1 + |F|).
double boundary_tolerance(const Functional& f);

// Throws Error(UnknownFamily) for labels without a normal form.
OrbitModel orbit_model(const MD4Label& label, const Functional& f);
OrbitModel aff_r_orbit_model(const Functional& f);

// Max of relative equality defects and hinges of violated strict
// inequalities; 0 for members.
double orbit_membership(const OrbitModel& model, const Functional& p);

// One class of base points of a family: `pattern` marks each of
// alpha, beta, gamma, delta as 'z' (zero), 'n' (nonzero) or '*' (free).
struct StratumSpec {
  std::string pattern;
  OrbitKind kind;
  std::string description;
};

std::vector<StratumSpec> family_strata(Family f);
Functional sample_stratum_point(const StratumSpec& s, std::mt19937_64& rng);

// JSON listing strata, model kinds and predicates of a family.
std::string atlas_json(Family f);

struct AffineField {
  Eigen::Matrix4d linear = Eigen::Matrix4d::Zero();
  Eigen::Vector4d constant = Eigen::Vector4d::Zero();

  Eigen::Vector4d at(const Eigen::Vector4d& p) const { return linear * p + constant; }
};

struct DistributionSpec {
  MD4Label family;
  std::string system;
  std::vector<AffineField> fields;
  // Each entry lists the fields wedged together in one term of the
  // invariant multivector.
  std::vector<std::vector<int>> multivector;
  std::vector<std::string> notes;
};

DistributionSpec distribution_spec(const MD4Label& label);
int distribution_rank_at(const DistributionSpec& spec, const Eigen::Vector4d& p);
// Frobenius norm of the invariant multivector at p.
double multivector_norm_at(const DistributionSpec& spec, const Eigen::Vector4d& p);

// Largest relative residual of central-difference orbit tangents (step h)
// after projection on the span of the fields. Throws Error(StratumMismatch)
// for points on the 0-dimensional stratum.
double check_tangency(const LieAlgebra& g, const DistributionSpec& spec, const OrbitSample& sample,
                      double h = 1e-5);

struct PolarizationReport {
  bool is_subalgebra = false;
  bool contains_stabilizer = false;
  bool isotropic = false;
  bool codim_ok = false;
  bool pukanszky_sampled = false;
  int pukanszky_samples = 0;
  bool pukanszky_ok = false;
  double closure_residual = 0.0;
  double stabilizer_residual = 0.0;
  double isotropy_residual = 0.0;
  double pukanszky_residual = 0.0;

  bool all_ok() const {
    return is_subalgebra && contains_stabilizer && isotropic && codim_ok &&
           (!pukanszky_sampled || pukanszky_ok);
  }
};

// With an orbit model, 100 points of F + h^perp are tested for membership.
PolarizationReport check_polarization(const LieAlgebra& g, const Functional& f, const Subspace& h,
                                      const std::optional<OrbitModel>& model = std::nullopt,
                                      std::uint64_t seed = 17);

}  // namespace orbiton
