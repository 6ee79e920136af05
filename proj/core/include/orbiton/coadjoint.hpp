#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "orbiton/lie_core.hpp"

namespace orbiton {

// Coordinates in the dual basis X*, Y*, ...
using Functional = Eigen::VectorXd;

struct GroupWord {
  std::vector<std::pair<int, double>> steps;

  // Reversed word with negated times.
  GroupWord inverse() const;
};

struct OrbitSample {
  Functional base;
  std::vector<Functional> points;
  int est_dim = 0;
  std::uint64_t seed = 0;
};

// Entry (i, j) is <F, [X_i, X_j]>.
Matrix kirillov_form(const LieAlgebra& g, const Functional& f);
int orbit_dimension(const LieAlgebra& g, const Functional& f);
Subspace stabilizer_algebra(const LieAlgebra& g, const Functional& f);

// F -> F * exp(ad_{t X_i}) for each step in order, F as a row vector.
Functional coadjoint_flow(const LieAlgebra& g, const Functional& f, const GroupWord& w);

// Row i is d/dt|_0 of the flow along X_i, which equals row i of B_F.
Matrix orbit_tangents(const LieAlgebra& g, const Functional& f);

GroupWord random_word(int dim, int length, double step_scale, std::mt19937_64& rng);

// word_length < 0 selects the default 2 * dim.
OrbitSample sample_orbit(const LieAlgebra& g, const Functional& f, int n, double step_scale,
                         std::uint64_t seed, int word_length = -1);

std::map<int, std::vector<Functional>> stratify(const LieAlgebra& g,
                                                const std::vector<Functional>& fs);

std::string orbit_sample_csv(const OrbitSample& s);
std::string orbit_sample_json(const OrbitSample& s);

}  // namespace orbiton
