#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbiton/families.hpp"
#include "orbiton/lie_core.hpp"

namespace orbiton {

enum class MDBarTag { Abelian, AffR, AffC, NotMDBar };
std::string md_bar_name(MDBarTag tag);

struct CriterionResult {
  bool holds = true;
  std::optional<Vector> witness;
};

// [X, g] = g^1 for every sampled nonzero X (basis directions plus 200 random).
CriterionResult is_md_bar(const LieAlgebra& g, std::uint64_t seed = 7);

struct AffCReduction {
  bool ok = false;
  // Columns X1, X2, Y1, Y2 in the coordinates of the input algebra.
  Matrix basis;
  double residual = 0.0;
};

// Constructive reduction to the normal form of aff C; `ok` when the
// recovered basis reproduces its brackets.
AffCReduction reduce_aff_c(const LieAlgebra& g);

MDBarTag classify_md_bar(const LieAlgebra& g, std::uint64_t seed = 7);

struct ClassifyReport {
  MD4Label label;
  int derived_dim = 0;
  std::string branch;
  std::vector<std::complex<double>> eigenvalues;
  bool md_property = true;
  std::optional<Vector> md_witness;
  std::vector<int> sampled_ranks;
  double cluster_tol = 0.0;
  double min_cluster_gap = 0.0;
};

// Throws Error(NotSolvable) and Error(DegenerateJordan); a failed MD check
// yields family NotMD4 with a witness functional.
ClassifyReport classify_md4_report(const LieAlgebra& g, std::uint64_t seed = 11);
MD4Label classify_md4(const LieAlgebra& g);

// Canonical representative of the parameters of a normal form under the
// isomorphisms between tables of one family.
MD4Label canonical_label(Family f, const std::vector<double>& params);

struct ExponentialResult {
  bool exponential = true;
  std::optional<Vector> witness;
  std::vector<std::complex<double>> witness_eigenvalues;
};

// False iff some sampled ad_U (basis directions plus 500 random U) has a
// purely imaginary nonzero eigenvalue.
ExponentialResult is_exponential(const LieAlgebra& g, std::uint64_t seed = 13);

}  // namespace orbiton
