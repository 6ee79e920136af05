#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbiton/lie_core.hpp"

namespace orbiton {

enum class Family {
  g411,
  g412,
  g421,
  g422,
  g423,
  g424,
  g431,
  g432,
  g433,
  g434,
  g441,
  g442,
  DecomposableRnPlus,
  NotMD4,
  Unclassified,
};

// The twelve normal forms (g424 is aff C written in the 4-dimensional basis
// X, Y, Z, T).
const std::vector<Family>& md4_families();
bool is_md4_family(Family f);
std::string family_name(Family f);
// Throws Error(UnknownFamily).
Family family_from_name(const std::string& name);
int param_count(Family f);
std::vector<double> default_params(Family f);
// Label of the leaf-space topological type attached to the family's foliation.
std::string topological_type(Family f);

struct Decomposition {
  int n = 0;
  std::string inner;
};

struct MD4Label {
  Family family = Family::NotMD4;
  std::vector<double> params;
  std::optional<Decomposition> decomposition;

  std::string to_string() const;
};

// Normal-form table in the basis X, Y, Z, T.
LieAlgebra family_algebra(Family f, const std::vector<double>& params);
LieAlgebra family_algebra(const MD4Label& label);

LieAlgebra aff_r();
// Basis X1, X2, Y1, Y2 with [X1,Y1]=Y1, [X1,Y2]=Y2, [X2,Y1]=Y2, [X2,Y2]=-Y1.
LieAlgebra aff_c();
LieAlgebra heisenberg3();
LieAlgebra abelian(int n);

// Builtin names: every family name, "real-diamond", "aff-r", "aff-c", "h3",
// "abelian", "abelian3", "abelian4".
std::vector<std::string> builtin_names();
LieAlgebra builtin_algebra(const std::string& name);

}  // namespace orbiton
