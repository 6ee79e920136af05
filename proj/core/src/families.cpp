#include "orbiton/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "orbiton/errors.hpp"

namespace orbiton {

namespace {

constexpr int X = 0, Y = 1, Z = 2, T = 3;

struct Entry {
  Family family;
  const char* name;
  int params;
  const char* topo;
};

const Entry kEntries[] = {
    {Family::g411, "g411", 0, "F1"},        {Family::g412, "g412", 0, "F2"},
    {Family::g421, "g421", 1, "F3"},        {Family::g422, "g422", 0, "F3"},
    {Family::g423, "g423", 1, "F4"},        {Family::g424, "g424", 0, "F5"},
    {Family::g431, "g431", 2, "F6"},        {Family::g432, "g432", 1, "F6"},
    {Family::g433, "g433", 0, "F6"},        {Family::g434, "g434", 2, "F7"},
    {Family::g441, "g441", 0, "F8"},        {Family::g442, "g442", 0, "F9"},
    {Family::DecomposableRnPlus, "DecomposableRnPlus", 0, ""},
    {Family::NotMD4, "NotMD4", 0, ""},      {Family::Unclassified, "unclassified", 0, ""},
};

const Entry& entry(Family f) {
  for (const Entry& e : kEntries) {
    if (e.family == f) return e;
  }
  throw Error(ErrorKind::UnknownFamily, "unregistered family");
}

void require_params(Family f, const std::vector<double>& params) {
  if (static_cast<int>(params.size()) != param_count(f)) {
    throw Error(ErrorKind::BadParams, family_name(f) + " expects " +
                                          std::to_string(param_count(f)) + " parameters");
  }
}

}  // namespace

const std::vector<Family>& md4_families() {
  static const std::vector<Family> all = {Family::g411, Family::g412, Family::g421, Family::g422,
                                          Family::g423, Family::g424, Family::g431, Family::g432,
                                          Family::g433, Family::g434, Family::g441, Family::g442};
  return all;
}

bool is_md4_family(Family f) {
  return f != Family::DecomposableRnPlus && f != Family::NotMD4 && f != Family::Unclassified;
}

std::string family_name(Family f) { return entry(f).name; }

Family family_from_name(const std::string& name) {
  for (const Entry& e : kEntries) {
    if (name == e.name) return e.family;
  }
  if (name == "decomposable") return Family::DecomposableRnPlus;
  throw Error(ErrorKind::UnknownFamily, "unknown family '" + name + "'");
}

int param_count(Family f) { return entry(f).params; }

std::vector<double> default_params(Family f) {
  const double phi = std::numbers::pi / 3.0;
  switch (f) {
    case Family::g421: return {2.0};
    case Family::g423: return {phi};
    case Family::g431: return {2.0, 3.0};
    case Family::g432: return {2.0};
    case Family::g434: return {2.0, phi};
    default: return {};
  }
}

std::string topological_type(Family f) { return entry(f).topo; }

std::string MD4Label::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << (family == Family::DecomposableRnPlus ? std::string("decomposable") : family_name(family));
  if (!params.empty()) {
    os << "(";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? "," : "") << params[i];
    os << ")";
  }
  if (decomposition) os << "[R^" << decomposition->n << " + " << decomposition->inner << "]";
  return os.str();
}

LieAlgebra family_algebra(Family f, const std::vector<double>& params) {
  if (!is_md4_family(f)) {
    throw Error(ErrorKind::UnknownFamily, family_name(f) + " has no normal form");
  }
  require_params(f, params);
  StructureConstants c(4);
  switch (f) {
    case Family::g411:
      c.set_bracket(T, X, Z, 1.0);
      break;
    case Family::g412:
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g421:
      if (params[0] == 0.0) throw Error(ErrorKind::BadParams, "lambda must be nonzero");
      c.set_bracket(T, Y, Y, params[0]);
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g422:
      c.set_bracket(T, Y, Y, 1.0);
      c.set_bracket(T, Z, Y, 1.0);
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g423: {
      const double phi = params[0];
      if (!(phi > 0.0 && phi < std::numbers::pi)) {
        throw Error(ErrorKind::BadParams, "phi must lie in (0, pi)");
      }
      c.set_bracket(T, Y, Y, std::cos(phi));
      c.set_bracket(T, Y, Z, -std::sin(phi));
      c.set_bracket(T, Z, Y, std::sin(phi));
      c.set_bracket(T, Z, Z, std::cos(phi));
      break;
    }
    case Family::g424:
      c.set_bracket(T, Y, Y, 1.0);
      c.set_bracket(T, Z, Z, 1.0);
      c.set_bracket(X, Y, Z, -1.0);
      c.set_bracket(X, Z, Y, 1.0);
      break;
    case Family::g431:
      if (params[0] == 0.0 || params[1] == 0.0) {
        throw Error(ErrorKind::BadParams, "lambda_1, lambda_2 must be nonzero");
      }
      c.set_bracket(T, X, X, params[0]);
      c.set_bracket(T, Y, Y, params[1]);
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g432:
      if (params[0] == 0.0) throw Error(ErrorKind::BadParams, "lambda must be nonzero");
      c.set_bracket(T, X, X, params[0]);
      c.set_bracket(T, Y, X, 1.0);
      c.set_bracket(T, Y, Y, params[0]);
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g433:
      c.set_bracket(T, X, X, 1.0);
      c.set_bracket(T, Y, X, 1.0);
      c.set_bracket(T, Y, Y, 1.0);
      c.set_bracket(T, Z, Y, 1.0);
      c.set_bracket(T, Z, Z, 1.0);
      break;
    case Family::g434: {
      const double lambda = params[0], phi = params[1];
      if (lambda == 0.0) throw Error(ErrorKind::BadParams, "lambda must be nonzero");
      if (!(phi > 0.0 && phi < std::numbers::pi)) {
        throw Error(ErrorKind::BadParams, "phi must lie in (0, pi)");
      }
      c.set_bracket(T, X, X, std::cos(phi));
      c.set_bracket(T, X, Y, -std::sin(phi));
      c.set_bracket(T, Y, X, std::sin(phi));
      c.set_bracket(T, Y, Y, std::cos(phi));
      c.set_bracket(T, Z, Z, lambda);
      break;
    }
    case Family::g441:
      c.set_bracket(X, Y, Z, 1.0);
      c.set_bracket(T, X, Y, -1.0);
      c.set_bracket(T, Y, X, 1.0);
      break;
    case Family::g442:
      c.set_bracket(X, Y, Z, 1.0);
      c.set_bracket(T, X, X, -1.0);
      c.set_bracket(T, Y, Y, 1.0);
      break;
    default:
      break;
  }
  return LieAlgebra(std::move(c));
}

LieAlgebra family_algebra(const MD4Label& label) {
  return family_algebra(label.family, label.params);
}

LieAlgebra aff_r() {
  StructureConstants c(2);
  c.set_bracket(0, 1, 1, 1.0);
  return LieAlgebra(std::move(c), {"X", "Y"});
}

LieAlgebra aff_c() {
  StructureConstants c(4);
  c.set_bracket(0, 2, 2, 1.0);
  c.set_bracket(0, 3, 3, 1.0);
  c.set_bracket(1, 2, 3, 1.0);
  c.set_bracket(1, 3, 2, -1.0);
  return LieAlgebra(std::move(c), {"X1", "X2", "Y1", "Y2"});
}

LieAlgebra heisenberg3() {
  StructureConstants c(3);
  c.set_bracket(0, 1, 2, 1.0);
  return LieAlgebra(std::move(c), {"X", "Y", "Z"});
}

LieAlgebra abelian(int n) { return LieAlgebra(StructureConstants(n)); }

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (Family f : md4_families()) names.push_back(family_name(f));
  for (const char* extra : {"real-diamond", "aff-r", "aff-c", "h3", "abelian", "abelian3", "abelian4"}) {
    names.emplace_back(extra);
  }
  return names;
}

LieAlgebra builtin_algebra(const std::string& name) {
  if (name == "real-diamond") return family_algebra(Family::g442, {});
  if (name == "aff-r") return aff_r();
  if (name == "aff-c") return aff_c();
  if (name == "h3") return heisenberg3();
  if (name == "abelian" || name == "abelian4") return abelian(4);
  if (name == "abelian3") return abelian(3);
  const Family f = family_from_name(name);
  if (!is_md4_family(f)) throw Error(ErrorKind::UnknownFamily, "no builtin named '" + name + "'");
  return family_algebra(f, default_params(f));
}

}  // namespace orbiton
