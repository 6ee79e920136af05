#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orbiton/classify.hpp"
#include "orbiton/coadjoint.hpp"
#include "orbiton/errors.hpp"
#include "orbiton/families.hpp"
#include "test_support.hpp"

using namespace orbiton;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_label(const MD4Label& got, const MD4Label& want, double tol, const std::string& ctx) {
  ASSERT_EQ(got.family, want.family) << ctx << ": got " << got.to_string();
  ASSERT_EQ(got.params.size(), want.params.size()) << ctx;
  for (std::size_t i = 0; i < want.params.size(); ++i) {
    EXPECT_NEAR(got.params[i], want.params[i], tol) << ctx << " param " << i;
  }
}

// Parameters away from the degenerate values of each family.
std::vector<double> random_params(Family f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 3.0);
  std::uniform_real_distribution<double> angle(0.2, kPi - 0.2);
  std::bernoulli_distribution sign;
  auto lam = [&] { return (sign(rng) ? 1.0 : -1.0) * mag(rng); };
  switch (f) {
    case Family::g421: {
      double l = lam();
      while (std::abs(std::abs(l) - 1.0) < 0.1) l = lam();
      return {l};
    }
    case Family::g423: return {angle(rng)};
    case Family::g431: {
      for (;;) {
        const double a = lam(), b = lam();
        if (std::abs(a - b) > 0.1 && std::abs(a - 1) > 0.1 && std::abs(b - 1) > 0.1) return {a, b};
      }
    }
    case Family::g432: {
      double l = lam();
      while (std::abs(l - 1.0) < 0.1) l = lam();
      return {l};
    }
    case Family::g434: return {lam(), angle(rng)};
    default: return {};
  }
}

}  // namespace

TEST(Classify, EveryFixtureUnderBasisChanges) {
  std::mt19937_64 rng(21);
  for (Family f : md4_families()) {
    const LieAlgebra g = family_algebra(f, default_params(f));
    const MD4Label want = canonical_label(f, default_params(f));
    expect_label(classify_md4(g), want, 1e-12, family_name(f));
    for (int trial = 0; trial < 10; ++trial) {
      const LieAlgebra h = change_basis(g, support::random_basis_change(rng));
      expect_label(classify_md4(h), want, 1e-6, family_name(f) + " conjugated");
    }
  }
}

TEST(Classify, RandomParametersRoundTrip) {
  std::mt19937_64 rng(22);
  for (Family f : md4_families()) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto params = random_params(f, rng);
      const MD4Label want = canonical_label(f, params);
      const MD4Label got = classify_md4(family_algebra(f, params));
      expect_label(got, want, 1e-9, family_name(f));
      // The table built from the returned label classifies to the same label.
      const MD4Label again = classify_md4(family_algebra(got));
      expect_label(again, got, 1e-9, family_name(f) + " round trip");
    }
  }
}

TEST(Classify, LambdaRecoveredUpToInversion) {
  std::mt19937_64 rng(23);
  const LieAlgebra g = change_basis(family_algebra(Family::g421, {3.0}),
                                    support::random_basis_change(rng));
  const MD4Label l = classify_md4(g);
  ASSERT_EQ(l.family, Family::g421);
  EXPECT_NEAR(l.params[0], 1.0 / 3.0, 1e-8);
}

TEST(Classify, CanonicalRepresentatives) {
  EXPECT_DOUBLE_EQ(canonical_label(Family::g421, {2.0}).params[0], 0.5);
  EXPECT_DOUBLE_EQ(canonical_label(Family::g421, {0.5}).params[0], 0.5);
  EXPECT_NEAR(canonical_label(Family::g423, {2 * kPi / 3}).params[0], kPi / 3, 1e-15);
  const auto p = canonical_label(Family::g431, {2.0, 3.0}).params;
  const auto q = canonical_label(Family::g431, {3.0, 2.0}).params;
  const auto r = canonical_label(Family::g431, {1.0 / 3.0, 2.0 / 3.0}).params;
  EXPECT_EQ(p, q);
  EXPECT_NEAR(p[0], r[0], 1e-15);
  EXPECT_NEAR(p[1], r[1], 1e-15);
  const auto s = canonical_label(Family::g434, {2.0, 2 * kPi / 3}).params;
  EXPECT_DOUBLE_EQ(s[0], -2.0);
  EXPECT_NEAR(s[1], kPi / 3, 1e-15);
}

TEST(Classify, NamedAlgebras) {
  EXPECT_EQ(classify_md4(builtin_algebra("real-diamond")).family, Family::g442);
  const MD4Label ab = classify_md4(abelian(4));
  EXPECT_EQ(ab.family, Family::DecomposableRnPlus);
  ASSERT_TRUE(ab.decomposition.has_value());
  EXPECT_EQ(ab.decomposition->n, 4);
}

TEST(Classify, NotMD4HasWitness) {
  // aff R + aff R has orbits of dimension 0, 2 and 4.
  StructureConstants c(4);
  c.set_bracket(0, 1, 1, 1.0);
  c.set_bracket(2, 3, 3, 1.0);
  const LieAlgebra g(c);
  const ClassifyReport r = classify_md4_report(g);
  EXPECT_EQ(r.label.family, Family::NotMD4);
  ASSERT_TRUE(r.md_witness.has_value());
  const int d = orbit_dimension(g, *r.md_witness);
  EXPECT_TRUE(d != 0 && d != 4);
}

TEST(Classify, NonSolvableThrows) {
  // so(3) + R
  StructureConstants c(4);
  c.set_bracket(0, 1, 2, 1.0);
  c.set_bracket(1, 2, 0, 1.0);
  c.set_bracket(2, 0, 1, 1.0);
  try {
    classify_md4(LieAlgebra(c));
    FAIL() << "expected NotSolvable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotSolvable);
  }
}

TEST(Classify, MdBar) {
  std::mt19937_64 rng(24);
  EXPECT_EQ(classify_md_bar(aff_r()), MDBarTag::AffR);
  EXPECT_EQ(classify_md_bar(aff_c()), MDBarTag::AffC);
  EXPECT_EQ(classify_md_bar(heisenberg3()), MDBarTag::NotMDBar);
  EXPECT_TRUE(is_md_bar(abelian(3)).holds);
  const CriterionResult h = is_md_bar(heisenberg3());
  EXPECT_FALSE(h.holds);
  EXPECT_TRUE(h.witness.has_value());
  for (int trial = 0; trial < 5; ++trial) {
    const LieAlgebra a = change_basis(aff_c(), support::random_basis_change(rng));
    EXPECT_EQ(classify_md_bar(a), MDBarTag::AffC);
    EXPECT_TRUE(is_md_bar(a).holds);
    const AffCReduction red = reduce_aff_c(a);
    EXPECT_TRUE(red.ok);
    EXPECT_LT(red.residual, 1e-8);
  }
}

TEST(Classify, MdPropertyOfRandomFamilies) {
  std::mt19937_64 rng(25);
  for (Family f : md4_families()) {
    const LieAlgebra g = family_algebra(f, random_params(f, rng));
    std::vector<Functional> fs;
    for (int i = 0; i < 500; ++i) fs.push_back(support::random_vector(rng, 4));
    const auto strata = stratify(g, fs);
    const int top = f == Family::g424 ? 4 : 2;
    for (const auto& [dim, pts] : strata) {
      EXPECT_TRUE(dim == 0 || dim == top) << family_name(f) << " dim " << dim;
    }
  }
}

TEST(Classify, Exponentiality) {
  const ExponentialResult r441 = is_exponential(builtin_algebra("g441"));
  EXPECT_FALSE(r441.exponential);
  ASSERT_TRUE(r441.witness.has_value());
  bool imaginary = false;
  for (const auto& ev : r441.witness_eigenvalues) {
    if (std::abs(ev.real()) < 1e-10 && std::abs(ev.imag()) > 1e-8) imaginary = true;
  }
  EXPECT_TRUE(imaginary);
  EXPECT_TRUE(is_exponential(builtin_algebra("g411")).exponential);
  EXPECT_TRUE(is_exponential(abelian(4)).exponential);
  EXPECT_FALSE(is_exponential(family_algebra(Family::g423, {kPi / 2})).exponential);
  EXPECT_TRUE(is_exponential(family_algebra(Family::g423, {kPi / 3})).exponential);
}

TEST(Classify, UnknownFamilyName) {
  try {
    family_from_name("g499");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownFamily);
  }
  for (Family f : md4_families()) EXPECT_EQ(family_from_name(family_name(f)), f);
}
