// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "orbiton/classify.hpp"
#include "orbiton/coadjoint.hpp"
#include "orbiton/errors.hpp"
#include "orbiton/families.hpp"
#include "orbiton/fredholm.hpp"
#include "orbiton/kindex.hpp"
#include "orbiton/orbit_atlas.hpp"
#include "test_support.hpp"

using namespace orbiton;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename T>
std::string num(T v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 means no runtime bound
  std::function<void(Outcome&)> body;
};

bool same_label(const MD4Label& a, const MD4Label& b, double tol) {
  if (a.family != b.family || a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (!(std::abs(a.params[i] - b.params[i]) < tol)) return false;
  }
  return true;
}

void criterion1(Outcome& o) {
  std::mt19937_64 rng(1001);
  struct Case {
    std::string name;
    LieAlgebra g;
    MD4Label want;
  };
  std::vector<Case> cases;
  for (Family f : md4_families()) {
    cases.push_back({family_name(f), family_algebra(f, default_params(f)), canonical_label(f, default_params(f))});
  }
  // The decomposable class R^4 completes the thirteen MD4 classes.
  cases.push_back({"R^4", abelian(4), MD4Label{Family::DecomposableRnPlus, {}, std::nullopt}});
  int checked = 0;
  double worst = 0.0;
  for (const auto& c : cases) {
    for (int t = 0; t <= 100; ++t) {
      const LieAlgebra h = t == 0 ? c.g : change_basis(c.g, support::random_basis_change(rng));
      MD4Label got;
      try {
        got = classify_md4(h);
      } catch (const Error& e) {
        o.fail(c.name + ": " + e.what());
        return;
      }
      ++checked;
      if (!same_label(got, c.want, 1e-6)) {
        o.fail(c.name + " trial " + num(t) + " gave " + got.to_string());
        return;
      }
      for (std::size_t i = 0; i < got.params.size(); ++i) worst = std::max(worst, std::abs(got.params[i] - c.want.params[i]));
    }
  }
  o.detail << cases.size() << " classes (12 normal forms + R^4), " << checked
           << " algebras, max param error " << worst;
}

void criterion2(Outcome& o) {
  std::mt19937_64 rng(1002);
  int n = 0;
  for (int t = 0; t < 100; ++t) {
    if (classify_md_bar(change_basis(aff_r(), support::random_basis_change(rng, 2))) != MDBarTag::AffR) {
      o.fail("aff R trial " + num(t));
      return;
    }
    if (classify_md_bar(change_basis(aff_c(), support::random_basis_change(rng, 4))) != MDBarTag::AffC) {
      o.fail("aff C trial " + num(t));
      return;
    }
    n += 2;
  }
  if (classify_md_bar(heisenberg3()) != MDBarTag::NotMDBar) o.fail("h3 not rejected");
  if (o.pass) o.detail << n << " conjugates recognised, h3 -> NotMDBar";
}

void criterion3(Outcome& o) {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  int strata = 0, points = 0;
  for (Family f : md4_families()) {
    const MD4Label label{f, default_params(f), std::nullopt};
    const LieAlgebra g = family_algebra(label);
    for (const StratumSpec& s : family_strata(f)) {
      ++strata;
      for (int b = 0; b < 20; ++b) {
        const Functional base = sample_stratum_point(s, rng);
        const OrbitModel model = orbit_model(label, base);
        const int rank = orbit_dimension(g, base);
        if (model.dim() != rank) {
          o.fail(family_name(f) + " " + s.pattern + ": model dim " + num(model.dim()) +
                 " vs rank " + num(rank));
          return;
        }
        const OrbitSample sample = sample_orbit(g, base, 200, 0.5, rng());
        for (const auto& p : sample.points) {
          worst = std::max(worst, orbit_membership(model, p));
          ++points;
        }
      }
    }
  }
  if (!(worst < 1e-8)) o.fail("max residual " + num(worst));
  o.detail << (o.pass ? "" : "; ") << strata << " strata, " << points << " orbit points, max residual " << worst;
}

void criterion4(Outcome& o) {
  std::mt19937_64 rng(1004);
  const auto& fams = md4_families();
  std::uniform_int_distribution<std::size_t> pick(0, fams.size() - 1);
  std::bernoulli_distribution special(0.2);
  int counts[5] = {0, 0, 0, 0, 0};
  for (int t = 0; t < 10000; ++t) {
    const Family f = fams[pick(rng)];
    const LieAlgebra g = family_algebra(f, default_params(f));
    Functional F = support::random_vector(rng, 4);
    // Some functionals on the coordinate hyperplanes where orbits degenerate.
    if (special(rng)) {
      std::uniform_int_distribution<int> coord(0, 3);
      F(coord(rng)) = 0.0;
      F(coord(rng)) = 0.0;
    }
    const int r = orbit_dimension(g, F);
    ++counts[r];
    const int top = f == Family::g424 ? 4 : 2;
    if (r != 0 && r != top) {
      o.fail(family_name(f) + " rank " + num(r));
      return;
    }
  }
  o.detail << "10000 pairs; rank histogram 0:" << counts[0] << " 2:" << counts[2] << " 4:" << counts[4];
}

void criterion5(Outcome& o) {
  std::mt19937_64 rng(1005);
  double worst_tangency = 0.0;
  for (Family f : md4_families()) {
    const MD4Label label{f, default_params(f), std::nullopt};
    const LieAlgebra g = family_algebra(label);
    const DistributionSpec spec = distribution_spec(label);
    const int want = f == Family::g424 ? 4 : 2;
    for (int i = 0; i < 1000; ++i) {
      const Eigen::Vector4d p = support::random_vector(rng, 4);
      const int r = distribution_rank_at(spec, p);
      if (r != want) {
        o.fail(spec.system + " rank " + num(r));
        return;
      }
    }
    for (int b = 0; b < 10; ++b) {
      const OrbitSample s = sample_orbit(g, support::random_vector(rng, 4), 20, 0.3, rng());
      worst_tangency = std::max(worst_tangency, check_tangency(g, spec, s));
    }
  }
  if (!(worst_tangency < 1e-6)) o.fail("tangency residual " + num(worst_tangency));
  o.detail << (o.pass ? "" : "; ") << "12 systems x 1000 points, max tangency residual " << worst_tangency;
}

void criterion6(Outcome& o) {
  struct Fixture {
    std::string name;
    LieAlgebra g;
    bool exponential;
  };
  std::vector<Fixture> fx;
  for (Family f : md4_families()) {
    const bool non_exp = f == Family::g424 || f == Family::g441;
    fx.push_back({family_name(f), family_algebra(f, default_params(f)), !non_exp});
  }
  fx.push_back({"g423(pi/2)", family_algebra(Family::g423, {kPi / 2}), false});
  fx.push_back({"g434(2,pi/2)", family_algebra(Family::g434, {2.0, kPi / 2}), false});
  fx.push_back({"g434(-0.5,pi/2)", family_algebra(Family::g434, {-0.5, kPi / 2}), false});
  int non_exp = 0;
  for (const auto& x : fx) {
    const bool got = is_exponential(x.g).exponential;
    if (got != x.exponential) o.fail(x.name + " exponential=" + (got ? "true" : "false"));
    if (!got) ++non_exp;
  }
  if (o.pass) o.detail << fx.size() << " fixtures, " << non_exp << " non-exponential as expected";
}

void criterion7(Outcome& o) {
  const std::vector<std::pair<double, int>> ladder = {{6.0, 1024}, {8.0, 2048}, {10.0, 4096}};
  for (int which : {1, 2}) {
    std::ostringstream line;
    line << "S(phi" << which << ")";
    for (const auto& [L, N] : ladder) {
      const auto t0 = std::chrono::steady_clock::now();
      const LogGrid grid = build_grid(L, N);
      const DiscreteOperator op = assemble_operator(which, grid);
      IndexResult r;
      try {
        r = numerical_index(op);
      } catch (const GapTooSmallError& e) {
        o.fail(line.str() + " (" + num(L) + "," + num(N) + "): " + e.what());
        continue;
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream at;
      at << " (" << L << "," << N << ")";
      if (r.dim_ker != 1 || r.dim_coker != 0) {
        o.fail(line.str() + at.str() + " gave (" + num(r.dim_ker) + "," + num(r.dim_coker) + ")");
      }
      if (!(r.gap_ratio > 100.0)) o.fail(line.str() + at.str() + " gap " + num(r.gap_ratio));
      if (L == 8.0) {
        if (secs > 60.0) o.fail(line.str() + " took " + num(secs) + " s");
        if (r.kernel_vectors.size() != 1) {
          o.fail(line.str() + " has no kernel vector");
          continue;
        }
        const ParityReport par = parity_check(r.kernel_vectors[0], which);
        const double res = which == 1 ? par.even_residual : par.odd_residual;
        if (!par.ok) o.fail(line.str() + " parity residual " + num(res));
        const OracleReport oracle = ode_kernel_oracle(grid);
        const double sim = oracle_similarity(r.kernel_vectors[0], oracle, grid, which);
        if (!(sim > 0.999)) o.fail(line.str() + " oracle similarity " + num(sim));
        const double separation = r.smallest.size() > 1 ? r.smallest[1] / r.smallest[0] : 0.0;
        if (!(separation > 1e3)) o.fail(line.str() + " sigma2/sigma1 " + num(separation));
        o.detail << line.str() << " (8,2048): index " << r.index << ", gap " << r.gap_ratio
                 << ", parity " << res << ", similarity " << sim << ", " << secs << " s; ";
      }
    }
  }
  if (o.pass) o.detail << "ladder (6,1024),(8,2048),(10,4096) agrees; Index = (1,1)";
}

void criterion8(Outcome& o) {
  const WindingResult up = winding_number(u_plus());
  if (up.winding != 1 || !(std::abs(up.raw - 1.0) < 1e-6)) o.fail("u+ raw " + num(up.raw));
  const long long w1 = winding_number(ell_loop(1, 1)).winding;
  const long long w4 = winding_number(ell_loop(1, 4)).winding;
  if (w1 != -1 || w4 != 1) o.fail("ell windings (" + num(w1) + "," + num(w4) + ")");
  const GroupHom d = delta0_via_winding(ell_generators());
  if (!same_matrix(d.matrix, gamma4_delta0())) o.fail("gamma4 delta0 mismatch");
  const GroupHom p = delta0_via_winding({p_lift()});
  if (p.matrix.rows() != 2 || p.matrix(0, 0) != 1 || p.matrix(1, 0) != 1) o.fail("p-lift delta0 not (1,1)");
  const double idem = idempotent_residual([](double x, double y) { return p_idempotent(2 * kPi * x, y); }, 64);
  if (!(idem < 1e-12)) o.fail("idempotent residual " + num(idem));
  if (o.pass) {
    o.detail << "u+ raw " << up.raw << ", ell (" << w1 << "," << w4 << "), gamma4 delta0 exact, p-lift (1,1), "
             << "idempotent residual " << idem;
  }
}

void criterion9(Outcome& o) {
  const auto hexagons = fixture_hexagons();
  for (const auto& d : hexagons) {
    if (!six_term_check(d).all_exact()) o.fail(d.name + " not exact");
  }
  const auto muts = fixture_mutations();
  if (muts.size() != 20) o.fail(num(muts.size()) + " mutations instead of 20");
  int rejected = 0;
  for (const auto& m : muts) {
    for (const auto& d : hexagons) {
      if (d.name != m.diagram) continue;
      if (!six_term_check(apply_mutation(d, m)).all_exact()) {
        ++rejected;
      } else {
        o.fail("mutation " + m.label() + " accepted");
      }
    }
  }
  if (o.pass) o.detail << hexagons.size() << " hexagons exact, " << rejected << "/20 mutations rejected";
}

void criterion10(Outcome& o) {
  std::mt19937_64 rng(1010);
  double jac = 0.0, inv = 0.0, lin = 0.0, tangent = 0.0;
  for (const auto& name : builtin_names()) {
    const LieAlgebra g0 = builtin_algebra(name);
    const LieAlgebra g = change_basis(g0, support::random_basis_change(rng, g0.dim()));
    const int n = g.dim();
    jac = std::max(jac, jacobi_residual(g) / (1.0 + g.constants().max_abs()));
    for (int t = 0; t < 20; ++t) {
      const Vector u = support::random_vector(rng, n), v = support::random_vector(rng, n);
      const Vector w = support::random_vector(rng, n);
      // Backward-error scale: rounding in exp(A) grows with |A| |e^A| |e^-A|.
      const Matrix e = exp_ad(g, u);
      const Matrix ei = exp_ad(g, -u);
      const double scale = e.norm() * ei.norm() * (1.0 + ad_matrix(g, u).norm());
      inv = std::max(inv, (e * ei - Matrix::Identity(n, n)).norm() / scale);
      const Vector lhs = bracket(g, 2.0 * u - 0.5 * v, w);
      const Vector rhs = 2.0 * bracket(g, u, w) - 0.5 * bracket(g, v, w);
      lin = std::max(lin, (lhs - rhs).norm() / (1.0 + rhs.norm()));
      const Functional F = support::random_vector(rng, n);
      const Matrix tan = orbit_tangents(g, F);
      const double h = 1e-5;
      for (int i = 0; i < n; ++i) {
        const Vector fd = (coadjoint_flow(g, F, GroupWord{{{i, h}}}) - coadjoint_flow(g, F, GroupWord{{{i, -h}}})) / (2 * h);
        tangent = std::max(tangent, (fd - tan.row(i).transpose()).norm() / (1.0 + F.norm() * tan.norm()));
      }
    }
  }
  if (!(jac < 1e-9)) o.fail("Jacobi " + num(jac));
  if (!(inv < 1e-13)) o.fail("exp_ad inverse " + num(inv));
  if (!(lin < 1e-12)) o.fail("linearity " + num(lin));
  if (!(tangent < 1e-6)) o.fail("tangent " + num(tangent));

  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_int_distribution<long long> entry(-20, 20);
  int snf_ok = 0;
  for (int t = 0; t < 1000; ++t) {
    IntMatrix m(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
    const SmithForm s = smith_normal_form(m);
    bool ok = s.U * m * s.V == s.D && std::abs(determinant(s.U)) == 1 && std::abs(determinant(s.V)) == 1;
    const Eigen::Index k = std::min(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (i != j && s.D(i, j) != 0) ok = false;
    for (Eigen::Index i = 0; i + 1 < k; ++i) {
      if (s.D(i, i) < 0) ok = false;
      if (s.D(i, i) != 0 && s.D(i + 1, i + 1) % s.D(i, i) != 0) ok = false;
      if (s.D(i, i) == 0 && s.D(i + 1, i + 1) != 0) ok = false;
    }
    if (ok) ++snf_ok;
  }
  if (snf_ok != 1000) o.fail("SNF correct on " + num(snf_ok) + "/1000");
  if (o.pass) {
    o.detail << "Jacobi " << jac << ", exp_ad inverse " << inv << ", linearity " << lin
             << ", FD tangent " << tangent << ", SNF 1000/1000";
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "MD4 classification under basis changes", 10.0, criterion1},
      {2, "MD-bar classification", 2.0, criterion2},
      {3, "orbit atlas membership", 60.0, criterion3},
      {4, "even-rank law", 0.0, criterion4},
      {5, "foliation rank and tangency", 0.0, criterion5},
      {6, "exponentiality", 0.0, criterion6},
      {7, "Fredholm index of S(phi_1), S(phi_2)", 0.0, criterion7},
      {8, "winding and delta0 fixtures", 5.0, criterion8},
      {9, "six-term exactness", 1.0, criterion9},
      {10, "property suite", 0.0, criterion10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      std::ostringstream why;
      why << "runtime " << secs << " s exceeds " << c.budget_seconds << " s";
      o.fail(why.str());
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s  %s [%.2f s] (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
