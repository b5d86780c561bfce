// Acceptance report: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "reference_tables.hpp"
#include "rotohull/cli.hpp"

using namespace rotohull;
namespace ref = rotohull::reference;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> failures;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      failures.push_back(what);
    }
  }
};

nlohmann::json run_json(std::vector<std::string> args, Check& check) {
  args.push_back("--format");
  args.push_back("json");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  std::string joined;
  for (const auto& a : args) joined += a + " ";
  check.expect(code == 0, joined + "exited " + std::to_string(code) + ": " + err.str());
  if (code != 0) return nlohmann::json::object();
  return nlohmann::json::parse(out.str());
}

FGAbelianGroup cell_group(const nlohmann::json& page, std::size_t n, std::size_t k) {
  for (const auto& c : page.at("cells"))
    if (c.at("n") == n && c.at("k") == k) return group_from_json(c.at("group"));
  throw std::runtime_error("missing cell");
}

std::size_t cell_dimension(const nlohmann::json& page, std::size_t n, std::size_t k) {
  for (const auto& c : page.at("cells"))
    if (c.at("n") == n && c.at("k") == k) return c.at("dimension").get<std::size_t>();
  throw std::runtime_error("missing cell");
}

void compare_page(const nlohmann::json& Z, const nlohmann::json& F2, const ref::Grid& grid, const ref::DimGrid& dims,
                  const std::string& label, Check& check) {
  if (!check.ok) return;
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t n = 0; n < grid[k].size(); ++n) {
      const auto got = cell_group(Z, n, k);
      check.expect(got == ref::cell(grid[k][n]), label + " Z cell (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ") = " +
                                                     got.to_compact() + ", expected " + grid[k][n]);
      const auto d = cell_dimension(F2, n, k);
      check.expect(d == dims[k][n], label + " F2 cell (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ") = " + std::to_string(d));
    }
}

void compare_table(const nlohmann::json& t, const std::vector<std::string>& groups, const std::vector<std::size_t>& f2,
                   const std::string& label, Check& check) {
  if (!check.ok) return;
  check.expect(t.at("status") == "certified", label + " status is " + t.at("status").get<std::string>());
  check.expect(t.at("groups").size() == groups.size(), label + " has the wrong number of degrees");
  for (std::size_t n = 0; n < groups.size() && n < t.at("groups").size(); ++n) {
    const auto got = group_from_json(t.at("groups")[n].at("group"));
    check.expect(got == ref::cell(groups[n]), label + " H^" + std::to_string(n) + " = " + got.to_string());
  }
  if (!f2.empty()) check.expect(t.at("fp_dimensions").at("F2").get<std::vector<std::size_t>>() == f2, label + " F2 dimensions differ");
}

Check criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto Z = run_json({"borel-e2", "--model", "cube-lattice", "--ring", "Z"}, c);
  const auto F = run_json({"borel-e2", "--model", "cube-lattice", "--ring", "F2"}, c);
  compare_page(Z, F, ref::kCubeBorelZ, ref::kCubeBorelF2, "cube-lattice", c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs <= 180, "took " + std::to_string(secs) + " s");
  return c;
}

Check criterion_2() {
  Check c;
  const auto Z = run_json({"borel-e2", "--model", "sturmian-cube", "--ring", "Z"}, c);
  const auto F = run_json({"borel-e2", "--model", "sturmian-cube", "--ring", "F2"}, c);
  compare_page(Z, F, ref::kSturmianBorelZ, ref::kSturmianBorelF2, "sturmian-cube", c);
  return c;
}

Check criterion_3() {
  Check c;
  compare_page(run_json({"e2", "--model", "cube-lattice", "--ring", "Z"}, c), run_json({"e2", "--model", "cube-lattice", "--ring", "F2"}, c),
               ref::kCubeE2Z, ref::kCubeE2F2, "cube-lattice E2", c);
  compare_page(run_json({"e2", "--model", "sturmian-cube", "--ring", "Z"}, c), run_json({"e2", "--model", "sturmian-cube", "--ring", "F2"}, c),
               ref::kSturmianE2Z, ref::kSturmianE2F2, "sturmian-cube E2", c);
  return c;
}

Check criterion_4() {
  Check c;
  compare_table(run_json({"assemble", "--model", "cube-lattice"}, c), ref::kCubeHull, ref::kCubeHullF2, "cube-lattice", c);
  compare_table(run_json({"assemble", "--model", "sturmian-cube"}, c), ref::kSturmianHull, ref::kSturmianHullF2, "sturmian-cube", c);
  return c;
}

Check criterion_5() {
  Check c;
  const auto s = run_json({"rational", "--model", "sturmian-cube"}, c);
  if (!c.ok) return c;
  c.expect(s.at("ranks").get<std::vector<std::size_t>>() == ref::kSturmianRational, "sturmian-cube ranks differ");
  // Each listed vector is fixed by the group and lies in the computed invariant lattice.
  const TilingModel m = builtin_model("sturmian-cube");
  const auto labels = wedge_basis_labels(3);
  const auto basis = invariants(m.degree(3)).basis;
  for (const auto& terms : ref::kSturmianDegree3Invariants) {
    IntVector v(labels.size());
    for (const auto& t : terms) v[static_cast<std::size_t>(std::find(labels.begin(), labels.end(), t) - labels.begin())] = 1;
    c.expect(lattice_membership(basis, v).has_value(), terms.front() + "... is not in the invariant lattice");
  }
  c.expect(s.at("invariants")[3].at("rank") == 4, "degree-3 invariant rank is not 4");
  const auto p = run_json({"rational", "--model", "punctured-torus-d2"}, c);
  if (c.ok) c.expect(p.at("ranks").get<std::vector<std::size_t>>() == ref::kPuncturedPlaneRational, "punctured-torus-d2 ranks differ");
  return c;
}

Check criterion_6() {
  Check c;
  compare_table(run_json({"planar", "--model", "punctured-torus-d2"}, c), ref::kPuncturedPlaneHull, {}, "punctured-torus-d2", c);
  return c;
}

Check criterion_7() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const auto s = run_json({"point-group", "--system", "sturmian-cube", "--n-max", "8"}, c);
  const auto b = run_json({"point-group", "--system", "chessboard", "--n-max", "8"}, c);
  const auto h = run_json({"point-group", "--system", "halfplane", "--n-max", "8"}, c);
  if (!c.ok) return c;
  c.expect(s.at("verdict") == "point group of order 24 (empirical)", "sturmian-cube: " + s.at("verdict").get<std::string>());
  c.expect(b.at("verdict") == "point group of order 4 (empirical)", "chessboard: " + b.at("verdict").get<std::string>());
  c.expect(b.at("levels").back().at("group") == nlohmann::json({"0", "pi/2", "pi", "3pi/2"}), "chessboard group is not C_4");
  c.expect(h.at("verdict") == "undefined (empirical)", "halfplane: " + h.at("verdict").get<std::string>());
  for (const auto& level : h.at("levels")) {
    const auto& extra = level.at("extra");
    c.expect(std::find(extra.begin(), extra.end(), "pi/2") != extra.end(), "halfplane lacks a pi/2 witness at n=" + level.at("n").dump());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(secs <= 60, "took " + std::to_string(secs) + " s");
  return c;
}

Check criterion_8() {
  Check c;
  const auto r = run_json({"certify-resolution", "--group", "2O", "--depth", "5"}, c);
  if (!c.ok) return c;
  c.expect(r.at("passed").get<bool>(), "2O depth-5 certificate failed");
  // H^n = H^{n+4} for n >= 1 within a depth-9 resolution.
  const GroupPtr G = shared_group("2O");
  const FreeResolution& R = cached_resolution(G, 9);
  c.expect(R.certificate.passed, "2O depth-9 certificate failed");
  for (const auto& [name, M] : rotohull::testing::builtin_modules()) {
    if (M.group()->name != "2O") continue;
    const auto col = group_cohomology(R, M, 8);
    for (std::size_t n = 1; n <= 4; ++n)
      c.expect(col.integral[n] == col.integral[n + 4], name + ": H^" + std::to_string(n) + " != H^" + std::to_string(n + 4));
  }
  return c;
}

Check criterion_9() {
  Check c;
  const GroupPtr cover = shared_group("2O");
  const auto cocycle = section_cocycle(*cover);
  const FiniteGroup& G = *cover->quotient->target;
  bool identity = true;
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t h = 0; h < G.order(); ++h)
      for (std::size_t k = 0; k < G.order(); ++k) {
        const auto gh = static_cast<std::size_t>(G.mul(static_cast<int>(g), static_cast<int>(h)));
        const auto hk = static_cast<std::size_t>(G.mul(static_cast<int>(h), static_cast<int>(k)));
        identity = identity && cocycle[g][h] * cocycle[gh][k] == cocycle[h][k] * cocycle[g][hk];
      }
  c.expect(identity, "section cocycle identity fails");
  const auto ab = run_json({"space-group", "abelianize", "--spec", "sturmian-cube"}, c);
  if (c.ok) {
    const FGAbelianGroup expected = coinvariants(builtin_model("sturmian-cube").degree(1)) + finite_abelianization(G);
    c.expect(group_from_json(ab.at("abelianization")) == expected, "abelianization differs from (Z^6)_O + O^ab = " + expected.to_string());
  }
  GroupPresentation F2;
  F2.generators = {"a", "b"};
  c.expect(count_homs(F2, *shared_group("C_2")) == 4, "count_homs(F2 -> C2) != 4");
  std::mt19937 rng(1234);
  const std::vector<GroupPtr> targets{shared_group("C_2"), shared_group("C_3"), shared_group("C_4"), shared_group("C_5"),
                                      shared_group("C_6"), rotohull::testing::symmetric_group_3()};
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = rotohull::testing::random_presentation(rng);
    for (const auto& S : targets)
      c.expect(count_homs(P, *S) == rotohull::testing::brute_force_homs(P, *S), "count_homs disagrees with brute force into " + S->name);
  }
  return c;
}

Check criterion_10() {
  Check c;
  // Universal coefficients on every integral/F2 pair computed here.
  for (const std::string name : {"cube-lattice", "sturmian-cube"}) {
    const TilingModel m = builtin_model(name);
    const E2Page Z = borel_e2_page(m, 5), F = borel_e2_page(m, 5, Ring::prime_field(2));
    for (std::size_t k = 0; k <= Z.k_max; ++k)
      for (std::size_t n = 0; n < 5; ++n)
        c.expect(F.dimension(n, k) == universal_coefficient_dimension(Z.integral[k], n, 2), name + " Borel UC fails at n=" + std::to_string(n));
    const E2Page SZ = e2_page_3d(m), SF = e2_page_3d(m, Ring::prime_field(2));
    for (std::size_t k = 0; k <= SZ.k_max; ++k)
      for (std::size_t n = 0; n <= 3; ++n)
        c.expect(SF.dimension(n, k) == universal_coefficient_dimension(SZ.integral[k], n, 2), name + " E2 UC fails at n=" + std::to_string(n));
  }
  for (const auto& [name, M] : rotohull::testing::builtin_modules()) {
    const auto Z = group_cohomology(M, 4).integral;
    const auto F = group_cohomology(M, 4, Ring::prime_field(2)).dimensions;
    for (std::size_t n = 0; n < 4; ++n) c.expect(F[n] == universal_coefficient_dimension(Z, n, 2), name + " UC fails at n=" + std::to_string(n));
    c.expect(invariants(M, Ring::rationals()).rank == coinvariants(M).free_rank(), name + ": invariant and coinvariant ranks differ");
  }
  // SNF round trip.
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix A = rotohull::testing::random_matrix(rng, dim(rng), dim(rng), trial % 3 == 0 ? 40 : 6);
    const SmithForm S = smith_normal_form(A);
    const IntMatrix D = S.U * A * S.V;
    bool diagonal = abs_value(determinant(S.U)) == 1 && abs_value(determinant(S.V)) == 1;
    for (std::size_t i = 0; i < D.rows(); ++i)
      for (std::size_t j = 0; j < D.cols(); ++j) {
        const Int expected = i == j && i < S.rank() ? S.invariant_factors[i] : Int(0);
        diagonal = diagonal && abs_value(D(i, j)) == expected;
      }
    for (std::size_t i = 0; i + 1 < S.rank(); ++i) diagonal = diagonal && divides(S.invariant_factors[i], S.invariant_factors[i + 1]);
    c.expect(diagonal, "SNF round trip fails on trial " + std::to_string(trial));
  }
  // Bar resolution oracle for groups of order 2 and 3.
  for (const auto& M : rotohull::testing::small_group_modules()) {
    const auto bar = complex_cohomology(rotohull::testing::bar_complex(M, 4));
    const auto col = group_cohomology(M, 4);
    for (std::size_t n = 0; n <= 4; ++n)
      c.expect(col.integral[n] == bar[n], M.group()->name + " rank " + std::to_string(M.rank()) + " differs from the bar complex at n=" + std::to_string(n));
  }
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"group cohomology tables, cube lattice", criterion_1},
      {"group cohomology tables, Sturmian cube", criterion_2},
      {"E2 pages, both models, Z and F2", criterion_3},
      {"assembled cohomology of both rotational hulls", criterion_4},
      {"rational cohomology and degree-3 invariants", criterion_5},
      {"planar cohomology of the punctured plane", criterion_6},
      {"empirical point groups", criterion_7},
      {"resolution certificates and 4-periodicity", criterion_8},
      {"space groups: cocycle, abelianization, homomorphism counts", criterion_9},
      {"property suite: UC, SNF, ranks, bar resolution", criterion_10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (c.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first << " (" << secs << " s)";
    std::cout << line.str() << '\n';
    for (const auto& f : c.failures) std::cout << "    " << f << '\n';
    failed += !c.ok;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
