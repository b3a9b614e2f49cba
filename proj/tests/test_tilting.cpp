#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"

using namespace nzext;

namespace {

using GF = PrimeField;
using Mod = Module<GF>;

AlgebraPtr<GF> a3() {
  static auto alg = nakayama(3, 2, GF(3));
  return alg;
}
AlgebraPtr<GF> a5() {
  static auto alg = nakayama(5, 2, GF(3));
  return alg;
}

Mod by_name(const AlgebraPtr<GF>& alg, const std::string& name) {
  for (auto& m : list_indecomposables(alg))
    if (m.name() == name) return m;
  throw std::runtime_error("no module " + name);
}

Subcategory<GF> subcat(const AlgebraPtr<GF>& alg, std::initializer_list<const char*> names) {
  std::vector<Mod> mods;
  for (auto n : names) mods.push_back(by_name(alg, n));
  return Subcategory<GF>(alg, mods);
}

/// E embeds into a product of members: the joint kernel of all maps E -> M_i vanishes.
bool oracle_mono(const Mod& e, const std::vector<Mod>& mods) {
  for (std::size_t v = 0; v < e.dims().size(); ++v) {
    Matrix<GF> st(e.field(), 0, e.dim(v));
    for (const auto& x : mods)
      for (const auto& f : hom_basis(e, x)) st = vstack(st, f.at(v));
    if (rank(st) != e.dim(v)) return false;
  }
  return true;
}

/// Members jointly cover E: the images of all maps M_i -> E span E.
bool oracle_epi(const Mod& e, const std::vector<Mod>& mods) {
  for (std::size_t v = 0; v < e.dims().size(); ++v) {
    Matrix<GF> st(e.field(), e.dim(v), 0);
    for (const auto& x : mods)
      for (const auto& f : hom_basis(x, e)) st = hstack(st, f.at(v));
    if (rank(st) != e.dim(v)) return false;
  }
  return true;
}

/// Straight-line n-cluster tilting test on a member subset of the catalog.
bool oracle_ct(const std::vector<Mod>& cat, const std::vector<bool>& in, std::size_t n, bool nz, std::size_t gldim) {
  std::vector<Mod> mods;
  for (std::size_t i = 0; i < cat.size(); ++i)
    if (in[i]) mods.push_back(cat[i]);
  for (const auto& e : cat)
    if (!oracle_mono(e, mods) || !oracle_epi(e, mods)) return false;
  for (std::size_t e = 0; e < cat.size(); ++e) {
    bool left = true, right = true;
    for (const auto& x : mods)
      for (std::size_t k = 1; k < n; ++k) {
        left = left && oracle::ext_dim_nonminimal(k, cat[e], x) == 0;
        right = right && oracle::ext_dim_nonminimal(k, x, cat[e]) == 0;
      }
    if (left != in[e] || right != in[e]) return false;
  }
  if (nz)
    for (const auto& x : mods)
      for (const auto& y : mods)
        for (std::size_t k = 1; k <= gldim; ++k)
          if (k % n && oracle::ext_dim_nonminimal(k, x, y)) return false;
  return true;
}

std::set<std::vector<std::string>> oracle_search(const AlgebraPtr<GF>& alg, std::size_t n, bool nz) {
  auto cat = list_indecomposables(alg);
  auto g = *global_dimension(alg);
  std::set<std::vector<std::string>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << cat.size()); ++mask) {
    std::vector<bool> in(cat.size());
    for (std::size_t i = 0; i < cat.size(); ++i) in[i] = mask >> i & 1;
    if (!oracle_ct(cat, in, n, nz, g)) continue;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < cat.size(); ++i)
      if (in[i]) names.push_back(cat[i].name());
    std::sort(names.begin(), names.end());
    out.insert(names);
  }
  return out;
}

std::set<std::vector<std::string>> library_search(const AlgebraPtr<GF>& alg, std::size_t n, bool nz, unsigned jobs = 1) {
  std::set<std::vector<std::string>> out;
  for (const auto& s : search_cluster_tilting(alg, SearchOptions<GF>{n, nz, jobs})) {
    auto names = s.names();
    std::sort(names.begin(), names.end());
    out.insert(names);
  }
  return out;
}

}  // namespace

TEST(Approximation, RightIsEpiOntoSimple) {
  auto m = subcat(a3(), {"P1", "P2", "S1", "S3"});
  auto r = right_approximation(m, by_name(a3(), "S2"));
  EXPECT_TRUE(r.is_epi);
  EXPECT_TRUE(is_right_approximation(m, r.map));
  EXPECT_EQ(r.parts.size(), 1u);
  EXPECT_EQ(m[r.parts[0]].name(), "P2");
}

TEST(Approximation, LeftIsMonoIntoInjective) {
  auto m = subcat(a3(), {"P1", "P2", "S1", "S3"});
  auto l = left_approximation(m, by_name(a3(), "S2"));
  EXPECT_TRUE(l.is_mono);
  EXPECT_TRUE(is_left_approximation(m, l.map));
  ASSERT_EQ(l.parts.size(), 1u);
  EXPECT_EQ(m[l.parts[0]].name(), "P1");
}

TEST(Approximation, MinimalIsNoLargerThanCanonical) {
  auto m = subcat(a5(), {"P1", "P2", "P3", "P4", "S1", "S3", "S5"});
  for (const auto& e : list_indecomposables(a5())) {
    auto full = right_approximation(m, e, false), min = right_approximation(m, e, true);
    EXPECT_TRUE(is_right_approximation(m, full.map));
    EXPECT_TRUE(is_right_approximation(m, min.map));
    EXPECT_LE(min.map.source().total_dim(), full.map.source().total_dim());
    auto lf = left_approximation(m, e, false), lm = left_approximation(m, e, true);
    EXPECT_TRUE(is_left_approximation(m, lf.map));
    EXPECT_TRUE(is_left_approximation(m, lm.map));
  }
}

TEST(Approximation, MemberApproximatesItself) {
  auto m = subcat(a5(), {"P1", "P2", "P3", "P4", "S1", "S3", "S5"});
  for (const auto& x : m.members()) {
    auto r = right_approximation(m, x);
    EXPECT_TRUE(r.map.is_iso()) << x.name();
    EXPECT_TRUE(in_add(m, x));
  }
  EXPECT_FALSE(in_add(m, by_name(a5(), "S2")));
  auto sum = direct_sum(a5(), {m[0], m[4], m[4]}).object;
  EXPECT_TRUE(in_add(m, sum));
}

TEST(Subcategory, RejectsDecomposableAndDuplicates) {
  auto p = by_name(a3(), "P1");
  EXPECT_THROW(Subcategory<GF>(a3(), {direct_sum(a3(), {p, p}).object}), InvalidModule);
  EXPECT_THROW(Subcategory<GF>(a3(), {p, p.renamed("copy")}), InvalidModule);
}

TEST(Rigidity, WitnessDegree) {
  auto m = subcat(a3(), {"P1", "P2", "S1", "S2", "S3"});
  auto r = is_n_rigid(m, 2);
  EXPECT_FALSE(r.rigid);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->degree, 1u);
  EXPECT_TRUE(is_n_rigid(m, 1).rigid);
  EXPECT_TRUE(is_n_rigid(subcat(a3(), {"P1", "P2", "S1", "S3"}), 2).rigid);
}

TEST(ClusterTilting, SpecExamples) {
  auto m2 = subcat(a3(), {"P1", "P2", "S1", "S3"});
  EXPECT_TRUE(is_n_cluster_tilting(m2, 2).ok);
  auto nz = is_nZ_cluster_tilting(m2, 2);
  EXPECT_TRUE(nz.ok);
  EXPECT_TRUE(nz.exact);

  auto bad = subcat(a3(), {"P1", "P2", "S3"});
  auto rep = is_n_cluster_tilting(bad, 2);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.module, "S1");
  EXPECT_TRUE(rep.condition == "iii-left" || rep.condition == "iii-right");

  auto m5 = subcat(a5(), {"P1", "P2", "P3", "P4", "S1", "S3", "S5"});
  EXPECT_TRUE(is_nZ_cluster_tilting(m5, 2).ok);
  EXPECT_FALSE(is_n_cluster_tilting(m5, 3).ok);
}

TEST(ClusterTilting, OneClusterTiltingIsEverything) {
  auto all = list_indecomposables(a3());
  EXPECT_TRUE(is_n_cluster_tilting(Subcategory<GF>(a3(), all), 1).ok);
  auto found = search_cluster_tilting(a3(), SearchOptions<GF>{1, false, 1});
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].size(), all.size());
}

TEST(ClusterTilting, ConditionFourBoundedFlag) {
  auto m2 = subcat(a3(), {"P1", "P2", "S1", "S3"});
  auto r = condition_iv(m2, 2, 1);
  EXPECT_TRUE(r.ok);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.bound, 1u);
}

TEST(Search, SpecExamples) {
  auto a = search_cluster_tilting(a3(), SearchOptions<GF>{2, true, 1});
  ASSERT_EQ(a.size(), 1u);
  auto m2 = a[0].names();
  std::sort(m2.begin(), m2.end());
  EXPECT_EQ(m2, (std::vector<std::string>{"P1", "P2", "S1", "S3"}));
  auto b = search_cluster_tilting(a5(), SearchOptions<GF>{2, true, 1});
  ASSERT_EQ(b.size(), 1u);
  auto names = b[0].names();
  std::sort(names.begin(), names.end());
  EXPECT_EQ(names, (std::vector<std::string>{"P1", "P2", "P3", "P4", "S1", "S3", "S5"}));
}

TEST(Search, MatchesBruteForce) {
  struct Case {
    std::size_t m, l, n;
  };
  for (auto c : {Case{3, 2, 2}, Case{4, 2, 3}, Case{4, 2, 2}, Case{4, 3, 2}, Case{5, 2, 2}, Case{5, 3, 2}, Case{5, 2, 4}}) {
    auto alg = nakayama(c.m, c.l, GF(2));
    for (bool nz : {false, true}) {
      EXPECT_EQ(library_search(alg, c.n, nz), oracle_search(alg, c.n, nz)) << c.m << "," << c.l << " n=" << c.n << " nz=" << nz;
    }
  }
}

TEST(Search, ThreadCountDoesNotChangeResult) {
  auto alg = nakayama(6, 2, GF(3));
  EXPECT_EQ(library_search(alg, 5, false, 1), library_search(alg, 5, false, 4));
  EXPECT_EQ(library_search(alg, 5, false, 1).size(), 1u);
}
