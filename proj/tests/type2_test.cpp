#include "thmv/type2.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "test_support.hpp"
#include "thmv/reference.hpp"

namespace thmv {
namespace {

using B = BooleanSemiring;
using N = NaturalSemiring;
using BMat = DenseMatrix<B::value_type>;
using NMat = DenseMatrix<N::value_type>;
using thmv::testing::random_dense;

template <Semiring S>
DiagonalTensor<typename S::value_type> random_diag(std::mt19937_64& rng, std::size_t k, std::size_t d,
                                                   std::size_t m) {
  std::vector<std::size_t> idx(d);
  for (std::size_t j = 0; j < d; ++j) idx[j] = j;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<typename DiagonalTensor<typename S::value_type>::Entry> e;
  for (std::size_t t = 0; t < m && t < d; ++t) e.push_back({idx[t], thmv::testing::random_value<S>(rng, 1.0)});
  return DiagonalTensor<typename S::value_type>(k, d, std::move(e));
}

template <Semiring S>
std::vector<DenseMatrix<typename S::value_type>> random_vs(std::mt19937_64& rng, std::size_t k, std::size_t n,
                                                           std::size_t d) {
  std::vector<DenseMatrix<typename S::value_type>> vs;
  for (std::size_t l = 0; l < k; ++l) vs.push_back(random_dense<S>(rng, n, d));
  return vs;
}

std::vector<SliceQuery> every_query(std::size_t k, std::size_t n) {
  std::vector<SliceQuery> out;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::size_t> dirs;
    for (std::size_t l = 0; l < k; ++l)
      if (mask & (1u << l)) dirs.push_back(l + 1);
    std::vector<std::size_t> idx(dirs.size(), 1);
    while (true) {
      SliceQuery q;
      for (std::size_t t = 0; t < dirs.size(); ++t) q.pairs.push_back({dirs[t], idx[t]});
      out.push_back(q);
      std::size_t t = dirs.size();
      while (t > 0 && idx[t - 1] == n) idx[--t] = 1;
      if (t == 0) break;
      ++idx[t - 1];
    }
  }
  return out;
}

template <Semiring S>
Type2Oracle<S> hinted(const std::vector<DenseMatrix<typename S::value_type>>& vs,
                      const DiagonalTensor<typename S::value_type>& p, double tau, Strategy s) {
  auto o = Type2Oracle<S>::preprocess(vs, tau, s);
  o.hint(p);
  return o;
}

TEST(Type2Preprocess, Examples) {
  const BMat id = BMat::identity(2, 0, 1);
  EXPECT_EQ(Type2Oracle<B>::preprocess({id, id}, 1.0, Strategy::Method1).phase(), Phase::Preprocessed);
  EXPECT_EQ(Type2Oracle<B>::preprocess({id}, 1.0, Strategy::Method2).k(), 1u);
  EXPECT_THROW(Type2Oracle<B>::preprocess({id, BMat(2, 3)}, 1.0, Strategy::Method1), DimensionError);
  EXPECT_THROW(Type2Oracle<B>::preprocess({}, 1.0, Strategy::Method1), InvalidArgument);
  EXPECT_THROW(Type2Oracle<B>::preprocess({id}, 0.0, Strategy::Method1), InvalidArgument);
}

TEST(DiagonalTensorType, Invariants) {
  using E = DiagonalTensor<N::value_type>::Entry;
  EXPECT_THROW(DiagonalTensor<N::value_type>(2, 3, {E{3, 1}}), IndexError);
  EXPECT_THROW(DiagonalTensor<N::value_type>(2, 3, {E{0, 0}}), InvalidArgument);
  EXPECT_THROW(DiagonalTensor<N::value_type>(2, 3, {E{1, 1}, E{1, 2}}), InvalidArgument);
  const DiagonalTensor<N::value_type> p(2, 3, {E{2, 5}, E{0, 4}});
  EXPECT_EQ(p.entries()[0].index, 0u);
  EXPECT_EQ(p.entries()[1].index, 2u);
}

TEST(SelectFactors, FullIdentityDiagonalKeepsFactors) {
  std::mt19937_64 rng(61);
  const auto vs = random_vs<N>(rng, 3, 4, 3);
  const DiagonalTensor<N::value_type> p(3, 3, {{0, 1}, {1, 1}, {2, 1}});
  const auto sel = t2_select_factors(N{}, vs, p, SliceQuery{});
  EXPECT_EQ(sel.free_dirs, (std::vector<std::size_t>{1, 2, 3}));
  ASSERT_EQ(sel.factors.size(), 3u);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(sel.factors[l], vs[l]);
}

TEST(SelectFactors, ZeroFixedRowAnnihilates) {
  NMat v2{{0, 0}, {1, 2}};
  const std::vector<NMat> vs{NMat{{1, 2}, {3, 4}}, v2};
  const DiagonalTensor<N::value_type> p(2, 2, {{0, 3}, {1, 1}});
  const SliceQuery q{{{2, 1}}};
  const auto sel = t2_select_factors(N{}, vs, p, q);
  EXPECT_EQ(sel.weights, (std::vector<N::value_type>{0, 0}));
  const auto view = assemble_view(N{}, 2, sel);
  EXPECT_EQ(view.data, NMat(2, 1, 0));
}

TEST(Type2Hint, RankOneIdentity) {
  const BMat id = BMat::identity(2, 0, 1);
  const DiagonalTensor<B::value_type> p(2, 2, {{0, 1}});
  const auto o = hinted<B>({id, id}, p, 1.0, Strategy::Method1);
  EXPECT_EQ(o.full_view()->data, (BMat{{1, 0}, {0, 0}}));
  EXPECT_EQ(o.full_view()->row_dirs, (std::vector<std::size_t>{1}));
  EXPECT_EQ(o.full_view()->col_dirs, (std::vector<std::size_t>{2}));
}

TEST(Type2Hint, EmptyDiagonalGivesZeroView) {
  std::mt19937_64 rng(62);
  const auto vs = random_vs<B>(rng, 3, 3, 3);
  const DiagonalTensor<B::value_type> p(3, 3, {});
  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto o = hinted<B>(vs, p, 1.0, s);
    const auto v = o.query(SliceQuery{});
    EXPECT_EQ(v.data, BMat(9, 3, 0));
  }
}

TEST(Type2Hint, FullViewMatchesReferenceAtAllCells) {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 20; ++t) {
    const auto vs = random_vs<B>(rng, 3, 3, 3);
    const auto p = random_diag<B>(rng, 3, 3, 1 + rng() % 3);
    const auto o = hinted<B>(vs, p, 1.0, Strategy::Method1);
    const auto ref = ref_type2<B>(vs, p, SliceQuery{});
    for (std::size_t a = 1; a <= 3; ++a)
      for (std::size_t b = 1; b <= 3; ++b)
        for (std::size_t c = 1; c <= 3; ++c) {
          const std::vector<std::size_t> coords{a, b, c};
          ASSERT_EQ(o.full_view()->at(coords), ref.at(coords));
        }
  }
}

TEST(Type2Query, SliceExamples) {
  const BMat id = BMat::identity(2, 0, 1);
  const DiagonalTensor<B::value_type> p(2, 2, {{0, 1}});
  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto o = hinted<B>({id, id}, p, 1.0, s);
    const auto vec = o.query(SliceQuery{{{2, 1}}});
    EXPECT_EQ(vec.data, (BMat{{1}, {0}}));
    EXPECT_EQ(vec.row_dirs, (std::vector<std::size_t>{1}));
    EXPECT_TRUE(vec.col_dirs.empty());
    const auto scalar = o.query(SliceQuery{{{1, 1}, {2, 1}}});
    EXPECT_EQ(scalar.data, (BMat{{1}}));
  }
}

TEST(Type2Query, SinglePairQueriesAgreeWithReference) {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 20; ++t) {
    const auto vs = random_vs<B>(rng, 3, 3, 3);
    const auto p = random_diag<B>(rng, 3, 3, nnz_budget(3, 0.5));
    auto o1 = hinted<B>(vs, p, 0.5, Strategy::Method1);
    auto o2 = hinted<B>(vs, p, 0.5, Strategy::Method2);
    for (std::size_t l = 1; l <= 3; ++l)
      for (std::size_t i = 1; i <= 3; ++i) {
        const SliceQuery q{{{l, i}}};
        const auto ref = ref_type2<B>(vs, p, q);
        ASSERT_EQ(o1.query(q), ref);
        ASSERT_EQ(o2.query(q), ref);
      }
  }
}

template <Semiring S>
void strategies_agree(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t n = 1 + rng() % 4;
    const std::size_t d = 1 + rng() % 4;
    const auto vs = random_vs<S>(rng, k, n, d);
    const auto p = random_diag<S>(rng, k, d, rng() % (std::min(d, n) + 1));
    auto o1 = hinted<S>(vs, p, 1.0, Strategy::Method1);
    auto o2 = hinted<S>(vs, p, 1.0, Strategy::Method2);
    for (const auto& q : every_query(k, n)) {
      const auto ref = ref_type2<S>(vs, p, q);
      ASSERT_EQ(o1.query(q), ref);
      ASSERT_EQ(o2.query(q), ref);
    }
  }
}

TEST(Type2Query, StrategiesAgreeBoolean) { strategies_agree<B>(65); }
TEST(Type2Query, StrategiesAgreeNatural) { strategies_agree<N>(66); }

// Reading a cell from a slice equals reading the full coordinate tuple.
TEST(Type2Query, SliceConsistency) {
  std::mt19937_64 rng(67);
  const std::size_t k = 3, n = 3;
  const auto vs = random_vs<N>(rng, k, n, 3);
  const auto p = random_diag<N>(rng, k, 3, 2);
  auto o = hinted<N>(vs, p, 1.0, Strategy::Method2);
  const auto full = o.query(SliceQuery{});
  for (const auto& q : every_query(k, n)) {
    const auto slice = o.query(q);
    const auto free = q.free_directions(k);
    std::vector<std::size_t> local(free.size(), 1);
    while (true) {
      std::vector<std::size_t> coord(k);
      for (const auto& fx : q.pairs) coord[fx.direction - 1] = fx.index;
      for (std::size_t t = 0; t < free.size(); ++t) coord[free[t] - 1] = local[t];
      ASSERT_EQ(slice.at(local), full.at(coord));
      std::size_t t = local.size();
      while (t > 0 && local[t - 1] == n) local[--t] = 1;
      if (t == 0) break;
      ++local[t - 1];
    }
  }
}

// k = 2, s = 1: V_1 diag(P) (V_2)_{i,*}^T.
TEST(Type2Query, KTwoSliceIsMatrixHintedMv) {
  std::mt19937_64 rng(68);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 5, d = 1 + rng() % 5;
    const auto vs = random_vs<N>(rng, 2, n, d);
    const auto p = random_diag<N>(rng, 2, d, rng() % (std::min(d, n) + 1));
    std::vector<N::value_type> dp(d, 0);
    for (const auto& e : p.entries()) dp[e.index] = e.value;
    auto o = hinted<N>(vs, p, 1.0, Strategy::Method2);
    for (std::size_t i = 1; i <= n; ++i) {
      const auto got = o.query(SliceQuery{{{2, i}}});
      for (std::size_t r = 0; r < n; ++r) {
        N::value_type acc = 0;
        for (std::size_t j = 0; j < d; ++j) acc += vs[0](r, j) * dp[j] * vs[1](i - 1, j);
        ASSERT_EQ(got.data(r, 0), acc);
      }
    }
  }
}

TEST(TensorMatrixViewType, Addressing) {
  // Order 3, n = 2: rows (1,2), columns (3).
  TensorMatrixView<N::value_type> v;
  v.extent = 2;
  v.row_dirs = {1, 2};
  v.col_dirs = {3};
  v.data = NMat{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  EXPECT_EQ(v.at(std::vector<std::size_t>{1, 1, 1}), 1u);
  EXPECT_EQ(v.at(std::vector<std::size_t>{1, 2, 2}), 4u);
  EXPECT_EQ(v.at(std::vector<std::size_t>{2, 1, 1}), 5u);
  EXPECT_THROW(v.at(std::vector<std::size_t>{1, 1}), DimensionError);
  EXPECT_EQ(split_directions({1, 2, 3, 4, 5}).first, (std::vector<std::size_t>{1, 2, 3}));
}

// Pinned c = 5 against s|D| + n^ceil(m/2)|D| + n^m|D|, m = k - s.
TEST(Type2Costs, Method2Ceiling) {
  std::mt19937_64 rng(69);
  for (int t = 0; t < 40; ++t) {
    const std::size_t k = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 4;
    const std::size_t d = 1 + rng() % 4;
    const auto vs = random_vs<N>(rng, k, n, d);
    const auto p = random_diag<N>(rng, k, d, rng() % (std::min(d, n) + 1));
    auto o = hinted<N>(vs, p, 1.0, Strategy::Method2);
    EXPECT_EQ(o.costs().p2, (OpCounts{0, 0}));
    for (const auto& q : every_query(k, n)) {
      o.query(q);
      const std::size_t s = q.size(), m = k - s, D = p.nnz();
      std::size_t half = 1, all = 1;
      for (std::size_t i = 0; i < m - m / 2; ++i) half *= n;
      for (std::size_t i = 0; i < m; ++i) all *= n;
      ASSERT_LE(o.costs().last_query.muls, 5 * (s * D + half * D + all * D));
    }
  }
}

TEST(Type2Costs, Method1QueriesAreFree) {
  std::mt19937_64 rng(70);
  const auto vs = random_vs<N>(rng, 3, 3, 3);
  auto o = hinted<N>(vs, random_diag<N>(rng, 3, 3, 2), 1.0, Strategy::Method1);
  for (const auto& q : every_query(3, 3)) {
    o.query(q);
    EXPECT_EQ(o.costs().last_query, (OpCounts{0, 0}));
  }
  EXPECT_EQ(o.costs().total(), o.counter_total());
}

TEST(Type2Errors, PhaseAndQueryValidation) {
  Type2Oracle<B> empty;
  EXPECT_THROW(empty.query(SliceQuery{}), PhaseError);
  const BMat id = BMat::identity(2, 0, 1);
  auto o = Type2Oracle<B>::preprocess({id, id}, 1.0, Strategy::Method2);
  EXPECT_THROW(o.query(SliceQuery{}), PhaseError);
  EXPECT_THROW(o.hint(DiagonalTensor<B::value_type>(3, 2, {})), DimensionError);
  EXPECT_THROW(o.hint(DiagonalTensor<B::value_type>(2, 3, {})), DimensionError);
  o.hint(DiagonalTensor<B::value_type>(2, 2, {{0, 1}}));
  EXPECT_THROW(o.hint(DiagonalTensor<B::value_type>(2, 2, {})), PhaseError);
  EXPECT_THROW(o.query(SliceQuery{{{1, 1}, {1, 2}}}), InvalidArgument);
  EXPECT_THROW(o.query(SliceQuery{{{3, 1}}}), IndexError);
  EXPECT_THROW(o.query(SliceQuery{{{0, 1}}}), IndexError);
  EXPECT_THROW(o.query(SliceQuery{{{1, 3}}}), IndexError);
  EXPECT_THROW(o.query(SliceQuery{{{1, 1}, {2, 1}, {1, 1}}}), InvalidArgument);
}

TEST(Type2Errors, BudgetAndCap) {
  const BMat ones(4, 4, 1);
  auto o = Type2Oracle<B>::preprocess({ones, ones}, 0.5, Strategy::Method1);
  EXPECT_THROW(o.hint(DiagonalTensor<B::value_type>(2, 4, {{0, 1}, {1, 1}, {2, 1}})), BudgetError);
  auto perm = Type2Oracle<B>::preprocess({ones, ones}, 0.5, Strategy::Method1, BudgetMode::Permissive);
  EXPECT_NO_THROW(perm.hint(DiagonalTensor<B::value_type>(2, 4, {{0, 1}, {1, 1}, {2, 1}})));

  // k = 4, n = 4: W_1 has 16 rows, over a cap of 8.
  const std::vector<BMat> vs(4, ones);
  auto capped = Type2Oracle<B>::preprocess(vs, 1.0, Strategy::Method1, BudgetMode::Strict, 8);
  EXPECT_THROW(capped.hint(DiagonalTensor<B::value_type>(4, 4, {{0, 1}})), CapExceededError);
}

}  // namespace
}  // namespace thmv
