#include "thmv/type1.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include "test_support.hpp"
#include "thmv/reference.hpp"

namespace thmv {
namespace {

using B = BooleanSemiring;
using N = NaturalSemiring;
using BMat = DenseMatrix<B::value_type>;
using thmv::testing::dense_mat_vec;
using thmv::testing::dense_mul;
using thmv::testing::dense_transpose;
using thmv::testing::random_dense;
using thmv::testing::random_sparse;

template <Semiring S>
struct Case {
  DenseMatrix<typename S::value_type> m;
  std::vector<DenseMatrix<typename S::value_type>> vs;
  std::vector<SparseMatrix<typename S::value_type>> ps;
  double tau;
};

template <Semiring S>
Case<S> random_case(std::mt19937_64& rng, std::size_t n, std::size_t k, double tau) {
  Case<S> c{random_dense<S>(rng, n, n), {}, {}, tau};
  const std::size_t budget = nnz_budget(n, tau);
  for (std::size_t j = 0; j < k; ++j) {
    c.vs.push_back(random_dense<S>(rng, n, n));
    c.ps.push_back(random_sparse<S>(rng, n, n, rng() % (budget + 1)));
  }
  return c;
}

template <Semiring S>
Type1Oracle<S> hinted(const Case<S>& c, Strategy s, BudgetMode b = BudgetMode::Strict) {
  auto o = Type1Oracle<S>::preprocess(c.m, c.vs, c.tau, s, b);
  o.hint(c.ps);
  return o;
}

std::size_t common_columns(const std::vector<SparseMatrix<N::value_type>>& ps) {
  auto acc = ps[0].nonzero_columns();
  for (std::size_t j = 1; j < ps.size(); ++j) {
    const auto cols = ps[j].nonzero_columns();
    std::vector<std::size_t> out;
    std::set_intersection(acc.begin(), acc.end(), cols.begin(), cols.end(), std::back_inserter(out));
    acc = out;
  }
  return acc.size();
}

TEST(Type1Preprocess, Examples) {
  const auto o = Type1Oracle<B>::preprocess(BMat::identity(2, 0, 1), {BMat::identity(2, 0, 1)}, 1.0,
                                            Strategy::Method1);
  EXPECT_EQ(o.phase(), Phase::Preprocessed);
  EXPECT_EQ(o.k(), 1u);
  EXPECT_EQ(o.costs().p1, (OpCounts{0, 0}));
}

TEST(Type1Preprocess, Errors) {
  const BMat i2 = BMat::identity(2, 0, 1);
  EXPECT_THROW(Type1Oracle<B>::preprocess(i2, {}, 1.0, Strategy::Method1), InvalidArgument);
  EXPECT_THROW(Type1Oracle<B>::preprocess(i2, {i2}, 0.0, Strategy::Method1), InvalidArgument);
  EXPECT_THROW(Type1Oracle<B>::preprocess(i2, {i2}, 1.5, Strategy::Method1), InvalidArgument);
  EXPECT_THROW(Type1Oracle<B>::preprocess(i2, {i2, BMat(3, 3)}, 1.0, Strategy::Method1), DimensionError);
  EXPECT_THROW(Type1Oracle<B>::preprocess(BMat(2, 3), {i2}, 1.0, Strategy::Method1), DimensionError);
}

TEST(Type1Hint, IdentityChainStoresUnitMatrix) {
  const std::size_t n = 4;
  const BMat id = BMat::identity(n, 0, 1);
  const SparseMatrix<B::value_type> e11(n, n, {{0, 0, 1}});
  auto o = Type1Oracle<B>::preprocess(id, {id}, 0.5, Strategy::Method1);
  o.hint({e11});
  BMat expect(n, n, 0);
  expect(0, 0) = 1;
  EXPECT_EQ(*o.method1_answer(), expect);

  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto q = Type1Oracle<B>::preprocess(id, {id}, 0.5, s);
    q.hint({e11});
    EXPECT_EQ(q.query(1), (std::vector<B::value_type>{1, 0, 0, 0}));
    EXPECT_EQ(q.query(2), (std::vector<B::value_type>{0, 0, 0, 0}));
  }
}

TEST(Type1Hint, AllZeroHints) {
  const std::size_t n = 4;
  const BMat ones(n, n, 1);
  const std::vector<SparseMatrix<B::value_type>> zero(2, SparseMatrix<B::value_type>(n, n, {}));
  auto m1 = Type1Oracle<B>::preprocess(ones, {ones, ones}, 0.5, Strategy::Method1);
  m1.hint(zero);
  EXPECT_EQ(*m1.method1_answer(), BMat(n, n, 0));
  EXPECT_EQ(m1.hint_support_size(), 0u);
  auto m2 = Type1Oracle<B>::preprocess(ones, {ones, ones}, 0.5, Strategy::Method2);
  m2.hint(zero);
  for (const auto& p : m2.stored_hint()) EXPECT_TRUE(p.nonzero_columns().empty());
  for (std::size_t i = 1; i <= n; ++i) EXPECT_EQ(m2.query(i), std::vector<B::value_type>(n, 0));
}

TEST(Type1Query, EmptyColumnSupportAnnihilates) {
  std::mt19937_64 rng(41);
  auto c = random_case<N>(rng, 5, 3, 1.0);
  c.ps[1] = SparseMatrix<N::value_type>(5, 5, {});
  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto o = hinted(c, s);
    for (std::size_t i = 1; i <= 5; ++i) EXPECT_EQ(o.query(i), std::vector<N::value_type>(5, 0));
  }
}

TEST(Type1Hint, MatchesReferenceFullMatrix) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 50; ++t) {
    const auto c = random_case<B>(rng, 4, 2, 0.5);
    const auto o = hinted(c, Strategy::Method1);
    ASSERT_EQ(*o.method1_answer(), ref_type1_full<B>(c.m, c.vs, c.ps));
  }
}

TEST(Type1Query, HundredRandomInstancesAgreeWithReference) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const auto c = random_case<B>(rng, 4, 3, 0.5);
    auto o1 = hinted(c, Strategy::Method1);
    auto o2 = hinted(c, Strategy::Method2);
    const auto full = ref_type1_full<B>(c.m, c.vs, c.ps);
    for (std::size_t i = 1; i <= 4; ++i) {
      const auto ref = column(full, i);
      ASSERT_EQ(o1.query(i), ref);
      ASSERT_EQ(o2.query(i), ref);
    }
  }
}

template <Semiring S>
void strategies_agree(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + rng() % 3;
    const std::size_t n = 1 + rng() % 16;
    const double tau = (1 + rng() % 4) / 4.0;
    const auto c = random_case<S>(rng, n, k, tau);
    auto o1 = hinted(c, Strategy::Method1);
    auto o2 = hinted(c, Strategy::Method2);
    for (std::size_t i = 1; i <= n; ++i) ASSERT_EQ(o1.query(i), o2.query(i));
  }
}

TEST(Type1Query, StrategiesAgreeBoolean) { strategies_agree<B>(44); }
TEST(Type1Query, StrategiesAgreeNatural) { strategies_agree<N>(45); }

TEST(Type1Query, KEqualsOneIsMatrixHintedMv) {
  std::mt19937_64 rng(46);
  for (int t = 0; t < 30; ++t) {
    const auto c = random_case<N>(rng, 6, 1, 0.75);
    const auto direct = dense_mul<N>(c.m, dense_mul<N>(dense_transpose(c.ps[0].to_dense()), c.vs[0]));
    for (auto s : {Strategy::Method1, Strategy::Method2}) {
      auto o = hinted(c, s);
      for (std::size_t i = 1; i <= 6; ++i) ASSERT_EQ(o.query(i), column(direct, i));
    }
  }
}

TEST(Type1Hint, SupportPropagation) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 15;
    const auto c = random_case<B>(rng, n, 1 + rng() % 3, 0.5);
    const auto o = hinted(c, Strategy::Method1);
    std::size_t min_cols = n;
    for (const auto& p : c.ps) min_cols = std::min(min_cols, p.nonzero_columns().size());
    EXPECT_LE(*o.hint_support_size(), min_cols);
    EXPECT_LE(min_cols, nnz_budget(n, 0.5));
  }
}

TEST(Type1Phase, Discipline) {
  Type1Oracle<B> empty;
  EXPECT_EQ(empty.phase(), Phase::Empty);
  EXPECT_THROW(empty.hint({}), PhaseError);
  EXPECT_THROW(empty.query(1), PhaseError);

  const BMat id = BMat::identity(3, 0, 1);
  auto o = Type1Oracle<B>::preprocess(id, {id}, 1.0, Strategy::Method2);
  EXPECT_THROW(o.query(1), PhaseError);
  o.hint({SparseMatrix<B::value_type>(3, 3, {})});
  EXPECT_EQ(o.phase(), Phase::Hinted);
  EXPECT_THROW(o.hint({SparseMatrix<B::value_type>(3, 3, {})}), PhaseError);
  EXPECT_NO_THROW(o.query(1));
  EXPECT_NO_THROW(o.query(1));  // repeatable
}

TEST(Type1Hint, ShapeAndBudgetErrors) {
  const BMat id = BMat::identity(4, 0, 1);
  auto o = Type1Oracle<B>::preprocess(id, {id, id}, 0.5, Strategy::Method1);
  const SparseMatrix<B::value_type> ok(4, 4, {{0, 0, 1}, {1, 1, 1}});
  const SparseMatrix<B::value_type> over(4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
  EXPECT_THROW(o.hint({ok}), DimensionError);
  EXPECT_THROW(o.hint({ok, SparseMatrix<B::value_type>(3, 3, {})}), DimensionError);
  EXPECT_THROW(o.hint({ok, over}), BudgetError);
  EXPECT_EQ(o.phase(), Phase::Preprocessed);
  EXPECT_NO_THROW(o.hint({ok, ok}));

  auto p = Type1Oracle<B>::preprocess(id, {id, id}, 0.5, Strategy::Method1, BudgetMode::Permissive);
  EXPECT_NO_THROW(p.hint({over, over}));
  auto q = Type1Oracle<B>::preprocess(id, {id, id}, 0.5, Strategy::Method2, BudgetMode::Permissive);
  q.hint({over, over});
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_EQ(p.query(i), q.query(i));
}

TEST(Type1Query, IndexErrors) {
  const BMat id = BMat::identity(3, 0, 1);
  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto o = Type1Oracle<B>::preprocess(id, {id}, 1.0, s);
    o.hint({SparseMatrix<B::value_type>(3, 3, {})});
    EXPECT_THROW(o.query(0), IndexError);
    EXPECT_THROW(o.query(4), IndexError);
  }
}

// Exact counts implied by the loop structure:
//   Method 1, hint:  n Σ nnz + (k-1) n |S| + n^2 |S|
//   Method 2, query: Σ nnz + (k-1) |u| + n |u|
// where |S| = |u| = number of columns every P_j touches.
TEST(Type1Costs, ExactFormulas) {
  std::mt19937_64 rng(48);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 15;
    const std::size_t k = 1 + rng() % 3;
    const auto c = random_case<N>(rng, n, k, 0.5);
    std::size_t total_nnz = 0;
    for (const auto& p : c.ps) total_nnz += p.nnz();
    const std::size_t common = common_columns(c.ps);

    auto o1 = hinted(c, Strategy::Method1);
    EXPECT_EQ(o1.costs().p1, (OpCounts{0, 0}));
    EXPECT_EQ(o1.costs().p2.muls, n * total_nnz + (k - 1) * n * common + n * n * common);
    EXPECT_EQ(*o1.hint_support_size(), common);

    auto o2 = hinted(c, Strategy::Method2);
    EXPECT_EQ(o2.costs().p2, (OpCounts{0, 0}));
    for (std::size_t i = 1; i <= n; ++i) {
      o1.query(i);
      EXPECT_EQ(o1.costs().last_query, (OpCounts{0, 0}));
      o2.query(i);
      EXPECT_EQ(o2.costs().last_query.muls, total_nnz + (k - 1) * common + n * common);
    }
  }
}

// Pinned ceilings (constant 2 on the k term for Method 2; the Method 1 bound
// includes the Hadamard term the n·|S|·n + k·nnz·n form leaves out).
TEST(Type1Costs, CeilingsHoldInStrictMode) {
  std::mt19937_64 rng(49);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 15;
    const std::size_t k = 1 + rng() % 3;
    const double tau = (1 + rng() % 4) / 4.0;
    const auto c = random_case<B>(rng, n, k, tau);
    const std::size_t b = nnz_budget(n, tau);
    auto o1 = hinted(c, Strategy::Method1);
    auto o2 = hinted(c, Strategy::Method2);
    const auto s = *o1.hint_support_size();
    EXPECT_LE(o1.costs().p2.muls, k * b * n + (k - 1) * s * n + n * s * n);
    for (std::size_t i = 1; i <= n; ++i) {
      o2.query(i);
      EXPECT_LE(o2.costs().last_query.muls, 2 * k * b + n * b);
    }
  }
}

TEST(Type1Costs, PhaseDeltasSumToCounterTotal) {
  std::mt19937_64 rng(50);
  const auto c = random_case<N>(rng, 8, 2, 0.5);
  for (auto s : {Strategy::Method1, Strategy::Method2}) {
    auto o = hinted(c, s);
    for (std::size_t i = 1; i <= 8; ++i) o.query(i);
    EXPECT_EQ(o.costs().total(), o.counter_total());
  }
}

TEST(Type1Query, ConcurrentReadersWithOwnCounters) {
  std::mt19937_64 rng(51);
  const auto c = random_case<N>(rng, 12, 3, 0.5);
  const auto o = hinted(c, Strategy::Method2);
  const auto full = ref_type1_full<N>(c.m, c.vs, c.ps);
  std::vector<int> ok(4, 1);
  std::vector<OpCounts> used(4);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      OpCounter mine;
      for (std::size_t i = 1; i <= 12; ++i)
        if (o.query(i, mine) != column(full, i)) ok[w] = 0;
      used[w] = mine.snapshot();
    });
  }
  for (auto& th : pool) th.join();
  for (int w = 0; w < 4; ++w) {
    EXPECT_TRUE(ok[w]);
    EXPECT_EQ(used[w], used[0]);
  }
  EXPECT_EQ(o.counter_total(), (OpCounts{0, 0}));
}

}  // namespace
}  // namespace thmv
