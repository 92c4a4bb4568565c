#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thmv/genrand.hpp"
#include "thmv/instance.hpp"
#include "thmv/khatri_rao.hpp"
#include "thmv/reference.hpp"
#include "thmv/type1.hpp"
#include "thmv/type2.hpp"

// Cross-checks of Method 1, Method 2 and the brute-force references, shared
// by the CLI's verify command and the test suites.

namespace thmv {

struct CheckTally {
  std::size_t passed = 0;
  std::size_t failed = 0;
};

struct VerifyReport {
  std::map<std::string, CheckTally> checks;
  std::optional<AnyInstance> counterexample;
  std::string counterexample_check;
  std::string counterexample_detail;

  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& [name, t] : checks) f += t.failed;
    return f;
  }
  bool ok() const { return failures() == 0; }

  void record(const std::string& check, bool pass, const AnyInstance& inst, const std::string& detail) {
    auto& t = checks[check];
    if (pass) {
      ++t.passed;
      return;
    }
    ++t.failed;
    if (!counterexample) {
      counterexample = inst;
      counterexample_check = check;
      counterexample_detail = detail;
    }
  }
};

// Flips the low bit of one output element; used to prove the harness can
// fail.
struct FaultInjector {
  bool armed = false;

  template <typename T>
  void maybe_flip(T& value) {
    if (!armed) return;
    value = static_cast<T>(value ^ T{1});
    armed = false;
  }
};

template <typename T>
std::string describe(const DenseVector<T>& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << static_cast<std::uint64_t>(v[i]);
  os << ']';
  return os.str();
}

// Every slice query of an order-k tensor with extent n: each subset of
// directions, each index tuple.
inline std::vector<SliceQuery> all_slice_queries(std::size_t k, std::size_t n) {
  std::vector<SliceQuery> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<std::size_t> dirs;
    for (std::size_t l = 0; l < k; ++l)
      if (mask >> l & 1) dirs.push_back(l + 1);
    std::vector<std::size_t> idx(dirs.size(), 1);
    while (true) {
      SliceQuery q;
      for (std::size_t t = 0; t < dirs.size(); ++t) q.pairs.push_back({dirs[t], idx[t]});
      out.push_back(std::move(q));
      std::size_t t = dirs.size();
      while (t > 0 && idx[t - 1] == n) idx[--t] = 1;
      if (t == 0) break;
      ++idx[t - 1];
    }
  }
  return out;
}

// Method 1 = Method 2 = reference on every query of the instance (every
// column when it lists none).
template <Semiring S>
void check_type1(const Type1Instance<S>& inst, VerifyReport& report, FaultInjector* fault = nullptr,
                 BudgetMode budget = BudgetMode::Strict) {
  auto m1 = Type1Oracle<S>::preprocess(inst.m, inst.vs, inst.tau, Strategy::Method1, budget);
  auto m2 = Type1Oracle<S>::preprocess(inst.m, inst.vs, inst.tau, Strategy::Method2, budget);
  m1.hint(inst.ps);
  m2.hint(inst.ps);
  const auto ref = ref_type1_full<S>(inst.m, inst.vs, inst.ps);

  std::vector<std::size_t> queries = inst.queries;
  if (queries.empty())
    for (std::size_t i = 1; i <= inst.n; ++i) queries.push_back(i);
  bool ok1 = true, ok2 = true, ok12 = true;
  std::string detail;
  for (auto i : queries) {
    const auto a1 = m1.query(i);
    auto a2 = m2.query(i);
    if (fault != nullptr && !a2.empty()) fault->maybe_flip(a2[0]);
    const auto r = column(ref, i);
    if (detail.empty() && (a1 != r || a2 != r))
      detail = "query " + std::to_string(i) + ": method1 " + describe(a1) + " method2 " + describe(a2) +
               " reference " + describe(r);
    ok1 = ok1 && a1 == r;
    ok2 = ok2 && a2 == r;
    ok12 = ok12 && a1 == a2;
  }
  const AnyInstance any = inst;
  report.record("type1 method1 = reference", ok1, any, detail);
  report.record("type1 method2 = reference", ok2, any, detail);
  report.record("type1 method1 = method2", ok12, any, detail);
}

// Method 1 = Method 2 = reference on every query (every slice when the
// instance lists none).
template <Semiring S>
void check_type2(const Type2Instance<S>& inst, VerifyReport& report, FaultInjector* fault = nullptr,
                 BudgetMode budget = BudgetMode::Strict) {
  auto m1 = Type2Oracle<S>::preprocess(inst.vs, inst.tau, Strategy::Method1, budget);
  auto m2 = Type2Oracle<S>::preprocess(inst.vs, inst.tau, Strategy::Method2, budget);
  m1.hint(inst.p);
  m2.hint(inst.p);

  auto queries = inst.queries;
  if (queries.empty()) queries = all_slice_queries(inst.k(), inst.n);
  bool ok1 = true, ok2 = true, ok12 = true;
  std::string detail;
  for (const auto& q : queries) {
    const auto a1 = m1.query(q);
    auto a2 = m2.query(q);
    if (fault != nullptr) fault->maybe_flip(a2.data(0, 0));
    const auto r = ref_type2<S>(inst.vs, inst.p, q);
    if (detail.empty() && (a1 != r || a2 != r)) {
      std::ostringstream os;
      os << "slice query";
      for (const auto& fx : q.pairs) os << ' ' << fx.direction << ':' << fx.index;
      os << " differs";
      detail = os.str();
    }
    ok1 = ok1 && a1 == r;
    ok2 = ok2 && a2 == r;
    ok12 = ok12 && a1 == a2;
  }
  const AnyInstance any = inst;
  report.record("type2 method1 = reference", ok1, any, detail);
  report.record("type2 method2 = reference", ok2, any, detail);
  report.record("type2 method1 = method2", ok12, any, detail);
}

// (⊘A)^T(⊘B) by the tensor trick against the materialized product.
template <Semiring S>
bool gram_identity_holds(const FactorList<typename S::value_type>& as,
                  const FactorList<typename S::value_type>& bs) {
  const S sr{};
  const auto fast = tensor_trick_gram(sr, as, bs);
  const auto slow = matmul_dense(sr, transpose(kr_materialize(sr, as)), kr_materialize(sr, bs));
  return fast == slow;
}

// Random factor lists with k in {1,2,3}, n_l in {1..4}, d_a, d_b in {1..4}.
template <Semiring S>
std::pair<FactorList<typename S::value_type>, FactorList<typename S::value_type>> random_gram_case(
    std::uint64_t seed) {
  Stream rng(seed, 0x1e11a);
  GenConfig cfg;
  cfg.seed = seed;
  const std::size_t k = 1 + rng.below(3);
  const std::size_t da = 1 + rng.below(4), db = 1 + rng.below(4);
  std::vector<DenseMatrix<typename S::value_type>> a, b;
  for (std::size_t l = 0; l < k; ++l) {
    const std::size_t nl = 1 + rng.below(4);
    a.push_back(gen_detail::dense<S>(Stream(seed, 2 * l + 1), nl, da, cfg));
    b.push_back(gen_detail::dense<S>(Stream(seed, 2 * l + 2), nl, db, cfg));
  }
  return {FactorList<typename S::value_type>(std::move(a)), FactorList<typename S::value_type>(std::move(b))};
}

struct VerifyConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t nmax = 16;
  std::size_t kmax = 3;
  bool inject_fault = false;
};

// Desk-scale sweep over both problem types and both semirings.
inline VerifyReport verify_sweep(const VerifyConfig& cfg) {
  VerifyReport report;
  FaultInjector fault{cfg.inject_fault};

  auto gram = [&]<typename S>(S) {
    for (std::size_t t = 0; t < cfg.trials * 5; ++t) {
      const auto [as, bs] = random_gram_case<S>(cfg.seed + t);
      auto& tally = report.checks["gram identity (" + std::string(S::name) + ")"];
      ++(gram_identity_holds<S>(as, bs) ? tally.passed : tally.failed);
    }
  };

  auto type1 = [&]<typename S>(S) {
    for (std::size_t n : {4, 8, 16}) {
      if (n > cfg.nmax) continue;
      for (std::size_t k = 1; k <= cfg.kmax; ++k) {
        for (double tau : {0.25, 0.5, 1.0}) {
          for (std::size_t t = 0; t < cfg.trials; ++t) {
            GenConfig g;
            g.n = n;
            g.k = k;
            g.tau = tau;
            g.seed = cfg.seed + t;
            g.support = t % 2 == 0 ? SupportMode::Uniform : SupportMode::Aligned;
            check_type1(gen_type1<S>(g), report, &fault);
          }
        }
      }
    }
  };

  auto type2 = [&]<typename S>(S) {
    for (std::size_t k = 1; k <= cfg.kmax; ++k) {
      for (std::size_t n : {2, 3, 4}) {
        if (n > cfg.nmax) continue;
        for (double tau : {0.5, 1.0}) {
          for (std::size_t t = 0; t < cfg.trials; ++t) {
            GenConfig g;
            g.n = n;
            g.d = n;
            g.k = k;
            g.tau = tau;
            g.seed = cfg.seed + t;
            check_type2(gen_type2<S>(g), report, &fault);
          }
        }
      }
    }
  };

  type1(BooleanSemiring{});
  type1(NaturalSemiring{});
  type2(BooleanSemiring{});
  type2(NaturalSemiring{});
  gram(BooleanSemiring{});
  gram(NaturalSemiring{});
  return report;
}

// Checks a single instance read from a file.
inline VerifyReport verify_instance(const AnyInstance& inst, BudgetMode budget = BudgetMode::Strict) {
  VerifyReport report;
  std::visit(
      [&](const auto& x) {
        if constexpr (requires { x.ps; })
          check_type1(x, report, nullptr, budget);
        else
          check_type2(x, report, nullptr, budget);
      },
      inst);
  return report;
}

}  // namespace thmv
