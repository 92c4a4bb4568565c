#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/matrix.hpp"
#include "thmv/oracle_common.hpp"
#include "thmv/semiring.hpp"

namespace thmv {

// Three-phase oracle answering M (⊘_j P_j)^T (⊘_j V_j)_{*,i}.
//
//   preprocess(M, V_1..V_k)  phase 1, no work
//   hint(P_1..P_k)           phase 2
//   query(i)                 phase 3, repeatable
//
// Both strategies rely on (⊘P)^T(⊘V) = ⊙_j P_j^T V_j and never touch the n^k
// axis. Method 1 computes R = M ⊙_j(P_j^T V_j) at hint time and answers by
// copying a column; Method 2 stores the P_j and computes M ⊙_j(P_j^T v_j)
// with v_j = (V_j)_{*,i} per query.
template <Semiring S>
class Type1Oracle {
 public:
  using value_type = typename S::value_type;
  using Matrix = DenseMatrix<value_type>;
  using Sparse = SparseMatrix<value_type>;

  Type1Oracle() = default;

  static Type1Oracle preprocess(Matrix m, std::vector<Matrix> vs, double tau, Strategy strategy,
                                BudgetMode budget = BudgetMode::Strict) {
    if (vs.empty()) throw InvalidArgument("type 1: k must be a positive integer");
    if (!(tau > 0.0 && tau <= 1.0))
      throw InvalidArgument("type 1: tau must lie in (0, 1], got " + std::to_string(tau));
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n)
      throw DimensionError("type 1: M must be square and non-empty, got " + std::to_string(m.rows()) +
                           "x" + std::to_string(m.cols()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (vs[j].rows() != n || vs[j].cols() != n)
        throw DimensionError("type 1: V_" + std::to_string(j + 1) + " is " +
                             std::to_string(vs[j].rows()) + "x" + std::to_string(vs[j].cols()) +
                             ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    Type1Oracle o;
    o.n_ = n;
    o.tau_ = tau;
    o.strategy_ = strategy;
    o.budget_mode_ = budget;
    o.m_ = std::move(m);
    o.vs_ = std::move(vs);
    o.phase_ = Phase::Preprocessed;
    o.costs_.p1 = o.counter_.snapshot();
    return o;
  }

  void hint(std::vector<Sparse> ps) {
    require_phase(phase_, Phase::Preprocessed, "type 1 hint");
    if (ps.size() != vs_.size())
      throw DimensionError("type 1 hint: got " + std::to_string(ps.size()) + " matrices, k = " +
                           std::to_string(vs_.size()));
    const std::size_t budget = nnz_budget(n_, tau_);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (ps[j].rows() != n_ || ps[j].cols() != n_)
        throw DimensionError("type 1 hint: P_" + std::to_string(j + 1) + " is not " +
                             std::to_string(n_) + "x" + std::to_string(n_));
      if (budget_mode_ == BudgetMode::Strict && ps[j].nnz() > budget)
        throw BudgetError("type 1 hint: P_" + std::to_string(j + 1) + " has " +
                          std::to_string(ps[j].nnz()) + " nonzeros, budget ceil(n^tau) = " +
                          std::to_string(budget));
    }

    const auto before = counter_.snapshot();
    Counting<S> sr(&counter_);
    if (strategy_ == Strategy::Method1) {
      std::vector<RowSparseMatrix<value_type>> terms;
      terms.reserve(ps.size());
      for (std::size_t j = 0; j < ps.size(); ++j) terms.push_back(transpose_times_dense(sr, ps[j], vs_[j]));
      auto h = hadamard_rowsparse(sr, std::span<const RowSparseMatrix<value_type>>(terms));
      hint_support_ = h.support().size();
      answer_ = dense_times_rowsparse(sr, m_, h);
    } else {
      hint_support_.reset();
      ps_ = std::move(ps);
    }
    costs_.p2 = counter_.snapshot() - before;
    phase_ = Phase::Hinted;
  }

  // i is 1-based. Work is charged to this oracle's phase-3 tally.
  DenseVector<value_type> query(std::size_t i) {
    const auto before = counter_.snapshot();
    auto out = query(i, counter_);
    costs_.last_query = counter_.snapshot() - before;
    costs_.p3 = costs_.p3 + costs_.last_query;
    return out;
  }

  // Read-only query charging a caller-owned counter, for concurrent readers.
  DenseVector<value_type> query(std::size_t i, OpCounter& counter) const {
    require_phase(phase_, Phase::Hinted, "type 1 query");
    if (i < 1 || i > n_)
      throw IndexError("type 1 query: index " + std::to_string(i) + " outside [1, " +
                       std::to_string(n_) + "]");
    if (strategy_ == Strategy::Method1) return column(*answer_, i);

    Counting<S> sr(&counter);
    std::vector<SparseVector<value_type>> terms;
    terms.reserve(ps_.size());
    for (std::size_t j = 0; j < ps_.size(); ++j) {
      const auto v = column(vs_[j], i);
      terms.push_back(transpose_times_vector(sr, ps_[j], std::span<const value_type>(v)));
    }
    const auto u = hadamard_sparsevec(sr, std::span<const SparseVector<value_type>>(terms));
    return dense_times_sparsevec(sr, m_, u);
  }

  Phase phase() const noexcept { return phase_; }
  Strategy strategy() const noexcept { return strategy_; }
  BudgetMode budget_mode() const noexcept { return budget_mode_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return vs_.size(); }
  double tau() const noexcept { return tau_; }
  const PhaseCosts& costs() const noexcept { return costs_; }
  // Everything charged to this oracle's own counter since construction.
  OpCounts counter_total() const noexcept { return counter_.snapshot(); }

  // Method 1 only: the stored n x n answer and |support(⊙_j P_j^T V_j)|.
  const std::optional<Matrix>& method1_answer() const noexcept { return answer_; }
  std::optional<std::size_t> hint_support_size() const noexcept { return hint_support_; }
  // Method 2 only: the remembered hint.
  const std::vector<Sparse>& stored_hint() const noexcept { return ps_; }

 private:
  Phase phase_ = Phase::Empty;
  Strategy strategy_ = Strategy::Method1;
  BudgetMode budget_mode_ = BudgetMode::Strict;
  std::size_t n_ = 0;
  double tau_ = 1.0;
  Matrix m_;
  std::vector<Matrix> vs_;

  std::optional<Matrix> answer_;
  std::optional<std::size_t> hint_support_;
  std::vector<Sparse> ps_;

  OpCounter counter_;
  PhaseCosts costs_;
};

}  // namespace thmv
