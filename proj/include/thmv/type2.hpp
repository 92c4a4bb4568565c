#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/khatri_rao.hpp"
#include "thmv/matrix.hpp"
#include "thmv/oracle_common.hpp"
#include "thmv/semiring.hpp"

namespace thmv {

// Order-k, dimension-d tensor whose only nonzero cells are (j, j, ..., j).
// Entry indices are 0-based.
template <typename T>
class DiagonalTensor {
 public:
  struct Entry {
    std::size_t index;
    T value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  DiagonalTensor() = default;
  DiagonalTensor(std::size_t order, std::size_t dim, std::vector<Entry> diag, T zero = T{})
      : order_(order), dim_(dim), diag_(std::move(diag)) {
    if (order_ == 0) throw InvalidArgument("diagonal tensor: order must be positive");
    std::sort(diag_.begin(), diag_.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    for (std::size_t t = 0; t < diag_.size(); ++t) {
      if (diag_[t].index >= dim_)
        throw IndexError("diagonal tensor: index " + std::to_string(diag_[t].index + 1) +
                         " outside [1, " + std::to_string(dim_) + "]");
      if (diag_[t].value == zero) throw InvalidArgument("diagonal tensor: entry stores semiring zero");
      if (t > 0 && diag_[t - 1].index == diag_[t].index)
        throw InvalidArgument("diagonal tensor: duplicate index " + std::to_string(diag_[t].index + 1));
    }
  }

  std::size_t order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return diag_.size(); }
  const std::vector<Entry>& entries() const noexcept { return diag_; }

  friend bool operator==(const DiagonalTensor&, const DiagonalTensor&) = default;

 private:
  std::size_t order_ = 0;
  std::size_t dim_ = 0;
  std::vector<Entry> diag_;
};

// One fixed coordinate: direction in [1, k], index in [1, n].
struct FixedIndex {
  std::size_t direction;
  std::size_t index;
  friend bool operator==(const FixedIndex&, const FixedIndex&) = default;
};

// Slice request. Directions are distinct; indices may repeat. s = 0 asks for
// the whole tensor, s = k for a single cell.
struct SliceQuery {
  std::vector<FixedIndex> pairs;

  std::size_t size() const noexcept { return pairs.size(); }

  void validate(std::size_t k, std::size_t n) const {
    if (pairs.size() > k)
      throw InvalidArgument("slice query fixes " + std::to_string(pairs.size()) +
                            " directions of an order-" + std::to_string(k) + " tensor");
    std::vector<bool> seen(k + 1, false);
    for (const auto& p : pairs) {
      if (p.direction < 1 || p.direction > k)
        throw IndexError("slice query: direction " + std::to_string(p.direction) + " outside [1, " +
                         std::to_string(k) + "]");
      if (p.index < 1 || p.index > n)
        throw IndexError("slice query: index " + std::to_string(p.index) + " outside [1, " +
                         std::to_string(n) + "]");
      if (seen[p.direction])
        throw InvalidArgument("slice query: direction " + std::to_string(p.direction) + " repeated");
      seen[p.direction] = true;
    }
  }

  // Unfixed directions, ascending, 1-based.
  std::vector<std::size_t> free_directions(std::size_t k) const {
    std::vector<bool> fixed(k + 1, false);
    for (const auto& p : pairs) fixed[p.direction] = true;
    std::vector<std::size_t> free;
    for (std::size_t l = 1; l <= k; ++l)
      if (!fixed[l]) free.push_back(l);
    return free;
  }

  friend bool operator==(const SliceQuery&, const SliceQuery&) = default;
};

// Matrix view of an order-m tensor with extent n per direction: rows index
// the first ceil(m/2) free directions, columns the rest, both through
// flat_index. A scalar (m = 0) is a 1x1 view.
template <typename T>
struct TensorMatrixView {
  std::size_t extent = 0;
  std::vector<std::size_t> row_dirs;
  std::vector<std::size_t> col_dirs;
  DenseMatrix<T> data;

  // coords: 1-based, one per free direction in row_dirs ++ col_dirs order.
  const T& at(std::span<const std::size_t> coords) const {
    if (coords.size() != row_dirs.size() + col_dirs.size())
      throw DimensionError("view: wrong number of coordinates");
    return data(flat_of(coords.first(row_dirs.size())), flat_of(coords.subspan(row_dirs.size())));
  }

  std::size_t flat_of(std::span<const std::size_t> part) const {
    if (part.empty()) return 0;
    std::vector<std::size_t> dims(part.size(), extent);
    return flat_index(part, dims) - 1;
  }

  friend bool operator==(const TensorMatrixView&, const TensorMatrixView&) = default;
};

// Split m free directions into ceil(m/2) row directions and the rest.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_directions(
    const std::vector<std::size_t>& free) {
  const std::size_t a = free.size() - free.size() / 2;
  return {std::vector<std::size_t>(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(a)),
          std::vector<std::size_t>(free.begin() + static_cast<std::ptrdiff_t>(a), free.end())};
}

// Column-selected factors for the free directions of a query. The diagonal
// weight and the fixed-direction rows fold into q_j, which rescales the
// first free factor (or is the whole answer when nothing is free).
template <typename T>
struct SelectedFactors {
  std::vector<std::size_t> free_dirs;
  std::vector<DenseMatrix<T>> factors;  // n x |diag|, one per free direction
  std::vector<T> weights;               // q_j, one per diagonal entry
};

// s * |diag| muls for the weights, n * |diag| for the rescale.
template <Semiring SR>
SelectedFactors<typename SR::value_type> t2_select_factors(
    const SR& sr, const std::vector<DenseMatrix<typename SR::value_type>>& vs,
    const DiagonalTensor<typename SR::value_type>& p, const SliceQuery& q) {
  if (vs.empty()) throw InvalidArgument("type 2: no factor matrices");
  const std::size_t n = vs[0].rows();
  const std::size_t d = vs[0].cols();
  if (p.order() != vs.size() || p.dim() != d)
    throw DimensionError("type 2: tensor is order " + std::to_string(p.order()) + " dim " +
                         std::to_string(p.dim()) + ", instance has k = " + std::to_string(vs.size()) +
                         " d = " + std::to_string(d));
  q.validate(vs.size(), n);

  SelectedFactors<typename SR::value_type> out;
  out.free_dirs = q.free_directions(vs.size());
  const auto& diag = p.entries();
  out.weights.reserve(diag.size());
  for (const auto& e : diag) {
    auto w = e.value;
    for (const auto& fx : q.pairs) w = sr.mul(w, vs[fx.direction - 1](fx.index - 1, e.index));
    out.weights.push_back(w);
  }
  for (std::size_t f = 0; f < out.free_dirs.size(); ++f) {
    const auto& v = vs[out.free_dirs[f] - 1];
    DenseMatrix<typename SR::value_type> u(n, diag.size());
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < diag.size(); ++c)
        u(r, c) = f == 0 ? sr.mul(v(r, diag[c].index), out.weights[c]) : v(r, diag[c].index);
    out.factors.push_back(std::move(u));
  }
  return out;
}

// W_1 W_2^T with W_1 = ⊘ of the first ceil(m/2) factors, W_2 = ⊘ of the rest.
template <Semiring SR>
TensorMatrixView<typename SR::value_type> assemble_view(
    const SR& sr, std::size_t n, const SelectedFactors<typename SR::value_type>& sel,
    std::size_t cap = kDefaultMaterializeCap) {
  using T = typename SR::value_type;
  TensorMatrixView<T> view;
  view.extent = n;
  if (sel.free_dirs.empty()) {
    auto acc = sr.zero();
    for (const auto& w : sel.weights) acc = sr.add(acc, w);
    view.data = DenseMatrix<T>(1, 1, acc);
    return view;
  }
  std::tie(view.row_dirs, view.col_dirs) = split_directions(sel.free_dirs);
  const std::size_t a = view.row_dirs.size();
  const std::size_t width = sel.weights.size();

  auto half = [&](std::size_t from, std::size_t to) {
    if (from == to) return DenseMatrix<T>(1, width, sr.one());
    std::vector<DenseMatrix<T>> fs(sel.factors.begin() + static_cast<std::ptrdiff_t>(from),
                                   sel.factors.begin() + static_cast<std::ptrdiff_t>(to));
    return kr_materialize(sr, FactorList<T>(std::move(fs)), cap);
  };
  const auto w1 = half(0, a);
  const auto w2 = half(a, sel.factors.size());
  view.data = matmul_dense_bt(sr, w1, w2);
  return view;
}

// Three-phase oracle for slices of P(V_1, ..., V_k) with P diagonal.
//
// Method 1 builds the full matrix view at hint time and answers by reading
// cells; Method 2 stores P and assembles each slice from column-selected
// factors per query.
template <Semiring S>
class Type2Oracle {
 public:
  using value_type = typename S::value_type;
  using Matrix = DenseMatrix<value_type>;
  using View = TensorMatrixView<value_type>;

  Type2Oracle() = default;

  static Type2Oracle preprocess(std::vector<Matrix> vs, double tau, Strategy strategy,
                                BudgetMode budget = BudgetMode::Strict,
                                std::size_t cap = kDefaultMaterializeCap) {
    if (vs.empty()) throw InvalidArgument("type 2: k must be a positive integer");
    if (!(tau > 0.0)) throw InvalidArgument("type 2: tau must be positive");
    const std::size_t n = vs[0].rows();
    const std::size_t d = vs[0].cols();
    if (n == 0 || d == 0) throw DimensionError("type 2: V matrices must be non-empty");
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (vs[j].rows() != n || vs[j].cols() != d)
        throw DimensionError("type 2: V_" + std::to_string(j + 1) + " is " +
                             std::to_string(vs[j].rows()) + "x" + std::to_string(vs[j].cols()) +
                             ", expected " + std::to_string(n) + "x" + std::to_string(d));
    }
    Type2Oracle o;
    o.n_ = n;
    o.d_ = d;
    o.tau_ = tau;
    o.strategy_ = strategy;
    o.budget_mode_ = budget;
    o.cap_ = cap;
    o.vs_ = std::move(vs);
    o.phase_ = Phase::Preprocessed;
    o.costs_.p1 = o.counter_.snapshot();
    return o;
  }

  void hint(DiagonalTensor<value_type> p) {
    require_phase(phase_, Phase::Preprocessed, "type 2 hint");
    if (p.order() != vs_.size() || p.dim() != d_)
      throw DimensionError("type 2 hint: tensor is order " + std::to_string(p.order()) + " dim " +
                           std::to_string(p.dim()) + ", expected order " +
                           std::to_string(vs_.size()) + " dim " + std::to_string(d_));
    const std::size_t budget = nnz_budget(n_, tau_);
    if (budget_mode_ == BudgetMode::Strict && p.nnz() > budget)
      throw BudgetError("type 2 hint: " + std::to_string(p.nnz()) +
                        " diagonal nonzeros, budget ceil(n^tau) = " + std::to_string(budget));

    const auto before = counter_.snapshot();
    if (strategy_ == Strategy::Method1) {
      Counting<S> sr(&counter_);
      const auto sel = t2_select_factors(sr, vs_, p, SliceQuery{});
      full_ = assemble_view(sr, n_, sel, cap_);
    } else {
      p_ = std::move(p);
    }
    costs_.p2 = counter_.snapshot() - before;
    phase_ = Phase::Hinted;
  }

  View query(const SliceQuery& q) {
    const auto before = counter_.snapshot();
    auto out = query(q, counter_);
    costs_.last_query = counter_.snapshot() - before;
    costs_.p3 = costs_.p3 + costs_.last_query;
    return out;
  }

  View query(const SliceQuery& q, OpCounter& counter) const {
    require_phase(phase_, Phase::Hinted, "type 2 query");
    q.validate(vs_.size(), n_);
    if (strategy_ == Strategy::Method2) {
      Counting<S> sr(&counter);
      return assemble_view(sr, n_, t2_select_factors(sr, vs_, *p_, q), cap_);
    }
    return extract_slice(q);
  }

  Phase phase() const noexcept { return phase_; }
  Strategy strategy() const noexcept { return strategy_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::size_t k() const noexcept { return vs_.size(); }
  double tau() const noexcept { return tau_; }
  const PhaseCosts& costs() const noexcept { return costs_; }
  // Everything charged to this oracle's own counter since construction.
  OpCounts counter_total() const noexcept { return counter_.snapshot(); }
  const std::optional<View>& full_view() const noexcept { return full_; }

 private:
  // Reads the slice out of the stored full view; no semiring work.
  View extract_slice(const SliceQuery& q) const {
    const std::size_t k = vs_.size();
    View out;
    out.extent = n_;
    std::tie(out.row_dirs, out.col_dirs) = split_directions(q.free_directions(k));
    const std::size_t m = out.row_dirs.size() + out.col_dirs.size();

    std::vector<std::size_t> coords(k + 1, 1);  // by direction, 1-based
    for (const auto& fx : q.pairs) coords[fx.direction] = fx.index;
    std::vector<std::size_t> free(out.row_dirs);
    free.insert(free.end(), out.col_dirs.begin(), out.col_dirs.end());

    std::size_t rows = 1, cols = 1;
    for (std::size_t t = 0; t < out.row_dirs.size(); ++t) rows *= n_;
    for (std::size_t t = 0; t < out.col_dirs.size(); ++t) cols *= n_;
    out.data = Matrix(rows, cols);

    std::vector<std::size_t> full_coords(k);
    std::vector<std::size_t> tuple(m, 1);
    for (std::size_t cell = 0; cell < rows * cols; ++cell) {
      for (std::size_t t = 0; t < m; ++t) coords[free[t]] = tuple[t];
      for (std::size_t l = 0; l < k; ++l) full_coords[l] = coords[l + 1];
      const auto value = full_->at(full_coords);
      out.data(cell / cols, cell % cols) = value;
      // Odometer over free coordinates, last varies fastest, matching the
      // row-major traversal of out.data.
      for (std::size_t t = m; t-- > 0;) {
        if (++tuple[t] <= n_) break;
        tuple[t] = 1;
      }
    }
    return out;
  }

  Phase phase_ = Phase::Empty;
  Strategy strategy_ = Strategy::Method1;
  BudgetMode budget_mode_ = BudgetMode::Strict;
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  double tau_ = 1.0;
  std::size_t cap_ = kDefaultMaterializeCap;
  std::vector<Matrix> vs_;

  std::optional<View> full_;
  std::optional<DiagonalTensor<value_type>> p_;

  OpCounter counter_;
  PhaseCosts costs_;
};

}  // namespace thmv
