#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/semiring.hpp"

// Storage is 0-based. Operations that take a column/query index from the
// outside world (column(), the oracles' query()) take it 1-based.

namespace thmv {

template <typename T>
using DenseVector = std::vector<T>;

template <typename T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Row-major literal, for tests and small examples.
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static DenseMatrix identity(std::size_t n, T zero, T one) {
    DenseMatrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  T& at(std::size_t r, std::size_t c) {
    check(r, c);
    return (*this)(r, c);
  }
  const T& at(std::size_t r, std::size_t c) const {
    check(r, c);
    return (*this)(r, c);
  }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw IndexError("matrix index (" + std::to_string(r) + "," + std::to_string(c) +
                       ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
DenseMatrix<T> transpose(const DenseMatrix<T>& a) {
  DenseMatrix<T> t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

template <typename T>
struct Triplet {
  std::size_t row;
  std::size_t col;
  T value;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Coordinate-format sparse matrix, entries kept sorted by (col, row) so that
// applying P^T streams column by column.
template <typename T>
class SparseMatrix {
 public:
  using value_type = T;

  SparseMatrix() = default;

  // Rejects out-of-range coordinates, duplicates and explicit zeros.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet<T>> entries,
               T zero = T{})
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    for (const auto& e : entries_) {
      if (e.row >= rows_ || e.col >= cols_) {
        throw IndexError("sparse entry (" + std::to_string(e.row + 1) + "," +
                         std::to_string(e.col + 1) + ") outside " + std::to_string(rows_) +
                         "x" + std::to_string(cols_));
      }
      if (e.value == zero) throw InvalidArgument("sparse entry stores semiring zero");
    }
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    auto dup = std::adjacent_find(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
      return a.row == b.row && a.col == b.col;
    });
    if (dup != entries_.end()) {
      throw InvalidArgument("duplicate sparse coordinate (" + std::to_string(dup->row + 1) + "," +
                            std::to_string(dup->col + 1) + ")");
    }
  }

  static SparseMatrix from_dense(const DenseMatrix<T>& d, T zero = T{}) {
    std::vector<Triplet<T>> e;
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c)
        if (d(r, c) != zero) e.push_back({r, c, d(r, c)});
    return SparseMatrix(d.rows(), d.cols(), std::move(e), zero);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const std::vector<Triplet<T>>& entries() const noexcept { return entries_; }

  // Sorted columns holding at least one entry.
  std::vector<std::size_t> nonzero_columns() const {
    std::vector<std::size_t> cols;
    for (const auto& e : entries_)
      if (cols.empty() || cols.back() != e.col) cols.push_back(e.col);
    return cols;
  }

  DenseMatrix<T> to_dense(T zero = T{}) const {
    DenseMatrix<T> d(rows_, cols_, zero);
    for (const auto& e : entries_) d(e.row, e.col) = e.value;
    return d;
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet<T>> entries_;
};

// Matrix whose rows outside `support` are implicitly zero. The support is an
// upper bound: a support row may itself be all zero.
template <typename T>
class RowSparseMatrix {
 public:
  using value_type = T;

  RowSparseMatrix() = default;
  RowSparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<std::size_t>& support() const noexcept { return support_; }
  std::span<const T> support_row(std::size_t slot) const noexcept {
    return {data_.data() + slot * cols_, cols_};
  }

  // Appends a row; rows must arrive in strictly increasing order.
  std::span<T> append_row(std::size_t r, T fill) {
    if (r >= rows_) throw IndexError("row-sparse row outside matrix");
    if (!support_.empty() && support_.back() >= r)
      throw InvalidArgument("row-sparse rows must be appended in increasing order");
    support_.push_back(r);
    data_.resize(data_.size() + cols_, fill);
    return {data_.data() + (support_.size() - 1) * cols_, cols_};
  }

  DenseMatrix<T> to_dense(T zero = T{}) const {
    DenseMatrix<T> d(rows_, cols_, zero);
    for (std::size_t s = 0; s < support_.size(); ++s)
      std::copy_n(data_.begin() + s * cols_, cols_, d.row(support_[s]).begin());
    return d;
  }

  friend bool operator==(const RowSparseMatrix&, const RowSparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> support_;
  std::vector<T> data_;
};

// Sorted, unique index set with values. As with RowSparseMatrix the index
// set is structural: an index may carry a zero value.
template <typename T>
class SparseVector {
 public:
  struct Entry {
    std::size_t index;
    T value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::size_t length) : length_(length) {}
  SparseVector(std::size_t length, std::vector<Entry> entries)
      : length_(length), entries_(std::move(entries)) {
    for (std::size_t t = 0; t < entries_.size(); ++t) {
      if (entries_[t].index >= length_) throw IndexError("sparse vector index out of range");
      if (t > 0 && entries_[t - 1].index >= entries_[t].index)
        throw InvalidArgument("sparse vector indices must be sorted and unique");
    }
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  void push_back(std::size_t index, T value) {
    if (index >= length_) throw IndexError("sparse vector index out of range");
    if (!entries_.empty() && entries_.back().index >= index)
      throw InvalidArgument("sparse vector indices must be sorted and unique");
    entries_.push_back({index, value});
  }

  DenseVector<T> to_dense(T zero = T{}) const {
    DenseVector<T> d(length_, zero);
    for (const auto& e : entries_) d[e.index] = e.value;
    return d;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Kernels. Every one takes the semiring object first so a Counting<> wrapper
// can tally work; the mul counts stated below are exact.

// P^T V, touching only columns of P that hold an entry. nnz(P) * cols(V) muls.
template <Semiring SR>
RowSparseMatrix<typename SR::value_type> transpose_times_dense(
    const SR& sr, const SparseMatrix<typename SR::value_type>& p,
    const DenseMatrix<typename SR::value_type>& v) {
  if (p.rows() != v.rows()) {
    throw DimensionError("transpose_times_dense: P has " + std::to_string(p.rows()) +
                         " rows, V has " + std::to_string(v.rows()));
  }
  RowSparseMatrix<typename SR::value_type> out(p.cols(), v.cols());
  std::span<typename SR::value_type> acc;
  std::size_t current = p.cols();
  for (const auto& e : p.entries()) {
    if (e.col != current) {
      current = e.col;
      acc = out.append_row(e.col, sr.zero());
    }
    auto src = v.row(e.row);
    for (std::size_t c = 0; c < v.cols(); ++c) acc[c] = sr.add(acc[c], sr.mul(e.value, src[c]));
  }
  return out;
}

// P^T v over the columns of P holding an entry. nnz(P) muls.
template <Semiring SR>
SparseVector<typename SR::value_type> transpose_times_vector(
    const SR& sr, const SparseMatrix<typename SR::value_type>& p,
    std::span<const typename SR::value_type> v) {
  if (p.rows() != v.size()) {
    throw DimensionError("transpose_times_vector: P has " + std::to_string(p.rows()) +
                         " rows, v has length " + std::to_string(v.size()));
  }
  std::vector<typename SparseVector<typename SR::value_type>::Entry> out;
  for (const auto& e : p.entries()) {
    if (out.empty() || out.back().index != e.col) out.push_back({e.col, sr.zero()});
    out.back().value = sr.add(out.back().value, sr.mul(e.value, v[e.row]));
  }
  return SparseVector<typename SR::value_type>(p.cols(), std::move(out));
}

// Entrywise product; support is the intersection of the terms' supports.
// (terms - 1) * cols muls per surviving row.
template <Semiring SR>
RowSparseMatrix<typename SR::value_type> hadamard_rowsparse(
    const SR& sr, std::span<const RowSparseMatrix<typename SR::value_type>> terms) {
  if (terms.empty()) throw InvalidArgument("hadamard_rowsparse: no terms");
  const auto rows = terms[0].rows();
  const auto cols = terms[0].cols();
  for (const auto& t : terms) {
    if (t.rows() != rows || t.cols() != cols) throw DimensionError("hadamard_rowsparse: shape mismatch");
  }
  RowSparseMatrix<typename SR::value_type> out(rows, cols);
  std::vector<std::size_t> cursor(terms.size(), 0);
  const auto& lead = terms[0].support();
  for (std::size_t s0 = 0; s0 < lead.size(); ++s0) {
    const std::size_t r = lead[s0];
    bool everywhere = true;
    for (std::size_t t = 1; t < terms.size() && everywhere; ++t) {
      const auto& sup = terms[t].support();
      while (cursor[t] < sup.size() && sup[cursor[t]] < r) ++cursor[t];
      everywhere = cursor[t] < sup.size() && sup[cursor[t]] == r;
    }
    if (!everywhere) continue;
    auto dst = out.append_row(r, sr.zero());
    auto first = terms[0].support_row(s0);
    std::copy(first.begin(), first.end(), dst.begin());
    for (std::size_t t = 1; t < terms.size(); ++t) {
      auto src = terms[t].support_row(cursor[t]);
      for (std::size_t c = 0; c < cols; ++c) dst[c] = sr.mul(dst[c], src[c]);
    }
  }
  return out;
}

// Entrywise product of sparse vectors over the intersection of index sets.
// (terms - 1) muls per surviving index.
template <Semiring SR>
SparseVector<typename SR::value_type> hadamard_sparsevec(
    const SR& sr, std::span<const SparseVector<typename SR::value_type>> terms) {
  if (terms.empty()) throw InvalidArgument("hadamard_sparsevec: no terms");
  const auto length = terms[0].length();
  for (const auto& t : terms) {
    if (t.length() != length) throw DimensionError("hadamard_sparsevec: length mismatch");
  }
  SparseVector<typename SR::value_type> out(length);
  std::vector<std::size_t> cursor(terms.size(), 0);
  for (const auto& lead : terms[0].entries()) {
    auto value = lead.value;
    bool everywhere = true;
    for (std::size_t t = 1; t < terms.size() && everywhere; ++t) {
      const auto& es = terms[t].entries();
      while (cursor[t] < es.size() && es[cursor[t]].index < lead.index) ++cursor[t];
      everywhere = cursor[t] < es.size() && es[cursor[t]].index == lead.index;
    }
    if (!everywhere) continue;
    for (std::size_t t = 1; t < terms.size(); ++t)
      value = sr.mul(value, terms[t].entries()[cursor[t]].value);
    out.push_back(lead.index, value);
  }
  return out;
}

// M H reading only H's support rows. rows(M) * |support| * cols(H) muls.
template <Semiring SR>
DenseMatrix<typename SR::value_type> dense_times_rowsparse(
    const SR& sr, const DenseMatrix<typename SR::value_type>& m,
    const RowSparseMatrix<typename SR::value_type>& h) {
  if (m.cols() != h.rows()) {
    throw DimensionError("dense_times_rowsparse: inner dimensions " + std::to_string(m.cols()) +
                         " vs " + std::to_string(h.rows()));
  }
  DenseMatrix<typename SR::value_type> out(m.rows(), h.cols(), sr.zero());
  const auto& sup = h.support();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t s = 0; s < sup.size(); ++s) {
      const auto coeff = m(r, sup[s]);
      auto src = h.support_row(s);
      for (std::size_t c = 0; c < h.cols(); ++c) dst[c] = sr.add(dst[c], sr.mul(coeff, src[c]));
    }
  }
  return out;
}

// M u reading only u's index set. rows(M) * |u| muls.
template <Semiring SR>
DenseVector<typename SR::value_type> dense_times_sparsevec(
    const SR& sr, const DenseMatrix<typename SR::value_type>& m,
    const SparseVector<typename SR::value_type>& u) {
  if (m.cols() != u.length()) {
    throw DimensionError("dense_times_sparsevec: inner dimensions " + std::to_string(m.cols()) +
                         " vs " + std::to_string(u.length()));
  }
  DenseVector<typename SR::value_type> out(m.rows(), sr.zero());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto acc = sr.zero();
    for (const auto& e : u.entries()) acc = sr.add(acc, sr.mul(m(r, e.index), e.value));
    out[r] = acc;
  }
  return out;
}

// Column i of V, with i 1-based.
template <typename T>
DenseVector<T> column(const DenseMatrix<T>& v, std::size_t i) {
  if (i < 1 || i > v.cols()) {
    throw IndexError("column index " + std::to_string(i) + " outside [1, " +
                     std::to_string(v.cols()) + "]");
  }
  DenseVector<T> out(v.rows());
  for (std::size_t r = 0; r < v.rows(); ++r) out[r] = v(r, i - 1);
  return out;
}

// Schoolbook A B. rows(A) * cols(A) * cols(B) muls.
template <Semiring SR>
DenseMatrix<typename SR::value_type> matmul_dense(const SR& sr,
                                                  const DenseMatrix<typename SR::value_type>& a,
                                                  const DenseMatrix<typename SR::value_type>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul_dense: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  }
  DenseMatrix<typename SR::value_type> out(a.rows(), b.cols(), sr.zero());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const auto coeff = a(r, t);
      auto src = b.row(t);
      for (std::size_t c = 0; c < b.cols(); ++c) dst[c] = sr.add(dst[c], sr.mul(coeff, src[c]));
    }
  }
  return out;
}

// A B^T without materializing the transpose. rows(A) * cols(A) * rows(B) muls.
template <Semiring SR>
DenseMatrix<typename SR::value_type> matmul_dense_bt(const SR& sr,
                                                     const DenseMatrix<typename SR::value_type>& a,
                                                     const DenseMatrix<typename SR::value_type>& b) {
  if (a.cols() != b.cols()) {
    throw DimensionError("matmul_dense_bt: inner dimensions " + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.cols()));
  }
  DenseMatrix<typename SR::value_type> out(a.rows(), b.rows(), sr.zero());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto ar = a.row(r);
    for (std::size_t c = 0; c < b.rows(); ++c) {
      auto br = b.row(c);
      auto acc = sr.zero();
      for (std::size_t t = 0; t < a.cols(); ++t) acc = sr.add(acc, sr.mul(ar[t], br[t]));
      out(r, c) = acc;
    }
  }
  return out;
}

// Entrywise product of equal-shape dense matrices. rows * cols muls.
template <Semiring SR>
DenseMatrix<typename SR::value_type> hadamard_dense(const SR& sr,
                                                    const DenseMatrix<typename SR::value_type>& a,
                                                    const DenseMatrix<typename SR::value_type>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hadamard_dense: shape mismatch");
  DenseMatrix<typename SR::value_type> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = sr.mul(a(r, c), b(r, c));
  return out;
}

}  // namespace thmv
