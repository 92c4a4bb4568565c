#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/khatri_rao.hpp"
#include "thmv/matrix.hpp"
#include "thmv/type2.hpp"

// Brute-force ground truth. These evaluate the defining expressions
// literally, materializing the n^k-row objects, and share no code with the
// oracle strategies beyond dense loops and kr_materialize. Nothing here is
// counted.

namespace thmv {

// Full n x n answer M (⊘P)^T (⊘V).
template <Semiring S>
DenseMatrix<typename S::value_type> ref_type1_full(
    const DenseMatrix<typename S::value_type>& m,
    const std::vector<DenseMatrix<typename S::value_type>>& vs,
    const std::vector<SparseMatrix<typename S::value_type>>& ps,
    std::size_t cap = kDefaultMaterializeCap) {
  using T = typename S::value_type;
  const S sr{};
  if (vs.empty() || ps.size() != vs.size())
    throw DimensionError("ref_type1: need k >= 1 V matrices and as many P matrices");
  std::vector<DenseMatrix<T>> dense_ps;
  for (const auto& p : ps) dense_ps.push_back(p.to_dense(sr.zero()));
  const FactorList<T> pf(std::move(dense_ps));
  const FactorList<T> vf(vs);
  if (pf.dims() != vf.dims()) throw DimensionError("ref_type1: P and V row counts differ");
  const auto kp = kr_materialize(sr, pf, cap);
  const auto kv = kr_materialize(sr, vf, cap);
  return matmul_dense(sr, m, matmul_dense(sr, transpose(kp), kv));
}

// Column i (1-based) of the answer.
template <Semiring S>
DenseVector<typename S::value_type> ref_type1(
    const DenseMatrix<typename S::value_type>& m,
    const std::vector<DenseMatrix<typename S::value_type>>& vs,
    const std::vector<SparseMatrix<typename S::value_type>>& ps, std::size_t i,
    std::size_t cap = kDefaultMaterializeCap) {
  return column(ref_type1_full<S>(m, vs, ps, cap), i);
}

// Slice of Σ_j P_{j..j} Π_l (V_l)_{i_l, j}, cell by cell, packed into the
// canonical view layout.
template <Semiring S>
TensorMatrixView<typename S::value_type> ref_type2(
    const std::vector<DenseMatrix<typename S::value_type>>& vs,
    const DiagonalTensor<typename S::value_type>& p, const SliceQuery& q,
    std::size_t cap = kDefaultMaterializeCap) {
  using T = typename S::value_type;
  const S sr{};
  if (vs.empty()) throw InvalidArgument("ref_type2: no factor matrices");
  const std::size_t k = vs.size();
  const std::size_t n = vs[0].rows();
  if (p.order() != k || p.dim() != vs[0].cols()) throw DimensionError("ref_type2: tensor shape mismatch");
  q.validate(k, n);

  TensorMatrixView<T> view;
  view.extent = n;
  const auto free = q.free_directions(k);
  std::tie(view.row_dirs, view.col_dirs) = split_directions(free);
  std::vector<std::size_t> dims(free.size(), n);
  const std::size_t cells = saturating_product(dims);
  if (cells > cap)
    throw CapExceededError("ref_type2: " + std::to_string(cells) + " cells exceeds cap " +
                           std::to_string(cap));
  std::size_t rows = 1;
  for (std::size_t t = 0; t < view.row_dirs.size(); ++t) rows *= n;
  const std::size_t cols = cells / rows;
  view.data = DenseMatrix<T>(rows, cols, sr.zero());

  std::vector<std::size_t> coord(k + 1, 0);
  for (const auto& fx : q.pairs) coord[fx.direction] = fx.index;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      // Decode (r, c) into free coordinates, last direction fastest.
      std::size_t rr = r, cc = c;
      for (std::size_t t = view.col_dirs.size(); t-- > 0;) {
        coord[view.col_dirs[t]] = cc % n + 1;
        cc /= n;
      }
      for (std::size_t t = view.row_dirs.size(); t-- > 0;) {
        coord[view.row_dirs[t]] = rr % n + 1;
        rr /= n;
      }
      T acc = sr.zero();
      for (const auto& e : p.entries()) {
        T term = e.value;
        for (std::size_t l = 1; l <= k; ++l) term = sr.mul(term, vs[l - 1](coord[l] - 1, e.index));
        acc = sr.add(acc, term);
      }
      view.data(r, c) = acc;
    }
  }
  return view;
}

}  // namespace thmv
