#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/matrix.hpp"
#include "thmv/semiring.hpp"

namespace thmv {

// Reference paths refuse to materialize more rows than this by default.
inline constexpr std::size_t kDefaultMaterializeCap = std::size_t{1} << 20;

// Product of dims, saturating at SIZE_MAX instead of wrapping.
inline std::size_t saturating_product(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (auto d : dims) {
    if (d != 0 && total > std::numeric_limits<std::size_t>::max() / d)
      return std::numeric_limits<std::size_t>::max();
    total *= d;
  }
  return total;
}

// Mixed-radix row index of the Khatri-Rao product; last factor varies
// fastest. Both the multi-index and the result are 1-based.
inline std::size_t flat_index(std::span<const std::size_t> multi,
                              std::span<const std::size_t> dims) {
  if (multi.size() != dims.size() || dims.empty())
    throw DimensionError("flat_index: multi-index has " + std::to_string(multi.size()) +
                         " components for " + std::to_string(dims.size()) + " dims");
  std::size_t flat = 0;
  for (std::size_t l = 0; l < dims.size(); ++l) {
    if (multi[l] < 1 || multi[l] > dims[l])
      throw IndexError("flat_index: component " + std::to_string(l + 1) + " = " +
                       std::to_string(multi[l]) + " outside [1, " + std::to_string(dims[l]) + "]");
    flat = flat * dims[l] + (multi[l] - 1);
  }
  return flat + 1;
}

inline std::vector<std::size_t> unflatten(std::size_t flat, std::span<const std::size_t> dims) {
  if (dims.empty()) throw DimensionError("unflatten: empty dims");
  const std::size_t total = saturating_product(dims);
  if (flat < 1 || flat > total)
    throw IndexError("unflatten: flat index " + std::to_string(flat) + " outside [1, " +
                     std::to_string(total) + "]");
  std::vector<std::size_t> multi(dims.size());
  std::size_t rest = flat - 1;
  for (std::size_t l = dims.size(); l-- > 0;) {
    multi[l] = rest % dims[l] + 1;
    rest /= dims[l];
  }
  return multi;
}

// K_1 ⊘ ... ⊘ K_k kept as its factors. Factor l is n_l x d.
template <typename T>
class FactorList {
 public:
  explicit FactorList(std::vector<DenseMatrix<T>> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidArgument("FactorList needs at least one factor");
    for (const auto& f : factors_) {
      if (f.cols() != factors_[0].cols())
        throw DimensionError("FactorList: factors disagree on column count");
      dims_.push_back(f.rows());
    }
  }

  std::size_t order() const noexcept { return factors_.size(); }
  std::size_t cols() const noexcept { return factors_[0].cols(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t total_rows() const noexcept { return saturating_product(dims_); }
  const DenseMatrix<T>& factor(std::size_t l) const { return factors_.at(l); }
  const std::vector<DenseMatrix<T>>& factors() const noexcept { return factors_; }

 private:
  std::vector<DenseMatrix<T>> factors_;
  std::vector<std::size_t> dims_;
};

// Row `flat` (1-based) of the product: the entrywise product of the factor
// rows picked out by unflatten(flat). (k - 1) * d muls.
template <Semiring SR>
DenseVector<typename SR::value_type> kr_row(const SR& sr,
                                            const FactorList<typename SR::value_type>& f,
                                            std::size_t flat) {
  const auto multi = unflatten(flat, f.dims());
  auto first = f.factor(0).row(multi[0] - 1);
  DenseVector<typename SR::value_type> out(first.begin(), first.end());
  for (std::size_t l = 1; l < f.order(); ++l) {
    auto src = f.factor(l).row(multi[l] - 1);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = sr.mul(out[j], src[j]);
  }
  return out;
}

// Dense ∏n_l x d product, built one factor at a time.
template <Semiring SR>
DenseMatrix<typename SR::value_type> kr_materialize(
    const SR& sr, const FactorList<typename SR::value_type>& f,
    std::size_t cap = kDefaultMaterializeCap) {
  const std::size_t total = f.total_rows();
  if (total > cap)
    throw CapExceededError("kr_materialize: " + std::to_string(total) +
                           " rows exceeds cap " + std::to_string(cap) +
                           " (reference oracle only at desk scale)");
  const std::size_t d = f.cols();
  DenseMatrix<typename SR::value_type> acc = f.factor(0);
  for (std::size_t l = 1; l < f.order(); ++l) {
    const auto& next = f.factor(l);
    DenseMatrix<typename SR::value_type> grown(acc.rows() * next.rows(), d);
    for (std::size_t a = 0; a < acc.rows(); ++a) {
      auto left = acc.row(a);
      for (std::size_t b = 0; b < next.rows(); ++b) {
        auto right = next.row(b);
        auto dst = grown.row(a * next.rows() + b);
        for (std::size_t j = 0; j < d; ++j) dst[j] = sr.mul(left[j], right[j]);
      }
    }
    acc = std::move(grown);
  }
  return acc;
}

// (⊘A)^T (⊘B) computed as ⊙_l (A_l^T B_l), never forming the ∏n_l axis.
// Σ_l n_l * d_a * d_b muls for the Gram products plus (k - 1) * d_a * d_b.
template <Semiring SR>
DenseMatrix<typename SR::value_type> tensor_trick_gram(
    const SR& sr, const FactorList<typename SR::value_type>& as,
    const FactorList<typename SR::value_type>& bs) {
  if (as.order() != bs.order())
    throw DimensionError("tensor_trick_gram: " + std::to_string(as.order()) + " vs " +
                         std::to_string(bs.order()) + " factors");
  if (as.dims() != bs.dims()) throw DimensionError("tensor_trick_gram: factor row counts differ");

  DenseMatrix<typename SR::value_type> result;
  for (std::size_t l = 0; l < as.order(); ++l) {
    const auto& a = as.factor(l);
    const auto& b = bs.factor(l);
    DenseMatrix<typename SR::value_type> gram(a.cols(), b.cols(), sr.zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto ar = a.row(i);
      auto br = b.row(i);
      for (std::size_t p = 0; p < a.cols(); ++p) {
        auto dst = gram.row(p);
        for (std::size_t q = 0; q < b.cols(); ++q) dst[q] = sr.add(dst[q], sr.mul(ar[p], br[q]));
      }
    }
    result = l == 0 ? std::move(gram) : hadamard_dense(sr, result, gram);
  }
  return result;
}

}  // namespace thmv
