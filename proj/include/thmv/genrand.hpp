#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/instance.hpp"
#include "thmv/oracle_common.hpp"
#include "thmv/semiring.hpp"

// Seeded instance generation.
//
// Every generated object (M, each V_j, each P_j, the queries) draws from its
// own std::mt19937_64 stream seeded with splitmix64(seed ^ splitmix64(tag)).
// Bounded integers come from rejection sampling on raw 64-bit outputs and
// Bernoulli draws from the top 53 bits, so instances are identical across
// standard libraries and platforms. Do not change this without bumping every
// frozen expectation that depends on it.

namespace thmv {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t tag) : eng_(splitmix64(seed ^ splitmix64(tag))) {}

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("Stream::below(0)");
    // Reject the 2^64 mod bound smallest outputs so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x < threshold);
    return x % bound;
  }

  bool bernoulli(double p) {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return u < p;
  }

  // m distinct values from [0, universe), ascending (Floyd's algorithm).
  std::vector<std::uint64_t> distinct(std::uint64_t m, std::uint64_t universe) {
    if (m > universe) throw InvalidArgument("cannot draw more distinct values than the universe holds");
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint64_t> out;
    for (std::uint64_t j = universe - m; j < universe; ++j) {
      const std::uint64_t t = below(j + 1);
      const std::uint64_t pick = chosen.contains(t) ? j : t;
      chosen.insert(pick);
      out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 eng_;
};

// How hint positions are placed.
//   Uniform: each P_j independently takes m cells uniformly without
//            replacement from all n^2.
//   Aligned: one set of m distinct columns is drawn and shared by every P_j;
//            each P_j puts one entry per shared column in a uniform row.
//            Supports then survive the Hadamard intersection, saturating the
//            budget in both methods' cost terms.
enum class SupportMode { Uniform, Aligned };

struct GenConfig {
  std::size_t n = 4;
  std::size_t k = 1;
  std::size_t d = 0;  // type 2 only; 0 means d = n
  double tau = 0.5;
  std::uint64_t seed = 0;
  double density = 0.5;  // probability that a dense cell is nonzero
  std::uint64_t value_min = 1;  // natural nonzero range, inclusive
  std::uint64_t value_max = 3;
  SupportMode support = SupportMode::Uniform;
  std::size_t queries = 0;  // random queries appended to the instance
  std::size_t slice_size = 1;  // s for generated type 2 queries
};

namespace gen_detail {

enum : std::uint64_t { kTagM = 1, kTagV = 100, kTagP = 10000, kTagSupport = 20000, kTagQuery = 30000 };

template <Semiring S>
typename S::value_type nonzero(Stream& rng, const GenConfig& cfg) {
  if constexpr (std::is_same_v<S, BooleanSemiring>) {
    return 1;
  } else {
    return cfg.value_min + rng.below(cfg.value_max - cfg.value_min + 1);
  }
}

template <Semiring S>
DenseMatrix<typename S::value_type> dense(Stream rng, std::size_t rows, std::size_t cols,
                                          const GenConfig& cfg) {
  DenseMatrix<typename S::value_type> m(rows, cols, S{}.zero());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (rng.bernoulli(cfg.density)) m(r, c) = nonzero<S>(rng, cfg);
  return m;
}

inline void check(const GenConfig& cfg) {
  if (cfg.n == 0 || cfg.k == 0) throw InvalidArgument("generator: n and k must be positive");
  if (!(cfg.tau > 0.0)) throw InvalidArgument("generator: tau must be positive");
  if (!(cfg.density >= 0.0 && cfg.density <= 1.0)) throw InvalidArgument("generator: density outside [0, 1]");
  if (cfg.value_min == 0 || cfg.value_max < cfg.value_min)
    throw InvalidArgument("generator: natural value range must be within [1, inf) and non-empty");
}

}  // namespace gen_detail

template <Semiring S>
Type1Instance<S> gen_type1(const GenConfig& cfg) {
  gen_detail::check(cfg);
  if (cfg.tau > 1.0) throw InvalidArgument("generator: type 1 needs tau in (0, 1]");
  using namespace gen_detail;
  const std::size_t n = cfg.n;
  const std::uint64_t cells = static_cast<std::uint64_t>(n) * n;
  const std::size_t m = nnz_budget(n, cfg.tau);
  if (m > cells) throw InvalidArgument("generator: budget ceil(n^tau) exceeds n^2");

  Type1Instance<S> inst;
  inst.n = n;
  inst.tau = cfg.tau;
  inst.m = dense<S>(Stream(cfg.seed, kTagM), n, n, cfg);
  for (std::size_t j = 0; j < cfg.k; ++j) inst.vs.push_back(dense<S>(Stream(cfg.seed, kTagV + j), n, n, cfg));

  std::vector<std::uint64_t> shared_cols;
  if (cfg.support == SupportMode::Aligned)
    shared_cols = Stream(cfg.seed, kTagSupport).distinct(std::min<std::uint64_t>(m, n), n);
  for (std::size_t j = 0; j < cfg.k; ++j) {
    Stream rng(cfg.seed, kTagP + j);
    std::vector<Triplet<typename S::value_type>> entries;
    if (cfg.support == SupportMode::Aligned) {
      for (auto c : shared_cols) entries.push_back({rng.below(n), c, nonzero<S>(rng, cfg)});
    } else {
      for (auto cell : rng.distinct(m, cells)) entries.push_back({cell / n, cell % n, nonzero<S>(rng, cfg)});
    }
    inst.ps.emplace_back(n, n, std::move(entries));
  }
  Stream qrng(cfg.seed, kTagQuery);
  for (std::size_t q = 0; q < cfg.queries; ++q) inst.queries.push_back(qrng.below(n) + 1);
  return inst;
}

// A random slice query fixing s distinct directions of an order-k tensor.
inline SliceQuery random_slice(Stream& rng, std::size_t k, std::size_t n, std::size_t s) {
  if (s > k) throw InvalidArgument("slice size exceeds tensor order");
  SliceQuery q;
  for (auto dir : rng.distinct(s, k)) q.pairs.push_back({dir + 1, rng.below(n) + 1});
  return q;
}

template <Semiring S>
Type2Instance<S> gen_type2(const GenConfig& cfg) {
  gen_detail::check(cfg);
  using namespace gen_detail;
  const std::size_t n = cfg.n;
  const std::size_t d = cfg.d == 0 ? n : cfg.d;
  const std::size_t m = std::min(nnz_budget(n, cfg.tau), d);

  Type2Instance<S> inst;
  inst.n = n;
  inst.d = d;
  inst.tau = cfg.tau;
  for (std::size_t j = 0; j < cfg.k; ++j) inst.vs.push_back(dense<S>(Stream(cfg.seed, kTagV + j), n, d, cfg));
  Stream prng(cfg.seed, kTagP);
  std::vector<typename DiagonalTensor<typename S::value_type>::Entry> diag;
  for (auto j : prng.distinct(m, d)) diag.push_back({j, nonzero<S>(prng, cfg)});
  inst.p = DiagonalTensor<typename S::value_type>(cfg.k, d, std::move(diag));
  Stream qrng(cfg.seed, kTagQuery);
  for (std::size_t q = 0; q < cfg.queries; ++q) inst.queries.push_back(random_slice(qrng, cfg.k, n, cfg.slice_size));
  return inst;
}

}  // namespace thmv
