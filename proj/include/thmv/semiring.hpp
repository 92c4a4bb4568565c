#pragma once

#include <concepts>
#include <cstdint>
#include <string_view>

#include "thmv/error.hpp"

namespace thmv {

// Commutative semiring interface. Instances are empty or hold only a counter
// pointer, so kernels take them by const reference and call them as objects.
template <typename S>
concept Semiring = requires(const S& s, typename S::value_type a,
                            typename S::value_type b) {
  typename S::value_type;
  { s.zero() } -> std::same_as<typename S::value_type>;
  { s.one() } -> std::same_as<typename S::value_type>;
  { s.add(a, b) } -> std::same_as<typename S::value_type>;
  { s.mul(a, b) } -> std::same_as<typename S::value_type>;
};

// ({0,1}, OR, AND)
struct BooleanSemiring {
  using value_type = std::uint8_t;
  static constexpr bool add_idempotent = true;
  static constexpr std::string_view name = "bool";

  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static constexpr value_type add(value_type a, value_type b) noexcept {
    return static_cast<value_type>(a | b);
  }
  static constexpr value_type mul(value_type a, value_type b) noexcept {
    return static_cast<value_type>(a & b);
  }
  static constexpr bool in_carrier(value_type a) noexcept { return a <= 1; }
};

// (N, +, x) on 64-bit unsigned with checked overflow.
struct NaturalSemiring {
  using value_type = std::uint64_t;
  static constexpr bool add_idempotent = false;
  static constexpr std::string_view name = "nat";

  static constexpr value_type zero() noexcept { return 0; }
  static constexpr value_type one() noexcept { return 1; }
  static value_type add(value_type a, value_type b) {
    value_type r;
    if (__builtin_add_overflow(a, b, &r)) {
      throw OverflowError("natural semiring: addition overflow");
    }
    return r;
  }
  static value_type mul(value_type a, value_type b) {
    value_type r;
    if (__builtin_mul_overflow(a, b, &r)) {
      throw OverflowError("natural semiring: multiplication overflow");
    }
    return r;
  }
  static constexpr bool in_carrier(value_type) noexcept { return true; }
};

struct OpCounts {
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;

  friend bool operator==(const OpCounts&, const OpCounts&) = default;
  friend OpCounts operator-(const OpCounts& a, const OpCounts& b) {
    return {a.adds - b.adds, a.muls - b.muls};
  }
  friend OpCounts operator+(const OpCounts& a, const OpCounts& b) {
    return {a.adds + b.adds, a.muls + b.muls};
  }
};

// Tally of semiring operations. Single-owner; never shared across threads.
class OpCounter {
 public:
  OpCounts snapshot() const noexcept { return counts_; }
  void reset() noexcept { counts_ = {}; }

  void count_add() noexcept { ++counts_.adds; }
  void count_mul() noexcept { ++counts_.muls; }

 private:
  OpCounts counts_;
};

// Wraps a base semiring and records every add/mul in an OpCounter. A null
// counter turns counting off; results are always the base semiring's.
template <Semiring S>
class Counting {
 public:
  using base_type = S;
  using value_type = typename S::value_type;
  static constexpr bool add_idempotent = S::add_idempotent;
  static constexpr std::string_view name = S::name;

  Counting() = default;
  explicit Counting(OpCounter* counter) : counter_(counter) {}

  value_type zero() const { return base_.zero(); }
  value_type one() const { return base_.one(); }
  value_type add(value_type a, value_type b) const {
    if (counter_ != nullptr) counter_->count_add();
    return base_.add(a, b);
  }
  value_type mul(value_type a, value_type b) const {
    if (counter_ != nullptr) counter_->count_mul();
    return base_.mul(a, b);
  }

  OpCounter* counter() const noexcept { return counter_; }

 private:
  [[no_unique_address]] S base_{};
  OpCounter* counter_ = nullptr;
};

}  // namespace thmv
