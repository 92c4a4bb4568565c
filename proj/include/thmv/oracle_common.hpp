#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "thmv/error.hpp"
#include "thmv/semiring.hpp"

namespace thmv {

// Method 1 does the work when the hint arrives; Method 2 defers it to the
// query.
enum class Strategy { Method1, Method2 };

enum class Phase { Empty, Preprocessed, Hinted };

enum class PhaseId { P1, P2, P3 };

// Strict rejects hints above ceil(n^tau) nonzeros; permissive accepts any.
enum class BudgetMode { Strict, Permissive };

inline std::string_view to_string(Strategy s) { return s == Strategy::Method1 ? "1" : "2"; }
inline std::string_view to_string(PhaseId p) {
  switch (p) {
    case PhaseId::P1: return "P1";
    case PhaseId::P2: return "P2";
    case PhaseId::P3: return "P3";
  }
  return "?";
}
inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Empty: return "empty";
    case Phase::Preprocessed: return "preprocessed";
    case Phase::Hinted: return "hinted";
  }
  return "?";
}

// ceil(n^tau), snapping values within 1e-9 (relative) of an integer so that
// 16^0.5 is 4 and not 5.
inline std::size_t nnz_budget(std::size_t n, double tau) {
  const double v = std::pow(static_cast<double>(n), tau);
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, v)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(v));
}

// Per-phase operation tallies of one oracle.
struct PhaseCosts {
  OpCounts p1;
  OpCounts p2;
  OpCounts p3;        // accumulated over every query
  OpCounts last_query;

  OpCounts of(PhaseId p) const {
    switch (p) {
      case PhaseId::P1: return p1;
      case PhaseId::P2: return p2;
      case PhaseId::P3: return p3;
    }
    return {};
  }
  OpCounts total() const { return p1 + p2 + p3; }
};

inline void require_phase(Phase actual, Phase wanted, std::string_view op) {
  if (actual != wanted) {
    throw PhaseError(std::string(op) + " requires phase " + std::string(to_string(wanted)) +
                     ", oracle is " + std::string(to_string(actual)));
  }
}

}  // namespace thmv
