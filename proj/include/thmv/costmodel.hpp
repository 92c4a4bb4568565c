#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/oracle_common.hpp"

namespace thmv {

// Operation tally of one phase of one oracle run. wall_ns is informational;
// fits use the counts only.
struct PhaseCost {
  PhaseId phase = PhaseId::P1;
  Strategy method = Strategy::Method1;
  std::size_t n = 0;
  std::size_t k = 0;
  double tau = 0.0;
  std::uint64_t adds = 0;
  std::uint64_t muls = 0;
  std::uint64_t wall_ns = 0;
};

struct Sample {
  double n;
  double count;
};

// Least-squares line through (log2 n, log2 count).
struct ExponentFit {
  std::vector<Sample> samples;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct FitOptions {
  // Drop every sample at the smallest n before fitting.
  bool drop_smallest = false;
};

inline ExponentFit fit_exponent(std::span<const Sample> samples, FitOptions opts = {}) {
  std::vector<Sample> used(samples.begin(), samples.end());
  for (const auto& s : used) {
    if (!(s.n > 0)) throw FitError("fit_exponent: sizes must be positive");
    if (!(s.count > 0)) throw FitError("fit_exponent: counts must be positive (got a zero count)");
  }
  if (opts.drop_smallest && !used.empty()) {
    const double smallest =
        std::min_element(used.begin(), used.end(), [](auto a, auto b) { return a.n < b.n; })->n;
    std::erase_if(used, [&](const Sample& s) { return s.n == smallest; });
  }
  std::set<double> distinct;
  for (const auto& s : used) distinct.insert(s.n);
  if (used.size() < 3 || distinct.size() < 3)
    throw FitError("fit_exponent: need at least 3 samples over 3 distinct sizes, have " +
                   std::to_string(used.size()) + " samples over " +
                   std::to_string(distinct.size()) + " sizes");

  double sx = 0, sy = 0;
  for (const auto& s : used) {
    sx += std::log2(s.n);
    sy += std::log2(s.count);
  }
  const double count = static_cast<double>(used.size());
  const double mx = sx / count, my = sy / count;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& s : used) {
    const double dx = std::log2(s.n) - mx, dy = std::log2(s.count) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ExponentFit fit;
  fit.samples = std::move(used);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& s : fit.samples) {
    const double e = std::log2(s.count) - (fit.intercept + fit.slope * std::log2(s.n));
    ss_res += e * e;
  }
  // A flat, exactly fitted series has no variance to explain.
  fit.r2 = syy <= 1e-300 ? 1.0 : 1.0 - ss_res / syy;
  if (syy > 1e-300 && ss_res <= 1e-24 * syy) fit.r2 = 1.0;
  return fit;
}

}  // namespace thmv
