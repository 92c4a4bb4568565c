#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "thmv/costmodel.hpp"
#include "thmv/error.hpp"
#include "thmv/genrand.hpp"
#include "thmv/type1.hpp"
#include "thmv/type2.hpp"

namespace thmv {

inline constexpr std::string_view kBenchCsvHeader =
    "type,method,phase,n,k,d,tau,semiring,seed,nnz,adds,muls,wall_ns";

// One CSV row: one phase of one oracle run. Counts are empty when the run
// was refused (materialization cap).
struct BenchRow {
  int type = 1;
  Strategy method = Strategy::Method1;
  PhaseId phase = PhaseId::P1;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  double tau = 0.0;
  std::string semiring;
  std::uint64_t seed = 0;
  std::size_t nnz = 0;
  std::optional<std::uint64_t> adds;
  std::optional<std::uint64_t> muls;
  std::optional<std::uint64_t> wall_ns;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchConfig {
  int type = 1;
  std::vector<Strategy> methods{Strategy::Method1, Strategy::Method2};
  double tau = 0.5;
  std::size_t k = 2;
  std::size_t d = 0;  // type 2; 0 means d = n
  std::size_t nmin = 64;
  std::size_t nmax = 1024;
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  std::string semiring = "bool";
  SupportMode support = SupportMode::Aligned;
  std::size_t slice_size = 1;  // type 2 query size s
  std::size_t cap = kDefaultMaterializeCap;
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::vector<std::size_t> doubling_ladder(std::size_t nmin, std::size_t nmax) {
  if (!is_power_of_two(nmin) || !is_power_of_two(nmax) || nmin > nmax)
    throw InvalidArgument("bench: nmin and nmax must be powers of two with nmin <= nmax");
  std::vector<std::size_t> ns;
  for (std::size_t n = nmin; n <= nmax; n *= 2) ns.push_back(n);
  return ns;
}

namespace bench_detail {

using Clock = std::chrono::steady_clock;

inline std::uint64_t elapsed_ns(Clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count());
}

inline void set_counts(BenchRow& row, const OpCounts& c, std::uint64_t ns) {
  row.adds = c.adds;
  row.muls = c.muls;
  row.wall_ns = ns;
}

// Runs the three phases of one oracle and appends one row per phase. A cap
// breach leaves the remaining rows without counts.
template <typename Oracle, typename Preprocess, typename Hint, typename Query>
void run_phases(std::vector<BenchRow>& rows, const BenchRow& base, Preprocess&& pre, Hint&& hint,
                Query&& query) {
  BenchRow r1 = base, r2 = base, r3 = base;
  r1.phase = PhaseId::P1;
  r2.phase = PhaseId::P2;
  r3.phase = PhaseId::P3;

  auto t0 = Clock::now();
  Oracle o = pre();
  set_counts(r1, o.costs().p1, elapsed_ns(t0));
  try {
    t0 = Clock::now();
    hint(o);
    set_counts(r2, o.costs().p2, elapsed_ns(t0));
    t0 = Clock::now();
    query(o);
    set_counts(r3, o.costs().last_query, elapsed_ns(t0));
  } catch (const CapExceededError&) {
  }
  rows.push_back(r1);
  rows.push_back(r2);
  rows.push_back(r3);
}

template <Semiring S>
void bench_type1(const BenchConfig& cfg, std::size_t n, std::uint64_t seed, std::vector<BenchRow>& rows) {
  GenConfig g;
  g.n = n;
  g.k = cfg.k;
  g.tau = cfg.tau;
  g.seed = seed;
  g.support = cfg.support;
  g.queries = 1;
  const auto inst = gen_type1<S>(g);
  std::size_t nnz = 0;
  for (const auto& p : inst.ps) nnz += p.nnz();

  for (auto method : cfg.methods) {
    BenchRow base{1, method, PhaseId::P1, n, cfg.k, n, cfg.tau, std::string(S::name), seed, nnz, {}, {}, {}};
    run_phases<Type1Oracle<S>>(
        rows, base, [&] { return Type1Oracle<S>::preprocess(inst.m, inst.vs, inst.tau, method); },
        [&](Type1Oracle<S>& o) { o.hint(inst.ps); }, [&](Type1Oracle<S>& o) { o.query(inst.queries[0]); });
  }
}

template <Semiring S>
void bench_type2(const BenchConfig& cfg, std::size_t n, std::uint64_t seed, std::vector<BenchRow>& rows) {
  GenConfig g;
  g.n = n;
  g.d = cfg.d;
  g.k = cfg.k;
  g.tau = cfg.tau;
  g.seed = seed;
  g.queries = 1;
  g.slice_size = cfg.slice_size;
  const auto inst = gen_type2<S>(g);

  for (auto method : cfg.methods) {
    BenchRow base{2, method, PhaseId::P1, n, cfg.k, inst.d, cfg.tau, std::string(S::name), seed,
                  inst.p.nnz(), {}, {}, {}};
    run_phases<Type2Oracle<S>>(
        rows, base,
        [&] { return Type2Oracle<S>::preprocess(inst.vs, inst.tau, method, BudgetMode::Strict, cfg.cap); },
        [&](Type2Oracle<S>& o) { o.hint(inst.p); }, [&](Type2Oracle<S>& o) { o.query(inst.queries[0]); });
  }
}

}  // namespace bench_detail

// Rows come out in (n, trial, method, phase) order. Trial t uses seed + t.
inline std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.type != 1 && cfg.type != 2) throw InvalidArgument("bench: type must be 1 or 2");
  if (cfg.semiring != "bool" && cfg.semiring != "nat")
    throw InvalidArgument("bench: semiring must be bool or nat");
  if (cfg.methods.empty()) throw InvalidArgument("bench: no methods selected");
  if (cfg.k == 0 || cfg.trials == 0) throw InvalidArgument("bench: k and trials must be positive");
  if (cfg.type == 2 && cfg.slice_size > cfg.k) throw InvalidArgument("bench: slice size exceeds k");
  std::vector<BenchRow> rows;
  for (auto n : doubling_ladder(cfg.nmin, cfg.nmax)) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed = cfg.seed + t;
      const bool boolean = cfg.semiring == "bool";
      if (cfg.type == 1) {
        if (boolean) bench_detail::bench_type1<BooleanSemiring>(cfg, n, seed, rows);
        else bench_detail::bench_type1<NaturalSemiring>(cfg, n, seed, rows);
      } else {
        if (boolean) bench_detail::bench_type2<BooleanSemiring>(cfg, n, seed, rows);
        else bench_detail::bench_type2<NaturalSemiring>(cfg, n, seed, rows);
      }
    }
  }
  return rows;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchCsvHeader << '\n';
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : rows) {
    os << r.type << ',' << to_string(r.method) << ',' << to_string(r.phase) << ',' << r.n << ',' << r.k
       << ',' << r.d << ',' << format_double(r.tau) << ',' << r.semiring << ',' << r.seed << ','
       << r.nnz << ',' << opt(r.adds) << ',' << opt(r.muls) << ',' << opt(r.wall_ns) << '\n';
  }
}

inline std::vector<BenchRow> read_bench_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("bench csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kBenchCsvHeader) throw ParseError("bench csv: unexpected header '" + line + "'");

  std::vector<BenchRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    const auto where = "bench csv line " + std::to_string(lineno) + ": ";
    if (f.size() != 13) throw ParseError(where + "expected 13 fields, got " + std::to_string(f.size()));
    try {
      BenchRow r;
      r.type = std::stoi(f[0]);
      if (f[1] != "1" && f[1] != "2") throw ParseError(where + "method must be 1 or 2");
      r.method = f[1] == "1" ? Strategy::Method1 : Strategy::Method2;
      if (f[2] == "P1") r.phase = PhaseId::P1;
      else if (f[2] == "P2") r.phase = PhaseId::P2;
      else if (f[2] == "P3") r.phase = PhaseId::P3;
      else throw ParseError(where + "phase must be P1, P2 or P3");
      r.n = std::stoull(f[3]);
      r.k = std::stoull(f[4]);
      r.d = std::stoull(f[5]);
      r.tau = std::stod(f[6]);
      r.semiring = f[7];
      r.seed = std::stoull(f[8]);
      r.nnz = std::stoull(f[9]);
      auto opt = [](const std::string& s) -> std::optional<std::uint64_t> {
        if (s.empty()) return std::nullopt;
        return std::stoull(s);
      };
      r.adds = opt(f[10]);
      r.muls = opt(f[11]);
      r.wall_ns = opt(f[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError(where + "malformed number");
    }
  }
  return rows;
}

struct RowFilter {
  int type = 1;
  Strategy method = Strategy::Method2;
  PhaseId phase = PhaseId::P3;
  std::optional<std::size_t> k;
  std::optional<double> tau;
};

// (n, muls) samples from rows matching the filter; rows without counts are
// skipped.
inline std::vector<Sample> select_samples(const std::vector<BenchRow>& rows, const RowFilter& f) {
  std::vector<Sample> out;
  for (const auto& r : rows) {
    if (r.type != f.type || r.method != f.method || r.phase != f.phase) continue;
    if (f.k && r.k != *f.k) continue;
    if (f.tau && r.tau != *f.tau) continue;
    if (!r.muls) continue;
    out.push_back({static_cast<double>(r.n), static_cast<double>(*r.muls)});
  }
  return out;
}

}  // namespace thmv
