#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "thmv/error.hpp"
#include "thmv/matrix.hpp"
#include "thmv/semiring.hpp"
#include "thmv/type2.hpp"

// Instance records and the line-oriented instance file format.
//
//   type1 semiring=<bool|nat> n=<n> k=<k> tau=<tau>
//   M                      n rows of n values
//   V <j>                  n rows of n values, j = 1..k
//   P <j> nnz=<m>          m lines "r c v", 1-based
//   query <i>              zero or more
//
//   type2 semiring=<bool|nat> n=<n> k=<k> d=<d> tau=<tau>
//   V <j>                  n rows of d values, j = 1..k
//   P diag nnz=<m>         m lines "j v", 1-based
//   query <l1>:<i1> ...    zero or more; a bare "query" is the whole tensor
//
// Values are decimal; booleans are 0/1. Blank lines are ignored.

namespace thmv {

template <Semiring S>
struct Type1Instance {
  using semiring = S;
  using value_type = typename S::value_type;
  std::size_t n = 0;
  double tau = 1.0;
  DenseMatrix<value_type> m;
  std::vector<DenseMatrix<value_type>> vs;
  std::vector<SparseMatrix<value_type>> ps;
  std::vector<std::size_t> queries;  // 1-based column indices

  std::size_t k() const noexcept { return vs.size(); }
  friend bool operator==(const Type1Instance&, const Type1Instance&) = default;
};

template <Semiring S>
struct Type2Instance {
  using semiring = S;
  using value_type = typename S::value_type;
  std::size_t n = 0;
  std::size_t d = 0;
  double tau = 1.0;
  std::vector<DenseMatrix<value_type>> vs;
  DiagonalTensor<value_type> p;
  std::vector<SliceQuery> queries;

  std::size_t k() const noexcept { return vs.size(); }
  friend bool operator==(const Type2Instance&, const Type2Instance&) = default;
};

using AnyInstance = std::variant<Type1Instance<BooleanSemiring>, Type1Instance<NaturalSemiring>,
                                 Type2Instance<BooleanSemiring>, Type2Instance<NaturalSemiring>>;

// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace detail {

template <typename T>
void write_dense(std::ostream& os, const DenseMatrix<T>& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ' ';
      os << static_cast<std::uint64_t>(m(r, c));
    }
    os << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-blank line, or false at end of input.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++lineno_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
      }
    }
    return false;
  }

  std::string require(std::string_view what) {
    std::string line;
    if (!next(line)) fail("unexpected end of input, expected " + std::string(what));
    return line;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("instance line " + std::to_string(lineno_) + ": " + msg);
  }

 private:
  std::istream& is_;
  std::size_t lineno_ = 0;
};

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

template <typename U>
U parse_number(const LineReader& in, std::string_view tok) {
  U v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    in.fail("bad number '" + std::string(tok) + "'");
  return v;
}

template <Semiring S>
typename S::value_type parse_value(const LineReader& in, std::string_view tok) {
  const auto raw = parse_number<std::uint64_t>(in, tok);
  if constexpr (std::is_same_v<S, BooleanSemiring>) {
    if (raw > 1) in.fail("boolean value must be 0 or 1, got " + std::string(tok));
  }
  return static_cast<typename S::value_type>(raw);
}

// "key=value" -> value, checking the key.
inline std::string_view keyed(const LineReader& in, std::string_view tok, std::string_view key) {
  if (tok.size() <= key.size() || tok.substr(0, key.size()) != key || tok[key.size()] != '=')
    in.fail("expected " + std::string(key) + "=..., got '" + std::string(tok) + "'");
  return tok.substr(key.size() + 1);
}

template <Semiring S>
DenseMatrix<typename S::value_type> read_dense(LineReader& in, std::size_t rows, std::size_t cols) {
  DenseMatrix<typename S::value_type> m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto toks = split_ws(in.require("matrix row"));
    if (toks.size() != cols)
      in.fail("matrix row has " + std::to_string(toks.size()) + " values, expected " +
              std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_value<S>(in, toks[c]);
  }
  return m;
}

inline void expect_block(const LineReader& in, const std::vector<std::string>& toks,
                         std::string_view name, std::size_t index) {
  if (toks.size() < 2 || toks[0] != name || toks[1] != std::to_string(index))
    in.fail("expected block '" + std::string(name) + " " + std::to_string(index) + "'");
}

template <Semiring S>
Type1Instance<S> read_type1(LineReader& in, const std::vector<std::string>& head) {
  if (head.size() != 5) in.fail("type1 header needs semiring, n, k, tau");
  Type1Instance<S> inst;
  inst.n = parse_number<std::size_t>(in, keyed(in, head[2], "n"));
  const auto k = parse_number<std::size_t>(in, keyed(in, head[3], "k"));
  inst.tau = parse_number<double>(in, keyed(in, head[4], "tau"));
  if (inst.n == 0 || k == 0) in.fail("n and k must be positive");

  if (split_ws(in.require("M block")) != std::vector<std::string>{"M"}) in.fail("expected block 'M'");
  inst.m = read_dense<S>(in, inst.n, inst.n);
  for (std::size_t j = 1; j <= k; ++j) {
    const auto toks = split_ws(in.require("V block"));
    expect_block(in, toks, "V", j);
    if (toks.size() != 2) in.fail("trailing tokens after V header");
    inst.vs.push_back(read_dense<S>(in, inst.n, inst.n));
  }
  for (std::size_t j = 1; j <= k; ++j) {
    const auto toks = split_ws(in.require("P block"));
    expect_block(in, toks, "P", j);
    if (toks.size() != 3) in.fail("P header needs nnz=");
    const auto nnz = parse_number<std::size_t>(in, keyed(in, toks[2], "nnz"));
    std::vector<Triplet<typename S::value_type>> entries;
    for (std::size_t e = 0; e < nnz; ++e) {
      const auto et = split_ws(in.require("sparse entry"));
      if (et.size() != 3) in.fail("sparse entry needs 'r c v'");
      const auto r = parse_number<std::size_t>(in, et[0]);
      const auto c = parse_number<std::size_t>(in, et[1]);
      if (r < 1 || c < 1) in.fail("sparse coordinates are 1-based");
      entries.push_back({r - 1, c - 1, parse_value<S>(in, et[2])});
    }
    try {
      inst.ps.emplace_back(inst.n, inst.n, std::move(entries));
    } catch (const Error& e) {
      in.fail(e.what());
    }
  }
  for (std::string line; in.next(line);) {
    const auto toks = split_ws(line);
    if (toks.size() != 2 || toks[0] != "query") in.fail("expected 'query <i>'");
    inst.queries.push_back(parse_number<std::size_t>(in, toks[1]));
  }
  return inst;
}

template <Semiring S>
Type2Instance<S> read_type2(LineReader& in, const std::vector<std::string>& head) {
  if (head.size() != 6) in.fail("type2 header needs semiring, n, k, d, tau");
  Type2Instance<S> inst;
  inst.n = parse_number<std::size_t>(in, keyed(in, head[2], "n"));
  const auto k = parse_number<std::size_t>(in, keyed(in, head[3], "k"));
  inst.d = parse_number<std::size_t>(in, keyed(in, head[4], "d"));
  inst.tau = parse_number<double>(in, keyed(in, head[5], "tau"));
  if (inst.n == 0 || k == 0 || inst.d == 0) in.fail("n, k and d must be positive");

  for (std::size_t j = 1; j <= k; ++j) {
    const auto toks = split_ws(in.require("V block"));
    expect_block(in, toks, "V", j);
    if (toks.size() != 2) in.fail("trailing tokens after V header");
    inst.vs.push_back(read_dense<S>(in, inst.n, inst.d));
  }
  const auto toks = split_ws(in.require("P diag block"));
  if (toks.size() != 3 || toks[0] != "P" || toks[1] != "diag") in.fail("expected 'P diag nnz=<m>'");
  const auto nnz = parse_number<std::size_t>(in, keyed(in, toks[2], "nnz"));
  std::vector<typename DiagonalTensor<typename S::value_type>::Entry> diag;
  for (std::size_t e = 0; e < nnz; ++e) {
    const auto et = split_ws(in.require("diagonal entry"));
    if (et.size() != 2) in.fail("diagonal entry needs 'j v'");
    const auto j = parse_number<std::size_t>(in, et[0]);
    if (j < 1) in.fail("diagonal indices are 1-based");
    diag.push_back({j - 1, parse_value<S>(in, et[1])});
  }
  try {
    inst.p = DiagonalTensor<typename S::value_type>(k, inst.d, std::move(diag));
  } catch (const Error& e) {
    in.fail(e.what());
  }
  for (std::string line; in.next(line);) {
    const auto qt = split_ws(line);
    if (qt.empty() || qt[0] != "query") in.fail("expected 'query ...'");
    SliceQuery q;
    for (std::size_t t = 1; t < qt.size(); ++t) {
      const auto colon = qt[t].find(':');
      if (colon == std::string::npos) in.fail("slice pair must be '<direction>:<index>'");
      q.pairs.push_back({parse_number<std::size_t>(in, std::string_view(qt[t]).substr(0, colon)),
                         parse_number<std::size_t>(in, std::string_view(qt[t]).substr(colon + 1))});
    }
    inst.queries.push_back(std::move(q));
  }
  return inst;
}

}  // namespace detail

template <Semiring S>
void write_instance(std::ostream& os, const Type1Instance<S>& inst) {
  os << "type1 semiring=" << S::name << " n=" << inst.n << " k=" << inst.k()
     << " tau=" << format_double(inst.tau) << '\n';
  os << "M\n";
  detail::write_dense(os, inst.m);
  for (std::size_t j = 0; j < inst.vs.size(); ++j) {
    os << "V " << j + 1 << '\n';
    detail::write_dense(os, inst.vs[j]);
  }
  for (std::size_t j = 0; j < inst.ps.size(); ++j) {
    os << "P " << j + 1 << " nnz=" << inst.ps[j].nnz() << '\n';
    for (const auto& e : inst.ps[j].entries())
      os << e.row + 1 << ' ' << e.col + 1 << ' ' << static_cast<std::uint64_t>(e.value) << '\n';
  }
  for (auto i : inst.queries) os << "query " << i << '\n';
}

template <Semiring S>
void write_instance(std::ostream& os, const Type2Instance<S>& inst) {
  os << "type2 semiring=" << S::name << " n=" << inst.n << " k=" << inst.k() << " d=" << inst.d
     << " tau=" << format_double(inst.tau) << '\n';
  for (std::size_t j = 0; j < inst.vs.size(); ++j) {
    os << "V " << j + 1 << '\n';
    detail::write_dense(os, inst.vs[j]);
  }
  os << "P diag nnz=" << inst.p.nnz() << '\n';
  for (const auto& e : inst.p.entries())
    os << e.index + 1 << ' ' << static_cast<std::uint64_t>(e.value) << '\n';
  for (const auto& q : inst.queries) {
    os << "query";
    for (const auto& fx : q.pairs) os << ' ' << fx.direction << ':' << fx.index;
    os << '\n';
  }
}

inline void write_instance(std::ostream& os, const AnyInstance& inst) {
  std::visit([&](const auto& x) { write_instance(os, x); }, inst);
}

inline std::string to_text(const AnyInstance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

inline AnyInstance read_instance(std::istream& is) {
  detail::LineReader in(is);
  const auto head = detail::split_ws(in.require("header"));
  if (head.size() < 2) in.fail("missing header");
  const auto sr = detail::keyed(in, head[1], "semiring");
  const bool boolean = sr == "bool";
  if (!boolean && sr != "nat") in.fail("unknown semiring '" + std::string(sr) + "'");
  if (head[0] == "type1") {
    if (boolean) return detail::read_type1<BooleanSemiring>(in, head);
    return detail::read_type1<NaturalSemiring>(in, head);
  }
  if (head[0] == "type2") {
    if (boolean) return detail::read_type2<BooleanSemiring>(in, head);
    return detail::read_type2<NaturalSemiring>(in, head);
  }
  in.fail("header must start with type1 or type2");
}

inline AnyInstance parse_instance(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

}  // namespace thmv
