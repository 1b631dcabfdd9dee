#pragma once

// Function matrices: a (possibly partial) table of non-negative integer values
// indexed by Alice's inputs (rows) and Bob's inputs (columns).

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccwb/bitset.hpp"
#include "ccwb/error.hpp"

namespace ccwb {

using Value = std::uint32_t;
inline constexpr Value kMaxValue = 0x7fffffffU;

// Defined(v) or Undefined (nullopt).
using CellValue = std::optional<Value>;

enum class TableKind { Total, Partial };

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class ValueTable {
 public:
  ValueTable() = default;

  // Kind is derived: total iff no cell is undefined.
  ValueTable(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
             std::vector<CellValue> cells)
      : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)), cells_(std::move(cells)) {
    if (row_labels_.empty() || col_labels_.empty()) throw FormatError("table needs at least one row and column");
    if (cells_.size() != row_labels_.size() * col_labels_.size()) {
      throw FormatError("cell count does not match R*C");
    }
    check_unique(row_labels_, "row");
    check_unique(col_labels_, "column");
    for (const auto& c : cells_) {
      if (c && *c > kMaxValue) throw FormatError("cell value out of range");
    }
    kind_ = std::ranges::all_of(cells_, [](const CellValue& c) { return c.has_value(); }) ? TableKind::Total
                                                                                           : TableKind::Partial;
  }

  // Table with default labels "0".."R-1" / "0".."C-1".
  static ValueTable from_rows(const std::vector<std::vector<CellValue>>& rows) {
    if (rows.empty() || rows.front().empty()) throw FormatError("empty table");
    std::vector<CellValue> cells;
    for (const auto& r : rows) {
      if (r.size() != rows.front().size()) throw FormatError("ragged rows");
      cells.insert(cells.end(), r.begin(), r.end());
    }
    return ValueTable(index_labels(rows.size()), index_labels(rows.front().size()), std::move(cells));
  }

  static std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  TableKind kind() const { return kind_; }
  bool is_total() const { return kind_ == TableKind::Total; }

  const CellValue& at(std::size_t r, std::size_t c) const { return cells_[r * cols() + c]; }
  const CellValue& at(Cell cell) const { return at(cell.row, cell.col); }
  bool defined(std::size_t r, std::size_t c) const { return at(r, c).has_value(); }

  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  const std::vector<CellValue>& cells() const { return cells_; }

  std::set<Value> distinct_values() const {
    std::set<Value> out;
    for (const auto& c : cells_) {
      if (c) out.insert(*c);
    }
    return out;
  }

  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  static void check_unique(const std::vector<std::string>& labels, const char* axis) {
    std::set<std::string_view> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw FormatError(std::string("duplicate ") + axis + " label '" + l + "'");
    }
  }

  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<CellValue> cells_;
  TableKind kind_ = TableKind::Total;
};

// Combinatorial rectangle: row subset x column subset.
struct Rect {
  DynamicBitset rows;
  DynamicBitset cols;

  static Rect full(const ValueTable& t) { return {DynamicBitset::full(t.rows()), DynamicBitset::full(t.cols())}; }
  static Rect of(const ValueTable& t, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    return {DynamicBitset::from_indices(t.rows(), rows), DynamicBitset::from_indices(t.cols(), cols)};
  }
  std::size_t cell_count() const { return rows.count() * cols.count(); }
  bool contains(Cell c) const { return rows.test(c.row) && cols.test(c.col); }
  bool intersects(const Rect& o) const { return rows.intersects(o.rows) && cols.intersects(o.cols); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

inline void validate_rect(const ValueTable& t, const Rect& r) {
  if (r.rows.size() != t.rows() || r.cols.size() != t.cols()) throw InvalidRectError("rect dimensions do not match table");
  if (r.rows.none() || r.cols.none()) throw InvalidRectError("rect must select at least one row and one column");
}

// Sub-table with rows/cols in the given order (duplicates not allowed).
inline ValueTable select(const ValueTable& t, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) throw InvalidRectError("empty selection");
  std::vector<std::string> rl, cl;
  std::vector<CellValue> cells;
  cells.reserve(rows.size() * cols.size());
  for (auto r : rows) {
    if (r >= t.rows()) throw InvalidRectError("row index out of range");
    rl.push_back(t.row_labels()[r]);
  }
  for (auto c : cols) {
    if (c >= t.cols()) throw InvalidRectError("column index out of range");
    cl.push_back(t.col_labels()[c]);
  }
  for (auto r : rows) {
    for (auto c : cols) cells.push_back(t.at(r, c));
  }
  return ValueTable(std::move(rl), std::move(cl), std::move(cells));
}

inline ValueTable restrict(const ValueTable& t, const Rect& r) {
  validate_rect(t, r);
  return select(t, r.rows.indices(), r.cols.indices());
}

// Rect `inner` of restrict(t, outer), expressed in t's coordinates.
inline Rect compose(const Rect& outer, const Rect& inner) {
  const auto rows = outer.rows.indices();
  const auto cols = outer.cols.indices();
  Rect out{DynamicBitset(outer.rows.size()), DynamicBitset(outer.cols.size())};
  inner.rows.for_each([&](std::size_t i) { out.rows.set(rows.at(i)); });
  inner.cols.for_each([&](std::size_t j) { out.cols.set(cols.at(j)); });
  return out;
}

inline ValueTable transpose(const ValueTable& t) {
  std::vector<CellValue> cells;
  cells.reserve(t.rows() * t.cols());
  for (std::size_t c = 0; c < t.cols(); ++c) {
    for (std::size_t r = 0; r < t.rows(); ++r) cells.push_back(t.at(r, c));
  }
  return ValueTable(t.col_labels(), t.row_labels(), std::move(cells));
}

// ---------------------------------------------------------------------------
// Generators.

enum class NamedFamily { EQ, IP, DISJ };

inline std::string bit_string(std::size_t v, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if ((v >> (n - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

// 2^n x 2^n table, labels in lexicographic order.
inline ValueTable gen_named(NamedFamily family, int n) {
  if (n < 1 || n > 12) throw SizeLimitError("named functions support 1 <= n <= 12");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back(bit_string(i, n));
  std::vector<CellValue> cells(size * size);
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t y = 0; y < size; ++y) {
      Value v = 0;
      switch (family) {
        case NamedFamily::EQ: v = x == y ? 1 : 0; break;
        case NamedFamily::IP: v = static_cast<Value>(std::popcount(x & y) % 2); break;
        case NamedFamily::DISJ: v = (x & y) == 0 ? 1 : 0; break;
      }
      cells[x * size + y] = v;
    }
  }
  return ValueTable(labels, labels, std::move(cells));
}

// Output symbols of g: "0r", "1r", "r0", "r1" encoded as 0..3; strings over
// them encoded base 4 with the first position most significant.
namespace gsym {
inline constexpr Value k0r = 0;
inline constexpr Value k1r = 1;
inline constexpr Value kr0 = 2;
inline constexpr Value kr1 = 3;
inline constexpr const char* kNames[4] = {"0r", "1r", "r0", "r1"};

// Input symbol alphabet {0,1,r} with order 0 < 1 < r.
inline constexpr int kR = 2;

inline std::string decode(Value v, int n) {
  std::string s;
  for (int i = n - 1; i >= 0; --i) {
    if (!s.empty()) s += '.';
    s += kNames[(v >> (2 * i)) & 3U];
  }
  return s;
}
}  // namespace gsym

// Symbol digits of input index `idx` of {0,1,r}^n (most significant first).
inline std::vector<int> ternary_digits(std::size_t idx, int n) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    d[static_cast<std::size_t>(i)] = static_cast<int>(idx % 3);
    idx /= 3;
  }
  return d;
}

inline std::string ternary_label(std::size_t idx, int n) {
  std::string s;
  for (int d : ternary_digits(idx, n)) s += d == gsym::kR ? 'r' : static_cast<char>('0' + d);
  return s;
}

// g_n over {0,1,r}^n: defined iff at every position exactly one side holds r.
inline ValueTable gen_gn(int n) {
  if (n < 1 || n > 6) throw SizeLimitError("g_n supports 1 <= n <= 6");
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) size *= 3;
  std::vector<std::string> labels;
  std::vector<std::vector<int>> digits;
  for (std::size_t i = 0; i < size; ++i) {
    labels.push_back(ternary_label(i, n));
    digits.push_back(ternary_digits(i, n));
  }
  std::vector<CellValue> cells(size * size);
  for (std::size_t x = 0; x < size; ++x) {
    for (std::size_t y = 0; y < size; ++y) {
      Value v = 0;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        const int a = digits[x][static_cast<std::size_t>(i)];
        const int b = digits[y][static_cast<std::size_t>(i)];
        Value sym = 0;
        if (a != gsym::kR && b == gsym::kR) {
          sym = static_cast<Value>(a);  // "a r"
        } else if (a == gsym::kR && b != gsym::kR) {
          sym = static_cast<Value>(2 + b);  // "r b"
        } else {
          ok = false;
        }
        v = v * 4 + sym;
      }
      if (ok) cells[x * size + y] = v;
    }
  }
  std::vector<std::string> cols = labels;
  return ValueTable(std::move(labels), std::move(cols), std::move(cells));
}

// The 3x3 partial function g; same table as gen_gn(1).
inline ValueTable gen_g3() { return gen_gn(1); }

struct SimpleInputCounts {
  std::uint64_t green = 0;
  std::uint64_t blue = 0;
};

// Counts simple pairs x = {0,1}^k r^(n-k), y = r^m {0,1}^(n-m): green when
// k = m (defined cell), blue when k < m.
inline SimpleInputCounts simple_input_counts(int n) {
  if (n < 1 || n > 14) throw SizeLimitError("simple_input_counts supports 1 <= n <= 14");
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::uint64_t> x_by_prefix(un + 1, 0), y_by_prefix(un + 1, 0);
  for (std::size_t k = 0; k <= un; ++k) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
      const std::string x = (k == 0 ? std::string() : bit_string(bits, static_cast<int>(k))) + std::string(un - k, 'r');
      ++x_by_prefix[x.find('r') == std::string::npos ? un : x.find('r')];
    }
  }
  for (std::size_t m = 0; m <= un; ++m) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << (un - m)); ++bits) {
      const std::string y = std::string(m, 'r') + (m == un ? std::string() : bit_string(bits, static_cast<int>(un - m)));
      ++y_by_prefix[y.find_first_not_of('r') == std::string::npos ? un : y.find_first_not_of('r')];
    }
  }
  SimpleInputCounts out;
  for (std::size_t k = 0; k <= un; ++k) {
    for (std::size_t m = 0; m <= un; ++m) {
      if (k == m) out.green += x_by_prefix[k] * y_by_prefix[m];
      if (k < m) out.blue += x_by_prefix[k] * y_by_prefix[m];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ccmat v1 text format.

inline void write_ccmat(std::ostream& os, const ValueTable& t) {
  auto check_label = [](const std::string& l) {
    if (l.empty() || l.find_first_of("\t\n\r") != std::string::npos) {
      throw FormatError("label '" + l + "' is empty or contains tab/newline");
    }
  };
  os << "ccmat v1 " << t.rows() << ' ' << t.cols() << ' ' << (t.is_total() ? "total" : "partial") << '\n';
  os << "#rowlabels";
  for (const auto& l : t.row_labels()) {
    check_label(l);
    os << '\t' << l;
  }
  os << "\n#collabels";
  for (const auto& l : t.col_labels()) {
    check_label(l);
    os << '\t' << l;
  }
  os << '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (c > 0) os << ' ';
      const auto& v = t.at(r, c);
      if (v) {
        os << *v;
      } else {
        os << '.';
      }
    }
    os << '\n';
  }
}

inline std::string to_ccmat(const ValueTable& t) {
  std::ostringstream os;
  write_ccmat(os, t);
  return os.str();
}

namespace detail {
inline std::vector<std::string> split_tabs(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('\t', start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::size_t parse_size(const std::string& tok, const char* what) {
  std::size_t v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw FormatError(std::string("bad ") + what + " '" + tok + "'");
  return v;
}
}  // namespace detail

inline ValueTable read_ccmat(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("empty ccmat input");
  if (!line.empty() && line.back() == '\r') throw FormatError("CRLF line endings are not allowed");
  std::istringstream header(line);
  std::string magic, version, rs, cs, kind, extra;
  header >> magic >> version >> rs >> cs >> kind;
  if (magic != "ccmat" || version != "v1") throw FormatError("missing 'ccmat v1' header");
  if (header >> extra) throw FormatError("trailing tokens in header");
  if (kind != "total" && kind != "partial") throw FormatError("kind must be total or partial");
  const std::size_t R = detail::parse_size(rs, "row count");
  const std::size_t C = detail::parse_size(cs, "column count");
  if (R == 0 || C == 0) throw FormatError("table needs at least one row and column");

  std::vector<std::string> row_labels, col_labels;
  std::vector<CellValue> cells;
  cells.reserve(R * C);
  std::size_t data_rows = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') throw FormatError("CRLF line endings are not allowed");
    if (line.starts_with("#rowlabels\t") && data_rows == 0) {
      row_labels = detail::split_tabs(std::string_view(line).substr(11));
      continue;
    }
    if (line.starts_with("#collabels\t") && data_rows == 0) {
      col_labels = detail::split_tabs(std::string_view(line).substr(11));
      continue;
    }
    if (line.starts_with("#")) continue;
    std::istringstream row(line);
    std::string tok;
    std::size_t n = 0;
    while (row >> tok) {
      if (tok == ".") {
        cells.emplace_back(std::nullopt);
      } else {
        const auto v = detail::parse_size(tok, "cell value");
        if (v > kMaxValue) throw FormatError("cell value out of range");
        cells.emplace_back(static_cast<Value>(v));
      }
      ++n;
    }
    if (n == 0) {
      if (data_rows < R) throw FormatError("blank line inside data");
      continue;
    }
    if (n != C) throw FormatError("row " + std::to_string(data_rows) + " has " + std::to_string(n) + " cells, want " + std::to_string(C));
    if (++data_rows > R) throw FormatError("more data rows than declared");
  }
  if (data_rows != R) throw FormatError("fewer data rows than declared");
  if (row_labels.empty()) row_labels = ValueTable::index_labels(R);
  if (col_labels.empty()) col_labels = ValueTable::index_labels(C);
  if (row_labels.size() != R || col_labels.size() != C) throw FormatError("label count does not match dimensions");
  ValueTable t(std::move(row_labels), std::move(col_labels), std::move(cells));
  if ((kind == "total") != t.is_total()) throw FormatError("declared kind does not match cell contents");
  return t;
}

inline ValueTable parse_ccmat(const std::string& text) {
  std::istringstream is(text);
  return read_ccmat(is);
}

inline ValueTable load_ccmat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_ccmat(in);
}

inline void save_ccmat(const std::string& path, const ValueTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path);
  write_ccmat(out, t);
  if (!out) throw FormatError("write failed for " + path);
}

}  // namespace ccwb
