#pragma once

// Verifiers for monochromatic rectangles, fooling sets, fooling-rectangle
// families, adjacency graphs and their expansion, partitions, and the
// bipartition lower-bound certificate.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccwb/error.hpp"
#include "ccwb/solver.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

inline bool is_mono(const ValueTable& t, const Rect& r, SolveMode mode) {
  validate_rect(t, r);
  const auto rows = r.rows.indices();
  const auto cols = r.cols.indices();
  if (mode == SolveMode::PartialLocal) {
    for (auto x : rows) {
      CellValue first;
      for (auto y : cols) {
        const auto& v = t.at(x, y);
        if (!v) continue;
        if (first && *first != *v) return false;
        first = v;
      }
    }
    for (auto y : cols) {
      CellValue first;
      for (auto x : rows) {
        const auto& v = t.at(x, y);
        if (!v) continue;
        if (first && *first != *v) return false;
        first = v;
      }
    }
    return true;
  }
  CellValue first;
  for (auto x : rows) {
    for (auto y : cols) {
      const auto& v = t.at(x, y);
      if (!v) {
        if (mode == SolveMode::Total) return false;
        continue;
      }
      if (first && *first != *v) return false;
      first = v;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Fooling sets.

struct ViolatingPair {
  Cell a;
  Cell b;
};

inline SolveMode default_mode(const ValueTable& t) { return t.is_total() ? SolveMode::Total : SolveMode::PartialGlobal; }

inline std::optional<ViolatingPair> check_fooling_set(const ValueTable& t, const std::vector<Cell>& cells,
                                                      std::optional<SolveMode> mode = std::nullopt) {
  const SolveMode m = mode.value_or(default_mode(t));
  for (const auto& c : cells) {
    if (c.row >= t.rows() || c.col >= t.cols()) throw InvalidRectError("fooling cell out of range");
    if (!t.at(c)) throw UsageError("fooling set contains an undefined cell");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i] == cells[j] || !fooling_pair(t, cells[i], cells[j], m)) return ViolatingPair{cells[i], cells[j]};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fooling-rectangle families.

struct NamedRect {
  std::string name;
  Rect rect;
  CellValue value;
};

struct FoolingFamily {
  std::string id;
  std::vector<NamedRect> rects;

  std::size_t size() const { return rects.size(); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& r : rects) out.push_back(r.name);
    return out;
  }
  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < rects.size(); ++i) {
      if (rects[i].name == name) return i;
    }
    return std::nullopt;
  }
};

enum class FamilyViolationKind { Empty, Value, Overlap, Constant2x2 };

struct FamilyViolation {
  FamilyViolationKind kind = FamilyViolationKind::Value;
  std::size_t rect_a = 0;
  std::size_t rect_b = 0;
  Cell cell_a;
  Cell cell_b;
  std::string message;
};

struct FamilyCheck {
  std::optional<FamilyViolation> violation;  // nullopt = Ok
  std::size_t cells = 0;
  std::uint64_t pairs_checked = 0;
  bool ok() const { return !violation; }
};

inline FamilyCheck verify_fooling_family(const ValueTable& t, const FoolingFamily& f) {
  FamilyCheck out;
  struct Owned {
    Cell cell;
    std::size_t rect;
  };
  std::vector<Owned> cells;
  std::vector<std::int64_t> owner(t.rows() * t.cols(), -1);
  for (std::size_t k = 0; k < f.rects.size(); ++k) {
    const auto& nr = f.rects[k];
    if (nr.rect.rows.size() != t.rows() || nr.rect.cols.size() != t.cols()) {
      throw InvalidRectError("rect " + nr.name + " does not fit the host table");
    }
    if (nr.rect.rows.none() || nr.rect.cols.none()) {
      out.violation = FamilyViolation{FamilyViolationKind::Empty, k, k, {}, {}, "rect " + nr.name + " is empty"};
      return out;
    }
    for (auto x : nr.rect.rows.indices()) {
      for (auto y : nr.rect.cols.indices()) {
        const Cell c{x, y};
        if (t.at(c) != nr.value) {
          out.violation = FamilyViolation{FamilyViolationKind::Value, k, k, c, c,
                                          "rect " + nr.name + " has a cell (" + std::to_string(x) + "," +
                                              std::to_string(y) + ") differing from its declared value"};
          return out;
        }
        auto& o = owner[x * t.cols() + y];
        if (o >= 0) {
          const auto other = static_cast<std::size_t>(o);
          out.violation = FamilyViolation{FamilyViolationKind::Overlap, other, k, c, c,
                                          "rects " + f.rects[other].name + " and " + nr.name + " overlap"};
          return out;
        }
        o = static_cast<std::int64_t>(k);
        cells.push_back({c, k});
      }
    }
  }
  out.cells = cells.size();
  const SolveMode m = default_mode(t);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i].rect == cells[j].rect) continue;
      ++out.pairs_checked;
      if (!fooling_pair(t, cells[i].cell, cells[j].cell, m)) {
        const auto& a = f.rects[cells[i].rect];
        const auto& b = f.rects[cells[j].rect];
        out.violation = FamilyViolation{FamilyViolationKind::Constant2x2, cells[i].rect, cells[j].rect, cells[i].cell,
                                        cells[j].cell, "cells of " + a.name + " and " + b.name + " span a constant minor"};
        return out;
      }
    }
  }
  return out;
}

// Family rects intersected with an ordered sub-selection of the host.
inline FoolingFamily restrict_family(const FoolingFamily& f, const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& cols, std::string id) {
  FoolingFamily out{std::move(id), {}};
  for (const auto& nr : f.rects) {
    Rect r{DynamicBitset(rows.size()), DynamicBitset(cols.size())};
    for (std::size_t i = 0; i < rows.size(); ++i) r.rows.set(i, nr.rect.rows.test(rows[i]));
    for (std::size_t j = 0; j < cols.size(); ++j) r.cols.set(j, nr.rect.cols.test(cols[j]));
    out.rects.push_back({nr.name, std::move(r), nr.value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Adjacency graphs (at most 64 vertices, self-loops included).

enum class Axis { Horizontal, Vertical };

struct AdjacencyGraph {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> adj;

  std::size_t size() const { return labels.size(); }
  bool edge(std::size_t a, std::size_t b) const { return (adj[a] >> b) & 1U; }
  std::uint64_t neighbours(std::uint64_t set) const {
    std::uint64_t u = 0;
    for (auto m = set; m; m &= m - 1) u |= adj[static_cast<std::size_t>(std::countr_zero(m))];
    return u;
  }
  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == name) return i;
    }
    throw UsageError("no vertex named " + name);
  }
  std::uint64_t mask(const std::vector<std::string>& names) const {
    std::uint64_t m = 0;
    for (const auto& n : names) m |= std::uint64_t{1} << index(n);
    return m;
  }
  std::vector<std::string> names(std::uint64_t m) const {
    std::vector<std::string> out;
    for (; m; m &= m - 1) out.push_back(labels[static_cast<std::size_t>(std::countr_zero(m))]);
    return out;
  }

  // Connected components of the graph with `removed` vertices deleted.
  std::vector<std::uint64_t> components(std::uint64_t removed = 0) const {
    std::vector<std::uint64_t> out;
    const std::uint64_t all = (size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1) & ~removed;
    std::uint64_t seen = 0;
    for (std::uint64_t rest = all; rest; rest = all & ~seen) {
      std::uint64_t comp = rest & (~rest + 1);
      while (true) {
        const std::uint64_t grown = (comp | neighbours(comp)) & all;
        if (grown == comp) break;
        comp = grown;
      }
      seen |= comp;
      out.push_back(comp);
    }
    return out;
  }
};

inline AdjacencyGraph build_adjacency(const FoolingFamily& f, Axis axis) {
  if (f.size() > 64) throw SizeLimitError("adjacency graphs support at most 64 rects");
  AdjacencyGraph g;
  g.labels = f.names();
  g.adj.assign(f.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto& a = axis == Axis::Horizontal ? f.rects[i].rect.rows : f.rects[i].rect.cols;
      const auto& b = axis == Axis::Horizontal ? f.rects[j].rect.rows : f.rects[j].rect.cols;
      if (i == j || a.intersects(b)) g.adj[i] |= std::uint64_t{1} << j;
    }
  }
  return g;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct ExpansionResult {
  bool ok = true;
  std::optional<std::uint64_t> witness;  // k-subset with fewer than t neighbours
  std::size_t witness_neighbours = 0;
  std::vector<std::uint64_t> witnesses;  // all found, up to the requested limit
  std::uint64_t covered = 0;   // k-subsets accounted for (== C(n,k) when complete)
  std::uint64_t visited = 0;   // subsets and prefixes actually expanded
  std::uint64_t total = 0;     // C(n,k)
};

// Every k-subset must have at least t neighbours (selves included). A prefix
// whose union already has t vertices is counted wholesale.
inline ExpansionResult check_expansion(const AdjacencyGraph& g, std::size_t k, std::size_t t,
                                       const std::function<void(std::uint64_t, std::uint64_t)>& progress = {},
                                       std::size_t max_witnesses = 1) {
  const std::size_t n = g.size();
  if (k > n) throw UsageError("k exceeds the number of vertices");
  ExpansionResult res;
  res.total = binomial(n, k);
  auto last = std::chrono::steady_clock::now();
  // Depth-first over increasing vertex sequences; stops after max_witnesses.
  std::vector<std::uint64_t> unions(k + 1, 0);
  std::vector<std::size_t> pick(k + 1, 0);
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start, std::uint64_t chosen) -> bool {
    const std::uint64_t u = unions[depth];
    if (static_cast<std::size_t>(std::popcount(u)) >= t) {
      res.covered += binomial(n - start, k - depth);
      return false;
    }
    if (depth == k) {
      res.covered += 1;
      const auto nb = static_cast<std::size_t>(std::popcount(u));
      if (res.ok || nb < res.witness_neighbours) {
        res.witness = chosen;
        res.witness_neighbours = nb;
      }
      res.ok = false;
      res.witnesses.push_back(chosen);
      return res.witnesses.size() >= max_witnesses;
    }
    ++res.visited;
    if (progress && (res.visited & 0xfffff) == 0) {
      const auto now = std::chrono::steady_clock::now();
      if (now - last >= std::chrono::seconds(1)) {
        last = now;
        progress(res.covered, res.total);
      }
    }
    for (std::size_t v = start; v + (k - depth) <= n; ++v) {
      unions[depth + 1] = u | g.adj[v];
      if (self(self, depth + 1, v + 1, chosen | (std::uint64_t{1} << v))) return true;
    }
    return false;
  };
  rec(rec, 0, 0, 0);
  return res;
}

struct GammaRow {
  std::size_t n = 0;
  std::size_t inner = 0;      // min neighbours inside the component
  std::size_t with_hub = 0;   // same, counting the hub when adjacent
};

inline std::vector<GammaRow> gamma_table(const AdjacencyGraph& g, std::uint64_t component,
                                         std::optional<std::size_t> hub) {
  const int c = std::popcount(component);
  if (c > 12) throw SizeLimitError("gamma_table enumerates components of at most 12 vertices");
  std::vector<std::size_t> verts;
  for (auto m = component; m; m &= m - 1) verts.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  const std::uint64_t hub_bit = hub ? std::uint64_t{1} << *hub : 0;
  std::vector<GammaRow> rows(static_cast<std::size_t>(c) + 1);
  for (std::size_t n = 0; n <= static_cast<std::size_t>(c); ++n) rows[n] = {n, SIZE_MAX, SIZE_MAX};
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << c); ++s) {
    std::uint64_t set = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if ((s >> i) & 1U) set |= std::uint64_t{1} << verts[i];
    }
    const auto nb = g.neighbours(set);
    auto& row = rows[static_cast<std::size_t>(std::popcount(s))];
    row.inner = std::min<std::size_t>(row.inner, static_cast<std::size_t>(std::popcount(nb & component)));
    row.with_hub = std::min<std::size_t>(row.with_hub, static_cast<std::size_t>(std::popcount(nb & (component | hub_bit))));
  }
  rows.erase(rows.begin());
  return rows;
}

// ---------------------------------------------------------------------------
// Bipartition certificate: for every split of the axis' lines into two
// parts, one part meets at least `threshold` rects of the family.

struct Certificate {
  std::string family;
  Axis axis = Axis::Horizontal;
  std::size_t threshold = 0;
  bool family_ok = false;
  std::string family_message;
  bool bipartition_ok = false;
  std::uint64_t bipartitions_checked = 0;
  std::optional<std::uint64_t> failing_part;  // line mask of one side of a bad split
  std::optional<int> bound;                   // 1 + ceil(log2 threshold) when both checks pass
};

inline Certificate bipartition_certificate(const ValueTable& t, const FoolingFamily& f, Axis axis, std::size_t threshold) {
  Certificate cert;
  cert.family = f.id;
  cert.axis = axis;
  cert.threshold = threshold;
  const auto check = verify_fooling_family(t, f);
  cert.family_ok = check.ok();
  cert.family_message = check.ok() ? "ok" : check.violation->message;
  if (!cert.family_ok) return cert;
  if (f.size() > 64) throw SizeLimitError("certificate supports at most 64 rects");

  const std::size_t L = axis == Axis::Horizontal ? t.rows() : t.cols();
  if (L > 40) throw SizeLimitError("certificate supports at most 40 lines");
  std::vector<std::uint64_t> meets(L, 0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& lines = axis == Axis::Horizontal ? f.rects[k].rect.rows : f.rects[k].rect.cols;
    lines.for_each([&](std::size_t i) { meets[i] |= std::uint64_t{1} << k; });
  }
  // Halves: lines [0, h1) and [h1, L); line 0 always lies in part W.
  const std::size_t h1 = (L + 1) / 2;
  const std::size_t h2 = L - h1;
  auto unions = [&](std::size_t off, std::size_t len) {
    std::vector<std::uint64_t> u(std::size_t{1} << len, 0);
    for (std::size_t s = 1; s < u.size(); ++s) {
      const auto low = static_cast<std::size_t>(std::countr_zero(s));
      u[s] = u[s & (s - 1)] | meets[off + low];
    }
    return u;
  };
  const auto u1 = unions(0, h1);
  const auto u2 = unions(h1, h2);
  const std::size_t full1 = u1.size() - 1, full2 = u2.size() - 1;
  cert.bipartition_ok = true;
  if (L >= 2) {
    for (std::size_t s1 = 1; s1 <= full1 && cert.bipartition_ok; s1 += 2) {
      const auto a1 = u1[s1], b1 = u1[full1 & ~s1];
      for (std::size_t s2 = 0; s2 <= full2; ++s2) {
        if (s1 == full1 && s2 == full2) continue;  // V would be empty
        ++cert.bipartitions_checked;
        const auto w = static_cast<std::size_t>(std::popcount(a1 | u2[s2]));
        const auto v = static_cast<std::size_t>(std::popcount(b1 | u2[full2 & ~s2]));
        if (std::max(w, v) < threshold) {
          cert.bipartition_ok = false;
          cert.failing_part = static_cast<std::uint64_t>(s1) | (static_cast<std::uint64_t>(s2) << h1);
          break;
        }
      }
    }
  }
  if (cert.bipartition_ok) cert.bound = 1 + ceil_log2(threshold);
  return cert;
}

// ---------------------------------------------------------------------------
// Partitions.

enum class PartitionViolationKind { Overlap, Uncovered, NotMono, BadRect };

struct PartitionViolation {
  PartitionViolationKind kind;
  std::size_t rect = 0;
  Cell cell;
  std::string message;
};

inline std::optional<PartitionViolation> verify_partition(const ValueTable& t, const std::vector<Rect>& rects,
                                                          SolveMode mode) {
  std::vector<std::int64_t> owner(t.rows() * t.cols(), -1);
  for (std::size_t k = 0; k < rects.size(); ++k) {
    const auto& r = rects[k];
    try {
      validate_rect(t, r);
    } catch (const InvalidRectError& e) {
      return PartitionViolation{PartitionViolationKind::BadRect, k, {}, e.what()};
    }
    if (!is_mono(t, r, mode)) {
      return PartitionViolation{PartitionViolationKind::NotMono, k, {}, "rect " + std::to_string(k) + " is not monochromatic"};
    }
    for (auto x : r.rows.indices()) {
      for (auto y : r.cols.indices()) {
        auto& o = owner[x * t.cols() + y];
        if (o >= 0) {
          return PartitionViolation{PartitionViolationKind::Overlap, k, {x, y},
                                    "rects " + std::to_string(o) + " and " + std::to_string(k) + " overlap"};
        }
        o = static_cast<std::int64_t>(k);
      }
    }
  }
  for (std::size_t x = 0; x < t.rows(); ++x) {
    for (std::size_t y = 0; y < t.cols(); ++y) {
      if (owner[x * t.cols() + y] < 0) {
        return PartitionViolation{PartitionViolationKind::Uncovered, 0, {x, y},
                                  "cell (" + std::to_string(x) + "," + std::to_string(y) + ") is not covered"};
      }
    }
  }
  return std::nullopt;
}

struct RectPartition {
  std::size_t count = 0;
  std::vector<Rect> rects;
  std::uint64_t nodes = 0;
};

// Exact minimum number of single-valued rects (inside `cells`) partitioning
// `cells`. Branch and bound over the first uncovered cell in row-major order.
inline RectPartition min_rect_partition(const ValueTable& t, const std::vector<Cell>& cells, std::size_t cap = 64) {
  if (cells.size() > std::min<std::size_t>(cap, 64)) throw SizeLimitError("min_rect_partition handles at most 64 cells");
  RectPartition out;
  if (cells.empty()) return out;
  std::vector<Cell> cs = cells;
  std::ranges::sort(cs);
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  const std::size_t n = cs.size();
  for (const auto& c : cs) {
    if (c.row >= t.rows() || c.col >= t.cols()) throw InvalidRectError("cell out of range");
    if (!t.at(c)) throw UsageError("min_rect_partition needs defined cells");
  }
  // Compact rows/cols; cell id by (row, col).
  std::vector<std::size_t> rows, cols;
  for (const auto& c : cs) {
    rows.push_back(c.row);
    cols.push_back(c.col);
  }
  std::ranges::sort(rows);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::ranges::sort(cols);
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  const std::size_t nr = rows.size(), nc = cols.size();
  std::vector<int> id(nr * nc, -1);
  std::vector<std::size_t> cr(n), cc(n);
  std::vector<Value> val(n);
  for (std::size_t i = 0; i < n; ++i) {
    cr[i] = static_cast<std::size_t>(std::ranges::lower_bound(rows, cs[i].row) - rows.begin());
    cc[i] = static_cast<std::size_t>(std::ranges::lower_bound(cols, cs[i].col) - cols.begin());
    id[cr[i] * nc + cc[i]] = static_cast<int>(i);
    val[i] = *t.at(cs[i]);
  }
  using M = std::uint64_t;
  const M all = n == 64 ? ~M{0} : (M{1} << n) - 1;

  // Lower bound: per value, GF(2) rank of the free cells' indicator matrix.
  auto lower_bound = [&](M free) {
    std::size_t total = 0;
    M todo = free;
    while (todo) {
      const auto v = val[static_cast<std::size_t>(std::countr_zero(todo))];
      M same = 0;
      for (M m = todo; m; m &= m - 1) {
        const auto i = static_cast<std::size_t>(std::countr_zero(m));
        if (val[i] == v) same |= M{1} << i;
      }
      todo &= ~same;
      std::vector<M> basis;
      for (std::size_t r = 0; r < nr; ++r) {
        M x = 0;
        for (std::size_t c = 0; c < nc; ++c) {
          const int i = id[r * nc + c];
          if (i >= 0 && ((same >> i) & 1U)) x |= M{1} << c;
        }
        for (auto b : basis) x = std::min(x, x ^ b);
        if (x) {
          basis.push_back(x);
          std::ranges::sort(basis, std::greater<>());
        }
      }
      total += basis.size();
    }
    return total;
  };

  // Rects (as cell masks) containing cell p, inside `free`, same value.
  auto rects_at = [&](std::size_t p, M free, auto&& visit) {
    const auto r0 = cr[p];
    const auto v = val[p];
    auto ok = [&](std::size_t r, std::size_t c) {
      const int i = id[r * nc + c];
      return i >= 0 && ((free >> i) & 1U) && val[static_cast<std::size_t>(i)] == v;
    };
    std::vector<std::size_t> avail_cols;
    for (std::size_t c = cc[p] + 1; c < nc; ++c) {
      if (ok(r0, c)) avail_cols.push_back(c);
    }
    const std::size_t ka = avail_cols.size();
    for (std::uint64_t cs_mask = 0; cs_mask < (std::uint64_t{1} << ka); ++cs_mask) {
      std::vector<std::size_t> colset{cc[p]};
      for (std::size_t i = 0; i < ka; ++i) {
        if ((cs_mask >> i) & 1U) colset.push_back(avail_cols[i]);
      }
      std::vector<std::size_t> avail_rows;
      for (std::size_t r = r0 + 1; r < nr; ++r) {
        bool all_ok = true;
        for (auto c : colset) all_ok = all_ok && ok(r, c);
        if (all_ok) avail_rows.push_back(r);
      }
      const std::size_t kr = avail_rows.size();
      for (std::uint64_t rs_mask = 0; rs_mask < (std::uint64_t{1} << kr); ++rs_mask) {
        M cellsm = 0;
        auto add_row = [&](std::size_t r) {
          for (auto c : colset) cellsm |= M{1} << id[r * nc + c];
        };
        add_row(r0);
        for (std::size_t i = 0; i < kr; ++i) {
          if ((rs_mask >> i) & 1U) add_row(avail_rows[i]);
        }
        visit(cellsm);
      }
    }
  };

  // Greedy upper bound: repeatedly take the largest rect at the first free cell.
  std::vector<M> best_rects;
  {
    M free = all;
    while (free) {
      const auto p = static_cast<std::size_t>(std::countr_zero(free));
      M best = 0;
      rects_at(p, free, [&](M r) {
        if (std::popcount(r) > std::popcount(best)) best = r;
      });
      best_rects.push_back(best);
      free &= ~best;
    }
  }
  std::vector<M> cur;
  auto search = [&](auto&& self, M free) -> void {
    ++out.nodes;
    if (!free) {
      if (cur.size() < best_rects.size()) best_rects = cur;
      return;
    }
    if (cur.size() + lower_bound(free) >= best_rects.size()) return;
    const auto p = static_cast<std::size_t>(std::countr_zero(free));
    std::vector<M> options;
    rects_at(p, free, [&](M r) { options.push_back(r); });
    std::ranges::sort(options, [](M a, M b) { return std::popcount(a) > std::popcount(b); });
    for (auto r : options) {
      cur.push_back(r);
      self(self, free & ~r);
      cur.pop_back();
    }
  };
  search(search, all);

  for (auto m : best_rects) {
    Rect r{DynamicBitset(t.rows()), DynamicBitset(t.cols())};
    for (; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      r.rows.set(cs[i].row);
      r.cols.set(cs[i].col);
    }
    out.rects.push_back(std::move(r));
  }
  out.count = out.rects.size();
  return out;
}

}  // namespace ccwb
