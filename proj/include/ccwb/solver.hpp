#pragma once

// Exact classical communication complexity by memoized search over
// rectangle splits, with iterative deepening and witness extraction.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccwb/error.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

enum class SolveMode : std::uint8_t { Total, PartialGlobal, PartialLocal };

inline const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::Total: return "total";
    case SolveMode::PartialGlobal: return "partial-global";
    case SolveMode::PartialLocal: return "partial-local";
  }
  return "?";
}

inline std::optional<SolveMode> parse_solve_mode(const std::string& s) {
  if (s == "total") return SolveMode::Total;
  if (s == "partial-global") return SolveMode::PartialGlobal;
  if (s == "partial-local") return SolveMode::PartialLocal;
  return std::nullopt;
}

inline void check_mode(const ValueTable& t, SolveMode mode) {
  if (mode == SolveMode::Total && !t.is_total()) throw UsageError("mode total requires a total table");
}

inline int ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<int>(std::bit_width(n - 1));
}

// ---------------------------------------------------------------------------
// Rectangle predicates shared with the rectangle-analysis module.

// Two defined cells cannot share a leaf rectangle under `mode`.
inline bool fooling_pair(const ValueTable& t, Cell p, Cell q, SolveMode mode) {
  const auto& a = t.at(p);
  const auto& b = t.at(q);
  const auto& c = t.at(p.row, q.col);
  const auto& d = t.at(q.row, p.col);
  if (mode == SolveMode::PartialLocal) {
    auto clash = [](const CellValue& u, const CellValue& v) { return u && v && *u != *v; };
    // rows p.row, q.row and columns p.col, q.col must each be constant
    return clash(a, c) || clash(d, b) || clash(a, d) || clash(c, b);
  }
  if (mode == SolveMode::Total && (!c || !d)) return true;
  const Value v = *a;
  return *b != v || (c && *c != v) || (d && *d != v);
}

// Greedy fooling set: `seed` cells first (kept only if pairwise fooling),
// then remaining defined cells of the rect in row-major order.
inline std::vector<Cell> greedy_fooling_set(const ValueTable& t, const Rect& r, SolveMode mode,
                                            const std::vector<Cell>& seed = {}) {
  std::vector<Cell> chosen;
  auto try_add = [&](Cell c) {
    if (!r.contains(c) || !t.at(c)) return;
    for (const auto& o : chosen) {
      if (o == c || !fooling_pair(t, o, c, mode)) return;
    }
    chosen.push_back(c);
  };
  for (const auto& c : seed) try_add(c);
  r.rows.for_each([&](std::size_t x) { r.cols.for_each([&](std::size_t y) { try_add({x, y}); }); });
  return chosen;
}

inline int cc_lower_bound(const ValueTable& t, const Rect& r, SolveMode mode, const std::vector<Cell>& seed = {}) {
  validate_rect(t, r);
  check_mode(t, mode);
  int lb = 0;
  if (mode != SolveMode::PartialLocal) {
    std::set<Value> vals;
    r.rows.for_each([&](std::size_t x) {
      r.cols.for_each([&](std::size_t y) {
        if (const auto& v = t.at(x, y)) vals.insert(*v);
      });
    });
    lb = ceil_log2(vals.size());
  }
  return std::max(lb, ceil_log2(greedy_fooling_set(t, r, mode, seed).size()));
}

// ---------------------------------------------------------------------------

struct SolveOptions {
  int max_depth = 16;
  unsigned threads = 1;
  std::size_t memo_cap_bytes = std::size_t{2} << 30;
  bool want_witness = true;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  // Called about once per second with (depth being tried, nodes expanded).
  std::function<void(int, std::uint64_t)> progress;
};

struct SolveStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t memo_entries = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_evictions = 0;
  double wall_ms = 0;
};

enum class SolveStatus : std::uint8_t { Solved, BudgetExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::Solved;
  int depth = -1;          // valid when Solved
  int lower_bound = 0;     // depth where deepening started
  int proven_above = -1;   // largest depth shown infeasible
  std::optional<ClassicalProtocol> witness;
  SolveStats stats;
};

namespace detail {

using Mask = std::uint64_t;

inline Mask low_bits(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

// Memo of per-key depth thresholds: complexity <= true_at and > false_at.
class SolverMemo {
 public:
  struct Entry {
    int true_at = 1 << 20;
    int false_at = -1;
  };

  SolverMemo(std::size_t cap_bytes, unsigned shards) : shards_(std::max(1U, shards)), cap_(cap_bytes / std::max(1U, shards)) {}

  std::optional<Entry> find(const std::string& key) {
    auto& s = shard(key);
    std::lock_guard lock(s.mu);
    auto it = s.map.find(key);
    if (it == s.map.end()) return std::nullopt;
    s.lru.splice(s.lru.begin(), s.lru, it->second.pos);
    hits_.fetch_add(1, std::memory_order_relaxed);
    return it->second.entry;
  }

  void record(const std::string& key, int d, bool ok) {
    auto& s = shard(key);
    std::lock_guard lock(s.mu);
    auto it = s.map.find(key);
    if (it == s.map.end()) {
      s.lru.push_front(key);
      it = s.map.emplace(key, Slot{Entry{}, s.lru.begin()}).first;
      s.bytes += footprint(key);
      while (s.bytes > cap_ && s.lru.size() > 1) {
        const auto& victim = s.lru.back();
        s.bytes -= footprint(victim);
        s.map.erase(victim);
        s.lru.pop_back();
        evictions_.fetch_add(1, std::memory_order_relaxed);
      }
    } else {
      s.lru.splice(s.lru.begin(), s.lru, it->second.pos);
    }
    auto& e = it->second.entry;
    if (ok) {
      e.true_at = std::min(e.true_at, d);
    } else {
      e.false_at = std::max(e.false_at, d);
    }
  }

  std::uint64_t size() {
    std::uint64_t n = 0;
    for (auto& s : shards_) {
      std::lock_guard lock(s.mu);
      n += s.map.size();
    }
    return n;
  }
  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t evictions() const { return evictions_.load(); }

 private:
  struct Slot {
    Entry entry;
    std::list<std::string>::iterator pos;
  };
  struct Shard {
    std::mutex mu;
    std::unordered_map<std::string, Slot> map;
    std::list<std::string> lru;
    std::size_t bytes = 0;
  };

  static std::size_t footprint(const std::string& key) { return 2 * key.size() + 128; }

  Shard& shard(const std::string& key) { return shards_[std::hash<std::string>{}(key) % shards_.size()]; }

  std::vector<Shard> shards_;
  std::size_t cap_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> evictions_{0};
};

struct BudgetExceeded {};

class Engine {
 public:
  static constexpr std::int32_t kUndef = -1;

  Engine(const ValueTable& t, SolveMode mode, const SolveOptions& opts)
      : mode_(mode), opts_(opts), memo_(opts.memo_cap_bytes, opts.threads > 1 ? 64 : 1) {
    check_mode(t, mode);
    dedupe(t);
    if (R_ > 64 || C_ > 64) throw SizeLimitError("solver supports at most 64 distinct rows and 64 distinct columns");
    // Compact value ids.
    std::vector<Value> ids;
    for (std::size_t r = 0; r < R_; ++r) {
      for (std::size_t c = 0; c < C_; ++c) {
        if (const auto& v = t.at(row_rep_[r], col_rep_[c])) ids.push_back(*v);
      }
    }
    std::ranges::sort(ids);
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    values_ = ids;
    V_ = values_.size();
    cell_.assign(R_ * C_, kUndef);
    def_row_.assign(R_, 0);
    def_col_.assign(C_, 0);
    row_val_.assign(R_ * std::max<std::size_t>(V_, 1), 0);
    col_val_.assign(C_ * std::max<std::size_t>(V_, 1), 0);
    for (std::size_t r = 0; r < R_; ++r) {
      for (std::size_t c = 0; c < C_; ++c) {
        if (const auto& v = t.at(row_rep_[r], col_rep_[c])) {
          const auto id = static_cast<std::int32_t>(std::ranges::lower_bound(values_, *v) - values_.begin());
          cell_[r * C_ + c] = id;
          def_row_[r] |= Mask{1} << c;
          def_col_[c] |= Mask{1} << r;
          row_val_[r * V_ + static_cast<std::size_t>(id)] |= Mask{1} << c;
          col_val_[c * V_ + static_cast<std::size_t>(id)] |= Mask{1} << r;
        }
      }
    }
  }

  std::size_t rows() const { return R_; }
  std::size_t cols() const { return C_; }
  Mask all_rows() const { return low_bits(R_); }
  Mask all_cols() const { return low_bits(C_); }

  bool cc_leq(Mask R, Mask C, int d) {
    if (is_leaf(R, C)) return true;
    if (d <= 0) return false;
    if (quick_bound_exceeds(R, C, d)) return false;
    const std::string key = canonical_key(R, C);
    if (auto e = memo_.find(key)) {
      if (d >= e->true_at) return true;
      if (d <= e->false_at) return false;
    }
    tick();
    bool ok = false;
    if (!fooling_exceeds(R, C, d)) {
      ok = for_each_split(R, C, [&](Mask R1, Mask C1, Mask R2, Mask C2) {
        return feasible_child(R1, C1, d - 1) && feasible_child(R2, C2, d - 1) && cc_leq(R1, C1, d - 1) &&
               cc_leq(R2, C2, d - 1);
      });
    }
    memo_.record(key, d, ok);
    return ok;
  }

  // Top level with optional parallel split evaluation.
  bool cc_leq_top(int d) {
    const Mask R = all_rows(), C = all_cols();
    if (opts_.threads <= 1 || is_leaf(R, C) || d <= 0) return cc_leq(R, C, d);
    if (quick_bound_exceeds(R, C, d) || fooling_exceeds(R, C, d)) return false;
    std::vector<std::array<Mask, 4>> splits;
    for_each_split(R, C, [&](Mask R1, Mask C1, Mask R2, Mask C2) {
      splits.push_back({R1, C1, R2, C2});
      return false;
    });
    std::atomic<std::size_t> next{0};
    std::atomic<bool> found{false};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&] {
      try {
        while (!found.load()) {
          const auto i = next.fetch_add(1);
          if (i >= splits.size()) break;
          const auto& s = splits[i];
          if (feasible_child(s[0], s[1], d - 1) && feasible_child(s[2], s[3], d - 1) && cc_leq(s[0], s[1], d - 1) &&
              cc_leq(s[2], s[3], d - 1)) {
            found = true;
          }
        }
      } catch (...) {
        std::lock_guard lock(fail_mu);
        if (!failure) failure = std::current_exception();
        found = true;
      }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < opts_.threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    memo_.record(canonical_key(R, C), d, found.load());
    return found.load();
  }

  // Protocol of depth <= d on the deduplicated table; requires cc_leq(R,C,d).
  std::size_t build_witness(ClassicalProtocol& p, Mask R, Mask C, int d) {
    if (is_leaf(R, C)) return make_leaf(p, R, C);
    std::optional<std::size_t> node;
    for_each_split(R, C, [&](Mask R1, Mask C1, Mask R2, Mask C2) {
      if (!(cc_leq(R1, C1, d - 1) && cc_leq(R2, C2, d - 1))) return false;
      const auto a = build_witness(p, R1, C1, d - 1);
      const auto b = build_witness(p, R2, C2, d - 1);
      const bool by_rows = R1 != R;
      const Mask side1 = by_rows ? R2 : C2;
      std::vector<std::uint8_t> bits(by_rows ? orig_rows_ : orig_cols_, 0);
      const auto& cls = by_rows ? row_class_ : col_class_;
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = static_cast<std::uint8_t>((side1 >> cls[i]) & 1U);
      node = p.add_internal(by_rows ? Owner::Alice : Owner::Bob, std::move(bits), a, b);
      return true;
    });
    if (!node) throw ConstructionError("witness reconstruction failed");
    return *node;
  }

  ClassicalProtocol make_protocol() const {
    return ClassicalProtocol(orig_rows_, orig_cols_, mode_ == SolveMode::PartialLocal ? LeafKind::Local : LeafKind::Global);
  }

  std::uint64_t nodes_expanded() const { return nodes_.load(); }
  SolverMemo& memo() { return memo_; }
  void set_current_depth(int d) { current_depth_ = d; }

  bool is_leaf(Mask R, Mask C) const {
    if (mode_ == SolveMode::PartialLocal) {
      for (Mask m = R; m; m &= m - 1) {
        const auto r = static_cast<std::size_t>(std::countr_zero(m));
        const Mask d = def_row_[r] & C;
        if (!d) continue;
        const auto v = static_cast<std::size_t>(cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(d))]);
        if ((d & ~row_val_[r * V_ + v]) != 0) return false;
      }
      for (Mask m = C; m; m &= m - 1) {
        const auto c = static_cast<std::size_t>(std::countr_zero(m));
        const Mask d = def_col_[c] & R;
        if (!d) continue;
        const auto v = static_cast<std::size_t>(cell_[static_cast<std::size_t>(std::countr_zero(d)) * C_ + c]);
        if ((d & ~col_val_[c * V_ + v]) != 0) return false;
      }
      return true;
    }
    std::int32_t v = kUndef;
    for (Mask m = R; m; m &= m - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(m));
      const Mask d = def_row_[r] & C;
      if (!d) continue;
      if (v == kUndef) v = cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(d))];
      if ((d & ~row_val_[r * V_ + static_cast<std::size_t>(v)]) != 0) return false;
    }
    return true;
  }

 private:
  void check_deadline() const {
    if (opts_.deadline && std::chrono::steady_clock::now() > *opts_.deadline) throw BudgetExceeded{};
  }

  void tick() {
    const auto n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if ((n & 0x3ff) != 0) return;
    const auto now = std::chrono::steady_clock::now();
    if (opts_.deadline && now > *opts_.deadline) throw BudgetExceeded{};
    if (opts_.progress) {
      std::lock_guard lock(progress_mu_);
      if (now - last_progress_ >= std::chrono::seconds(1)) {
        last_progress_ = now;
        opts_.progress(current_depth_, n);
      }
    }
  }

  void dedupe(const ValueTable& t) {
    orig_rows_ = t.rows();
    orig_cols_ = t.cols();
    row_class_.assign(orig_rows_, 0);
    col_class_.assign(orig_cols_, 0);
    for (std::size_t r = 0; r < orig_rows_; ++r) {
      std::size_t k = 0;
      for (; k < row_rep_.size(); ++k) {
        bool same = true;
        for (std::size_t c = 0; c < orig_cols_ && same; ++c) same = t.at(r, c) == t.at(row_rep_[k], c);
        if (same) break;
      }
      if (k == row_rep_.size()) row_rep_.push_back(r);
      row_class_[r] = k;
    }
    for (std::size_t c = 0; c < orig_cols_; ++c) {
      std::size_t k = 0;
      for (; k < col_rep_.size(); ++k) {
        bool same = true;
        for (std::size_t r = 0; r < orig_rows_ && same; ++r) same = t.at(r, c) == t.at(r, col_rep_[k]);
        if (same) break;
      }
      if (k == col_rep_.size()) col_rep_.push_back(c);
      col_class_[c] = k;
    }
    R_ = row_rep_.size();
    C_ = col_rep_.size();
  }

  std::size_t make_leaf(ClassicalProtocol& p, Mask R, Mask C) {
    if (mode_ != SolveMode::PartialLocal) {
      Value v = 0;
      for (Mask m = R; m; m &= m - 1) {
        const auto r = static_cast<std::size_t>(std::countr_zero(m));
        if (const Mask d = def_row_[r] & C) {
          v = values_[static_cast<std::size_t>(cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(d))])];
          break;
        }
      }
      return p.add_global_leaf(v);
    }
    std::vector<Value> out_a(orig_rows_, 0), out_b(orig_cols_, 0);
    for (std::size_t x = 0; x < orig_rows_; ++x) {
      const auto r = row_class_[x];
      const Mask d = def_row_[r] & C;
      if (((R >> r) & 1U) && d) out_a[x] = values_[static_cast<std::size_t>(cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(d))])];
    }
    for (std::size_t y = 0; y < orig_cols_; ++y) {
      const auto c = col_class_[y];
      const Mask d = def_col_[c] & R;
      if (((C >> c) & 1U) && d) out_b[y] = values_[static_cast<std::size_t>(cell_[static_cast<std::size_t>(std::countr_zero(d)) * C_ + c])];
    }
    return p.add_local_leaf(std::move(out_a), std::move(out_b));
  }

  // Classes of identical lines (restricted to the other axis' mask).
  void line_classes(Mask lines, Mask other, bool rows, std::vector<Mask>& out) const {
    out.clear();
    std::vector<std::size_t> reps;
    for (Mask m = lines; m; m &= m - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(m));
      std::size_t k = 0;
      for (; k < reps.size(); ++k) {
        if (same_line(i, reps[k], other, rows)) break;
      }
      if (k == reps.size()) {
        reps.push_back(i);
        out.push_back(0);
      }
      out[k] |= Mask{1} << i;
    }
  }

  bool same_line(std::size_t a, std::size_t b, Mask other, bool rows) const {
    if (rows) {
      if (((def_row_[a] ^ def_row_[b]) & other) != 0) return false;
      for (Mask m = other & def_row_[a]; m; m &= m - 1) {
        const auto c = static_cast<std::size_t>(std::countr_zero(m));
        if (cell_[a * C_ + c] != cell_[b * C_ + c]) return false;
      }
      return true;
    }
    if (((def_col_[a] ^ def_col_[b]) & other) != 0) return false;
    for (Mask m = other & def_col_[a]; m; m &= m - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(m));
      if (cell_[r * C_ + a] != cell_[r * C_ + b]) return false;
    }
    return true;
  }

  // Calls f(R1,C1,R2,C2) for each bipartition until it returns true.
  template <typename F>
  bool for_each_split(Mask R, Mask C, F&& f) {
    std::vector<Mask> rc, cc;
    line_classes(R, C, true, rc);
    line_classes(C, R, false, cc);
    auto axis = [&](const std::vector<Mask>& cls, bool rows) {
      const std::size_t k = cls.size();
      if (k < 2) return false;
      if (k > 40) throw SizeLimitError("too many distinct lines for split enumeration");
      Mask side2 = 0;
      const std::uint64_t count = std::uint64_t{1} << (k - 1);
      for (std::uint64_t i = 1; i < count; ++i) {
        // Gray code step: toggle class (ctz(i) + 1); class 0 stays on side 1.
        side2 ^= cls[static_cast<std::size_t>(std::countr_zero(i)) + 1];
        if ((i & 0xfff) == 0) check_deadline();
        const bool hit = rows ? f(R & ~side2, C, side2, C) : f(R, C & ~side2, R, side2);
        if (hit) return true;
      }
      return false;
    };
    if (rc.size() <= cc.size()) return axis(rc, true) || axis(cc, false);
    return axis(cc, false) || axis(rc, true);
  }

  // Cheap necessary condition for cc(R,C) <= d.
  bool feasible_child(Mask R, Mask C, int d) const { return is_leaf(R, C) || (d > 0 && !quick_bound_exceeds(R, C, d)); }

  // Leaf-count bound exceeds 2^d. Total: sum over values of GF(2) rank of
  // the value's indicator matrix. Global modes: number of distinct values.
  bool quick_bound_exceeds(Mask R, Mask C, int d) const {
    if (mode_ == SolveMode::PartialLocal || d >= 62) return false;
    const std::uint64_t cap = std::uint64_t{1} << d;
    if (mode_ == SolveMode::PartialGlobal) {
      std::uint64_t seen_lo = 0;
      std::vector<char> seen;
      std::uint64_t n = 0;
      for (Mask m = R; m; m &= m - 1) {
        const auto r = static_cast<std::size_t>(std::countr_zero(m));
        for (Mask cm = C & def_row_[r]; cm; cm &= cm - 1) {
          const auto v = static_cast<std::size_t>(cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(cm))]);
          bool fresh = false;
          if (v < 64) {
            fresh = !((seen_lo >> v) & 1U);
            seen_lo |= std::uint64_t{1} << v;
          } else {
            if (seen.empty()) seen.assign(V_, 0);
            fresh = !seen[v];
            seen[v] = 1;
          }
          if (fresh && ++n > cap) return true;
        }
      }
      return false;
    }
    std::uint64_t total = 0;
    Mask todo_vals_rows = R;
    // Enumerate values present via the first row that still shows them.
    std::vector<char> done(V_, 0);
    for (Mask m = todo_vals_rows; m; m &= m - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(m));
      for (Mask cm = C; cm; cm &= cm - 1) {
        const auto v = static_cast<std::size_t>(cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(cm))]);
        if (done[v]) continue;
        done[v] = 1;
        total += static_cast<std::uint64_t>(gf2_rank(R, C, v));
        if (total > cap) return true;
      }
    }
    return false;
  }

  int gf2_rank(Mask R, Mask C, std::size_t v) const {
    Mask basis[64];
    int n = 0;
    for (Mask m = R; m; m &= m - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(m));
      Mask x = row_val_[r * V_ + v] & C;
      for (int i = 0; i < n && x; ++i) x = std::min(x, x ^ basis[i]);
      if (x) {
        basis[n++] = x;
        // keep basis sorted by leading bit (descending) for the min-reduction
        for (int i = n - 1; i > 0 && basis[i] > basis[i - 1]; --i) std::swap(basis[i], basis[i - 1]);
      }
    }
    return n;
  }

  bool fooling_exceeds(Mask R, Mask C, int d) const {
    if (d >= 20) return false;
    const std::size_t cap = std::size_t{1} << d;
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (Mask m = R; m; m &= m - 1) {
      const auto r = static_cast<std::size_t>(std::countr_zero(m));
      for (Mask cm = C & def_row_[r]; cm; cm &= cm - 1) {
        const auto c = static_cast<std::size_t>(std::countr_zero(cm));
        bool ok = true;
        for (const auto& [r2, c2] : chosen) {
          if (!fools(r, c, r2, c2)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          chosen.emplace_back(r, c);
          if (chosen.size() > cap) return true;
        }
      }
    }
    return false;
  }

  bool fools(std::size_t x, std::size_t y, std::size_t u, std::size_t v) const {
    const auto a = cell_[x * C_ + y], b = cell_[u * C_ + v], c = cell_[x * C_ + v], e = cell_[u * C_ + y];
    if (mode_ == SolveMode::PartialLocal) {
      auto clash = [](std::int32_t p, std::int32_t q) { return p != kUndef && q != kUndef && p != q; };
      return clash(a, c) || clash(e, b) || clash(a, e) || clash(c, b);
    }
    return b != a || (c != kUndef && c != a) || (e != kUndef && e != a);
  }

  // Sub-matrix with duplicate lines merged, lines sorted by content and
  // values relabelled by first appearance; equal keys mean isomorphic rects.
  std::string canonical_key(Mask R, Mask C) const {
    std::size_t nr = static_cast<std::size_t>(std::popcount(R));
    std::size_t nc = static_cast<std::size_t>(std::popcount(C));
    std::vector<std::int32_t> a(nr * nc), b;
    {
      std::size_t i = 0;
      for (Mask m = R; m; m &= m - 1) {
        const auto r = static_cast<std::size_t>(std::countr_zero(m));
        for (Mask cm = C; cm; cm &= cm - 1) a[i++] = cell_[r * C_ + static_cast<std::size_t>(std::countr_zero(cm))];
      }
    }
    std::vector<std::int32_t> relabel(V_ + 1);
    auto relabel_pass = [&] {
      std::ranges::fill(relabel, -2);
      std::int32_t next = 0;
      for (auto& x : a) {
        if (x == kUndef) continue;
        auto& slot = relabel[static_cast<std::size_t>(x)];
        if (slot == -2) slot = next++;
        x = slot;
      }
    };
    // Sort and dedupe the rows of the nr x nc matrix `a`.
    auto sort_rows = [&] {
      std::vector<std::size_t> idx(nr);
      for (std::size_t i = 0; i < nr; ++i) idx[i] = i;
      auto cmp = [&](std::size_t p, std::size_t q) {
        return std::lexicographical_compare(a.begin() + static_cast<std::ptrdiff_t>(p * nc),
                                            a.begin() + static_cast<std::ptrdiff_t>((p + 1) * nc),
                                            a.begin() + static_cast<std::ptrdiff_t>(q * nc),
                                            a.begin() + static_cast<std::ptrdiff_t>((q + 1) * nc));
      };
      std::ranges::sort(idx, cmp);
      b.clear();
      for (std::size_t k = 0; k < nr; ++k) {
        if (k > 0 && !cmp(idx[k - 1], idx[k])) continue;
        b.insert(b.end(), a.begin() + static_cast<std::ptrdiff_t>(idx[k] * nc),
                 a.begin() + static_cast<std::ptrdiff_t>((idx[k] + 1) * nc));
      }
      nr = b.size() / nc;
      a.swap(b);
    };
    auto transpose_in_place = [&] {
      b.assign(nr * nc, 0);
      for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) b[j * nr + i] = a[i * nc + j];
      }
      std::swap(nr, nc);
      a.swap(b);
    };
    relabel_pass();
    for (int pass = 0; pass < 2; ++pass) {
      sort_rows();
      transpose_in_place();
      sort_rows();
      transpose_in_place();
      relabel_pass();
    }
    std::string key;
    key.reserve(2 + a.size() * 2);
    key.push_back(static_cast<char>(nr));
    key.push_back(static_cast<char>(nc));
    const bool narrow = V_ < 255;
    for (auto x : a) {
      const auto u = static_cast<std::uint32_t>(x + 1);
      key.push_back(static_cast<char>(u & 0xff));
      if (!narrow) key.push_back(static_cast<char>((u >> 8) & 0xff));
    }
    return key;
  }

  SolveMode mode_;
  SolveOptions opts_;
  SolverMemo memo_;
  std::size_t orig_rows_ = 0, orig_cols_ = 0;
  std::vector<std::size_t> row_rep_, col_rep_, row_class_, col_class_;
  std::size_t R_ = 0, C_ = 0, V_ = 0;
  std::vector<Value> values_;
  std::vector<std::int32_t> cell_;
  std::vector<Mask> def_row_, def_col_, row_val_, col_val_;
  std::atomic<std::uint64_t> nodes_{0};
  std::mutex progress_mu_;
  std::chrono::steady_clock::time_point last_progress_ = std::chrono::steady_clock::now();
  int current_depth_ = 0;
};

inline SolveStats collect_stats(Engine& e, std::chrono::steady_clock::time_point start) {
  SolveStats s;
  s.nodes_expanded = e.nodes_expanded();
  s.memo_entries = e.memo().size();
  s.memo_hits = e.memo().hits();
  s.memo_evictions = e.memo().evictions();
  s.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return s;
}

}  // namespace detail

// Whether the whole table has a protocol of depth <= d (witness on success).
inline std::pair<bool, std::optional<ClassicalProtocol>> cc_leq(const ValueTable& t, const Rect& r, int d, SolveMode mode,
                                                                SolveOptions opts = {}) {
  validate_rect(t, r);
  const ValueTable sub = restrict(t, r);
  detail::Engine e(sub, mode, opts);
  if (!e.cc_leq_top(d)) return {false, std::nullopt};
  if (!opts.want_witness) return {true, std::nullopt};
  auto p = e.make_protocol();
  p.set_root(e.build_witness(p, e.all_rows(), e.all_cols(), d));
  return {true, std::move(p)};
}

inline SolveResult cc_exact(const ValueTable& t, SolveMode mode, SolveOptions opts = {}) {
  if (opts.max_depth < 0) throw UsageError("max depth must be non-negative");
  const auto start = std::chrono::steady_clock::now();
  detail::Engine e(t, mode, opts);
  SolveResult res;
  res.lower_bound = std::min(cc_lower_bound(t, Rect::full(t), mode), opts.max_depth + 1);
  res.proven_above = res.lower_bound - 1;
  try {
    for (int d = res.lower_bound; d <= opts.max_depth; ++d) {
      e.set_current_depth(d);
      if (e.cc_leq_top(d)) {
        res.depth = d;
        if (opts.want_witness) {
          auto p = e.make_protocol();
          p.set_root(e.build_witness(p, e.all_rows(), e.all_cols(), d));
          res.witness = std::move(p);
        }
        res.stats = detail::collect_stats(e, start);
        return res;
      }
      res.proven_above = d;
    }
  } catch (const detail::BudgetExceeded&) {
  }
  res.status = SolveStatus::BudgetExceeded;
  res.stats = detail::collect_stats(e, start);
  return res;
}

}  // namespace ccwb
