#pragma once

// Builders for the concrete protocols, functions and rectangle families:
// g and g_n, the 3-round function f4 and its powers, the 5-round protocol
// Pi with its matrices U and M, and the two fooling-rectangle families.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccwb/error.hpp"
#include "ccwb/half_duplex.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/rectangles.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

using StrategyPair = std::pair<HalfDuplexStrategy, HalfDuplexStrategy>;

// ---------------------------------------------------------------------------
// g and g_n.

// One round: a player holding 0/1 sends it, a player holding r receives.
inline StrategyPair g3_strategies() {
  TableStrategyBuilder alice(1, 3), bob(1, 3);
  for (int b = 0; b < 2; ++b) {
    const auto in = static_cast<std::size_t>(b);
    const Event sent = b ? Event::Sent1 : Event::Sent0;
    const Event recv = b ? Event::Recv1 : Event::Recv0;
    alice.set_action(in, {}, send(b));
    alice.set_output(in, History{}.with(sent), static_cast<Value>(b));       // "b r"
    alice.set_output(2, History{}.with(recv), static_cast<Value>(2 + b));    // "r b"
    bob.set_action(in, {}, send(b));
    bob.set_output(in, History{}.with(sent), static_cast<Value>(2 + b));     // "r b"
    bob.set_output(2, History{}.with(recv), static_cast<Value>(b));          // "b r"
  }
  alice.set_action(2, {}, Action::Receive);
  bob.set_action(2, {}, Action::Receive);
  return {alice.build(), bob.build()};
}

// Round i: send the i-th symbol unless it is r, in which case receive.
inline StrategyPair gn_strategies(int n) {
  if (n < 1 || n > 6) throw SizeLimitError("g_n strategies support 1 <= n <= 6");
  auto make = [n](bool is_alice) {
    HalfDuplexStrategy s;
    s.rounds = n;
    s.inputs = static_cast<std::size_t>(std::pow(3, n));
    s.action = [n](std::size_t input, const History& h) -> std::optional<Action> {
      const int d = ternary_digits(input, n)[static_cast<std::size_t>(h.size())];
      return d == gsym::kR ? Action::Receive : send(d);
    };
    s.output = [n, is_alice](std::size_t, const History& h) -> std::optional<Value> {
      Value v = 0;
      for (int i = 0; i < n; ++i) {
        const bool sent = is_send(h[i]);
        const Value b = static_cast<Value>(h.bit(i));
        // Alice sending b means "b r"; Bob sending b means "r b".
        v = v * 4 + ((sent == is_alice) ? b : 2 + b);
      }
      return v;
    };
    return s;
  };
  return {make(true), make(false)};
}

// Local protocol: Alice sends her count k of r's, then her n-k bits; Bob
// replies with his k bits. Depth n + ceil(log2(n+1)).
inline ClassicalProtocol gn_local_protocol(int n) {
  if (n < 1 || n > 6) throw SizeLimitError("g_n local protocol supports 1 <= n <= 6");
  const std::size_t size = static_cast<std::size_t>(std::pow(3, n));
  const int kbits = ceil_log2(static_cast<std::uint64_t>(n) + 1);
  std::vector<std::vector<int>> digits(size);
  for (std::size_t i = 0; i < size; ++i) digits[i] = ternary_digits(i, n);
  auto count_r = [&](std::size_t i) { return static_cast<int>(std::ranges::count(digits[i], gsym::kR)); };
  // j-th non-r symbol of input i, or 0 when there are fewer.
  auto plain_bit = [&](std::size_t i, int j) -> std::uint8_t {
    for (int d : digits[i]) {
      if (d != gsym::kR && j-- == 0) return static_cast<std::uint8_t>(d);
    }
    return 0;
  };
  ClassicalProtocol p(size, size, LeafKind::Local);
  // `sent` holds the transcript so far.
  auto build = [&](auto&& self, std::vector<std::uint8_t>& sent) -> std::size_t {
    const int len = static_cast<int>(sent.size());
    int k = 0;
    for (int i = 0; i < std::min(len, kbits); ++i) k = 2 * k + sent[static_cast<std::size_t>(i)];
    k = std::min(k, n);
    const int a_end = kbits + (n - k);
    if (len >= kbits && len == a_end + k) {
      const std::vector<std::uint8_t> alice_bits(sent.begin() + kbits, sent.begin() + a_end);
      const std::vector<std::uint8_t> bob_bits(sent.begin() + a_end, sent.end());
      std::vector<Value> out_a(size), out_b(size);
      for (std::size_t i = 0; i < size; ++i) {
        Value va = 0, vb = 0;
        std::size_t ja = 0, jb = 0;
        for (int d : digits[i]) {
          // Alice's view of her input i; Bob's view of his input i.
          if (d != gsym::kR) {
            va = va * 4 + static_cast<Value>(d);
            vb = vb * 4 + 2 + static_cast<Value>(d);
          } else {
            va = va * 4 + 2 + (ja < bob_bits.size() ? bob_bits[ja++] : 0);
            vb = vb * 4 + (jb < alice_bits.size() ? alice_bits[jb++] : 0);
          }
        }
        out_a[i] = va;
        out_b[i] = vb;
      }
      return p.add_local_leaf(std::move(out_a), std::move(out_b));
    }
    std::vector<std::uint8_t> bits(size);
    Owner owner = Owner::Alice;
    if (len < kbits) {
      for (std::size_t i = 0; i < size; ++i) bits[i] = static_cast<std::uint8_t>((count_r(i) >> (kbits - 1 - len)) & 1);
    } else if (len < a_end) {
      for (std::size_t i = 0; i < size; ++i) bits[i] = plain_bit(i, len - kbits);
    } else {
      owner = Owner::Bob;
      for (std::size_t i = 0; i < size; ++i) bits[i] = plain_bit(i, len - a_end);
    }
    sent.push_back(0);
    const auto c0 = self(self, sent);
    sent.back() = 1;
    const auto c1 = self(self, sent);
    sent.pop_back();
    return p.add_internal(owner, std::move(bits), c0, c1);
  };
  std::vector<std::uint8_t> sent;
  p.set_root(build(build, sent));
  return p;
}

struct CountingBound {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  double value = 0;
  double log2_value = 0;
  std::string asymptotic = ">= n*2^n/3*(1+o(1))";
};

// (n+1)^2 2^(2n) / ((3n-1) 2^n + 2), left unreduced.
inline CountingBound counting_lower_bound(int n) {
  if (n < 1 || n > 20) throw SizeLimitError("counting bound supports 1 <= n <= 20");
  CountingBound b;
  const auto un = static_cast<std::uint64_t>(n);
  b.numerator = (un + 1) * (un + 1) << (2 * un);
  b.denominator = ((3 * un - 1) << un) + 2;
  b.value = static_cast<double>(b.numerator) / static_cast<double>(b.denominator);
  b.log2_value = std::log2(b.value);
  return b;
}

// ---------------------------------------------------------------------------
// f4: X = Y = {r, 00, 01, 10, 11}.

inline const std::vector<std::string>& f4_labels() {
  static const std::vector<std::string> l{"r", "00", "01", "10", "11"};
  return l;
}

inline ValueTable f4_table() {
  const std::vector<CellValue> cells{0, 0, 2, 1, 0,  //
                                     0, 0, 2, 0, 2,  //
                                     1, 1, 0, 1, 0,  //
                                     2, 0, 2, 0, 2,  //
                                     0, 1, 0, 1, 0};
  return ValueTable(f4_labels(), f4_labels(), cells);
}

// Round 1: send the first bit, or receive on r. Round 2 Bob sends, round 3
// Alice sends: the bit received in round 1 if any, else the second bit.
// Output: 2-3 transcript with 00 and 11 identified.
inline StrategyPair f4_strategies() {
  auto make = [](bool is_alice) {
    HalfDuplexStrategy s;
    s.rounds = 3;
    s.inputs = 5;
    s.action = [is_alice](std::size_t in, const History& h) -> std::optional<Action> {
      const int first = in == 0 ? -1 : static_cast<int>((in - 1) >> 1);
      const int second = in == 0 ? -1 : static_cast<int>((in - 1) & 1);
      switch (h.size()) {
        case 0: return first < 0 ? Action::Receive : send(first);
        case 1:
        case 2: {
          const bool my_turn = (h.size() == 1) != is_alice;
          if (!my_turn) return Action::Receive;
          return send(is_send(h[0]) ? second : h.bit(0));
        }
        default: return std::nullopt;
      }
    };
    s.output = [](std::size_t, const History& h) -> std::optional<Value> {
      const Value t = static_cast<Value>(2 * h.bit(1) + h.bit(2));
      return t == 3 ? 0 : t;
    };
    return s;
  };
  return {make(true), make(false)};
}

inline std::vector<Cell> f4_fooling10() {
  return {{0, 2}, {0, 3}, {0, 4}, {1, 0}, {1, 4}, {2, 0}, {3, 0}, {3, 1}, {4, 1}, {4, 2}};
}

// Direct product: inputs are n-tuples (first coordinate most significant),
// values are base-(max+1) numerals of the coordinate values.
inline Value power_base(const ValueTable& t) {
  const auto vals = t.distinct_values();
  return vals.empty() ? 1 : *vals.rbegin() + 1;
}

inline ValueTable power_table(const ValueTable& t, int n) {
  if (n < 1) throw UsageError("power must be at least 1");
  double cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<double>(t.rows() * t.cols());
  if (cells > 1e7) throw SizeLimitError("power table too large");
  const Value base = power_base(t);
  if (std::pow(static_cast<double>(base), n) > kMaxValue) throw SizeLimitError("power table values overflow");
  ValueTable cur = t;
  for (int k = 1; k < n; ++k) {
    std::vector<std::string> rl, cl;
    for (const auto& a : cur.row_labels()) {
      for (const auto& b : t.row_labels()) rl.push_back(a + "," + b);
    }
    for (const auto& a : cur.col_labels()) {
      for (const auto& b : t.col_labels()) cl.push_back(a + "," + b);
    }
    std::vector<CellValue> out(rl.size() * cl.size());
    for (std::size_t x = 0; x < cur.rows(); ++x) {
      for (std::size_t u = 0; u < t.rows(); ++u) {
        for (std::size_t y = 0; y < cur.cols(); ++y) {
          for (std::size_t v = 0; v < t.cols(); ++v) {
            const auto& a = cur.at(x, y);
            const auto& b = t.at(u, v);
            if (a && b) out[(x * t.rows() + u) * cl.size() + y * t.cols() + v] = *a * base + *b;
          }
        }
      }
    }
    cur = ValueTable(std::move(rl), std::move(cl), std::move(out));
  }
  return cur;
}

inline std::vector<Cell> power_fooling(const std::vector<Cell>& cells, const ValueTable& t, int n) {
  std::vector<Cell> cur = cells;
  std::size_t rows = t.rows(), cols = t.cols();
  for (int k = 1; k < n; ++k) {
    std::vector<Cell> next;
    for (const auto& a : cur) {
      for (const auto& b : cells) next.push_back({a.row * t.rows() + b.row, a.col * t.cols() + b.col});
    }
    cur = std::move(next);
    rows *= t.rows();
    cols *= t.cols();
  }
  return cur;
}

// Runs the given strategies n times in sequence, one block per coordinate.
inline StrategyPair product_strategies(const StrategyPair& s, int n, std::size_t a_inputs, std::size_t b_inputs,
                                       Value base) {
  if (n < 1) throw UsageError("power must be at least 1");
  auto make = [n, base](const HalfDuplexStrategy& inner, std::size_t per) {
    auto in = std::make_shared<const HalfDuplexStrategy>(inner);
    const int r = inner.rounds;
    HalfDuplexStrategy s;
    s.rounds = r * n;
    s.inputs = static_cast<std::size_t>(std::pow(static_cast<double>(per), n));
    auto coord = [n, per](std::size_t input, int k) {
      for (int i = n - 1; i > k; --i) input /= per;
      return input % per;
    };
    auto block = [r](const History& h, int k, int len) {
      History b;
      for (int i = 0; i < len; ++i) b.push(h[k * r + i]);
      return b;
    };
    s.action = [in, r, coord, block](std::size_t input, const History& h) {
      const int k = h.size() / r;
      return in->action(coord(input, k), block(h, k, h.size() - k * r));
    };
    s.output = [in, r, n, base, coord, block](std::size_t input, const History& h) -> std::optional<Value> {
      Value v = 0;
      for (int k = 0; k < n; ++k) {
        auto o = in->output(coord(input, k), block(h, k, r));
        if (!o) return std::nullopt;
        v = v * base + *o;
      }
      return v;
    };
    return s;
  };
  return {make(s.first, a_inputs), make(s.second, b_inputs)};
}

// ---------------------------------------------------------------------------
// Five-round protocols with one non-classical first round.
//
// Alice either receives first ("r" inputs, with a map `last` used in round
// 5 when the bits of rounds 2 and 4 differ) or sends j first and then uses
// `third(i)` and `fifth(i, k)`. Bob either receives first and echoes, or
// sends i first, then `second()` and `fourth(j)`.

struct FiveRoundAlice {
  bool receive_first = true;
  int j = 0;
  std::function<int(int m, int i, int k)> last;
  std::function<int(int i)> third;
  std::function<int(int i, int k)> fifth;
};

struct FiveRoundBob {
  bool receive_first = true;
  int i = 0;
  std::function<int()> second;
  std::function<int(int j)> fourth;
};

// Output: 2-5 transcript (round-2 bit most significant), with 0, 5, 10, 15
// identified to 0.
inline Value identify_transcript(unsigned t) { return (t == 0 || t == 5 || t == 10 || t == 15) ? 0 : t; }

inline Value transcript_value(const History& h) {
  unsigned t = 0;
  for (int r = 1; r <= 4; ++r) t = 2 * t + static_cast<unsigned>(h.bit(r));
  return identify_transcript(t);
}

inline StrategyPair five_round_strategies(std::vector<FiveRoundAlice> alice, std::vector<FiveRoundBob> bob) {
  auto as = std::make_shared<const std::vector<FiveRoundAlice>>(std::move(alice));
  auto bs = std::make_shared<const std::vector<FiveRoundBob>>(std::move(bob));
  HalfDuplexStrategy a, b;
  a.rounds = b.rounds = 5;
  a.inputs = as->size();
  b.inputs = bs->size();
  a.action = [as](std::size_t in, const History& h) -> std::optional<Action> {
    const auto& p = (*as)[in];
    switch (h.size()) {
      case 0: return p.receive_first ? Action::Receive : send(p.j);
      case 1: return Action::Receive;
      case 2: return send(p.receive_first ? h.bit(0) : p.third(h.bit(1)));
      case 3: return Action::Receive;
      case 4: {
        const int i = h.bit(1), k = h.bit(3);
        if (!p.receive_first) return send(p.fifth(i, k));
        return send(i == k ? h.bit(0) : p.last(h.bit(0), i, k));
      }
      default: return std::nullopt;
    }
  };
  b.action = [bs](std::size_t in, const History& h) -> std::optional<Action> {
    const auto& p = (*bs)[in];
    switch (h.size()) {
      case 0: return p.receive_first ? Action::Receive : send(p.i);
      case 1: return send(p.receive_first ? h.bit(0) : p.second());
      case 2: return Action::Receive;
      case 3: return send(p.receive_first ? h.bit(0) : p.fourth(h.bit(2)));
      case 4: return Action::Receive;
      default: return std::nullopt;
    }
  };
  a.output = b.output = [](std::size_t, const History& h) -> std::optional<Value> { return transcript_value(h); };
  return {a, b};
}

struct AdversaryCheck {
  std::uint64_t pairs = 0;
  std::uint64_t branches = 0;
};

// Runs every malicious branch on every pair; all outputs of a pair must
// agree, and that value becomes the cell.
inline ValueTable tabulate_adversary_independent(const StrategyPair& s, std::vector<std::string> row_labels,
                                                  std::vector<std::string> col_labels, AdversaryCheck* check = nullptr) {
  std::vector<CellValue> cells;
  AdversaryCheck c;
  for (std::size_t x = 0; x < s.first.inputs; ++x) {
    for (std::size_t y = 0; y < s.second.inputs; ++y) {
      const auto outs = run_halfduplex(s.first, s.second, x, y, Adversary::Malicious);
      ++c.pairs;
      c.branches += outs.size();
      const Value v = outs.front().a_out;
      for (const auto& o : outs) {
        if (o.a_out != v || o.b_out != v) {
          throw ConstructionError("outputs differ across adversary branches at (" + row_labels[x] + ", " +
                                  col_labels[y] + ")");
        }
      }
      cells.emplace_back(v);
    }
  }
  if (check) *check = c;
  return ValueTable(std::move(row_labels), std::move(col_labels), std::move(cells));
}

// ---------------------------------------------------------------------------
// Pi: maps eta (16), psi (64), phi (8), indexed MSB-first in domain order
//   eta: 001, 010, 101, 110    psi: 0, 1, 00, 01, 10, 11    phi: L, 0, 1

namespace pi {

inline int eta_at(unsigned eta, int m, int i, int k) {
  const int code = 4 * m + 2 * i + k;
  int pos = -1;
  switch (code) {
    case 0b001: pos = 0; break;
    case 0b010: pos = 1; break;
    case 0b101: pos = 2; break;
    case 0b110: pos = 3; break;
    default: throw UsageError("eta is undefined on " + bit_string(static_cast<std::size_t>(code), 3));
  }
  return static_cast<int>((eta >> (3 - pos)) & 1U);
}
inline int psi1(unsigned psi, int i) { return static_cast<int>((psi >> (5 - i)) & 1U); }
inline int psi2(unsigned psi, int i, int k) { return static_cast<int>((psi >> (5 - (2 + 2 * i + k))) & 1U); }
inline int phi_lambda(unsigned phi) { return static_cast<int>((phi >> 2) & 1U); }
inline int phi_at(unsigned phi, int b) { return static_cast<int>((phi >> (1 - b)) & 1U); }

template <std::size_t N>
unsigned index_of(const std::array<int, N>& bits) {
  unsigned v = 0;
  for (int b : bits) v = 2 * v + static_cast<unsigned>(b);
  return v;
}

// Row / column positions in U.
inline std::size_t eta_row(unsigned eta) { return eta; }
inline std::size_t psi_row(int j, unsigned psi) { return 16 + 64 * static_cast<std::size_t>(j) + psi; }
inline std::size_t receive_col() { return 0; }
inline std::size_t phi_col(int i, unsigned phi) { return 1 + 8 * static_cast<std::size_t>(i) + phi; }

struct AliceInput {
  bool receive_first;
  int j;
  unsigned map;  // eta or psi index
};
struct BobInput {
  bool receive_first;
  int i;
  unsigned phi;
};

inline AliceInput alice_input(std::size_t row) {
  if (row < 16) return {true, 0, static_cast<unsigned>(row)};
  return {false, static_cast<int>((row - 16) / 64), static_cast<unsigned>((row - 16) % 64)};
}
inline BobInput bob_input(std::size_t col) {
  if (col == 0) return {true, 0, 0};
  return {false, static_cast<int>((col - 1) / 8), static_cast<unsigned>((col - 1) % 8)};
}

inline std::vector<std::string> row_labels() {
  std::vector<std::string> out;
  for (unsigned e = 0; e < 16; ++e) out.push_back("r/" + bit_string(e, 4));
  for (int j = 0; j < 2; ++j) {
    for (unsigned p = 0; p < 64; ++p) out.push_back(std::to_string(j) + "/" + bit_string(p, 6));
  }
  return out;
}
inline std::vector<std::string> col_labels() {
  std::vector<std::string> out{"r"};
  for (int i = 0; i < 2; ++i) {
    for (unsigned p = 0; p < 8; ++p) out.push_back(std::to_string(i) + "/" + bit_string(p, 3));
  }
  return out;
}

}  // namespace pi

inline StrategyPair pi_strategies() {
  std::vector<FiveRoundAlice> alice;
  std::vector<FiveRoundBob> bob;
  for (std::size_t row = 0; row < 144; ++row) {
    const auto in = pi::alice_input(row);
    FiveRoundAlice a;
    a.receive_first = in.receive_first;
    a.j = in.j;
    const unsigned m = in.map;
    if (in.receive_first) {
      a.last = [m](int mm, int i, int k) { return pi::eta_at(m, mm, i, k); };
    } else {
      a.third = [m](int i) { return pi::psi1(m, i); };
      a.fifth = [m](int i, int k) { return pi::psi2(m, i, k); };
    }
    alice.push_back(std::move(a));
  }
  for (std::size_t col = 0; col < 17; ++col) {
    const auto in = pi::bob_input(col);
    FiveRoundBob b;
    b.receive_first = in.receive_first;
    b.i = in.i;
    const unsigned phi = in.phi;
    if (!in.receive_first) {
      b.second = [phi] { return pi::phi_lambda(phi); };
      b.fourth = [phi](int j) { return pi::phi_at(phi, j); };
    }
    bob.push_back(std::move(b));
  }
  return five_round_strategies(std::move(alice), std::move(bob));
}

inline ValueTable build_U(AdversaryCheck* check = nullptr) {
  return tabulate_adversary_independent(pi_strategies(), pi::row_labels(), pi::col_labels(), check);
}

// The 10x9 matrix of the simpler plan: eta in {0,1}, phi, psi in {0,1}^2.
inline ValueTable first_realization_table() {
  std::vector<FiveRoundAlice> alice;
  std::vector<FiveRoundBob> bob;
  std::vector<std::string> rl, cl{"r"};
  for (int eta = 0; eta < 2; ++eta) {
    FiveRoundAlice a;
    a.last = [eta](int, int, int) { return eta; };
    alice.push_back(a);
    rl.push_back("r" + std::to_string(eta));
  }
  for (int v = 0; v < 8; ++v) {
    FiveRoundAlice a;
    a.receive_first = false;
    a.j = v >> 2;
    a.third = [v](int) { return (v >> 1) & 1; };
    a.fifth = [v](int, int) { return v & 1; };
    alice.push_back(a);
    rl.push_back(bit_string(static_cast<std::size_t>(v), 3));
  }
  bob.push_back(FiveRoundBob{});
  for (int v = 0; v < 8; ++v) {
    FiveRoundBob b;
    b.receive_first = false;
    b.i = v >> 2;
    b.second = [v] { return (v >> 1) & 1; };
    b.fourth = [v](int) { return v & 1; };
    bob.push_back(b);
    cl.push_back(bit_string(static_cast<std::size_t>(v), 3));
  }
  return tabulate_adversary_independent(five_round_strategies(std::move(alice), std::move(bob)), rl, cl);
}

// ---------------------------------------------------------------------------
// M: ordered selection of U's rows and columns.

struct Selection {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

inline Selection m_selection() {
  using pi::index_of;
  const std::vector<std::array<int, 4>> eta{{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 0},
                                            {1, 0, 1, 1}, {1, 1, 0, 0}, {1, 1, 1, 1}};
  const std::vector<std::array<int, 6>> psi0{{0, 0, 0, 0, 0, 1}, {0, 1, 0, 1, 0, 0}, {0, 0, 1, 0, 1, 1},
                                             {0, 1, 1, 0, 1, 0}, {0, 1, 1, 1, 0, 0}, {0, 0, 1, 1, 0, 1},
                                             {1, 0, 0, 0, 1, 1}, {1, 0, 0, 1, 0, 1}, {1, 1, 0, 0, 0, 0},
                                             {1, 1, 0, 1, 1, 0}, {1, 0, 1, 1, 0, 1}};
  const std::vector<std::array<int, 6>> psi1{{0, 0, 0, 0, 1, 1}, {0, 1, 0, 1, 1, 0}, {0, 0, 1, 0, 0, 1},
                                             {0, 1, 1, 0, 0, 0}, {0, 0, 1, 1, 1, 1}, {0, 1, 1, 1, 1, 0},
                                             {1, 0, 0, 0, 0, 1}, {1, 1, 0, 0, 1, 0}, {1, 0, 0, 1, 1, 1},
                                             {1, 0, 0, 1, 1, 0}, {1, 1, 0, 0, 0, 1}, {1, 1, 0, 1, 0, 0}};
  const std::vector<std::array<int, 3>> phi0{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 1, 1},
                                             {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};
  const std::vector<std::array<int, 3>> phi1{{0, 1, 0}, {0, 0, 1}, {0, 1, 1}, {1, 0, 0},
                                             {1, 0, 1}, {1, 1, 0}, {1, 1, 1}};
  Selection s;
  for (const auto& e : eta) s.rows.push_back(pi::eta_row(index_of(e)));
  for (const auto& p : psi0) s.rows.push_back(pi::psi_row(0, index_of(p)));
  for (const auto& p : psi1) s.rows.push_back(pi::psi_row(1, index_of(p)));
  s.cols.push_back(pi::receive_col());
  for (const auto& p : phi0) s.cols.push_back(pi::phi_col(0, index_of(p)));
  for (const auto& p : phi1) s.cols.push_back(pi::phi_col(1, index_of(p)));
  return s;
}

inline ValueTable build_M(const ValueTable& u) {
  const auto s = m_selection();
  return select(u, s.rows, s.cols);
}
inline ValueTable build_M() { return build_M(build_U()); }

struct CellMismatch {
  std::size_t row = 0;
  std::size_t col = 0;
  CellValue generated;
  CellValue figure;
};

inline std::vector<CellMismatch> diff(const ValueTable& generated, const ValueTable& figure) {
  if (generated.rows() != figure.rows() || generated.cols() != figure.cols()) {
    throw UsageError("cannot diff tables of different shapes");
  }
  std::vector<CellMismatch> out;
  for (std::size_t r = 0; r < generated.rows(); ++r) {
    for (std::size_t c = 0; c < generated.cols(); ++c) {
      if (generated.at(r, c) != figure.at(r, c)) out.push_back({r, c, generated.at(r, c), figure.at(r, c)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fooling-rectangle families on U. Rect index i is read as bits abcd.

namespace pi {

inline DynamicBitset psi_rows(const std::function<bool(int j, unsigned psi)>& pred) {
  DynamicBitset b(144);
  for (int j = 0; j < 2; ++j) {
    for (unsigned p = 0; p < 64; ++p) {
      if (pred(j, p)) b.set(psi_row(j, p));
    }
  }
  return b;
}
inline DynamicBitset eta_rows(const std::function<bool(unsigned eta)>& pred) {
  DynamicBitset b(144);
  for (unsigned e = 0; e < 16; ++e) {
    if (pred(e)) b.set(eta_row(e));
  }
  return b;
}
inline DynamicBitset phi_cols(const std::function<bool(int i, unsigned phi)>& pred) {
  DynamicBitset b(17);
  for (int i = 0; i < 2; ++i) {
    for (unsigned p = 0; p < 8; ++p) {
      if (pred(i, p)) b.set(phi_col(i, p));
    }
  }
  return b;
}

struct Abcd {
  int a, b, c, d;
};
inline Abcd bits_of(int i) { return {(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1}; }

inline NamedRect rect_R(int i) {
  const auto [a, b, c, d] = bits_of(i);
  Rect r;
  if (a != c) {
    r.rows = psi_rows([=](int, unsigned p) { return psi1(p, a) == b && psi2(p, a, 1 - a) == d; });
    r.cols = phi_cols([=](int bi, unsigned f) { return bi == 1 - b && phi_lambda(f) == a && phi_at(f, b) == 1 - a; });
  } else if (b != d) {
    r.rows = psi_rows([=](int j, unsigned p) { return j == 1 - a && psi1(p, a) == b && psi2(p, a, a) == 1 - b; });
    r.cols = phi_cols([=](int, unsigned f) { return phi_lambda(f) == a && phi_at(f, b) == a; });
  } else if (i == 0) {
    r.rows = psi_rows([](int, unsigned p) { return psi1(p, 0) == 0 && psi2(p, 0, 0) == 0; });
    r.cols = phi_cols([](int bi, unsigned f) { return bi == 1 && phi_lambda(f) == 0 && phi_at(f, 0) == 0; });
  } else {
    throw UsageError("rect R" + std::to_string(i) + " is not part of the horizontal family");
  }
  return {"R" + std::to_string(i), std::move(r), identify_transcript(static_cast<unsigned>(i))};
}

// Vertical-family rects R_{abab}: R0 (reduced), R5, R10, R15.
inline NamedRect rect_R_abab(int a, int b) {
  Rect r;
  r.rows = psi_rows([=](int, unsigned p) {
    return psi1(p, a) == b && psi2(p, a, a) == b && psi1(p, 1 - a) != psi2(p, 1 - a, 1 - a);
  });
  r.cols = phi_cols([=](int bi, unsigned f) {
    return bi == 1 - b && phi_lambda(f) == a && phi_at(f, b) == a && phi_at(f, 1 - b) == 1 - a;
  });
  return {"R" + std::to_string(10 * a + 5 * b), std::move(r), 0};
}

inline NamedRect rect_S(int i) {
  const auto [a, b, c, d] = bits_of(i);
  Rect r;
  if (a != c) {
    r.rows = eta_rows([=](unsigned e) { return eta_at(e, b, a, c) == d; });
    r.cols = phi_cols([=](int bi, unsigned f) { return bi == b && phi_lambda(f) == a && phi_at(f, b) == 1 - a; });
  } else if (b != d) {
    r.rows = psi_rows([=](int j, unsigned p) { return j == a && psi1(p, a) == b && psi2(p, a, a) == 1 - b; });
    r.cols = DynamicBitset(17, {receive_col()});
  } else {
    throw UsageError("rect S" + std::to_string(i) + " is not defined");
  }
  return {"S" + std::to_string(i), std::move(r), static_cast<Value>(i)};
}

inline NamedRect rect_S0() {
  Rect r;
  r.rows = eta_rows([](unsigned) { return true; });
  r.cols = phi_cols([](int i, unsigned f) { return phi_lambda(f) == phi_at(f, i); });
  return {"S0", std::move(r), 0};
}

inline const std::vector<int>& horizontal_R() {
  static const std::vector<int> v{0, 1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14};
  return v;
}
inline const std::vector<int>& horizontal_S() {
  static const std::vector<int> v{1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14};
  return v;
}

}  // namespace pi

inline FoolingFamily fooling_family_horizontal() {
  FoolingFamily f{"u-horizontal", {}};
  for (int i : pi::horizontal_R()) f.rects.push_back(pi::rect_R(i));
  for (int i : pi::horizontal_S()) f.rects.push_back(pi::rect_S(i));
  return f;
}

inline FoolingFamily fooling_family_vertical() {
  FoolingFamily f{"u-vertical", {}};
  f.rects.push_back(pi::rect_R_abab(0, 0));
  for (int i : pi::horizontal_R()) {
    if (i != 0) f.rects.push_back(pi::rect_R(i));
  }
  f.rects.push_back(pi::rect_R_abab(0, 1));
  f.rects.push_back(pi::rect_R_abab(1, 0));
  f.rects.push_back(pi::rect_R_abab(1, 1));
  for (int i : pi::horizontal_S()) f.rects.push_back(pi::rect_S(i));
  f.rects.push_back(pi::rect_S0());
  return f;
}

inline FoolingFamily on_M(const FoolingFamily& f, const std::string& id) {
  const auto s = m_selection();
  return restrict_family(f, s.rows, s.cols, id);
}

// ---------------------------------------------------------------------------
// Expected adjacency structure.

inline AdjacencyGraph expected_horizontal_graph() {
  AdjacencyGraph g;
  g.labels = fooling_family_horizontal().names();
  g.adj.assign(g.labels.size(), 0);
  for (std::size_t i = 0; i < g.labels.size(); ++i) g.adj[i] |= std::uint64_t{1} << i;
  auto join = [&](const std::vector<std::string>& A, const std::vector<std::string>& B) {
    for (const auto& a : A) {
      for (const auto& b : B) {
        const auto ia = g.index(a), ib = g.index(b);
        g.adj[ia] |= std::uint64_t{1} << ib;
        g.adj[ib] |= std::uint64_t{1} << ia;
      }
    }
  };
  const std::vector<std::vector<std::string>> parts{{"S2", "S3"}, {"S6", "S7"}, {"S8", "S9"}, {"S12", "S13"}};
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (std::size_t q = p + 1; q < parts.size(); ++q) join(parts[p], parts[q]);
  }
  join({"R0", "R1", "S1"}, {"R2", "R3"});
  join({"R4", "S4"}, {"R6", "R7"});
  join({"R11", "S11"}, {"R8", "R9"});
  join({"R14", "S14"}, {"R12", "R13"});
  const std::vector<std::string> left{"R0", "R1", "R2", "R3", "R4", "R6", "R7", "S1", "S4"};
  const std::vector<std::string> right{"R8", "R9", "R11", "R12", "R13", "R14", "S11", "S14"};
  const std::vector<std::string> ex_a{"R1", "R4", "S11", "S14"};
  const std::vector<std::string> ex_b{"R11", "R14", "S1", "S4"};
  auto in = [](const std::vector<std::string>& v, const std::string& s) { return std::ranges::find(v, s) != v.end(); };
  for (const auto& a : left) {
    for (const auto& b : right) {
      const bool excluded = (in(ex_a, a) && in(ex_b, b)) || (in(ex_a, b) && in(ex_b, a));
      if (!excluded) join({a}, {b});
    }
  }
  return g;
}

struct VerticalStructure {
  std::vector<std::vector<std::string>> components;  // with the hub removed
  std::string hub;
  std::vector<std::string> hub_neighbours;            // excluding the hub itself
  std::vector<std::string> tight_set;            // 13 vertices with 17 neighbours
};

inline VerticalStructure expected_vertical_structure() {
  VerticalStructure v;
  v.components = {{"S1", "S4", "S11", "S14"},
                  {"R0", "R1", "R2", "R3", "R4", "R5", "R6", "R7", "S2", "S3", "S6", "S7"},
                  {"R8", "R9", "R10", "R11", "R12", "R13", "R14", "R15", "S8", "S9", "S12", "S13"}};
  v.hub = "S0";
  v.hub_neighbours = {"R1", "R2", "R3", "R4", "R6", "R7", "R8", "R9", "R11", "R12", "R13", "R14"};
  v.tight_set = {"R8", "R9", "R10", "R11", "R12", "R13", "R14", "R15", "S8", "S9", "S12", "S13", "R0"};
  return v;
}

// Printed values of (inner, with hub) minimum neighbourhoods, n = 1..12.
inline const std::vector<std::pair<int, int>>& neighbourhood_table_values() {
  static const std::vector<std::pair<int, int>> t{{4, 4},   {5, 6},   {6, 6},   {7, 8},   {7, 8},   {9, 10},
                                                  {10, 11}, {11, 12}, {12, 13}, {12, 13}, {12, 13}, {12, 13}};
  return t;
}

// ---------------------------------------------------------------------------
// Small classical protocols.

// Depth 3 on 3-bit strings: Alice sends x2, then x1; Bob sends y1.
// Output 1 + 2*(first bit) + (third bit).
inline ClassicalProtocol depth3_example_protocol() {
  ClassicalProtocol p(8, 8, LeafKind::Global);
  auto bit_of = [](int pos) {
    std::vector<std::uint8_t> b(8);
    for (std::size_t v = 0; v < 8; ++v) b[v] = static_cast<std::uint8_t>((v >> (2 - pos)) & 1U);
    return b;
  };
  std::size_t second[2];
  for (int b1 = 0; b1 < 2; ++b1) {
    std::size_t third[2];
    for (int b2 = 0; b2 < 2; ++b2) {
      const auto l0 = p.add_global_leaf(static_cast<Value>(1 + 2 * b1));
      const auto l1 = p.add_global_leaf(static_cast<Value>(2 + 2 * b1));
      third[b2] = p.add_internal(Owner::Bob, bit_of(0), l0, l1);
    }
    second[b1] = p.add_internal(Owner::Alice, bit_of(0), third[0], third[1]);
  }
  p.set_root(p.add_internal(Owner::Alice, bit_of(1), second[0], second[1]));
  return p;
}

// Alice sends x, Bob answers [x == y].
inline ClassicalProtocol eq1_protocol() {
  ClassicalProtocol p(2, 2, LeafKind::Global);
  const auto l00 = p.add_global_leaf(0), l01 = p.add_global_leaf(1);
  const auto l10 = p.add_global_leaf(0), l11 = p.add_global_leaf(1);
  const auto b0 = p.add_internal(Owner::Bob, {1, 0}, l00, l01);
  const auto b1 = p.add_internal(Owner::Bob, {0, 1}, l10, l11);
  p.set_root(p.add_internal(Owner::Alice, {0, 1}, b0, b1));
  return p;
}

// Partial function x == y ? x : undefined on n-bit strings.
inline ValueTable diagonal_partial(int n) {
  if (n < 1 || n > 12) throw SizeLimitError("diagonal function supports 1 <= n <= 12");
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < size; ++i) labels.push_back(bit_string(i, n));
  std::vector<CellValue> cells(size * size);
  for (std::size_t i = 0; i < size; ++i) cells[i * size + i] = static_cast<Value>(i);
  return ValueTable(labels, labels, std::move(cells));
}

inline ClassicalProtocol identity_local_protocol(std::size_t size) {
  ClassicalProtocol p(size, size, LeafKind::Local);
  std::vector<Value> id(size);
  for (std::size_t i = 0; i < size; ++i) id[i] = static_cast<Value>(i);
  p.set_root(p.add_local_leaf(id, id));
  return p;
}

}  // namespace ccwb
