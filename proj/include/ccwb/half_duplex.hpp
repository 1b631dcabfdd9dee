#pragma once

// Half-duplex strategies in functional form and an executor that enumerates
// every adversary choice in silent rounds.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccwb/error.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

enum class Action : std::uint8_t { Send0, Send1, Receive };
enum class Event : std::uint8_t { Sent0, Sent1, Recv0, Recv1 };
enum class Adversary : std::uint8_t { Honest, Malicious };

inline Action send(int bit) { return bit ? Action::Send1 : Action::Send0; }
inline bool is_send(Event e) { return e == Event::Sent0 || e == Event::Sent1; }
inline int event_bit(Event e) { return (e == Event::Sent1 || e == Event::Recv1) ? 1 : 0; }

// Event sequence packed two bits per event (at most 32 rounds).
class History {
 public:
  static constexpr int kMaxRounds = 32;

  int size() const { return len_; }
  bool empty() const { return len_ == 0; }
  Event operator[](int i) const { return static_cast<Event>((code_ >> (2 * i)) & 3U); }
  Event back() const { return (*this)[len_ - 1]; }

  void push(Event e) {
    if (len_ >= kMaxRounds) throw UsageError("history longer than 32 rounds");
    code_ |= static_cast<std::uint64_t>(e) << (2 * len_);
    ++len_;
  }
  History with(Event e) const {
    History h = *this;
    h.push(e);
    return h;
  }
  History prefix(int n) const {
    History h;
    h.len_ = n;
    h.code_ = n >= 32 ? code_ : code_ & ((std::uint64_t{1} << (2 * n)) - 1);
    return h;
  }
  // Bit carried by event i (sent or received).
  int bit(int i) const { return event_bit((*this)[i]); }
  std::uint64_t key() const { return code_ | (static_cast<std::uint64_t>(len_) << 58); }

  std::string str() const {
    static const char* names[4] = {"s0", "s1", "r0", "r1"};
    std::string s;
    for (int i = 0; i < len_; ++i) {
      if (i) s += ' ';
      s += names[static_cast<int>((*this)[i])];
    }
    return s;
  }

  friend bool operator==(const History&, const History&) = default;

 private:
  std::uint64_t code_ = 0;
  int len_ = 0;
};

// One player's strategy. Returning nullopt means "not defined" and is an
// error when the history is reached.
struct HalfDuplexStrategy {
  int rounds = 0;
  std::size_t inputs = 0;
  std::function<std::optional<Action>(std::size_t input, const History&)> action;
  std::function<std::optional<Value>(std::size_t input, const History&)> output;
};

struct Outcome {
  Value a_out = 0;
  Value b_out = 0;
  History a_events;
  History b_events;
  int silent_rounds = 0;
  int spent_rounds = 0;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Distinct outcomes in adversary branch order.
using OutcomeSet = std::vector<Outcome>;

namespace detail {

inline Action must_act(const HalfDuplexStrategy& s, std::size_t input, const History& h, const char* who) {
  auto a = s.action(input, h);
  if (!a) {
    throw StrategyIncompleteError(std::string(who) + " has no action for input " + std::to_string(input) +
                                  " after history [" + h.str() + "]");
  }
  return *a;
}

inline Value must_output(const HalfDuplexStrategy& s, std::size_t input, const History& h, const char* who) {
  auto v = s.output(input, h);
  if (!v) {
    throw StrategyIncompleteError(std::string(who) + " has no output for input " + std::to_string(input) +
                                  " after history [" + h.str() + "]");
  }
  return *v;
}

inline void explore(const HalfDuplexStrategy& sa, const HalfDuplexStrategy& sb, std::size_t x, std::size_t y,
                    Adversary adv, History ha, History hb, int silent, int spent, OutcomeSet& out) {
  if (ha.size() == sa.rounds) {
    Outcome o{must_output(sa, x, ha, "Alice"), must_output(sb, y, hb, "Bob"), ha, hb, silent, spent};
    for (const auto& e : out) {
      if (e == o) return;
    }
    out.push_back(o);
    return;
  }
  const Action a = must_act(sa, x, ha, "Alice");
  const Action b = must_act(sb, y, hb, "Bob");
  const bool a_sends = a != Action::Receive;
  const bool b_sends = b != Action::Receive;
  auto sent = [](Action act) { return act == Action::Send1 ? Event::Sent1 : Event::Sent0; };
  auto recv = [](int bit) { return bit ? Event::Recv1 : Event::Recv0; };
  if (a_sends && b_sends) {
    explore(sa, sb, x, y, adv, ha.with(sent(a)), hb.with(sent(b)), silent, spent + 1, out);
  } else if (a_sends) {
    explore(sa, sb, x, y, adv, ha.with(sent(a)), hb.with(recv(a == Action::Send1)), silent, spent, out);
  } else if (b_sends) {
    explore(sa, sb, x, y, adv, ha.with(recv(b == Action::Send1)), hb.with(sent(b)), silent, spent, out);
  } else {
    // Silent round: Bob receives i, Alice receives j.
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (adv == Adversary::Honest && i != j) continue;
        explore(sa, sb, x, y, adv, ha.with(recv(j)), hb.with(recv(i)), silent + 1, spent, out);
      }
    }
  }
}

}  // namespace detail

inline OutcomeSet run_halfduplex(const HalfDuplexStrategy& sa, const HalfDuplexStrategy& sb, std::size_t x,
                                 std::size_t y, Adversary adv) {
  if (sa.rounds != sb.rounds) throw UsageError("players disagree on the number of rounds");
  if (sa.rounds > History::kMaxRounds) throw UsageError("at most 32 rounds supported");
  if (x >= sa.inputs || y >= sb.inputs) throw UsageError("input index out of range");
  OutcomeSet out;
  detail::explore(sa, sb, x, y, adv, History{}, History{}, 0, 0, out);
  return out;
}

struct HalfDuplexCounterexample {
  std::size_t x = 0;
  std::size_t y = 0;
  Value want = 0;
  Outcome outcome;
};

using HalfDuplexVerdict = std::optional<HalfDuplexCounterexample>;  // nullopt = Ok

// Every outcome on every defined cell must have both outputs equal to the cell.
inline HalfDuplexVerdict verify_halfduplex(const HalfDuplexStrategy& sa, const HalfDuplexStrategy& sb,
                                           const ValueTable& t, Adversary adv) {
  if (sa.inputs != t.rows() || sb.inputs != t.cols()) throw UsageError("strategy input counts do not match table");
  for (std::size_t x = 0; x < t.rows(); ++x) {
    for (std::size_t y = 0; y < t.cols(); ++y) {
      const auto& want = t.at(x, y);
      if (!want) continue;
      for (const auto& o : run_halfduplex(sa, sb, x, y, adv)) {
        if (o.a_out != *want || o.b_out != *want) return HalfDuplexCounterexample{x, y, *want, o};
      }
    }
  }
  return std::nullopt;
}

// Strategies simulating a global-leaf classical protocol round by round.
// Branches shorter than the depth are padded: Alice sends 0, Bob receives.
inline std::pair<HalfDuplexStrategy, HalfDuplexStrategy> classical_to_halfduplex(const ClassicalProtocol& p) {
  if (p.leaf_kind() != LeafKind::Global) throw UsageError("only global-leaf protocols can be embedded");
  auto proto = std::make_shared<const ClassicalProtocol>(p);
  const int depth = p.depth();

  // Node reached after following the player's history; both players' event
  // bits encode the transcript.
  auto walk = [proto](const History& h) {
    std::size_t id = proto->root();
    for (int i = 0; i < h.size() && !proto->node(id).is_leaf; ++i) id = proto->node(id).child[h.bit(i)];
    return id;
  };
  auto make = [proto, walk, depth](Owner me) {
    HalfDuplexStrategy s;
    s.rounds = depth;
    s.inputs = me == Owner::Alice ? proto->rows() : proto->cols();
    s.action = [proto, walk, me](std::size_t input, const History& h) -> std::optional<Action> {
      const auto& n = proto->node(walk(h));
      if (n.is_leaf) return me == Owner::Alice ? Action::Send0 : Action::Receive;
      if (n.owner != me) return Action::Receive;
      return send(n.bits[input]);
    };
    s.output = [proto, walk](std::size_t, const History& h) -> std::optional<Value> {
      const auto& n = proto->node(walk(h));
      if (!n.is_leaf) return std::nullopt;
      return n.value;
    };
    return s;
  };
  return {make(Owner::Alice), make(Owner::Bob)};
}

// Strategies from explicit per-input tables keyed by history.
class TableStrategyBuilder {
 public:
  TableStrategyBuilder(int rounds, std::size_t inputs) : rounds_(rounds), inputs_(inputs), act_(inputs), out_(inputs) {}

  void set_action(std::size_t input, const History& h, Action a) { act_.at(input)[h.key()] = a; }
  void set_output(std::size_t input, const History& h, Value v) { out_.at(input)[h.key()] = v; }

  HalfDuplexStrategy build() const {
    auto act = std::make_shared<const std::vector<std::unordered_map<std::uint64_t, Action>>>(act_);
    auto out = std::make_shared<const std::vector<std::unordered_map<std::uint64_t, Value>>>(out_);
    HalfDuplexStrategy s;
    s.rounds = rounds_;
    s.inputs = inputs_;
    s.action = [act](std::size_t i, const History& h) -> std::optional<Action> {
      const auto& m = (*act)[i];
      auto it = m.find(h.key());
      if (it == m.end()) return std::nullopt;
      return it->second;
    };
    s.output = [out](std::size_t i, const History& h) -> std::optional<Value> {
      const auto& m = (*out)[i];
      auto it = m.find(h.key());
      if (it == m.end()) return std::nullopt;
      return it->second;
    };
    return s;
  }

 private:
  int rounds_;
  std::size_t inputs_;
  std::vector<std::unordered_map<std::uint64_t, Action>> act_;
  std::vector<std::unordered_map<std::uint64_t, Value>> out_;
};

}  // namespace ccwb
