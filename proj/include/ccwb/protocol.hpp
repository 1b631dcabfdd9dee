#pragma once

// Classical protocol trees with global (single value) or local (pair of
// output maps) leaves, their executor, verifier and leaf rectangles.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccwb/error.hpp"
#include "ccwb/value_table.hpp"

namespace ccwb {

enum class Owner : std::uint8_t { Alice, Bob };
enum class LeafKind : std::uint8_t { Global, Local };
enum class Semantics : std::uint8_t { Global, Local };

struct ProtocolNode {
  bool is_leaf = true;
  // Internal nodes.
  Owner owner = Owner::Alice;
  std::vector<std::uint8_t> bits;  // owner's input index -> bit sent
  std::size_t child[2] = {0, 0};
  // Global leaves.
  Value value = 0;
  // Local leaves: Alice's output per row, Bob's output per column.
  std::vector<Value> out_a;
  std::vector<Value> out_b;
};

class ClassicalProtocol {
 public:
  ClassicalProtocol() = default;
  ClassicalProtocol(std::size_t rows, std::size_t cols, LeafKind kind) : rows_(rows), cols_(cols), kind_(kind) {}

  std::size_t add_global_leaf(Value v) {
    if (kind_ != LeafKind::Global) throw UsageError("global leaf in a local-leaf protocol");
    ProtocolNode n;
    n.value = v;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  std::size_t add_local_leaf(std::vector<Value> out_a, std::vector<Value> out_b) {
    if (kind_ != LeafKind::Local) throw UsageError("local leaf in a global-leaf protocol");
    if (out_a.size() != rows_ || out_b.size() != cols_) throw FormatError("local leaf map has wrong size");
    ProtocolNode n;
    n.out_a = std::move(out_a);
    n.out_b = std::move(out_b);
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  // Children must already exist.
  std::size_t add_internal(Owner owner, std::vector<std::uint8_t> bits, std::size_t child0, std::size_t child1) {
    if (bits.size() != (owner == Owner::Alice ? rows_ : cols_)) throw FormatError("bit map has wrong size");
    for (auto b : bits) {
      if (b > 1) throw FormatError("bit map entries must be 0 or 1");
    }
    if (child0 >= nodes_.size() || child1 >= nodes_.size()) throw FormatError("child index out of range");
    ProtocolNode n;
    n.is_leaf = false;
    n.owner = owner;
    n.bits = std::move(bits);
    n.child[0] = child0;
    n.child[1] = child1;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  void set_root(std::size_t id) {
    if (id >= nodes_.size()) throw FormatError("root index out of range");
    root_ = id;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  LeafKind leaf_kind() const { return kind_; }
  std::size_t root() const { return root_; }
  const std::vector<ProtocolNode>& nodes() const { return nodes_; }
  const ProtocolNode& node(std::size_t id) const { return nodes_.at(id); }

  // Checks that the nodes reachable from the root form a tree.
  void validate() const {
    if (nodes_.empty()) throw FormatError("protocol has no nodes");
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<std::size_t> stack{root_};
    while (!stack.empty()) {
      const auto id = stack.back();
      stack.pop_back();
      if (seen[id]) throw FormatError("node " + std::to_string(id) + " reachable twice (not a tree)");
      seen[id] = 1;
      const auto& n = nodes_[id];
      if (!n.is_leaf) {
        stack.push_back(n.child[0]);
        stack.push_back(n.child[1]);
      }
    }
  }

  int depth() const { return depth_from(root_); }

 private:
  int depth_from(std::size_t id) const {
    const auto& n = nodes_[id];
    if (n.is_leaf) return 0;
    return 1 + std::max(depth_from(n.child[0]), depth_from(n.child[1]));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  LeafKind kind_ = LeafKind::Global;
  std::vector<ProtocolNode> nodes_;
  std::size_t root_ = 0;
};

struct ClassicalRun {
  std::vector<std::uint8_t> transcript;
  std::size_t leaf = 0;
};

inline ClassicalRun run_classical(const ClassicalProtocol& p, std::size_t x, std::size_t y) {
  if (x >= p.rows() || y >= p.cols()) throw UsageError("input index out of range");
  ClassicalRun run;
  std::size_t id = p.root();
  while (!p.node(id).is_leaf) {
    const auto& n = p.node(id);
    const std::uint8_t b = n.bits[n.owner == Owner::Alice ? x : y];
    run.transcript.push_back(b);
    id = n.child[b];
  }
  run.leaf = id;
  return run;
}

struct ClassicalCounterexample {
  std::size_t x = 0;
  std::size_t y = 0;
  Value got_a = 0;  // Alice's output (the leaf value for global leaves)
  Value got_b = 0;
  Value want = 0;
};

using ClassicalVerdict = std::optional<ClassicalCounterexample>;  // nullopt = Ok

inline ClassicalVerdict verify_classical(const ClassicalProtocol& p, const ValueTable& t, Semantics sem) {
  if ((sem == Semantics::Global) != (p.leaf_kind() == LeafKind::Global)) {
    throw UsageError("leaf kind does not match the requested semantics");
  }
  if (p.rows() != t.rows() || p.cols() != t.cols()) throw UsageError("protocol and table dimensions differ");
  for (std::size_t x = 0; x < t.rows(); ++x) {
    for (std::size_t y = 0; y < t.cols(); ++y) {
      const auto& want = t.at(x, y);
      if (!want) continue;
      const auto& leaf = p.node(run_classical(p, x, y).leaf);
      const Value a = sem == Semantics::Global ? leaf.value : leaf.out_a[x];
      const Value b = sem == Semantics::Global ? leaf.value : leaf.out_b[y];
      if (a != *want || b != *want) return ClassicalCounterexample{x, y, a, b, *want};
    }
  }
  return std::nullopt;
}

struct LeafRect {
  Rect rect;
  std::size_t leaf = 0;
};

// Rectangles of all reachable leaves; leaves no input reaches are omitted.
inline std::vector<LeafRect> leaf_rects(const ClassicalProtocol& p) {
  std::vector<LeafRect> out;
  struct Item {
    std::size_t id;
    Rect rect;
  };
  std::vector<Item> stack{{p.root(), {DynamicBitset::full(p.rows()), DynamicBitset::full(p.cols())}}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.rect.rows.none() || it.rect.cols.none()) continue;
    const auto& n = p.node(it.id);
    if (n.is_leaf) {
      out.push_back({std::move(it.rect), it.id});
      continue;
    }
    Rect side[2] = {it.rect, it.rect};
    DynamicBitset& axis0 = n.owner == Owner::Alice ? side[0].rows : side[0].cols;
    DynamicBitset& axis1 = n.owner == Owner::Alice ? side[1].rows : side[1].cols;
    const DynamicBitset& src = n.owner == Owner::Alice ? it.rect.rows : it.rect.cols;
    src.for_each([&](std::size_t i) {
      if (n.bits[i]) {
        axis0.reset(i);
      } else {
        axis1.reset(i);
      }
    });
    stack.push_back({n.child[1], std::move(side[1])});
    stack.push_back({n.child[0], std::move(side[0])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON form:
// {"format":"ccwb-protocol","version":1,"rows":R,"cols":C,
//  "leaf_kind":"global"|"local","root":k,
//  "nodes":[{"owner":"A"|"B","bits":[..],"children":[c0,c1]}
//           | {"value":v} | {"out_a":[..],"out_b":[..]}, ...]}

inline nlohmann::json protocol_to_json(const ClassicalProtocol& p) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : p.nodes()) {
    nlohmann::json j;
    if (!n.is_leaf) {
      j["owner"] = n.owner == Owner::Alice ? "A" : "B";
      j["bits"] = n.bits;
      j["children"] = {n.child[0], n.child[1]};
    } else if (p.leaf_kind() == LeafKind::Global) {
      j["value"] = n.value;
    } else {
      j["out_a"] = n.out_a;
      j["out_b"] = n.out_b;
    }
    nodes.push_back(std::move(j));
  }
  return {{"format", "ccwb-protocol"},
          {"version", 1},
          {"rows", p.rows()},
          {"cols", p.cols()},
          {"leaf_kind", p.leaf_kind() == LeafKind::Global ? "global" : "local"},
          {"root", p.root()},
          {"nodes", std::move(nodes)}};
}

inline ClassicalProtocol protocol_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "ccwb-protocol" || j.at("version").get<int>() != 1) {
      throw FormatError("not a ccwb-protocol v1 document");
    }
    const auto kind_s = j.at("leaf_kind").get<std::string>();
    if (kind_s != "global" && kind_s != "local") throw FormatError("leaf_kind must be global or local");
    const LeafKind kind = kind_s == "global" ? LeafKind::Global : LeafKind::Local;
    ClassicalProtocol p(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), kind);
    const auto& nodes = j.at("nodes");
    // Children may point forward; insert in dependency order, then map ids.
    const std::size_t n = nodes.size();
    std::vector<std::optional<std::size_t>> mapped(n);
    std::vector<int> state(n, 0);
    auto insert = [&](auto&& self, std::size_t id) -> std::size_t {
      if (id >= n) throw FormatError("child index out of range");
      if (mapped[id]) return *mapped[id];
      if (state[id] == 1) throw FormatError("cycle in protocol nodes");
      state[id] = 1;
      const auto& nj = nodes[id];
      std::size_t got = 0;
      if (nj.contains("children")) {
        const auto ch = nj.at("children").get<std::vector<std::size_t>>();
        if (ch.size() != 2) throw FormatError("internal node needs exactly two children");
        const auto c0 = self(self, ch[0]);
        const auto c1 = self(self, ch[1]);
        const auto owner_s = nj.at("owner").get<std::string>();
        if (owner_s != "A" && owner_s != "B") throw FormatError("owner must be A or B");
        got = p.add_internal(owner_s == "A" ? Owner::Alice : Owner::Bob, nj.at("bits").get<std::vector<std::uint8_t>>(),
                             c0, c1);
      } else if (kind == LeafKind::Global) {
        got = p.add_global_leaf(nj.at("value").get<Value>());
      } else {
        got = p.add_local_leaf(nj.at("out_a").get<std::vector<Value>>(), nj.at("out_b").get<std::vector<Value>>());
      }
      state[id] = 2;
      mapped[id] = got;
      return got;
    };
    p.set_root(insert(insert, j.at("root").get<std::size_t>()));
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("protocol JSON: ") + e.what());
  }
}

}  // namespace ccwb
