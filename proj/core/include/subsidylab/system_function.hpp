#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "subsidylab/common.hpp"

namespace subsidylab {

// Node of a series-parallel system description. Leaves name components by
// 0-based index; internal nodes combine children in series (all must work)
// or parallel (one suffices).
struct SpNode {
  enum class Kind { kLeaf, kSeries, kParallel };
  Kind kind = Kind::kLeaf;
  int component = -1;  // kLeaf only
  std::vector<SpNode> children;

  static SpNode leaf(int component) {
    SpNode node;
    node.kind = Kind::kLeaf;
    node.component = component;
    return node;
  }
  static SpNode series(std::vector<SpNode> children) {
    SpNode node;
    node.kind = Kind::kSeries;
    node.children = std::move(children);
    return node;
  }
  static SpNode parallel(std::vector<SpNode> children) {
    SpNode node;
    node.kind = Kind::kParallel;
    node.children = std::move(children);
    return node;
  }
};

// Boolean structure function phi: {0,1}^n -> {0,1} describing when the system
// works. Three interchangeable descriptions:
//   - CNF over signed 1-based literals (+i = "component i works", -i = its
//     negation). The empty CNF is the constant-true system.
//   - series-parallel tree; each component must appear in exactly one leaf,
//     because the closed-form reliability evaluation assumes independence
//     across subtrees.
//   - explicit truth table, one bit per joint state word; bit i-1 of the word
//     is component i's state.
class SystemFunction {
 public:
  enum class Kind { kCnf, kSp, kTable };

  // Default-constructed value is the 0-component placeholder; every factory
  // below produces a usable function.
  SystemFunction() = default;

  static SystemFunction from_cnf(int n, std::vector<std::vector<int>> clauses);
  static SystemFunction from_sp(int n, SpNode root);
  static SystemFunction from_table(int n, std::vector<char> table);

  int n() const { return n_; }
  Kind kind() const { return kind_; }

  bool eval(std::uint64_t state) const;

  // True only when monotonicity is structurally guaranteed: every CNF literal
  // positive, or a series-parallel description (always monotone). A table can
  // be monotone without this returning true; callers that need certainty must
  // check the table themselves.
  bool monotone_guaranteed() const { return monotone_; }

  // Materializes the truth table. Guarded by cap_n because it is O(2^n).
  std::vector<char> to_table(int cap_n = kEnumerationCapN) const;

  const std::vector<std::vector<int>>& clauses() const { return clauses_; }
  const SpNode& sp_root() const { return *sp_root_; }
  const std::vector<char>& table() const { return table_; }

 private:
  int n_ = 0;
  Kind kind_ = Kind::kTable;
  bool monotone_ = false;
  std::vector<std::vector<int>> clauses_;
  std::shared_ptr<const SpNode> sp_root_;
  std::vector<char> table_;
};

// Per-state reliability of a series-parallel tree: P(subtree works) given
// that repaired components (bits set in `state`) work surely and the rest
// work independently with probability p[i]. Exact for trees where each
// component appears once; no table is built, so n is unbounded.
double sp_reliability(const SpNode& root, const std::vector<double>& p,
                      std::uint64_t state);

}  // namespace subsidylab
