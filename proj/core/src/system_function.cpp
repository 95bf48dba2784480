#include "subsidylab/system_function.hpp"

#include <cassert>
#include <cstdlib>
#include <string>

namespace subsidylab {
namespace {

void validate_sp(const SpNode& node, int n, std::vector<char>& seen) {
  switch (node.kind) {
    case SpNode::Kind::kLeaf:
      if (node.component < 0 || node.component >= n)
        throw SchemaError("sp leaf component out of range: " +
                          std::to_string(node.component + 1));
      if (seen[static_cast<size_t>(node.component)])
        throw SchemaError(
            "sp tree repeats component " + std::to_string(node.component + 1) +
            "; per-state reliability would be wrong under repetition");
      seen[static_cast<size_t>(node.component)] = 1;
      if (!node.children.empty())
        throw SchemaError("sp leaf must not have children");
      break;
    case SpNode::Kind::kSeries:
    case SpNode::Kind::kParallel:
      if (node.children.empty())
        throw SchemaError("sp internal node needs at least one child");
      for (const SpNode& c : node.children) validate_sp(c, n, seen);
      break;
  }
}

bool eval_sp(const SpNode& node, std::uint64_t state) {
  switch (node.kind) {
    case SpNode::Kind::kLeaf:
      return (state >> node.component) & 1u;
    case SpNode::Kind::kSeries:
      for (const SpNode& c : node.children)
        if (!eval_sp(c, state)) return false;
      return true;
    case SpNode::Kind::kParallel:
      for (const SpNode& c : node.children)
        if (eval_sp(c, state)) return true;
      return false;
  }
  return false;  // unreachable
}

}  // namespace

SystemFunction SystemFunction::from_cnf(int n,
                                        std::vector<std::vector<int>> clauses) {
  if (n < 1 || n > 63) throw SchemaError("component count must be in [1,63]");
  bool all_positive = true;
  for (const auto& clause : clauses) {
    if (clause.empty())
      throw SchemaError("empty clause makes the system constant-false");
    for (int lit : clause) {
      const int var = std::abs(lit);
      if (lit == 0 || var > n)
        throw SchemaError("cnf literal out of range: " + std::to_string(lit));
      if (lit < 0) all_positive = false;
    }
  }
  SystemFunction f;
  f.n_ = n;
  f.kind_ = Kind::kCnf;
  f.monotone_ = all_positive;  // empty CNF (constant true) is monotone too
  f.clauses_ = std::move(clauses);
  return f;
}

SystemFunction SystemFunction::from_sp(int n, SpNode root) {
  if (n < 1) throw SchemaError("component count must be positive");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  validate_sp(root, n, seen);
  SystemFunction f;
  f.n_ = n;
  f.kind_ = Kind::kSp;
  f.monotone_ = true;
  f.sp_root_ = std::make_shared<const SpNode>(std::move(root));
  return f;
}

SystemFunction SystemFunction::from_table(int n, std::vector<char> table) {
  if (n < 1 || n > kEnumerationCapN)
    throw SchemaError("table form limited to " +
                      std::to_string(kEnumerationCapN) + " components");
  if (table.size() != (std::uint64_t{1} << n))
    throw SchemaError("truth table must have exactly 2^n entries");
  SystemFunction f;
  f.n_ = n;
  f.kind_ = Kind::kTable;
  f.monotone_ = false;
  for (char& v : table) v = v ? 1 : 0;
  f.table_ = std::move(table);
  return f;
}

bool SystemFunction::eval(std::uint64_t state) const {
  switch (kind_) {
    case Kind::kCnf:
      for (const auto& clause : clauses_) {
        bool sat = false;
        for (int lit : clause) {
          const bool bit = (state >> (std::abs(lit) - 1)) & 1u;
          if ((lit > 0) == bit) {
            sat = true;
            break;
          }
        }
        if (!sat) return false;
      }
      return true;  // empty CNF: constant true
    case Kind::kSp:
      return eval_sp(*sp_root_, state);
    case Kind::kTable:
      return table_[state] != 0;
  }
  return false;  // unreachable
}

std::vector<char> SystemFunction::to_table(int cap_n) const {
  if (kind_ == Kind::kTable) return table_;
  if (n_ > cap_n)
    throw SchemaError("refusing to materialize a 2^" + std::to_string(n_) +
                      " truth table (cap " + std::to_string(cap_n) + ")");
  const std::uint64_t size = std::uint64_t{1} << n_;
  std::vector<char> table(size);
  for (std::uint64_t s = 0; s < size; ++s) table[s] = eval(s) ? 1 : 0;
  return table;
}

double sp_reliability(const SpNode& root, const std::vector<double>& p,
                      std::uint64_t state) {
  switch (root.kind) {
    case SpNode::Kind::kLeaf: {
      if ((state >> root.component) & 1u) return 1.0;
      return p[static_cast<size_t>(root.component)];
    }
    case SpNode::Kind::kSeries: {
      double r = 1.0;
      for (const SpNode& c : root.children) r *= sp_reliability(c, p, state);
      return r;
    }
    case SpNode::Kind::kParallel: {
      double q = 1.0;
      for (const SpNode& c : root.children)
        q *= 1.0 - sp_reliability(c, p, state);
      return 1.0 - q;
    }
  }
  return 0.0;  // unreachable
}

}  // namespace subsidylab
