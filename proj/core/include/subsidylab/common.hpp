#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace subsidylab {

// Absolute tolerance for every equilibrium / cost comparison in the library.
// Weak inequalities throughout: a tie between deviating and staying counts as
// staying, so tie profiles are equilibria. That is deliberate and several
// worst-case constructions depend on it.
inline constexpr double kTol = 1e-9;

// Strict-inequality margin, as a fraction of the subsidy budget H. When a
// solver needs "just past a threshold" it steps by kMarginScale * H.
inline constexpr double kMarginScale = 1e-6;

// Enumeration guards. Joint-state tables are O(2^n); profile enumeration in
// cost-sharing games is capped by total profile count instead.
inline constexpr int kEnumerationCapN = 20;
inline constexpr int kMinAgentsCapN = 12;
inline constexpr std::uint64_t kProfileCap = 10'000'000;

// Malformed input, arity mismatch, or an enumeration cap being exceeded.
// The CLI maps this to exit code 2.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A metric was requested whose mathematical precondition fails (empty
// equilibrium set, zero optimum, revelation outside the prior's support).
// The CLI maps this to exit code 3; the message names the precondition.
class UndefinedMetricError : public std::runtime_error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : std::runtime_error(what) {}
};

// Always-on invariant check. Plain assert vanishes under NDEBUG, and the
// dual-route accounting identities are contracts, not debug aids.
inline void internal_check(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(msg);
}

}  // namespace subsidylab
