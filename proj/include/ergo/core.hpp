#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergo {

// Elements are dense indices 0..q-1; subsets are bitmasks. The mask width
// bounds every alphabet this library will touch.
using Elem = std::uint8_t;
using Mask = std::uint32_t;

inline constexpr int kHardMaxQ = 24;

enum class Err {
  // input errors (exit 2)
  NonSquare,
  EntryOutOfRange,
  NotUniformityPreserving,
  NotQuasigroup,
  EmptySet,
  NotIrreducible,
  NotErgodic,
  NotStable,
  NotStronglyErgodic,
  NotACover,
  DimensionMismatch,
  NotErgodicFactors,
  // resource caps (exit 3)
  AlphabetTooLarge,
  IterationBudgetExceeded,
  StateBudgetExceeded,
  ProductTooLarge,
  InconclusiveWithinBound,
  // failed internal verification (exit 4)
  ResidueVerificationFailed,
  DecompositionFailed,
  VerificationFailed,
};

int exit_code_for(Err k);
const char* err_name(Err k);

struct Error : std::runtime_error {
  Err kind;
  Error(Err k, const std::string& msg)
      : std::runtime_error(std::string(err_name(k)) + ": " + msg), kind(k) {}
};

[[noreturn]] inline void fail(Err k, const std::string& msg) { throw Error(k, msg); }

// Resource limits shared by the deeper analyses. Every cap is overridable;
// defaults keep worst cases at desk scale.
struct Caps {
  int max_q = 12;             // residue-bearing analyses (monoid state space)
  int partition_enum_q = 10;  // exhaustive partition enumeration
  int oracle_q = 4;           // definitional BFS oracle
  std::size_t monoid_budget = std::size_t{1} << 20;
  int orbit_budget = 4096;
};

struct Op {
  int q = 0;
  std::vector<Elem> t;  // row-major, t[a*q+b] = a*b (row = left operand)

  Elem at(int a, int b) const { return t[static_cast<std::size_t>(a) * q + b]; }
  Mask all() const { return (Mask{1} << q) - 1; }
  bool operator==(const Op&) const = default;
};

Op validate_table(const std::vector<std::vector<long long>>& raw);
// Convenience for building literal tables (validates like validate_table).
Op make_op(int q, std::initializer_list<int> flat_rows);

bool is_uniformity_preserving(const Op& op);
// a /* b = the unique c with c*b = a.
Op inverse_op(const Op& op);
bool is_quasigroup(const Op& op);
// a \* b = the unique c with a*c = b (quasigroups only).
Op left_division(const Op& op);
Mask set_product(const Op& op, Mask A, Mask B);

std::uint64_t table_digest(const Op& op);
std::string digest_hex(std::uint64_t d);

inline int popcount(Mask m) { return std::popcount(m); }
inline int lowbit(Mask m) { return std::countr_zero(m); }

}  // namespace ergo
