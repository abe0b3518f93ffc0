#pragma once

#include <vector>

#include "ergo/graph.hpp"
#include "ergo/partitions.hpp"

namespace ergo {

// A sequence of subsets applied left to right; valid against a stable
// partition H when the i-th member is a block of the i-th iterate of H.
struct HSequence {
  std::vector<Mask> xs;
};

bool is_h_sequence(const Op& op, const Family& H, const HSequence& s, int orbit_budget = 4096);
bool is_repeatable(const Op& op, const Family& H, const HSequence& s, int orbit_budget = 4096);

// Row a holds a*X.
TransferMatrix transfer_matrix(const Op& op, Mask X);

// All matrices of nonempty sequences, separated by length mod per(H).
// Phase-0 entries (length a positive multiple of the period) are exactly the
// actions of repeatable sequences.
struct PhasedMatrixMonoid {
  int p = 1;
  std::vector<Family> iterates;                       // iterates[r] = r-th step of H
  std::vector<std::vector<TransferMatrix>> gens;      // gens[r][i] acts by blocks of iterates[r]
  std::vector<std::vector<TransferMatrix>> by_phase;  // deterministic (sorted) per phase
};
PhasedMatrixMonoid build_monoid(const Op& op, const Family& H, const Caps& caps = {});

// Repeatable and reflexive (A is contained in A*X for every subset A).
bool is_augmenting(const Op& op, const Family& H, const HSequence& s, const Caps& caps = {});

// Classes of mutual reachability through reflexive repeatable actions,
// verified to satisfy the defining properties of the first residue.
Family first_residue(const Op& op, const Family& H, const Caps& caps = {});

struct ResidueChain {
  std::vector<Family> chain;  // chain[0] = H, strictly refining, last = fixpoint
  int degree = 0;
};
ResidueChain residue_chain(const Op& op, const Family& H, const Caps& caps = {});

// Ergodic and every stable partition equals its own first residue.
bool is_strongly_ergodic(const Op& op, const Caps& caps = {});

enum class OracleVerdict { yes, no, inconclusive };

struct OraclePartitionDetail {
  Family H;
  std::vector<int> n_by_x;  // minimal accepting length per start element; -1 = none
};

struct OracleReport {
  OracleVerdict verdict = OracleVerdict::inconclusive;
  int scon = -1;  // max over (x, H) of the minimal accepting length (when yes)
  std::vector<OraclePartitionDetail> detail;
};

// Brute-force subset BFS over the definition of strong ergodicity; "no" is
// definitive (state cycle closed without acceptance), otherwise the bound
// may be hit and the verdict stays inconclusive.
OracleReport oracle_strong_ergodicity(const Op& op, int length_bound, const Caps& caps = {});
bool definitional_strong_ergodicity(const Op& op, int length_bound, const Caps& caps = {});
int strong_connectability(const Op& op, int length_bound = 64, const Caps& caps = {});

}  // namespace ergo
