#pragma once

#include <array>
#include <vector>

#include "ergo/core.hpp"

namespace ergo {

// Boolean reachability matrix, one bitmask row per element. Shared between the
// one-step classification here and the sequence actions in residue.
struct TransferMatrix {
  int q = 0;
  std::array<Mask, kHardMaxQ> row{};

  bool operator==(const TransferMatrix& o) const {
    if (q != o.q) return false;
    for (int i = 0; i < q; ++i)
      if (row[i] != o.row[i]) return false;
    return true;
  }
};

TransferMatrix tm_identity(int q);
// (a*b)[x] = union of b-rows over a-row of x, i.e. "apply a, then b".
TransferMatrix tm_mul(const TransferMatrix& a, const TransferMatrix& b);
bool tm_reflexive(const TransferMatrix& m);
std::uint64_t tm_hash(const TransferMatrix& m);
bool tm_less(const TransferMatrix& a, const TransferMatrix& b);

TransferMatrix one_step_matrix(const Op& op);
bool is_irreducible(const Op& op);
int period(const Op& op);

struct ErgodicClasses {
  int per = 1;
  std::vector<Mask> blocks;  // cyclic order from element 0's class; blocks[i] * X = blocks[i+1 mod per]
};
ErgodicClasses ergodic_classes(const Op& op);

bool is_ergodic(const Op& op);
int connectability(const Op& op);

}  // namespace ergo
