#pragma once

#include <utility>
#include <vector>

#include "ergo/partitions.hpp"

namespace ergo {

// Mixed-radix coordinates over a tuple of alphabets; factor 0 is the most
// significant digit of the flat index.
struct ProductSpace {
  std::vector<int> dims;

  int size() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
  int flat(const std::vector<int>& coords) const {
    int x = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) x = x * dims[i] + coords[i];
    return x;
  }
  std::vector<int> unflat(int x) const {
    std::vector<int> coords(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
      coords[i] = x % dims[i];
      x /= dims[i];
    }
    return coords;
  }
};

struct ProductContext {
  std::vector<Op> factors;
  ProductSpace space;
  Op prod;
};

ProductContext tensor_ops(const std::vector<Op>& factors);

// Rectangles A_0 x ... x A_{m-1} with A_i ranging over the blocks of parts[i].
Family tensor_partitions(const std::vector<Family>& parts, const ProductSpace& space);

// Context restricted to the factors whose coordinate bit is set (ascending).
ProductContext subspace(const ProductContext& ctx, Mask coords);

// Images of blocks under projection onto the chosen coordinates.
Family project_U(const ProductContext& ctx, const Family& H, Mask coords);
// Nonempty fiber slices of blocks along the chosen coordinates.
Family project_L(const ProductContext& ctx, const Family& H, Mask coords);

struct BlockPieces {
  Mask block = 0;                             // block in the full product space
  std::vector<std::pair<Mask, Mask>> pieces;  // (L_A block, L_B block) rectangles
};

struct ProductDecomposition {
  Mask coordsA = 0;
  Mask coordsB = 0;
  Family LA, UA, LB, UB;
  int correlation = 1;  // = |LA|/|UA| = |LB|/|UB|; each block splits into this many pieces
  std::vector<BlockPieces> blocks;
};

ProductDecomposition decompose(const ProductContext& ctx, const Family& H, Mask coordsA);

// One stable partition per factor whose block counts multiply to |H|.
std::vector<Family> canonical_factorization(const ProductContext& ctx, const Family& H);

// C picks exactly one element from every block of H.
bool is_section(const Family& H, Mask C);

}  // namespace ergo
