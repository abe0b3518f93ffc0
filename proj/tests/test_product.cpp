#include <doctest.h>

#include <algorithm>

#include "ergo/product.hpp"
#include "ergo/residue.hpp"
#include "tables.hpp"

using namespace ergo;
using namespace tables;

TEST_SUITE("product") {

TEST_CASE("flat indexing is mixed-radix with factor 0 most significant") {
  const ProductSpace s{{2, 3}};
  CHECK(s.size() == 6);
  CHECK(s.flat({1, 2}) == 5);
  CHECK(s.flat({1, 0}) == 3);
  CHECK(s.unflat(4) == std::vector<int>{1, 1});
  for (int x = 0; x < s.size(); ++x) CHECK(s.flat(s.unflat(x)) == x);
}

TEST_CASE("componentwise product tables") {
  const ProductContext ctx = tensor_ops({xor2(), xor2()});
  CHECK(ctx.prod == make_op(4, {0, 1, 2, 3, 1, 0, 3, 2, 2, 3, 0, 1, 3, 2, 1, 0}));
  CHECK(subspace(ctx, set({0})).prod == xor2());
  CHECK(subspace(ctx, set({1})).prod == xor2());
  const ProductContext m = tensor_ops({xor2(), add3()});
  CHECK(m.prod.q == 6);
  // (1,2) * (1,1) = (0, 0)
  CHECK(m.prod.at(m.space.flat({1, 2}), m.space.flat({1, 1})) == m.space.flat({0, 0}));
  try {
    tensor_ops({grid4(), grid4(), grid4()});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::ProductTooLarge);
  }
  try {
    tensor_ops({});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::DimensionMismatch);
  }
}

TEST_CASE("rectangle families from per-factor partitions") {
  const ProductSpace s{{2, 2}};
  CHECK(tensor_partitions({fam({{0}, {1}}), fam({{0, 1}})}, s) == fam({{0, 1}, {2, 3}}));
  CHECK(tensor_partitions({fam({{0}, {1}}), fam({{0}, {1}})}, s) == singleton_partition(4));
  try {
    tensor_partitions({fam({{0}, {1}})}, s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::DimensionMismatch);
  }
}

TEST_CASE("flags transfer to and from the factors") {
  const Op prod_se = tensor_ops({serg4(), xor2()}).prod;
  CHECK(is_uniformity_preserving(prod_se));
  CHECK(is_ergodic(prod_se));
  CHECK(is_strongly_ergodic(prod_se));
  const Op prod_not = tensor_ops({xor2(), flip2()}).prod;
  CHECK(is_uniformity_preserving(prod_not));
  CHECK_FALSE(is_ergodic(prod_not));
  // irreducible products force irreducible factors, but two irreducible
  // period-2 factors give a reducible product
  const Op ff = tensor_ops({flip2(), flip2()}).prod;
  CHECK(is_irreducible(flip2()));
  CHECK_FALSE(is_irreducible(ff));
  CHECK(connectability(tensor_ops({xor2(), erg4()}).prod) == 2);
}

TEST_CASE("slices and images of the diagonal partition") {
  const ProductContext ctx = tensor_ops({xor2(), xor2()});
  const Family diag = fam({{0, 3}, {1, 2}});
  CHECK(is_stable_partition(ctx.prod, diag));
  CHECK(project_L(ctx, diag, set({0})) == fam({{0}, {1}}));
  CHECK(project_U(ctx, diag, set({0})) == fam({{0, 1}}));
  CHECK(project_L(ctx, diag, set({1})) == fam({{0}, {1}}));
  CHECK(project_U(ctx, diag, set({1})) == fam({{0, 1}}));
  // projecting onto all coordinates is the identity
  CHECK(project_U(ctx, diag, set({0, 1})) == diag);
  try {
    project_L(ctx, diag, set({0, 1}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::DimensionMismatch);
  }
  try {
    project_U(ctx, fam({{0, 1}, {2, 3}}), set({0}));  // stable, rectangle
  } catch (const Error&) {
    CHECK(false);
  }
  try {
    project_U(ctx, fam({{0, 1, 2}, {3}}), set({0}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::NotStable);
  }
  const ProductContext bad = tensor_ops({xor2(), flip2()});
  try {
    project_U(bad, fam({{0, 1, 2, 3}}), set({0}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind == Err::NotErgodicFactors);
  }
}

TEST_CASE("splitting the diagonal partition") {
  const ProductContext ctx = tensor_ops({xor2(), xor2()});
  const Family diag = fam({{0, 3}, {1, 2}});
  const ProductDecomposition d = decompose(ctx, diag, set({0}));
  CHECK(d.LA == fam({{0}, {1}}));
  CHECK(d.UA == fam({{0, 1}}));
  CHECK(d.LB == fam({{0}, {1}}));
  CHECK(d.UB == fam({{0, 1}}));
  CHECK(d.correlation == 2);
  REQUIRE(d.blocks.size() == 2);
  // block {(0,1),(1,0)} = {0}x{1} plus {1}x{0}; it sorts first
  const BlockPieces& offdiag = d.blocks[0];
  CHECK(offdiag.block == set({1, 2}));
  REQUIRE(offdiag.pieces.size() == 2);
  CHECK(offdiag.pieces[0] == std::pair<Mask, Mask>{set({0}), set({1})});
  CHECK(offdiag.pieces[1] == std::pair<Mask, Mask>{set({1}), set({0})});
  // a rectangle partition splits with correlation 1
  const ProductDecomposition r = decompose(ctx, fam({{0, 1}, {2, 3}}), set({0}));
  CHECK(r.correlation == 1);
  CHECK(r.LA == r.UA);
}

TEST_CASE("every stable partition of the two-letter square factors canonically") {
  const ProductContext ctx = tensor_ops({xor2(), xor2()});
  const auto stables = enumerate_stable_partitions(ctx.prod);
  CHECK(stables.size() == 5);  // the subgroup lattice of the Klein four-group
  for (const Family& h : stables) {
    const auto parts = canonical_factorization(ctx, h);
    std::size_t total = 1;
    for (const Family& p : parts) total *= p.size();
    CHECK(total == h.size());
  }
  const auto diag_parts = canonical_factorization(ctx, fam({{0, 3}, {1, 2}}));
  CHECK(diag_parts == std::vector<Family>{fam({{0}, {1}}), fam({{0, 1}})});
}

TEST_CASE("sections pick one element per block") {
  const Family diag = fam({{0, 3}, {1, 2}});
  CHECK(is_section(diag, set({0, 1})));
  CHECK(is_section(diag, set({3, 2})));
  CHECK_FALSE(is_section(diag, set({0, 3})));
  CHECK_FALSE(is_section(diag, set({0})));
  CHECK_FALSE(is_section(fam({{0, 1}}), set({0, 2})));
}

}  // TEST_SUITE
