#include "ergo/product.hpp"

#include <algorithm>
#include <string>

#include "ergo/graph.hpp"

namespace ergo {

namespace {

std::vector<int> coord_list(Mask coords, std::size_t m) {
  if (coords == 0 || (coords >> m) != 0)
    fail(Err::DimensionMismatch, "coordinate set must be a nonempty subset of the factors");
  std::vector<int> cl;
  for (Mask r = coords; r; r &= r - 1) cl.push_back(lowbit(r));
  return cl;
}

struct Projection {
  ProductSpace sub;
  std::vector<int> to_sub;  // full flat index -> sub flat index
};

Projection projection_onto(const ProductSpace& full, Mask coords) {
  Projection pr;
  const std::vector<int> cl = coord_list(coords, full.dims.size());
  for (int i : cl) pr.sub.dims.push_back(full.dims[i]);
  pr.to_sub.resize(full.size());
  std::vector<int> sc(cl.size());
  for (int x = 0; x < full.size(); ++x) {
    const std::vector<int> c = full.unflat(x);
    for (std::size_t i = 0; i < cl.size(); ++i) sc[i] = c[cl[i]];
    pr.to_sub[x] = pr.sub.flat(sc);
  }
  return pr;
}

void require_decomposable(const ProductContext& ctx, const Family& H) {
  for (const Op& f : ctx.factors)
    if (!is_ergodic(f)) fail(Err::NotErgodicFactors, "every factor must be ergodic");
  if (!is_stable_partition(ctx.prod, H))
    fail(Err::NotStable, "projections need a stable partition of the product");
}

Family verified_stable(const ProductContext& sub_ctx, Family f, const char* what) {
  f = canon_family(std::move(f));
  if (!is_partition_of(f, sub_ctx.prod.q) || !is_stable_partition(sub_ctx.prod, f))
    fail(Err::DecompositionFailed, std::string(what) + " is not a stable partition of its subspace");
  return f;
}

Mask rectangle(const Projection& pa, const Projection& pb, int q, Mask a, Mask b) {
  Mask r = 0;
  for (int x = 0; x < q; ++x)
    if ((a >> pa.to_sub[x] & 1) && (b >> pb.to_sub[x] & 1)) r |= Mask{1} << x;
  return r;
}

}  // namespace

ProductContext tensor_ops(const std::vector<Op>& factors) {
  if (factors.empty()) fail(Err::DimensionMismatch, "product needs at least one factor");
  ProductContext ctx;
  ctx.factors = factors;
  long long n = 1;
  for (const Op& f : factors) {
    ctx.space.dims.push_back(f.q);
    n *= f.q;
    if (n > kHardMaxQ)
      fail(Err::ProductTooLarge, "product alphabet exceeds " + std::to_string(kHardMaxQ));
  }
  const int Q = static_cast<int>(n);
  ctx.prod.q = Q;
  ctx.prod.t.assign(static_cast<std::size_t>(Q) * Q, 0);
  std::vector<int> z(factors.size());
  for (int x = 0; x < Q; ++x) {
    const std::vector<int> xc = ctx.space.unflat(x);
    for (int y = 0; y < Q; ++y) {
      const std::vector<int> yc = ctx.space.unflat(y);
      for (std::size_t i = 0; i < factors.size(); ++i)
        z[i] = factors[i].at(static_cast<Elem>(xc[i]), static_cast<Elem>(yc[i]));
      ctx.prod.t[static_cast<std::size_t>(x) * Q + y] = static_cast<Elem>(ctx.space.flat(z));
    }
  }
  return ctx;
}

Family tensor_partitions(const std::vector<Family>& parts, const ProductSpace& space) {
  if (parts.size() != space.dims.size())
    fail(Err::DimensionMismatch, "one component family per factor");
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!is_partition_of(parts[i], space.dims[i]))
      fail(Err::DimensionMismatch, "each component family must partition its factor");
  Family rects;
  std::vector<std::size_t> pick(parts.size(), 0);
  for (;;) {
    Mask r = 0;
    for (int x = 0; x < space.size(); ++x) {
      const std::vector<int> c = space.unflat(x);
      bool in = true;
      for (std::size_t i = 0; i < parts.size() && in; ++i)
        in = (parts[i][pick[i]] >> c[i]) & 1;
      if (in) r |= Mask{1} << x;
    }
    rects.push_back(r);
    std::size_t i = parts.size();
    while (i-- > 0) {
      if (++pick[i] < parts[i].size()) break;
      pick[i] = 0;
      if (i == 0) return canon_family(std::move(rects));
    }
  }
}

ProductContext subspace(const ProductContext& ctx, Mask coords) {
  const std::vector<int> cl = coord_list(coords, ctx.factors.size());
  std::vector<Op> sub;
  for (int i : cl) sub.push_back(ctx.factors[i]);
  return tensor_ops(sub);
}

Family project_U(const ProductContext& ctx, const Family& H, Mask coords) {
  coord_list(coords, ctx.factors.size());
  require_decomposable(ctx, H);
  const Projection pr = projection_onto(ctx.space, coords);
  Family out;
  for (Mask A : H) {
    Mask img = 0;
    for (Mask r = A; r; r &= r - 1) img |= Mask{1} << pr.to_sub[lowbit(r)];
    out.push_back(img);
  }
  return verified_stable(subspace(ctx, coords), std::move(out), "image family");
}

Family project_L(const ProductContext& ctx, const Family& H, Mask coords) {
  const Mask all_coords = (Mask{1} << ctx.factors.size()) - 1;
  if (coords == all_coords)
    fail(Err::DimensionMismatch, "slices need a strict subset of the coordinates");
  coord_list(coords, ctx.factors.size());
  require_decomposable(ctx, H);
  const Projection pt = projection_onto(ctx.space, coords);
  const Projection pc = projection_onto(ctx.space, all_coords & ~coords);
  Family out;
  for (Mask A : H) {
    std::vector<Mask> slice(pc.sub.size(), 0);
    for (Mask r = A; r; r &= r - 1) {
      const int x = lowbit(r);
      slice[pc.to_sub[x]] |= Mask{1} << pt.to_sub[x];
    }
    for (Mask s : slice)
      if (s) out.push_back(s);
  }
  return verified_stable(subspace(ctx, coords), std::move(out), "slice family");
}

ProductDecomposition decompose(const ProductContext& ctx, const Family& H, Mask coordsA) {
  const Mask all_coords = (Mask{1} << ctx.factors.size()) - 1;
  if (ctx.factors.size() < 2) fail(Err::DimensionMismatch, "splitting needs at least two factors");
  if (coordsA == all_coords)
    fail(Err::DimensionMismatch, "splitting needs a strict subset of the coordinates");
  coord_list(coordsA, ctx.factors.size());
  ProductDecomposition d;
  d.coordsA = coordsA;
  d.coordsB = all_coords & ~coordsA;
  d.LA = project_L(ctx, H, d.coordsA);
  d.UA = project_U(ctx, H, d.coordsA);
  d.LB = project_L(ctx, H, d.coordsB);
  d.UB = project_U(ctx, H, d.coordsB);
  if (!is_finer(d.LA, d.UA) || !is_finer(d.LB, d.UB))
    fail(Err::DecompositionFailed, "slice family does not refine the image family");
  if (d.LA.size() % d.UA.size() != 0 || d.LB.size() % d.UB.size() != 0 ||
      d.LA.size() / d.UA.size() != d.LB.size() / d.UB.size())
    fail(Err::DecompositionFailed, "correlation ratios of the two sides disagree");
  d.correlation = static_cast<int>(d.LA.size() / d.UA.size());
  const Family h = canon_family(H);
  if (h.size() * d.correlation != d.LA.size() * d.LB.size())
    fail(Err::DecompositionFailed, "block counts violate the correlation identity");

  const Projection pa = projection_onto(ctx.space, d.coordsA);
  const Projection pb = projection_onto(ctx.space, d.coordsB);
  Family rects_l, rects_u;
  for (Mask a : d.LA)
    for (Mask b : d.LB)
      if (Mask r = rectangle(pa, pb, ctx.prod.q, a, b)) rects_l.push_back(r);
  for (Mask a : d.UA)
    for (Mask b : d.UB)
      if (Mask r = rectangle(pa, pb, ctx.prod.q, a, b)) rects_u.push_back(r);
  if (!is_finer(canon_family(rects_l), h) || !is_finer(h, canon_family(rects_u)))
    fail(Err::DecompositionFailed, "partition is not sandwiched between the two rectangle grids");

  for (Mask blk : h) {
    BlockPieces bp;
    bp.block = blk;
    int covered = 0;
    for (Mask a : d.LA)
      for (Mask b : d.LB) {
        const Mask r = rectangle(pa, pb, ctx.prod.q, a, b);
        if (!(r & blk)) continue;
        if (r & ~blk)
          fail(Err::DecompositionFailed, "slice rectangle straddles a block boundary");
        bp.pieces.emplace_back(a, b);
        covered += popcount(r);
      }
    if (static_cast<int>(bp.pieces.size()) != d.correlation || covered != popcount(blk))
      fail(Err::DecompositionFailed, "block does not split into correlation-many rectangles");
    d.blocks.push_back(std::move(bp));
  }
  return d;
}

std::vector<Family> canonical_factorization(const ProductContext& ctx, const Family& H) {
  const std::size_t m = ctx.factors.size();
  std::vector<Family> parts;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Mask prefix = (Mask{1} << (i + 1)) - 1;
    const Family sliced = project_L(ctx, H, prefix);
    parts.push_back(project_U(subspace(ctx, prefix), sliced, Mask{1} << i));
  }
  parts.push_back(project_U(ctx, H, Mask{1} << (m - 1)));
  std::size_t total = 1;
  for (const Family& p : parts) total *= p.size();
  if (total != canon_family(H).size())
    fail(Err::DecompositionFailed, "factor block counts do not multiply to the block count");
  return parts;
}

bool is_section(const Family& H, Mask C) {
  Mask covered = 0;
  for (Mask b : H) {
    if (popcount(C & b) != 1) return false;
    covered |= b;
  }
  return (C & ~covered) == 0;
}

}  // namespace ergo
