#include "ergo/graph.hpp"

#include <numeric>

namespace ergo {

TransferMatrix tm_identity(int q) {
  TransferMatrix m;
  m.q = q;
  for (int i = 0; i < q; ++i) m.row[i] = Mask{1} << i;
  return m;
}

TransferMatrix tm_mul(const TransferMatrix& a, const TransferMatrix& b) {
  TransferMatrix out;
  out.q = a.q;
  for (int i = 0; i < a.q; ++i) {
    Mask acc = 0;
    for (Mask m = a.row[i]; m; m &= m - 1) acc |= b.row[lowbit(m)];
    out.row[i] = acc;
  }
  return out;
}

bool tm_reflexive(const TransferMatrix& m) {
  for (int i = 0; i < m.q; ++i)
    if (!(m.row[i] >> i & 1)) return false;
  return true;
}

std::uint64_t tm_hash(const TransferMatrix& m) {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < m.q; ++i) {
    h ^= m.row[i];
    h *= 1099511628211ull;
  }
  return h;
}

bool tm_less(const TransferMatrix& a, const TransferMatrix& b) {
  for (int i = 0; i < a.q && i < b.q; ++i)
    if (a.row[i] != b.row[i]) return a.row[i] < b.row[i];
  return a.q < b.q;
}

TransferMatrix one_step_matrix(const Op& op) {
  TransferMatrix m;
  m.q = op.q;
  for (int a = 0; a < op.q; ++a) {
    Mask acc = 0;
    for (int x = 0; x < op.q; ++x) acc |= Mask{1} << op.at(a, x);
    m.row[a] = acc;
  }
  return m;
}

namespace {

// BFS levels from element 0; -1 = unreachable.
std::vector<int> bfs_levels(const TransferMatrix& m) {
  std::vector<int> lvl(m.q, -1);
  lvl[0] = 0;
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int u : frontier)
      for (Mask r = m.row[u]; r; r &= r - 1) {
        const int v = lowbit(r);
        if (lvl[v] < 0) {
          lvl[v] = lvl[u] + 1;
          next.push_back(v);
        }
      }
    frontier = std::move(next);
  }
  return lvl;
}

}  // namespace

bool is_irreducible(const Op& op) {
  const TransferMatrix m = one_step_matrix(op);
  TransferMatrix rev;
  rev.q = op.q;
  for (int a = 0; a < op.q; ++a)
    for (Mask r = m.row[a]; r; r &= r - 1) rev.row[lowbit(r)] |= Mask{1} << a;
  const auto fwd = bfs_levels(m);
  const auto bwd = bfs_levels(rev);
  for (int i = 0; i < op.q; ++i)
    if (fwd[i] < 0 || bwd[i] < 0) return false;
  return true;
}

int period(const Op& op) {
  if (!is_irreducible(op)) fail(Err::NotIrreducible, "period is defined for irreducible operations");
  const TransferMatrix m = one_step_matrix(op);
  const auto lvl = bfs_levels(m);
  int g = 0;
  for (int u = 0; u < op.q; ++u)
    for (Mask r = m.row[u]; r; r &= r - 1) g = std::gcd(g, lvl[u] + 1 - lvl[lowbit(r)]);
  return g == 0 ? 1 : (g < 0 ? -g : g);
}

ErgodicClasses ergodic_classes(const Op& op) {
  const int n = period(op);
  const TransferMatrix m = one_step_matrix(op);
  const auto lvl = bfs_levels(m);
  ErgodicClasses ec;
  ec.per = n;
  ec.blocks.assign(n, 0);
  for (int x = 0; x < op.q; ++x) ec.blocks[lvl[x] % n] |= Mask{1} << x;
  const int size0 = popcount(ec.blocks[0]);
  for (int i = 0; i < n; ++i) {
    if (popcount(ec.blocks[i]) != size0)
      fail(Err::VerificationFailed, "ergodic classes are not balanced");
    if (set_product(op, ec.blocks[i], op.all()) != ec.blocks[(i + 1) % n])
      fail(Err::VerificationFailed, "ergodic class does not step to its successor");
  }
  return ec;
}

bool is_ergodic(const Op& op) { return is_irreducible(op) && period(op) == 1; }

int connectability(const Op& op) {
  const ErgodicClasses ec = ergodic_classes(op);  // rejects non-irreducible inputs
  const int n = ec.per;
  const TransferMatrix m = one_step_matrix(op);
  TransferMatrix p = m;
  const long long cap = static_cast<long long>(op.q) << op.q;
  for (long long d = 1; d <= cap; ++d) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const Mask target = ec.blocks[(i + d) % n];
      for (Mask r = ec.blocks[i]; r && ok; r &= r - 1)
        if (p.row[lowbit(r)] != target) ok = false;
    }
    if (ok) return static_cast<int>(d);
    p = tm_mul(p, m);
  }
  fail(Err::VerificationFailed, "connectability search exceeded q*2^q matrix powers");
}

}  // namespace ergo
