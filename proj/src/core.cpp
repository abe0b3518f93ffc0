#include "ergo/core.hpp"

namespace ergo {

int exit_code_for(Err k) {
  switch (k) {
    case Err::AlphabetTooLarge:
    case Err::IterationBudgetExceeded:
    case Err::StateBudgetExceeded:
    case Err::ProductTooLarge:
    case Err::InconclusiveWithinBound:
      return 3;
    case Err::ResidueVerificationFailed:
    case Err::DecompositionFailed:
    case Err::VerificationFailed:
      return 4;
    default:
      return 2;
  }
}

const char* err_name(Err k) {
  switch (k) {
    case Err::NonSquare: return "NonSquare";
    case Err::EntryOutOfRange: return "EntryOutOfRange";
    case Err::NotUniformityPreserving: return "NotUniformityPreserving";
    case Err::NotQuasigroup: return "NotQuasigroup";
    case Err::EmptySet: return "EmptySet";
    case Err::NotIrreducible: return "NotIrreducible";
    case Err::NotErgodic: return "NotErgodic";
    case Err::NotStable: return "NotStable";
    case Err::NotStronglyErgodic: return "NotStronglyErgodic";
    case Err::NotACover: return "NotACover";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NotErgodicFactors: return "NotErgodicFactors";
    case Err::AlphabetTooLarge: return "AlphabetTooLarge";
    case Err::IterationBudgetExceeded: return "IterationBudgetExceeded";
    case Err::StateBudgetExceeded: return "StateBudgetExceeded";
    case Err::ProductTooLarge: return "ProductTooLarge";
    case Err::InconclusiveWithinBound: return "InconclusiveWithinBound";
    case Err::ResidueVerificationFailed: return "ResidueVerificationFailed";
    case Err::DecompositionFailed: return "DecompositionFailed";
    case Err::VerificationFailed: return "VerificationFailed";
  }
  return "Error";
}

Op validate_table(const std::vector<std::vector<long long>>& raw) {
  const std::size_t q = raw.size();
  if (q == 0) fail(Err::NonSquare, "empty table");
  if (q > kHardMaxQ)
    fail(Err::AlphabetTooLarge, "q=" + std::to_string(q) + " exceeds hard cap " +
                                    std::to_string(kHardMaxQ));
  Op op;
  op.q = static_cast<int>(q);
  op.t.resize(q * q);
  for (std::size_t a = 0; a < q; ++a) {
    if (raw[a].size() != q)
      fail(Err::NonSquare, "row " + std::to_string(a) + " has " +
                               std::to_string(raw[a].size()) + " entries, expected " +
                               std::to_string(q));
    for (std::size_t b = 0; b < q; ++b) {
      const long long v = raw[a][b];
      if (v < 0 || v >= static_cast<long long>(q))
        fail(Err::EntryOutOfRange, "entry (" + std::to_string(a) + "," + std::to_string(b) +
                                       ") = " + std::to_string(v));
      op.t[a * q + b] = static_cast<Elem>(v);
    }
  }
  return op;
}

Op make_op(int q, std::initializer_list<int> flat_rows) {
  std::vector<std::vector<long long>> raw(q);
  auto it = flat_rows.begin();
  if (static_cast<int>(flat_rows.size()) != q * q)
    fail(Err::NonSquare, "flat table size mismatch");
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) raw[a].push_back(*it++);
  return validate_table(raw);
}

bool is_uniformity_preserving(const Op& op) {
  for (int b = 0; b < op.q; ++b) {
    Mask seen = 0;
    for (int a = 0; a < op.q; ++a) seen |= Mask{1} << op.at(a, b);
    if (seen != op.all()) return false;
  }
  return true;
}

Op inverse_op(const Op& op) {
  if (!is_uniformity_preserving(op))
    fail(Err::NotUniformityPreserving, "inverse requires a uniformity-preserving table");
  Op inv;
  inv.q = op.q;
  inv.t.resize(op.t.size());
  for (int b = 0; b < op.q; ++b)
    for (int c = 0; c < op.q; ++c) inv.t[static_cast<std::size_t>(op.at(c, b)) * op.q + b] = static_cast<Elem>(c);
  return inv;
}

bool is_quasigroup(const Op& op) {
  for (int a = 0; a < op.q; ++a) {
    Mask seen = 0;
    for (int b = 0; b < op.q; ++b) seen |= Mask{1} << op.at(a, b);
    if (seen != op.all()) return false;
  }
  return is_uniformity_preserving(op);
}

Op left_division(const Op& op) {
  if (!is_quasigroup(op)) fail(Err::NotQuasigroup, "left division requires a quasigroup");
  Op ld;
  ld.q = op.q;
  ld.t.resize(op.t.size());
  for (int a = 0; a < op.q; ++a)
    for (int c = 0; c < op.q; ++c) ld.t[static_cast<std::size_t>(a) * op.q + op.at(a, c)] = static_cast<Elem>(c);
  return ld;
}

Mask set_product(const Op& op, Mask A, Mask B) {
  Mask out = 0;
  for (Mask ma = A; ma; ma &= ma - 1) {
    const int a = lowbit(ma);
    for (Mask mb = B; mb; mb &= mb - 1) out |= Mask{1} << op.at(a, lowbit(mb));
  }
  return out;
}

std::uint64_t table_digest(const Op& op) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(op.q));
  for (Elem e : op.t) mix(e);
  return h;
}

std::string digest_hex(std::uint64_t d) {
  static const char* hexd = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = hexd[d & 0xf];
    d >>= 4;
  }
  return s;
}

}  // namespace ergo
