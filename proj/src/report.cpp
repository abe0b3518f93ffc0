#include "ergo/report.hpp"

#include <algorithm>
#include <chrono>

namespace ergo {

namespace {

std::vector<int> mask_elems(Mask m) {
  std::vector<int> v;
  for (Mask r = m; r; r &= r - 1) v.push_back(lowbit(r));
  return v;
}

double ms_since(std::chrono::steady_clock::time_point& mark) {
  const auto now = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(now - mark).count();
  mark = now;
  return ms;
}

}  // namespace

LoadedTable op_from_json(const json& j) {
  LoadedTable lt;
  std::vector<std::vector<long long>> raw;
  try {
    raw = j.at("table").get<std::vector<std::vector<long long>>>();
  } catch (const json::exception& e) {
    fail(Err::NonSquare, std::string("malformed table object: ") + e.what());
  }
  lt.op = validate_table(raw);
  if (j.contains("q")) {
    long long declared = -1;
    try {
      declared = j.at("q").get<long long>();
    } catch (const json::exception& e) {
      fail(Err::NonSquare, std::string("malformed table object: ") + e.what());
    }
    if (declared != lt.op.q)
      fail(Err::NonSquare, "declared q=" + std::to_string(declared) + " but table has " +
                               std::to_string(lt.op.q) + " rows");
  }
  if (j.contains("labels")) {
    try {
      lt.labels = j.at("labels").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      fail(Err::DimensionMismatch, std::string("malformed labels: ") + e.what());
    }
    if (static_cast<int>(lt.labels.size()) != lt.op.q)
      fail(Err::DimensionMismatch, "expected one label per element");
  }
  return lt;
}

json op_to_json(const Op& op) {
  json rows = json::array();
  for (int a = 0; a < op.q; ++a) {
    json row = json::array();
    for (int b = 0; b < op.q; ++b) row.push_back(static_cast<int>(op.at(a, b)));
    rows.push_back(std::move(row));
  }
  return json{{"q", op.q}, {"table", std::move(rows)}};
}

json family_to_json(const Family& f) {
  std::vector<std::vector<int>> blocks;
  for (Mask m : f) blocks.push_back(mask_elems(m));
  std::sort(blocks.begin(), blocks.end());
  json out = json::array();
  for (auto& b : blocks) out.push_back(b);
  return out;
}

Family family_from_json(const json& j, int q) {
  std::vector<std::vector<long long>> blocks;
  try {
    blocks = j.get<std::vector<std::vector<long long>>>();
  } catch (const json::exception& e) {
    fail(Err::DimensionMismatch, std::string("malformed family: ") + e.what());
  }
  Family f;
  for (const auto& b : blocks) {
    if (b.empty()) fail(Err::EmptySet, "families cannot contain the empty set");
    Mask m = 0;
    for (long long v : b) {
      if (v < 0 || v >= q)
        fail(Err::EntryOutOfRange, "family member " + std::to_string(v) + " outside 0.." +
                                       std::to_string(q - 1));
      m |= Mask{1} << v;
    }
    f.push_back(m);
  }
  if (f.empty()) fail(Err::EmptySet, "family has no members");
  return canon_family(std::move(f));
}

json classify(const Op& op, const ClassifyOptions& opts) {
  auto mark = std::chrono::steady_clock::now();
  json timings;
  json notes = json::array();
  json out;
  out["q"] = op.q;
  out["digest"] = digest_hex(table_digest(op));
  const bool up = is_uniformity_preserving(op);
  out["uniformity_preserving"] = up;
  out["quasigroup"] = is_quasigroup(op);
  const bool irr = is_irreducible(op);
  out["irreducible"] = irr;
  bool erg = false;
  if (irr) {
    const ErgodicClasses ec = ergodic_classes(op);
    out["period"] = ec.per;
    json cls = json::array();
    for (Mask b : ec.blocks) cls.push_back(mask_elems(b));
    out["ergodic_classes"] = std::move(cls);
    out["connectability"] = connectability(op);
    erg = ec.per == 1;
  }
  out["ergodic"] = erg;
  timings["flags_ms"] = ms_since(mark);

  bool serg_known = false;
  bool serg = false;
  if (!up) {
    notes.push_back("not uniformity preserving: partition dynamics not applicable");
  } else if (op.q > opts.caps.partition_enum_q) {
    notes.push_back("stable partition enumeration skipped (q above cap " +
                    std::to_string(opts.caps.partition_enum_q) + ")");
  } else {
    json sp = json::array();
    bool all_residues_fixed = true;
    for (const Family& H : enumerate_stable_partitions(op, opts.caps)) {
      json e;
      e["blocks"] = family_to_json(H);
      e["size"] = H.size();
      e["period"] = is_periodic_partition(op, H, opts.caps.orbit_budget).second;
      if (erg) {
        const ResidueChain rc = residue_chain(op, H, opts.caps);
        json chain = json::array();
        for (const Family& k : rc.chain) chain.push_back(family_to_json(k));
        e["residue_chain"] = std::move(chain);
        e["residual_degree"] = rc.degree;
        if (rc.degree != 0) all_residues_fixed = false;
      }
      sp.push_back(std::move(e));
    }
    out["stable_partitions"] = std::move(sp);
    if (erg) {
      serg_known = true;
      serg = all_residues_fixed;
      out["strongly_ergodic"] = serg;
    } else {
      out["strongly_ergodic"] = false;
      serg_known = true;
    }
  }
  timings["partitions_ms"] = ms_since(mark);

  if (serg_known && serg) {
    if (op.q > opts.caps.oracle_q) {
      notes.push_back("strong connectability skipped (q above oracle cap " +
                      std::to_string(opts.caps.oracle_q) + ")");
    } else {
      try {
        out["strong_connectability"] = strong_connectability(op, opts.oracle_bound, opts.caps);
      } catch (const Error& e) {
        if (e.kind != Err::InconclusiveWithinBound) throw;
        notes.push_back("strong connectability inconclusive within length bound " +
                        std::to_string(opts.oracle_bound));
      }
    }
  }
  timings["oracle_ms"] = ms_since(mark);

  if (serg_known) {
    if (out["quasigroup"].get<bool>() && !serg)
      fail(Err::VerificationFailed, "a quasigroup classified as not strongly ergodic");
    if (serg && !erg) fail(Err::VerificationFailed, "strongly ergodic without being ergodic");
  }
  if (erg && !irr) fail(Err::VerificationFailed, "ergodic without being irreducible");

  if (!notes.empty()) out["notes"] = std::move(notes);
  if (opts.timings) out["timings"] = std::move(timings);
  return out;
}

}  // namespace ergo
