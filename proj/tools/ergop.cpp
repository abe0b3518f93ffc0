#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ergo/census.hpp"
#include "ergo/product.hpp"
#include "ergo/report.hpp"

namespace {

using ergo::json;

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    ergo::fail(ergo::Err::NonSquare, "malformed json in " + what + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return parse_json_text(ss.str(), "stdin");
  }
  std::ifstream in(path);
  if (!in) ergo::fail(ergo::Err::NonSquare, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// Inline json, or @file to read it from disk.
json parse_arg_json(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return load_json_file(arg.substr(1));
  return parse_json_text(arg, "argument");
}

ergo::Op load_table(const std::string& path) { return ergo::op_from_json(load_json_file(path)).op; }

ergo::Mask parse_coords(const std::string& arg, std::size_t m) {
  ergo::Mask coords = 0;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    int v = -1;
    try {
      v = std::stoi(tok, &pos);
    } catch (...) {
    }
    if (pos != tok.size() || v < 0 || v >= static_cast<int>(m))
      ergo::fail(ergo::Err::DimensionMismatch, "bad coordinate list '" + arg + "'");
    coords |= ergo::Mask{1} << v;
  }
  if (coords == 0) ergo::fail(ergo::Err::DimensionMismatch, "empty coordinate list");
  return coords;
}

void print_text(const json& j, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) os << it.key() << ": " << it.value().dump() << "\n";
}

void emit(const json& j, const std::string& format) {
  if (format == "text")
    print_text(j, std::cout);
  else
    std::cout << j.dump(2) << "\n";
}

json stable_partition_entries(const ergo::Op& op, const ergo::Caps& caps) {
  const bool erg = ergo::is_ergodic(op);
  json out = json::array();
  for (const ergo::Family& H : ergo::enumerate_stable_partitions(op, caps)) {
    json e;
    e["blocks"] = ergo::family_to_json(H);
    e["size"] = H.size();
    e["period"] = ergo::is_periodic_partition(op, H, caps.orbit_budget).second;
    if (erg) {
      const ergo::ResidueChain rc = ergo::residue_chain(op, H, caps);
      json chain = json::array();
      for (const ergo::Family& k : rc.chain) chain.push_back(ergo::family_to_json(k));
      e["residue_chain"] = std::move(chain);
      e["residual_degree"] = rc.degree;
    }
    out.push_back(std::move(e));
  }
  return out;
}

json product_check(const std::vector<ergo::Op>& factors, const ergo::Caps& caps) {
  const ergo::ProductContext ctx = ergo::tensor_ops(factors);
  json out;
  out["product"] = json{{"q", ctx.prod.q},
                        {"digest", ergo::digest_hex(ergo::table_digest(ctx.prod))}};
  json fs = json::array();
  bool all_up = true, all_erg = true;
  for (const ergo::Op& f : factors) {
    const bool up = ergo::is_uniformity_preserving(f);
    const bool e = ergo::is_ergodic(f);
    all_up = all_up && up;
    all_erg = all_erg && e;
    fs.push_back(json{{"q", f.q},
                      {"digest", ergo::digest_hex(ergo::table_digest(f))},
                      {"uniformity_preserving", up},
                      {"ergodic", e}});
  }
  out["factors"] = std::move(fs);
  const bool up_p = ergo::is_uniformity_preserving(ctx.prod);
  const bool erg_p = ergo::is_ergodic(ctx.prod);
  json laws;
  laws["uniformity_preserving_iff_factors"] = (up_p == all_up);
  laws["ergodic_iff_factors"] = (erg_p == all_erg);
  if (up_p != all_up || erg_p != all_erg)
    ergo::fail(ergo::Err::VerificationFailed, "product flags disagree with the factor flags");
  out["uniformity_preserving"] = up_p;
  out["ergodic"] = erg_p;
  if (erg_p) {
    int worst = 1;
    for (const ergo::Op& f : factors) worst = std::max(worst, ergo::connectability(f));
    const int con_p = ergo::connectability(ctx.prod);
    out["connectability"] = con_p;
    laws["connectability_is_max_of_factors"] = (con_p == worst);
    if (con_p != worst)
      ergo::fail(ergo::Err::VerificationFailed,
                 "product connectability differs from the factor maximum");
  }
  if (up_p && ctx.prod.q <= caps.partition_enum_q && ctx.prod.q <= caps.max_q) {
    bool all_serg = true;
    for (const ergo::Op& f : factors) all_serg = all_serg && ergo::is_strongly_ergodic(f, caps);
    const bool serg_p = ergo::is_strongly_ergodic(ctx.prod, caps);
    out["strongly_ergodic"] = serg_p;
    laws["strongly_ergodic_iff_factors"] = (serg_p == all_serg);
    if (serg_p != all_serg)
      ergo::fail(ergo::Err::VerificationFailed,
                 "product strong ergodicity disagrees with the factor flags");
  }
  out["laws"] = std::move(laws);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"classifier for finite binary operations given as Cayley tables"};
  app.require_subcommand(1);

  ergo::Caps caps;
  int oracle_bound = 64;
  int jobs = 1;
  bool timings = false;
  std::string format = "json";
  app.add_option("--max-q", caps.max_q, "alphabet cap for residue analyses")
      ->capture_default_str();
  app.add_option("--enum-q", caps.partition_enum_q, "alphabet cap for partition enumeration")
      ->capture_default_str();
  app.add_option("--oracle-q", caps.oracle_q, "alphabet cap for the definitional scan")
      ->capture_default_str();
  app.add_option("--oracle-bound", oracle_bound, "sequence length bound for the definitional scan")
      ->capture_default_str();
  app.add_option("--monoid-budget", caps.monoid_budget, "max matrices per phased monoid")
      ->capture_default_str();
  app.add_option("--orbit-budget", caps.orbit_budget, "max iterates per family orbit")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for censuses")->capture_default_str();
  app.add_option("--format", format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_flag("--timings", timings, "include timings in reports");

  std::string table_path, partition_arg, cover_arg, coords_arg, rows_path, scope = "up";
  std::vector<std::string> table_paths;
  int census_q = 3;
  bool with_oracle = false, show_iterates = false;

  auto* c_classify = app.add_subcommand("classify", "classify one table");
  c_classify->add_option("table", table_path, "table json file, or - for stdin")->required();

  auto* c_census = app.add_subcommand("census", "exhaustively sweep small alphabets");
  c_census->add_option("--q", census_q, "alphabet size")->required();
  c_census->add_option("--scope", scope, "up, all or latin")
      ->check(CLI::IsMember({"up", "all", "latin"}));
  c_census->add_flag("--oracle", with_oracle, "cross-check strong ergodicity definitionally");
  c_census->add_option("--rows", rows_path, "write one json line per table to this file");

  auto* c_residue = app.add_subcommand("residue", "residue chain of a stable partition");
  c_residue->add_option("table", table_path)->required();
  c_residue->add_option("--partition", partition_arg, "blocks as json, or @file")->required();

  auto* c_product = app.add_subcommand("product", "tensor products of tables");
  c_product->require_subcommand(1);
  auto* p_check = c_product->add_subcommand("check", "product flags against factor flags");
  p_check->add_option("tables", table_paths)->required()->expected(2, -1);
  auto* p_decompose = c_product->add_subcommand("decompose", "split a stable partition");
  p_decompose->add_option("tables", table_paths)->required()->expected(2, -1);
  p_decompose->add_option("--partition", partition_arg)->required();
  p_decompose->add_option("--coords", coords_arg, "comma list of factor indices for one side")
      ->required();
  auto* p_factorize = c_product->add_subcommand("factorize", "one stable partition per factor");
  p_factorize->add_option("tables", table_paths)->required()->expected(2, -1);
  p_factorize->add_option("--partition", partition_arg)->required();

  auto* c_stable = app.add_subcommand("stable-partitions", "list all stable partitions");
  c_stable->add_option("table", table_path)->required();

  auto* c_generated = app.add_subcommand("generated-partition",
                                         "finest periodic partition coarser than a cover");
  c_generated->add_option("table", table_path)->required();
  c_generated->add_option("--cover", cover_arg, "members as json, or @file")->required();

  auto* c_cover = app.add_subcommand("cover-orbit", "iterate a cover to its generated partition");
  c_cover->add_option("table", table_path)->required();
  c_cover->add_option("--cover", cover_arg)->required();
  c_cover->add_flag("--iterates", show_iterates, "include every reduced iterate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*c_classify) {
    ergo::ClassifyOptions opts;
    opts.caps = caps;
    opts.oracle_bound = oracle_bound;
    opts.timings = timings;
    emit(ergo::classify(load_table(table_path), opts), format);
  } else if (*c_census) {
    ergo::CensusOptions opts;
    opts.q = census_q;
    opts.scope = scope == "all"     ? ergo::CensusScope::all
                 : scope == "latin" ? ergo::CensusScope::latin
                                    : ergo::CensusScope::up;
    opts.jobs = jobs;
    opts.with_oracle = with_oracle;
    opts.oracle_bound = oracle_bound;
    opts.caps = caps;
    std::ofstream rows;
    if (!rows_path.empty()) {
      rows.open(rows_path);
      if (!rows) ergo::fail(ergo::Err::NonSquare, "cannot write " + rows_path);
    }
    const ergo::CensusSummary sum = ergo::run_census(opts, rows.is_open() ? &rows : nullptr);
    emit(ergo::census_summary_json(sum), format);
  } else if (*c_residue) {
    const ergo::Op op = load_table(table_path);
    const ergo::Family H = ergo::family_from_json(parse_arg_json(partition_arg), op.q);
    const ergo::ResidueChain rc = ergo::residue_chain(op, H, caps);
    json out;
    out["partition"] = ergo::family_to_json(H);
    out["period"] = ergo::is_periodic_partition(op, H, caps.orbit_budget).second;
    json chain = json::array();
    for (const ergo::Family& k : rc.chain) chain.push_back(ergo::family_to_json(k));
    out["chain"] = std::move(chain);
    out["degree"] = rc.degree;
    emit(out, format);
  } else if (*p_check || *p_decompose || *p_factorize) {
    std::vector<ergo::Op> factors;
    for (const std::string& p : table_paths) factors.push_back(load_table(p));
    if (*p_check) {
      emit(product_check(factors, caps), format);
    } else {
      const ergo::ProductContext ctx = ergo::tensor_ops(factors);
      const ergo::Family H = ergo::family_from_json(parse_arg_json(partition_arg), ctx.prod.q);
      if (*p_decompose) {
        const ergo::Mask coords = parse_coords(coords_arg, factors.size());
        const ergo::ProductDecomposition d = ergo::decompose(ctx, H, coords);
        json out;
        json ca = json::array(), cb = json::array();
        for (ergo::Mask r = d.coordsA; r; r &= r - 1) ca.push_back(ergo::lowbit(r));
        for (ergo::Mask r = d.coordsB; r; r &= r - 1) cb.push_back(ergo::lowbit(r));
        out["coordsA"] = std::move(ca);
        out["coordsB"] = std::move(cb);
        out["LA"] = ergo::family_to_json(d.LA);
        out["UA"] = ergo::family_to_json(d.UA);
        out["LB"] = ergo::family_to_json(d.LB);
        out["UB"] = ergo::family_to_json(d.UB);
        out["correlation"] = d.correlation;
        json blocks = json::array();
        for (const ergo::BlockPieces& bp : d.blocks) {
          json pieces = json::array();
          for (const auto& [a, b] : bp.pieces)
            pieces.push_back(json::array(
                {ergo::family_to_json({a})[0], ergo::family_to_json({b})[0]}));
          blocks.push_back(json{{"block", ergo::family_to_json({bp.block})[0]},
                                {"pieces", std::move(pieces)}});
        }
        out["blocks"] = std::move(blocks);
        emit(out, format);
      } else {
        const std::vector<ergo::Family> parts = ergo::canonical_factorization(ctx, H);
        json out;
        json fs = json::array(), sizes = json::array();
        for (const ergo::Family& p : parts) {
          fs.push_back(ergo::family_to_json(p));
          sizes.push_back(p.size());
        }
        out["partition"] = ergo::family_to_json(H);
        out["factors"] = std::move(fs);
        out["sizes"] = std::move(sizes);
        out["block_count"] = ergo::canon_family(H).size();
        emit(out, format);
      }
    }
  } else if (*c_stable) {
    const ergo::Op op = load_table(table_path);
    json out;
    const json entries = stable_partition_entries(op, caps);
    out["count"] = entries.size();
    out["stable_partitions"] = entries;
    emit(out, format);
  } else if (*c_generated) {
    const ergo::Op op = load_table(table_path);
    const ergo::Family A = ergo::family_from_json(parse_arg_json(cover_arg), op.q);
    json out;
    out["cover"] = ergo::family_to_json(A);
    out["components"] = ergo::family_to_json(ergo::cover_components(A, op.q));
    const ergo::Family gen = ergo::generated_partition(op, A, caps);
    out["generated"] = ergo::family_to_json(gen);
    out["generated_period"] = ergo::is_periodic_partition(op, gen, caps.orbit_budget).second;
    emit(out, format);
  } else if (*c_cover) {
    const ergo::Op op = load_table(table_path);
    const ergo::Family A = ergo::family_from_json(parse_arg_json(cover_arg), op.q);
    const ergo::CoverOrbitReport rep = ergo::cover_orbit_analysis(op, A, caps);
    json out;
    out["cover"] = ergo::family_to_json(rep.cover);
    out["components"] = ergo::family_to_json(rep.components);
    out["generated"] = ergo::family_to_json(rep.generated);
    out["witness_n"] = rep.witness_n;
    out["iterates_computed"] = rep.iterates.size();
    if (show_iterates) {
      json its = json::array();
      for (const ergo::Family& f : rep.iterates) its.push_back(ergo::family_to_json(f));
      out["iterates"] = std::move(its);
    }
    emit(out, format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ergo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ergo::exit_code_for(e.kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
