// hetcache command-line front end: trace generation, simulation and sweeps,
// technology-node scaling, and report comparison.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hetcache/config.hpp"
#include "hetcache/engine.hpp"
#include "hetcache/report.hpp"

namespace fs = std::filesystem;
using namespace hetcache;

namespace {

Catalog load_catalog() {
  if (const char* path = std::getenv("HETCACHE_CATALOG"))
    return Catalog::with_override_file(path);
  return Catalog::builtin();
}

void print_summary(const SimReport& r, std::ostream& os) {
  os << "== " << r.label << " ==\n";
  os << "  records            " << r.records << "\n";
  os << "  total cycles       " << r.total_cycles << "\n";
  os << "  simulated time     " << print_fixed(r.total_time_ps, 6) << " us\n";
  char amat[32];
  std::snprintf(amat, sizeof amat, "%.3f", r.amat_cycles());
  os << "  amat               " << amat << " cycles\n";
  const char* names[] = {"L1I", "L1D", "L2 ", "LLC"};
  for (int i = 0; i < kLevelCount; ++i) {
    LevelKind k = static_cast<LevelKind>(i);
    const LevelStats& s = r.level(k);
    const LevelLedger& l = r.ledger.level(k);
    if (s.demand_lookups == 0 && l.total_aj() == 0) continue;
    os << "  " << names[i] << "  lookups " << s.demand_lookups << "  hits " << s.hits
       << "  misses " << s.misses << "  energy " << print_fixed(l.total_aj(), 6)
       << " pJ\n";
  }
  os << "  DRAM reads/writes  " << r.ledger.dram().reads << "/"
     << r.ledger.dram().writes << "\n";
  os << "  cache energy       " << print_fixed(r.ledger.cache_total_aj(), 6)
     << " pJ\n";
  os << "  total energy       " << print_fixed(r.ledger.total_aj(), 6) << " pJ\n";
  char edp[40];
  std::snprintf(edp, sizeof edp, "%.9e", r.edp_js());
  os << "  EDP                " << edp << " Js\n";
}

int cmd_simulate(const std::vector<std::string>& config_paths, const std::string& out,
                 long long seed_override) {
  Catalog catalog = load_catalog();
  std::vector<RunConfig> runs;
  for (const auto& path : config_paths) {
    RunConfig rc = load_run_config(path);
    if (seed_override >= 0)
      rc.hierarchy.seed = static_cast<std::uint64_t>(seed_override);
    runs.push_back(std::move(rc));
  }
  // Validate every hierarchy before any run starts.
  for (const auto& rc : runs) Simulator check(catalog, rc.hierarchy);

  std::vector<SimReport> reports;
  if (runs.size() == 1) {
    auto src = open_spec_trace(runs[0].trace, runs[0].hierarchy.seed);
    reports.push_back(simulate(catalog, runs[0].hierarchy, *src));
  } else {
    // A sweep shares one trace: the first config's trace spec drives it.
    Trace trace = build_trace(runs[0].trace, runs[0].hierarchy.seed);
    std::vector<HierarchyConfig> cfgs;
    for (const auto& rc : runs) cfgs.push_back(rc.hierarchy);
    reports = run_sweep(catalog, cfgs, trace);
  }

  if (!out.empty()) fs::create_directories(out);
  for (const auto& r : reports) {
    print_summary(r, std::cout);
    if (out.empty()) continue;
    std::string base = out + "/" + r.label;
    std::ofstream rep(base + ".report");
    write_report(r, rep);
    std::ofstream csv(base + ".csv");
    write_report_csv(r, csv);
    std::cout << "  wrote " << base << ".report and .csv\n";
  }
  return 0;
}

int cmd_scale(const std::string& level_s, const std::string& tech_s, bool hybrid,
              int from, int to) {
  Catalog catalog = load_catalog();
  CacheLevel level;
  if (level_s == "L1")
    level = CacheLevel::L1;
  else if (level_s == "L2")
    level = CacheLevel::L2;
  else if (level_s == "LLC")
    level = CacheLevel::LLC;
  else
    throw Error("CONFIG_ERROR", "level must be L1, L2 or LLC");
  TechClass tech = tech_from_string(tech_s);
  TechVariant variant = hybrid ? TechVariant::Hybrid : TechVariant::Pure;
  TechParams p = scale(catalog.params(level, tech, variant), from, to);
  std::cout << "# " << level_s << "." << tech_s << (hybrid ? ".HYBRID" : "") << " at "
            << to << " nm (scaled from " << from << " nm)\n";
  std::cout << "read_latency_ns " << print_fixed(p.read_latency_ps, 3) << "\n";
  std::cout << "write_latency_ns " << print_fixed(p.write_latency_ps, 3) << "\n";
  std::cout << "read_energy_pj_per_bit " << print_fixed(p.read_energy_aj_per_bit, 6)
            << "\n";
  std::cout << "write_energy_pj_per_bit " << print_fixed(p.write_energy_aj_per_bit, 6)
            << "\n";
  std::cout << "same_bit_write_energy_pj_per_bit "
            << print_fixed(p.same_bit_write_energy_aj_per_bit, 6) << "\n";
  std::cout << "leakage_pw_per_bit " << print_fixed(p.leakage_aw_per_bit, 6) << "\n";
  if (p.refresh) {
    std::cout << "retention_time_ns " << print_fixed(p.refresh->retention_ps, 3)
              << "\n";
    std::cout << "refresh_row_period_ns " << print_fixed(p.refresh->row_period_ps, 3)
              << "\n";
    std::cout << "refresh_energy_pj_per_bit "
              << print_fixed(p.refresh->energy_aj_per_bit, 6) << "\n";
  }
  return 0;
}

int cmd_gen_trace(const TraceSpec& spec, const std::string& out, std::uint64_t seed) {
  Trace t = build_trace(spec, seed);
  write_file(t, out);
  std::cout << "wrote " << t.records.size() << " records (" << t.header.cores
            << " cores) to " << out << "\n";
  return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
  ParsedReport a = parse_report_file(a_path);
  ParsedReport b = parse_report_file(b_path);
  std::cout << compare_reports(a, b);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetcache: trace-driven simulator for heterogeneous-technology "
               "cache hierarchies"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run one config or sweep several");
  std::vector<std::string> config_paths;
  std::string out_dir;
  long long seed_override = -1;
  sim->add_option("--config", config_paths, "run config file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "directory for report/CSV files");
  sim->add_option("--seed", seed_override, "override the config seed");

  auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace");
  TraceSpec spec;
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  std::string payload_mode = "none";
  gen->add_option("--kind", spec.kind,
                  "loop | random | stream | hotcold | alternating | writeonly")
      ->required();
  gen->add_option("--out", gen_out, "output trace path (.bin for binary)")->required();
  gen->add_option("--working-set", spec.working_set_bytes, "working set bytes");
  gen->add_option("--stride", spec.stride, "stride in bytes (default 64)");
  gen->add_option("--iterations", spec.iterations, "loop iterations");
  gen->add_option("--records", spec.records, "record count");
  gen->add_option("--hot-set", spec.hot_bytes, "hotcold: hot set bytes");
  gen->add_option("--cold-every", spec.cold_every, "hotcold: cold line spacing");
  gen->add_option("--write-ratio-bp", spec.write_ratio_bp, "writes per 10000 records");
  gen->add_option("--gap", spec.gap, "issue gap cycles between records");
  gen->add_option("--payload", payload_mode, "none | random | zero");
  gen->add_option("--base-addr", spec.base_addr, "base byte address");
  gen->add_option("--copies", spec.copies, "replicate across N cores");
  gen->add_option("--seed", gen_seed, "generator seed");

  auto* scale_cmd = app.add_subcommand("scale", "print node-scaled parameters");
  std::string level_s, tech_s;
  bool hybrid = false;
  int from = 28, to = 28;
  scale_cmd->add_option("--level", level_s, "L1 | L2 | LLC")->required();
  scale_cmd->add_option("--tech", tech_s, "SRAM | GC | EDRAM | STTRAM")->required();
  scale_cmd->add_flag("--hybrid", hybrid, "use the hybrid-LLC GC entry");
  scale_cmd->add_option("--from", from, "source node in nm (default 28)");
  scale_cmd->add_option("--to", to, "target node in nm")->required();

  auto* cmp = app.add_subcommand("compare", "ratio table of two reports");
  std::string report_a, report_b;
  cmp->add_option("a", report_a, "report file A")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", report_b, "report file B")->required()->check(CLI::ExistingFile);

  auto* cat_cmd = app.add_subcommand("catalog", "dump the parameter catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config_paths, out_dir, seed_override);
    if (*gen) {
      if (payload_mode == "none")
        spec.payload = PayloadMode::None;
      else if (payload_mode == "random")
        spec.payload = PayloadMode::Random;
      else if (payload_mode == "zero")
        spec.payload = PayloadMode::Zero;
      else
        throw Error("CONFIG_ERROR", "payload must be none, random or zero");
      return cmd_gen_trace(spec, gen_out, gen_seed);
    }
    if (*scale_cmd) return cmd_scale(level_s, tech_s, hybrid, from, to);
    if (*cmp) return cmd_compare(report_a, report_b);
    if (*cat_cmd) {
      load_catalog().dump(std::cout);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
