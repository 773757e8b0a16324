#include "hetcache/config.hpp"

#include <fstream>
#include <sstream>

#include "hetcache/kvfile.hpp"

namespace hetcache {

std::uint64_t parse_capacity(const std::string& text) {
  std::string t = text;
  std::uint64_t mult = 1;
  auto ends_with = [&](const char* suffix) {
    std::size_t n = std::string(suffix).size();
    return t.size() > n && t.compare(t.size() - n, n, suffix) == 0;
  };
  if (ends_with("KB")) {
    mult = 1024;
    t = t.substr(0, t.size() - 2);
  } else if (ends_with("MB")) {
    mult = 1024 * 1024;
    t = t.substr(0, t.size() - 2);
  } else if (ends_with("GB")) {
    mult = 1024ull * 1024 * 1024;
    t = t.substr(0, t.size() - 2);
  }
  return static_cast<std::uint64_t>(parse_fixed(t, 0)) * mult;
}

namespace {

PayloadMode payload_from_string(const std::string& s) {
  if (s == "none") return PayloadMode::None;
  if (s == "random") return PayloadMode::Random;
  if (s == "zero") return PayloadMode::Zero;
  throw Error("CONFIG_ERROR", "payload must be none, random or zero, got '" + s + "'");
}

LevelConfig parse_level(KvFile::Section& s) {
  LevelConfig cfg;
  cfg.capacity_bytes = parse_capacity(s.take("capacity"));
  cfg.associativity = static_cast<std::uint32_t>(s.take_int("assoc"));
  std::string tech = s.take("tech");
  if (tech == "HYBRID") {
    cfg.hybrid = true;
    cfg.tech = TechClass::GC;
    cfg.gc_ways = static_cast<std::uint32_t>(s.take_int("gc_ways"));
  } else {
    cfg.tech = tech_from_string(tech);
  }
  cfg.node_nm = static_cast<int>(s.take_int_or("node_nm", 28));
  LevelFlags& f = cfg.flags;
  f.nrp = s.take_int_or("nrp", 0) != 0;
  f.nrp_counter_bits = static_cast<int>(s.take_int_or("nrp_counter_bits", 5));
  f.nrp_read_resets = s.take_int_or("nrp_read_resets", 0) != 0;
  f.asymmetric_writes = s.take_int_or("asymmetric_writes", 0) != 0;
  f.compare_victim_on_fill = s.take_int_or("compare_victim_on_fill", 0) != 0;
  if (s.has("write_similarity_bp")) {
    std::string v = s.take("write_similarity_bp");
    f.write_similarity_bp = v == "none" ? -1 : static_cast<int>(parse_fixed(v, 0));
  }
  f.overlap = s.take_int_or("overlap", 0) != 0;
  f.overlap_window_cycles =
      static_cast<cycle_t>(s.take_int_or("overlap_window_cycles", 0));
  f.synchronized_subarrays = s.take_int_or("synchronized_subarrays", 1) != 0;
  f.refresh_interval_multiplier_milli =
      s.take_fixed_or("refresh_interval_multiplier", 3, 1000);
  f.hybrid_promote_mru = s.take_int_or("hybrid_promote_mru", 0) != 0;
  for (const std::string& bin : s.take_all("bin")) {
    std::istringstream ss(bin);
    std::string mult, frac, extra;
    ss >> mult >> frac;
    if (frac.empty() || (ss >> extra))
      throw Error("CONFIG_ERROR", "bin expects '<retention_multiplier> <fraction>'");
    RetentionBin b;
    b.multiplier_milli = parse_fixed(mult, 3);
    b.fraction_bp = static_cast<int>(parse_fixed(frac, 4));
    f.bins.push_back(b);
  }
  s.reject_unknown();
  return cfg;
}

TraceSpec parse_trace(KvFile::Section& s) {
  TraceSpec t;
  if (s.has("path")) {
    t.path = s.take("path");
    s.reject_unknown();
    return t;
  }
  t.kind = s.take("kind");
  t.working_set_bytes =
      s.has("working_set") ? parse_capacity(s.take("working_set")) : 0;
  t.stride = static_cast<std::uint64_t>(s.take_int_or("stride", 64));
  t.iterations = static_cast<std::uint32_t>(s.take_int_or("iterations", 1));
  t.records = static_cast<std::uint64_t>(s.take_int_or("records", 0));
  t.hot_bytes = s.has("hot_set") ? parse_capacity(s.take("hot_set")) : 0;
  t.cold_every = static_cast<std::uint64_t>(s.take_int_or("cold_every", 0));
  t.write_ratio_bp = static_cast<int>(s.take_int_or("write_ratio_bp", 0));
  t.gap = static_cast<std::uint64_t>(s.take_int_or("gap", 0));
  t.payload = payload_from_string(s.take_or("payload", "none"));
  t.base_addr = static_cast<std::uint64_t>(s.take_int_or("base_addr", 0));
  t.copies = static_cast<std::uint32_t>(s.take_int_or("copies", 1));
  s.reject_unknown();
  if (t.write_ratio_bp < 0 || t.write_ratio_bp > 10000)
    throw Error("CONFIG_ERROR", "write_ratio_bp outside [0, 10000]");
  return t;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  KvFile kv = KvFile::parse_text(text, origin);
  RunConfig rc;
  bool saw_sim = false, saw_trace = false;
  bool saw[4] = {false, false, false, false};
  for (auto& section : kv.sections()) {
    if (section.name == "sim") {
      saw_sim = true;
      rc.hierarchy.label = section.take_or("label", "run");
      rc.hierarchy.clock_mhz = section.take_int_or("clock_mhz", DEFAULT_CLOCK_MHZ);
      rc.hierarchy.cores = static_cast<std::uint32_t>(section.take_int_or("cores", 1));
      rc.hierarchy.seed = static_cast<std::uint64_t>(section.take_int_or("seed", 1));
      section.reject_unknown();
    } else if (section.name == "trace") {
      saw_trace = true;
      rc.trace = parse_trace(section);
    } else if (section.name == "l1i") {
      saw[0] = true;
      rc.hierarchy.l1i = parse_level(section);
    } else if (section.name == "l1d") {
      saw[1] = true;
      rc.hierarchy.l1d = parse_level(section);
    } else if (section.name == "l2") {
      saw[2] = true;
      rc.hierarchy.l2 = parse_level(section);
    } else if (section.name == "llc") {
      saw[3] = true;
      rc.hierarchy.llc = parse_level(section);
    } else {
      throw Error("UNKNOWN_KEY", origin + ": unknown section [" + section.name + "]");
    }
  }
  if (!saw_sim) throw Error("CONFIG_ERROR", origin + ": missing [sim] section");
  if (!saw_trace) throw Error("CONFIG_ERROR", origin + ": missing [trace] section");
  const char* names[4] = {"l1i", "l1d", "l2", "llc"};
  for (int i = 0; i < 4; ++i)
    if (!saw[i])
      throw Error("CONFIG_ERROR",
                  origin + ": missing [" + std::string(names[i]) + "] section");
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FILE_ERROR", "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path);
}

Trace build_trace(const TraceSpec& spec, std::uint64_t seed) {
  if (!spec.path.empty())
    throw Error("CONFIG_ERROR", "build_trace called for a file-backed spec");
  GenCommon c;
  c.gap = spec.gap;
  c.payload = spec.payload;
  c.seed = seed;
  c.base_addr = spec.base_addr;
  Trace t;
  if (spec.kind == "loop")
    t = gen_loop(spec.working_set_bytes, spec.stride, spec.iterations,
                 spec.write_ratio_bp, c);
  else if (spec.kind == "random")
    t = gen_random(spec.working_set_bytes, spec.records, spec.write_ratio_bp, c);
  else if (spec.kind == "stream")
    t = gen_stream(spec.records, spec.stride, spec.write_ratio_bp, c);
  else if (spec.kind == "hotcold")
    t = gen_hotcold(spec.hot_bytes, spec.cold_every, spec.records, c);
  else if (spec.kind == "alternating")
    t = gen_alternating(spec.records, c);
  else if (spec.kind == "writeonly")
    t = gen_write_only(spec.records, c);
  else
    throw Error("CONFIG_ERROR", "unknown trace kind '" + spec.kind + "'");
  if (spec.copies > 1) t = replicate(t, spec.copies);
  return t;
}

std::unique_ptr<TraceSource> open_spec_trace(const TraceSpec& spec,
                                             std::uint64_t seed) {
  if (!spec.path.empty()) return open_trace(spec.path);
  return trace_from_vector(build_trace(spec, seed));
}

}  // namespace hetcache
