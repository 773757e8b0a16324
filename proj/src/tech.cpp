#include "hetcache/tech.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "hetcache/kvfile.hpp"

namespace hetcache {

std::string to_string(TechClass t) {
  switch (t) {
    case TechClass::SRAM: return "SRAM";
    case TechClass::GC: return "GC";
    case TechClass::EDRAM: return "EDRAM";
    case TechClass::STTRAM: return "STTRAM";
  }
  return "?";
}

TechClass tech_from_string(const std::string& s) {
  if (s == "SRAM") return TechClass::SRAM;
  if (s == "GC") return TechClass::GC;
  if (s == "EDRAM") return TechClass::EDRAM;
  if (s == "STTRAM") return TechClass::STTRAM;
  throw Error("BAD_TECH", "unknown technology '" + s + "'");
}

std::string to_string(CacheLevel l) {
  switch (l) {
    case CacheLevel::L1: return "L1";
    case CacheLevel::L2: return "L2";
    case CacheLevel::LLC: return "LLC";
  }
  return "?";
}

int node_index(int node_nm) {
  for (int i = 0; i < 5; ++i)
    if (kNodesNm[i] == node_nm) return i;
  throw Error("BAD_NODE", std::to_string(node_nm) + " nm is not a supported node");
}

namespace {
long long shift_down_exact(long long v, int k) { return v >> k; }
long long shift_up(long long v, int k) { return v << k; }
}  // namespace

TechParams scale(const TechParams& params, int from_nm, int to_nm) {
  int steps = node_index(to_nm) - node_index(from_nm);
  TechParams out = params;
  if (steps == 0) return out;
  auto apply = [&](long long v) {
    return steps > 0 ? shift_down_exact(v, steps) : shift_up(v, -steps);
  };
  out.read_energy_aj_per_bit = apply(out.read_energy_aj_per_bit);
  out.write_energy_aj_per_bit = apply(out.write_energy_aj_per_bit);
  out.same_bit_write_energy_aj_per_bit = apply(out.same_bit_write_energy_aj_per_bit);
  out.leakage_aw_per_bit = apply(out.leakage_aw_per_bit);
  if (out.refresh) {
    out.refresh->retention_ps = apply(out.refresh->retention_ps);
    out.refresh->energy_aj_per_bit = apply(out.refresh->energy_aj_per_bit);
  }
  return out;
}

// Per-bit figures below are the published cache characteristics at 28 nm.
// Leakage is a single SRAM/GC figure applied uniformly to all levels; eDRAM
// and STT-RAM have no published cell leakage and carry 0. The hybrid LLC has
// its own GC column; its same-bit write energy is not published separately
// and reuses the 8 MB GC figure.
const char* Catalog::builtin_text() {
  return R"(# hetcache technology parameter catalog
# One section per (level, technology); an override file with this schema may
# replace any entry. All values are exact decimal strings.
[L1.SRAM]
read_latency_ns 0.475
write_latency_ns 0.475
read_energy_pj_per_bit 0.75
write_energy_pj_per_bit 1.13
same_bit_write_energy_pj_per_bit 1.13
leakage_pw_per_bit 13.27
[L1.GC]
read_latency_ns 0.42
write_latency_ns 0.42
read_energy_pj_per_bit 0.41
write_energy_pj_per_bit 0.68
same_bit_write_energy_pj_per_bit 0.24
leakage_pw_per_bit 0.09
retention_time_ns 1120000
refresh_row_period_ns 1.5
refresh_energy_pj_per_bit 1.87
[L2.SRAM]
read_latency_ns 1.34
write_latency_ns 1.34
read_energy_pj_per_bit 2.18
write_energy_pj_per_bit 3.1
same_bit_write_energy_pj_per_bit 3.1
leakage_pw_per_bit 13.27
[L2.GC]
read_latency_ns 1.2
write_latency_ns 1.2
read_energy_pj_per_bit 1.15
write_energy_pj_per_bit 1.63
same_bit_write_energy_pj_per_bit 0.7
leakage_pw_per_bit 0.09
retention_time_ns 1120000
refresh_row_period_ns 1.5
refresh_energy_pj_per_bit 1.87
[LLC.SRAM]
read_latency_ns 2.81
write_latency_ns 2.81
read_energy_pj_per_bit 7.5
write_energy_pj_per_bit 11.8
same_bit_write_energy_pj_per_bit 11.8
leakage_pw_per_bit 13.27
[LLC.GC]
read_latency_ns 2.55
write_latency_ns 2.55
read_energy_pj_per_bit 4.1
write_energy_pj_per_bit 5.81
same_bit_write_energy_pj_per_bit 1.95
leakage_pw_per_bit 0.09
retention_time_ns 1120000
refresh_row_period_ns 1.5
refresh_energy_pj_per_bit 1.87
[LLC.EDRAM]
read_latency_ns 5.15
write_latency_ns 5.15
read_energy_pj_per_bit 5.2
write_energy_pj_per_bit 6.12
same_bit_write_energy_pj_per_bit 6.12
leakage_pw_per_bit 0
retention_time_ns 20000
refresh_row_period_ns 4
refresh_energy_pj_per_bit 3.5
[LLC.STTRAM]
read_latency_ns 26
write_latency_ns 60
read_energy_pj_per_bit 5.35
write_energy_pj_per_bit 7.85
same_bit_write_energy_pj_per_bit 7.85
leakage_pw_per_bit 0
[LLC.GC.HYBRID]
read_latency_ns 2.93
write_latency_ns 2.93
read_energy_pj_per_bit 3.81
write_energy_pj_per_bit 5.52
same_bit_write_energy_pj_per_bit 1.95
leakage_pw_per_bit 0.09
retention_time_ns 1120000
refresh_row_period_ns 1.5
refresh_energy_pj_per_bit 1.87
[DRAM]
access_latency_ns 100
read_energy_nj_per_line 41.6
write_energy_nj_per_line 54.4
)";
}

namespace {

std::tuple<CacheLevel, TechClass, TechVariant> parse_entry_name(const std::string& name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : name) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2 || parts.size() > 3)
    throw Error("BAD_CATALOG", "bad section name '" + name + "'");
  CacheLevel level;
  if (parts[0] == "L1") level = CacheLevel::L1;
  else if (parts[0] == "L2") level = CacheLevel::L2;
  else if (parts[0] == "LLC") level = CacheLevel::LLC;
  else throw Error("BAD_CATALOG", "bad cache level '" + parts[0] + "'");
  TechClass tech = tech_from_string(parts[1]);
  TechVariant variant = TechVariant::Pure;
  if (parts.size() == 3) {
    if (parts[2] != "HYBRID")
      throw Error("BAD_CATALOG", "bad variant '" + parts[2] + "'");
    variant = TechVariant::Hybrid;
  }
  return {level, tech, variant};
}

void check_params(const std::string& name, const TechParams& p) {
  if (p.same_bit_write_energy_aj_per_bit > p.write_energy_aj_per_bit)
    throw Error("BAD_CATALOG",
                name + ": same_bit_write_energy exceeds write_energy");
  if (p.refresh && (p.refresh->retention_ps <= 0 || p.refresh->row_period_ps <= 0))
    throw Error("BAD_CATALOG", name + ": refresh fields must be positive");
}

}  // namespace

void Catalog::parse(const std::string& text, bool overlay) {
  KvFile kv = KvFile::parse_text(text, "catalog");
  for (auto& section : kv.sections()) {
    if (section.name == "DRAM") {
      dram_.access_latency_ps = section.take_fixed("access_latency_ns", 3);
      dram_.read_energy_aj_per_line = section.take_fixed("read_energy_nj_per_line", 9);
      dram_.write_energy_aj_per_line = section.take_fixed("write_energy_nj_per_line", 9);
      section.reject_unknown();
      continue;
    }
    auto key = parse_entry_name(section.name);
    TechParams p;
    p.read_latency_ps = section.take_fixed("read_latency_ns", 3);
    p.write_latency_ps = section.take_fixed("write_latency_ns", 3);
    p.read_energy_aj_per_bit = section.take_fixed("read_energy_pj_per_bit", 6);
    p.write_energy_aj_per_bit = section.take_fixed("write_energy_pj_per_bit", 6);
    p.same_bit_write_energy_aj_per_bit =
        section.take_fixed("same_bit_write_energy_pj_per_bit", 6);
    p.leakage_aw_per_bit = section.take_fixed("leakage_pw_per_bit", 6);
    bool has_ret = section.has("retention_time_ns");
    bool has_per = section.has("refresh_row_period_ns");
    bool has_en = section.has("refresh_energy_pj_per_bit");
    if (has_ret != has_per || has_per != has_en)
      throw Error("BAD_CATALOG", section.name +
                                     ": retention_time_ns, refresh_row_period_ns and "
                                     "refresh_energy_pj_per_bit must appear together");
    if (has_ret) {
      RefreshParams r;
      r.retention_ps = section.take_fixed("retention_time_ns", 3);
      r.row_period_ps = section.take_fixed("refresh_row_period_ns", 3);
      r.energy_aj_per_bit = section.take_fixed("refresh_energy_pj_per_bit", 6);
      p.refresh = r;
    }
    section.reject_unknown();
    check_params(section.name, p);
    if (!overlay && entries_.count(key))
      throw Error("BAD_CATALOG", "duplicate entry " + section.name);
    entries_[key] = p;
  }
}

Catalog Catalog::builtin() {
  Catalog c;
  c.parse(builtin_text(), false);
  return c;
}

Catalog Catalog::with_override_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FILE_ERROR", "cannot open catalog override '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Catalog c = builtin();
  c.parse(ss.str(), true);
  return c;
}

bool Catalog::has(CacheLevel level, TechClass tech, TechVariant variant) const {
  return entries_.count({level, tech, variant}) != 0;
}

const TechParams& Catalog::params(CacheLevel level, TechClass tech,
                                  TechVariant variant) const {
  auto it = entries_.find({level, tech, variant});
  if (it == entries_.end())
    throw Error("UNSUPPORTED_PAIR",
                "no parameters for " + to_string(tech) + " at " + to_string(level) +
                    (variant == TechVariant::Hybrid ? " (hybrid)" : ""));
  return it->second;
}

void Catalog::dump(std::ostream& os, long long clock_mhz) const {
  os << "catalog 1\n";
  for (const auto& [key, p] : entries_) {
    const auto& [level, tech, variant] = key;
    os << "[" << to_string(level) << "." << to_string(tech)
       << (variant == TechVariant::Hybrid ? ".HYBRID" : "") << "]\n";
    os << "read_latency_ns " << print_fixed(p.read_latency_ps, 3) << "\n";
    os << "read_latency_cycles " << p.read_cycles(clock_mhz) << "\n";
    os << "write_latency_ns " << print_fixed(p.write_latency_ps, 3) << "\n";
    os << "write_latency_cycles " << p.write_cycles(clock_mhz) << "\n";
    os << "read_energy_pj_per_bit " << print_fixed(p.read_energy_aj_per_bit, 6) << "\n";
    os << "write_energy_pj_per_bit " << print_fixed(p.write_energy_aj_per_bit, 6) << "\n";
    os << "same_bit_write_energy_pj_per_bit "
       << print_fixed(p.same_bit_write_energy_aj_per_bit, 6) << "\n";
    os << "leakage_pw_per_bit " << print_fixed(p.leakage_aw_per_bit, 6) << "\n";
    if (p.refresh) {
      os << "retention_time_ns " << print_fixed(p.refresh->retention_ps, 3) << "\n";
      os << "refresh_row_period_ns " << print_fixed(p.refresh->row_period_ps, 3) << "\n";
      os << "refresh_energy_pj_per_bit "
         << print_fixed(p.refresh->energy_aj_per_bit, 6) << "\n";
    }
  }
  os << "[DRAM]\n";
  os << "access_latency_ns " << print_fixed(dram_.access_latency_ps, 3) << "\n";
  os << "access_latency_cycles " << dram_.access_cycles(clock_mhz) << "\n";
  os << "read_energy_nj_per_line " << print_fixed(dram_.read_energy_aj_per_line, 9)
     << "\n";
  os << "write_energy_nj_per_line " << print_fixed(dram_.write_energy_aj_per_line, 9)
     << "\n";
}

}  // namespace hetcache
