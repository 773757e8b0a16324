#include "hetcache/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "hetcache/kvfile.hpp"

namespace hetcache {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string pj(aj_t aj) { return print_fixed(aj, 6); }

struct Emitter {
  std::ostream& os;
  void kv(const std::string& k, const std::string& v) { os << k << ' ' << v << '\n'; }
  void kv(const std::string& k, std::uint64_t v) { os << k << ' ' << v << '\n'; }
  void kv(const std::string& k, double v) { os << k << ' ' << fmt_double(v) << '\n'; }
};

constexpr LevelKind kKinds[] = {LevelKind::L1I, LevelKind::L1D, LevelKind::L2,
                                LevelKind::LLC};

}  // namespace

void write_report(const SimReport& r, std::ostream& os) {
  Emitter e{os};
  os << "[run]\n";
  e.kv("schema", static_cast<std::uint64_t>(r.schema));
  e.kv("label", r.label);
  e.kv("seed", r.seed);
  e.kv("clock_mhz", static_cast<std::uint64_t>(r.clock_mhz));
  e.kv("cores", static_cast<std::uint64_t>(r.cores));
  e.kv("records", r.records);
  e.kv("total_cycles", static_cast<std::uint64_t>(r.total_cycles));
  e.kv("total_time_ps", static_cast<std::uint64_t>(r.total_time_ps));
  e.kv("total_latency_cycles", r.total_latency_cycles);
  e.kv("amat_cycles", r.amat_cycles());
  e.kv("edp_js", r.edp_js());
  for (LevelKind k : kKinds) {
    const LevelStats& s = r.level(k);
    const LevelLedger& l = r.ledger.level(k);
    os << "[level." << to_string(k) << "]\n";
    e.kv("storage_bits", s.storage_bits);
    e.kv("demand_lookups", s.demand_lookups);
    e.kv("hits", s.hits);
    e.kv("misses", s.misses);
    e.kv("read_lookups", s.read_lookups);
    e.kv("hit_gc_way", s.hit_gc_way);
    e.kv("hit_stt_way", s.hit_stt_way);
    e.kv("promotions", s.promotions);
    e.kv("writeback_lookups", s.writeback_lookups);
    e.kv("writeback_hits", s.writeback_hits);
    e.kv("writeback_fills", s.writeback_fills);
    e.kv("evictions", s.evictions);
    e.kv("dirty_evictions", s.dirty_evictions);
    e.kv("writebacks_out", s.writebacks_out);
    e.kv("nrp_invalidations", s.nrp_invalidations);
    e.kv("nrp_dirty_writebacks", s.nrp_dirty_writebacks);
    e.kv("nrp_read_misses", s.nrp_read_misses);
    e.kv("refresh_events", s.refresh_events);
    e.kv("refresh_busy_ps", static_cast<std::uint64_t>(s.refresh_busy_ps));
    e.kv("refresh_collisions", s.refresh_collisions);
    e.kv("refresh_delay_cycles", static_cast<std::uint64_t>(s.refresh_delay_cycles));
    e.kv("overlapped_writes", s.overlapped_writes);
    e.kv("serialized_writes", s.serialized_writes);
    e.kv("freshness_violations", s.freshness_violations);
    e.kv("array_reads", l.reads);
    e.kv("array_writes", l.writes);
    e.kv("fills", l.fills);
    e.kv("dissimilar_bits", l.dissimilar_bits);
    e.kv("total_write_bits", l.total_write_bits);
    e.kv("dynamic_read_pj", pj(l.dynamic_read_aj));
    e.kv("dynamic_write_pj", pj(l.dynamic_write_aj));
    e.kv("refresh_pj", pj(l.refresh_aj));
    e.kv("leakage_pj", pj(l.leakage_aj));
    e.kv("total_pj", pj(l.total_aj()));
    e.kv("misses_per_kilo_record",
         r.records ? 1000.0 * static_cast<double>(s.misses) / r.records : 0.0);
    e.kv("refresh_conflict_fraction", r.refresh_conflict_fraction(k));
    e.kv("overlapped_write_fraction", r.overlapped_write_fraction(k));
    e.kv("nrp_miss_fraction", r.nrp_miss_fraction(k));
    e.kv("writeback_bandwidth_bytes_per_s", r.writeback_bandwidth_bytes_per_s(k));
  }
  os << "[dram]\n";
  e.kv("reads", r.ledger.dram().reads);
  e.kv("writes", r.ledger.dram().writes);
  e.kv("energy_pj", pj(r.ledger.dram().energy_aj));
  os << "[totals]\n";
  e.kv("cache_energy_pj", pj(r.ledger.cache_total_aj()));
  e.kv("total_energy_pj", pj(r.ledger.total_aj()));
}

std::string report_text(const SimReport& report) {
  std::ostringstream ss;
  write_report(report, ss);
  return ss.str();
}

void write_report_csv(const SimReport& r, std::ostream& os) {
  std::string text = report_text(r);
  std::istringstream in(text);
  os << "section,metric,value\n";
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    std::size_t sp = line.find(' ');
    os << section << ',' << line.substr(0, sp) << ',' << line.substr(sp + 1) << '\n';
  }
}

const std::string& ParsedReport::get(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw Error("MISSING_KEY", "report has no field '" + key + "'");
  return it->second;
}

double ParsedReport::number(const std::string& key) const {
  return std::stod(get(key));
}

ParsedReport parse_report_text(const std::string& text, const std::string& origin) {
  KvFile kv = KvFile::parse_text(text, origin);
  ParsedReport r;
  for (auto& section : kv.sections())
    for (auto& [k, v] : section.items) r.fields[section.name + "." + k] = v;
  if (!r.has("run.schema"))
    throw Error("BAD_REPORT", origin + ": not a report (missing run.schema)");
  r.schema = static_cast<int>(r.number("run.schema"));
  r.label = r.has("run.label") ? r.get("run.label") : "";
  return r;
}

ParsedReport parse_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FILE_ERROR", "cannot open report '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_report_text(ss.str(), path);
}

std::string compare_reports(const ParsedReport& a, const ParsedReport& b) {
  if (a.schema != b.schema)
    throw Error("SCHEMA_MISMATCH", "report schemas differ (" + std::to_string(a.schema) +
                                       " vs " + std::to_string(b.schema) + ")");
  std::ostringstream os;
  os << "# ratio table: " << a.label << " / " << b.label << "\n";
  os << "metric " << a.label << " " << b.label << " ratio\n";
  for (const auto& [key, va] : a.fields) {
    if (!b.has(key)) continue;
    if (key == "run.schema" || key == "run.seed" || key == "run.label") continue;
    char* enda = nullptr;
    char* endb = nullptr;
    const std::string& vb = b.get(key);
    double na = std::strtod(va.c_str(), &enda);
    double nb = std::strtod(vb.c_str(), &endb);
    if (enda == va.c_str() || endb == vb.c_str()) continue;  // non-numeric
    os << key << ' ' << va << ' ' << vb << ' ';
    if (nb == 0.0)
      os << (na == 0.0 ? "1" : "inf");
    else
      os << fmt_double(na / nb);
    os << '\n';
  }
  return os.str();
}

}  // namespace hetcache
