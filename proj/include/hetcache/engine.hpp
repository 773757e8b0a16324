#pragma once

#include <array>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hetcache/cache.hpp"
#include "hetcache/geometry.hpp"
#include "hetcache/ledger.hpp"
#include "hetcache/refresh.hpp"
#include "hetcache/tech.hpp"
#include "hetcache/trace.hpp"

namespace hetcache {

struct LevelFlags {
  bool nrp = false;
  int nrp_counter_bits = 5;
  bool nrp_read_resets = false;
  bool asymmetric_writes = false;
  bool compare_victim_on_fill = false;
  int write_similarity_bp = -2;  // -2 default for level, -1 fallback disabled
  bool overlap = false;
  cycle_t overlap_window_cycles = 0;  // 0: use the write latency
  bool synchronized_subarrays = true;
  long long refresh_interval_multiplier_milli = 1000;
  bool hybrid_promote_mru = false;
  std::vector<RetentionBin> bins;
};

struct LevelConfig {
  std::uint64_t capacity_bytes = 0;
  std::uint32_t associativity = 0;
  TechClass tech = TechClass::SRAM;
  bool hybrid = false;             // GC ways + STT-RAM ways within each set
  std::uint32_t gc_ways = 0;       // hybrid only
  int node_nm = 28;
  LevelFlags flags;
};

/// Per-core private L1I/L1D/L2 plus a shared LLC.
struct HierarchyConfig {
  std::string label = "run";
  long long clock_mhz = DEFAULT_CLOCK_MHZ;
  std::uint32_t cores = 1;
  std::uint64_t seed = 1;
  LevelConfig l1i, l1d, l2, llc;

  const LevelConfig& level(LevelKind k) const {
    switch (k) {
      case LevelKind::L1I: return l1i;
      case LevelKind::L1D: return l1d;
      case LevelKind::L2: return l2;
      case LevelKind::LLC: return llc;
    }
    return llc;
  }
};

struct LevelStats {
  std::uint64_t demand_lookups = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t read_lookups = 0;
  std::uint64_t hit_gc_way = 0;
  std::uint64_t hit_stt_way = 0;
  std::uint64_t promotions = 0;
  std::uint64_t writeback_lookups = 0;
  std::uint64_t writeback_hits = 0;
  std::uint64_t writeback_fills = 0;
  std::uint64_t evictions = 0;
  std::uint64_t dirty_evictions = 0;
  std::uint64_t writebacks_out = 0;
  std::uint64_t nrp_invalidations = 0;
  std::uint64_t nrp_dirty_writebacks = 0;
  std::uint64_t nrp_read_misses = 0;
  std::uint64_t refresh_events = 0;
  ps_t refresh_busy_ps = 0;
  std::uint64_t refresh_collisions = 0;
  cycle_t refresh_delay_cycles = 0;
  std::uint64_t overlapped_writes = 0;
  std::uint64_t serialized_writes = 0;
  std::uint64_t freshness_violations = 0;
  std::uint64_t storage_bits = 0;
  std::uint32_t refreshable_subarrays = 0;

  bool operator==(const LevelStats&) const = default;
};

struct SimReport {
  int schema = 1;
  std::string label;
  std::uint64_t seed = 0;
  long long clock_mhz = DEFAULT_CLOCK_MHZ;
  std::uint32_t cores = 1;
  std::uint64_t records = 0;
  cycle_t total_cycles = 0;
  ps_t total_time_ps = 0;
  std::uint64_t total_latency_cycles = 0;
  std::array<LevelStats, kLevelCount> stats{};
  EnergyLedger ledger;

  const LevelStats& level(LevelKind k) const { return stats[static_cast<int>(k)]; }
  LevelStats& level(LevelKind k) { return stats[static_cast<int>(k)]; }

  double amat_cycles() const {
    return records ? static_cast<double>(total_latency_cycles) / records : 0.0;
  }
  double seconds() const { return static_cast<double>(total_time_ps) * 1e-12; }
  double edp_js() const { return edp_joule_seconds(ledger.total_aj(), total_time_ps); }
  double overlapped_write_fraction(LevelKind k) const {
    const auto& s = level(k);
    std::uint64_t n = s.overlapped_writes + s.serialized_writes;
    return n ? static_cast<double>(s.overlapped_writes) / n : 0.0;
  }
  double refresh_conflict_fraction(LevelKind k) const {
    const auto& s = level(k);
    return s.demand_lookups
               ? static_cast<double>(s.refresh_collisions) / s.demand_lookups
               : 0.0;
  }
  double nrp_miss_fraction(LevelKind k) const {
    const auto& s = level(k);
    return s.read_lookups ? static_cast<double>(s.nrp_read_misses) / s.read_lookups
                          : 0.0;
  }
  double writeback_bandwidth_bytes_per_s(LevelKind k) const {
    return total_time_ps
               ? static_cast<double>(level(k).writebacks_out) * LINE_BYTES /
                     seconds()
               : 0.0;
  }
};

struct SimOptions {
  bool record_events = false;
};

/// Trace-driven simulation of one configured hierarchy. Single-threaded and
/// deterministic; distinct instances may run concurrently.
class Simulator {
 public:
  /// Validates the configuration against the catalog; throws
  /// Error(CONFIG_ERROR / UNSUPPORTED_PAIR / INVALID_GEOMETRY).
  Simulator(const Catalog& catalog, const HierarchyConfig& config);
  ~Simulator();

  SimReport run(TraceSource& trace, const SimOptions& options = {});

  const std::vector<EnergyEvent>& events() const { return events_; }

 private:
  struct LevelRuntime;
  struct CoreQueue;

  LevelRuntime* next_level(LevelRuntime& rt);
  void sync_all(ps_t now_ps);
  void sync_level(LevelRuntime& rt, ps_t now_ps);
  struct Descend {
    cycle_t cycles = 0;
    std::optional<Line512> data;
  };
  Descend access_at(LevelRuntime& rt, TraceOp op, std::uint64_t addr,
                    const Line512* payload, cycle_t arrive_cy);
  Descend dram_fetch(std::uint64_t addr);
  void do_fill(LevelRuntime& rt, std::uint32_t set, std::uint64_t tag,
               const Line512* payload, bool dirty, ps_t now_ps);
  void handle_writeback(LevelRuntime& rt, std::uint64_t addr, const Line512* payload,
                        ps_t now_ps);
  void writeback_below(LevelRuntime& from, std::uint64_t addr, const Line512* payload,
                       ps_t now_ps);
  aj_t charge_array_write(LevelRuntime& rt, std::uint32_t set, std::uint32_t way,
                          const Line512* payload, WriteOrigin origin,
                          const Line512* old_line);
  aj_t charge_array_read(LevelRuntime& rt, bool stt_way);
  cycle_t resolve_pending_write(LevelRuntime& rt, std::uint32_t subarray,
                                cycle_t now_cy, bool incoming_is_read);
  void check_freshness(LevelRuntime& rt, std::uint32_t set, std::uint32_t way,
                       ps_t arrive_ps);
  void finalize(ps_t end_ps);
  LevelStats& stats(LevelKind k) { return report_.stats[static_cast<int>(k)]; }
  EnergyLedger& ledger() { return report_.ledger; }

  Catalog catalog_;
  HierarchyConfig config_;
  std::vector<std::unique_ptr<LevelRuntime>> levels_;  // 3 per core, then LLC
  SimReport report_;
  std::vector<EnergyEvent> events_;
  bool ran_ = false;
  bool record_events_ = false;
  bool data_bearing_ = false;
  std::unordered_map<std::uint64_t, Line512> memory_image_;
};

SimReport simulate(const Catalog& catalog, const HierarchyConfig& config,
                   TraceSource& trace, const SimOptions& options = {});

/// Independent runs of several configs over the same trace; safe to execute
/// concurrently, reports returned in config order.
std::vector<SimReport> run_sweep(const Catalog& catalog,
                                 const std::vector<HierarchyConfig>& configs,
                                 const Trace& trace);

}  // namespace hetcache
