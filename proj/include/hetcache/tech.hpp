#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetcache/units.hpp"

namespace hetcache {

enum class TechClass { SRAM, GC, EDRAM, STTRAM };

/// Hybrid caches are a per-way assignment of TechClass, never a fifth class.
std::string to_string(TechClass t);
TechClass tech_from_string(const std::string& s);

/// True for cells with decoupled read/write bitlines (asymmetric writes and
/// write/read overlap apply only to these).
inline bool decoupled_bitlines(TechClass t) { return t == TechClass::GC; }

enum class CacheLevel { L1, L2, LLC };
std::string to_string(CacheLevel l);

/// Catalog entry variant: the hybrid LLC uses its own GC figures.
enum class TechVariant { Pure, Hybrid };

struct RefreshParams {
  ps_t retention_ps = 0;       // data retention time
  ps_t row_period_ps = 0;      // unavailability per refreshed row
  aj_t energy_aj_per_bit = 0;  // refresh energy per bit per refresh
  bool operator==(const RefreshParams&) const = default;
};

struct TechParams {
  ps_t read_latency_ps = 0;
  ps_t write_latency_ps = 0;
  aj_t read_energy_aj_per_bit = 0;
  aj_t write_energy_aj_per_bit = 0;
  aj_t same_bit_write_energy_aj_per_bit = 0;
  aw_t leakage_aw_per_bit = 0;
  std::optional<RefreshParams> refresh;  // absent for static / non-volatile cells

  cycle_t read_cycles(long long clock_mhz) const {
    return cycles_for_ps(read_latency_ps, clock_mhz);
  }
  cycle_t write_cycles(long long clock_mhz) const {
    return cycles_for_ps(write_latency_ps, clock_mhz);
  }
  bool operator==(const TechParams&) const = default;
};

struct DramParams {
  ps_t access_latency_ps = 0;
  aj_t read_energy_aj_per_line = 0;
  aj_t write_energy_aj_per_line = 0;
  cycle_t access_cycles(long long clock_mhz) const {
    return cycles_for_ps(access_latency_ps, clock_mhz);
  }
};

/// Technology nodes, ordered; one "step" is one adjacent move.
inline constexpr int kNodesNm[] = {28, 22, 14, 10, 7};
int node_index(int node_nm);  // throws Error(BAD_NODE)

/// Scales per-bit energies, leakage and retention by 0.5 per step down
/// (x2 per step up). Latencies do not scale; the row refresh period does not
/// scale either. Exact on the built-in tables.
TechParams scale(const TechParams& params, int from_nm, int to_nm);

inline constexpr long long DEFAULT_CLOCK_MHZ = 3400;

/// Parameter catalog. Loaded from the built-in table text (exact published
/// decimal strings) and optionally overlaid with a user file of identical
/// schema. Immutable after load; shareable across simulations.
class Catalog {
 public:
  /// Built-in tables.
  static Catalog builtin();

  /// Built-in tables plus overrides from a catalog file.
  static Catalog with_override_file(const std::string& path);

  /// The built-in catalog file text (also the override-file schema).
  static const char* builtin_text();

  /// Published constants for (level, tech). Throws Error(UNSUPPORTED_PAIR)
  /// for combinations absent from the tables (e.g. STT-RAM at L1).
  const TechParams& params(CacheLevel level, TechClass tech,
                           TechVariant variant = TechVariant::Pure) const;

  bool has(CacheLevel level, TechClass tech,
           TechVariant variant = TechVariant::Pure) const;

  const DramParams& dram() const { return dram_; }

  /// Canonical text dump (for golden-file comparison); includes cycle
  /// figures derived at `clock_mhz`.
  void dump(std::ostream& os, long long clock_mhz = DEFAULT_CLOCK_MHZ) const;

 private:
  void parse(const std::string& text, bool overlay);

  std::map<std::tuple<CacheLevel, TechClass, TechVariant>, TechParams> entries_;
  DramParams dram_;
};

}  // namespace hetcache
