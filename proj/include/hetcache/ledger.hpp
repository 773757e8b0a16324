#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetcache/tech.hpp"
#include "hetcache/units.hpp"

namespace hetcache {

enum class LevelKind { L1I, L1D, L2, LLC };
inline constexpr int kLevelCount = 4;
std::string to_string(LevelKind k);
inline CacheLevel catalog_level(LevelKind k) {
  switch (k) {
    case LevelKind::L1I:
    case LevelKind::L1D: return CacheLevel::L1;
    case LevelKind::L2: return CacheLevel::L2;
    case LevelKind::LLC: return CacheLevel::LLC;
  }
  return CacheLevel::LLC;
}

/// Why an array write happened; fills are counted separately from other writes.
enum class WriteOrigin { Demand, Fill, Writeback, Swap };

/// Additive event counters and attojoule totals per level and category.
/// All fields are integers so that two ledgers can be compared exactly.
struct LevelLedger {
  std::uint64_t reads = 0;   // array reads (demand hits + miss probes)
  std::uint64_t writes = 0;  // array writes other than fills
  std::uint64_t fills = 0;
  aj_t dynamic_read_aj = 0;
  aj_t dynamic_write_aj = 0;  // includes fill energy
  aj_t refresh_aj = 0;
  aj_t leakage_aj = 0;
  std::uint64_t dissimilar_bits = 0;   // data-driven asymmetric writes only
  std::uint64_t total_write_bits = 0;  // bits covered by asymmetric accounting

  aj_t total_aj() const {
    return dynamic_read_aj + dynamic_write_aj + refresh_aj + leakage_aj;
  }
  bool operator==(const LevelLedger&) const = default;
};

struct DramLedger {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  aj_t energy_aj = 0;
  bool operator==(const DramLedger&) const = default;
};

/// Per-subarray write-bitline shadow: the 512-bit value last driven on the
/// write bitlines. Updated by demand writes and fills, never by refresh.
struct WblShadow {
  std::vector<Line512> last;
  explicit WblShadow(std::size_t subarrays = 0) : last(subarrays) {}
};

/// Priceable energy events, recorded optionally so an independent pricer can
/// replay a run and reproduce the ledger exactly.
struct EnergyEvent {
  enum class Kind : std::uint8_t {
    Read,
    WriteFull,
    WriteAsym,   // arg = dissimilar bits
    WriteModel,  // arg = similarity in basis points
    RefreshRows, // count = refreshed rows
    Leakage,     // bits cells over duration_ps
    DramRead,
    DramWrite,
  };
  Kind kind;
  LevelKind level;
  TechClass tech;
  TechVariant variant;
  WriteOrigin origin;
  std::uint32_t arg = 0;
  std::uint64_t bits = 0;
  std::uint64_t count = 0;
  ps_t duration_ps = 0;
};

class EnergyLedger {
 public:
  LevelLedger& level(LevelKind k) { return levels_[static_cast<int>(k)]; }
  const LevelLedger& level(LevelKind k) const { return levels_[static_cast<int>(k)]; }
  DramLedger& dram() { return dram_; }
  const DramLedger& dram() const { return dram_; }

  aj_t total_aj() const {
    aj_t t = dram_.energy_aj;
    for (const auto& l : levels_) t += l.total_aj();
    return t;
  }
  aj_t cache_total_aj() const {
    aj_t t = 0;
    for (const auto& l : levels_) t += l.total_aj();
    return t;
  }

  bool operator==(const EnergyLedger&) const = default;

  // -- charging operations; each returns the attojoules added --

  aj_t charge_read(LevelKind k, const TechParams& p);
  /// Full-energy write (technologies without decoupled bitlines, or the
  /// asymmetric optimization disabled).
  aj_t charge_write_full(LevelKind k, const TechParams& p, WriteOrigin origin);
  /// Data-driven asymmetric write: dissimilar bits against the subarray's
  /// write-bitline shadow pay full energy, the rest the same-bit energy.
  /// The shadow is updated to the new line.
  aj_t charge_write_asymmetric(LevelKind k, const TechParams& p, WriteOrigin origin,
                               const Line512& new_line, Line512& shadow);
  /// As charge_write_asymmetric but comparing against an explicit old line
  /// (the victim-compare variant); the shadow argument is still updated.
  aj_t charge_write_asymmetric_vs(LevelKind k, const TechParams& p, WriteOrigin origin,
                                  const Line512& new_line, const Line512& old_line,
                                  Line512& shadow);
  /// Asymmetric write with the dissimilar-bit count already computed.
  aj_t charge_write_dissimilar(LevelKind k, const TechParams& p, WriteOrigin origin,
                               int dissimilar);
  /// Similarity-model write for payload-free traces: s (basis points) of the
  /// bits pay same-bit energy.
  aj_t charge_write_model(LevelKind k, const TechParams& p, WriteOrigin origin,
                          int similarity_bp);
  aj_t charge_refresh_rows(LevelKind k, const TechParams& p, std::uint64_t rows);
  aj_t charge_leakage(LevelKind k, std::uint64_t bits, ps_t duration_ps,
                      aw_t leakage_aw_per_bit);
  aj_t charge_dram(bool is_write, const DramParams& p);

 private:
  aj_t add_write(LevelKind k, WriteOrigin origin, aj_t energy, int dissimilar,
                 bool data_driven);

  std::array<LevelLedger, kLevelCount> levels_{};
  DramLedger dram_{};
};

/// Energy-delay product in joule-seconds.
double edp_joule_seconds(aj_t total_aj, ps_t total_time_ps);

/// Model-write energy for 512 bits at similarity s (basis points).
aj_t model_write_energy_aj(const TechParams& p, int similarity_bp);

/// Leakage in attojoules for `bits` cells over `duration_ps`.
aj_t leakage_energy_aj(std::uint64_t bits, ps_t duration_ps, aw_t leakage_aw_per_bit);

}  // namespace hetcache
