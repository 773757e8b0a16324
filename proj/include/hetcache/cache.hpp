#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

#include "hetcache/geometry.hpp"
#include "hetcache/tech.hpp"
#include "hetcache/units.hpp"

namespace hetcache {

enum class AccessOp { Read, Write };

enum class Outcome { Hit, HitGcWay, HitSttWay, Miss };

struct CacheLine {
  std::uint64_t tag = 0;
  bool valid = false;
  bool dirty = false;
  std::uint8_t nrp_counter = 0;  // saturating, 0 for invalid lines
  ps_t fresh_ps = 0;             // last write or refresh
};

/// Set-associative cache state with true-LRU recency, optional per-way
/// GC/STT-RAM split and optional no-refresh (NRP) counters.
///
/// In hybrid sets the GC ways form a fixed prefix of the way indices. Lookups
/// check all ways; a hit in an STT-RAM way swaps the line into the LRU
/// position of the GC ways and demotes the displaced GC line to the LRU
/// position of the STT-RAM ways. Misses fill the LRU position of the STT-RAM
/// ways only.
class CacheModel {
 public:
  struct NrpConfig {
    bool enabled = false;
    int counter_bits = 5;
    ps_t epoch_ps = 0;       // retention / 2^counter_bits
    bool read_resets = false;
  };

  CacheModel(const CacheGeometry& geom, std::uint32_t gc_ways, bool with_payloads,
             const NrpConfig& nrp);

  const CacheGeometry& geometry() const { return geom_; }
  std::uint32_t ways() const { return geom_.associativity; }
  std::uint32_t gc_ways() const { return gc_ways_; }
  bool hybrid() const { return gc_ways_ < geom_.associativity; }
  bool is_gc_way(std::uint32_t way) const { return way < gc_ways_; }
  bool with_payloads() const { return with_payloads_; }

  /// The unique valid way holding `tag`, if any.
  std::optional<std::uint32_t> lookup(std::uint32_t set, std::uint64_t tag) const;

  struct Promotion {
    std::uint32_t gc_way;       // way the hit line moved into
    std::uint32_t stt_way;      // way it came from
    bool demoted;               // a displaced GC line moved to stt_way
  };

  /// Recency bookkeeping for a demand hit. For hybrid STT-way hits this
  /// performs the swap-based promotion and returns what moved; `way` then no
  /// longer holds the line (use the returned gc_way).
  std::optional<Promotion> touch_hit(std::uint32_t set, std::uint32_t way,
                                     bool promote_mru, ps_t now_ps);

  /// Applies a demand write / writeback to a resident line.
  void write_line(std::uint32_t set, std::uint32_t way, const Line512* payload,
                  ps_t now_ps);

  /// Marks a read for the read-resets NRP variant (no-op otherwise).
  void note_read(std::uint32_t set, std::uint32_t way, ps_t now_ps);

  /// Freshness restore from a refresh event.
  void stamp_refresh(std::uint32_t set, std::uint32_t way, ps_t now_ps);

  struct Evicted {
    std::uint64_t tag = 0;
    bool dirty = false;
    Line512 payload{};
  };

  /// Installs `tag`, evicting per policy (plain: LRU way, insert at MRU;
  /// hybrid: STT-RAM LRU way, insert at the STT LRU position). Invalid ways
  /// are consumed first. Returns the filled way.
  std::uint32_t fill(std::uint32_t set, std::uint64_t tag, const Line512* payload,
                     bool dirty, ps_t now_ps, std::optional<Evicted>* evicted);

  struct Invalidation {
    std::uint32_t set = 0;
    std::uint32_t way = 0;
    std::uint64_t tag = 0;
    bool dirty = false;
    Line512 payload{};
    ps_t at_ps = 0;
  };

  /// Applies all NRP epoch ticks with tick time <= now. Saturated lines are
  /// invalidated; dirty ones are reported for writeback to the next level.
  void advance_nrp(ps_t now_ps, std::vector<Invalidation>* out);

  const CacheLine& line(std::uint32_t set, std::uint32_t way) const {
    return lines_[index(set, way)];
  }
  const Line512& payload(std::uint32_t set, std::uint32_t way) const {
    assert(with_payloads_);
    return payloads_[index(set, way)];
  }
  /// Way indices from MRU to LRU (test introspection).
  std::vector<std::uint32_t> recency_order(std::uint32_t set) const;

  std::uint64_t nrp_tick_count() const { return nrp_ticks_applied_; }

 private:
  std::size_t index(std::uint32_t set, std::uint32_t way) const {
    return static_cast<std::size_t>(set) * geom_.associativity + way;
  }
  std::uint32_t* stack(std::uint32_t set) {
    return stack_.data() + static_cast<std::size_t>(set) * geom_.associativity;
  }
  const std::uint32_t* stack(std::uint32_t set) const {
    return stack_.data() + static_cast<std::size_t>(set) * geom_.associativity;
  }
  void move_to_front(std::uint32_t set, std::uint32_t way);
  void move_to_back(std::uint32_t set, std::uint32_t way);
  /// Victim way for a fill within [way_begin, way_end): last invalid way in
  /// recency order, else the group's LRU way.
  std::uint32_t pick_victim(std::uint32_t set, std::uint32_t way_begin,
                            std::uint32_t way_end) const;
  void clear_line(std::uint32_t set, std::uint32_t way);
  void apply_nrp_tick(ps_t tick_ps, std::vector<Invalidation>* out);

  CacheGeometry geom_;
  std::uint32_t gc_ways_;
  bool with_payloads_;
  NrpConfig nrp_;
  std::uint64_t nrp_next_tick_ = 1;
  std::uint64_t nrp_ticks_applied_ = 0;
  std::vector<CacheLine> lines_;
  std::vector<Line512> payloads_;
  std::vector<std::uint32_t> stack_;  // per set, MRU first
};

/// Spec-level one-shot access helper (lookup + recency + write/fill); the
/// simulation engine drives the granular calls directly so it can charge
/// energy between steps.
struct AccessResult {
  Outcome outcome = Outcome::Miss;
  std::uint32_t way = 0;  // way holding the line afterwards
  std::optional<CacheModel::Evicted> victim;
  std::optional<CacheModel::Promotion> promotion;
};

AccessResult access(CacheModel& cache, std::uint32_t set, AccessOp op,
                    std::uint64_t tag, const Line512* payload, ps_t now_ps,
                    bool promote_mru = false);

}  // namespace hetcache
