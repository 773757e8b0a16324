#pragma once

#include <cstdint>

#include "hetcache/units.hpp"

namespace hetcache {

struct CacheGeometry {
  std::uint64_t capacity_bytes = 0;
  std::uint32_t associativity = 0;
  std::uint32_t sets = 0;

  /// Validates divisibility and that the set count is a power of two.
  /// Throws Error(INVALID_GEOMETRY).
  static CacheGeometry make(std::uint64_t capacity_bytes, std::uint32_t associativity);
};

/// Mapping of (set, way) coordinates onto physical subarray rows. Each way
/// owns its own chain of subarrays; a 64 B line occupies exactly one
/// 512-bit row and never spans subarrays.
struct SubarrayPlan {
  std::uint32_t rows_per_subarray = 0;  // in [1, 256]
  std::uint32_t subarrays_per_way = 0;
  std::uint32_t total_subarrays = 0;    // associativity * subarrays_per_way
  std::uint32_t sets = 0;
  static constexpr int row_bits = LINE_BITS;
};

/// Subarrays are 256x512 bits; smaller caches shrink the row count so one
/// way still maps to a single subarray.
SubarrayPlan plan_subarrays(const CacheGeometry& geom);

struct RowLocation {
  std::uint32_t subarray_id;
  std::uint32_t row;
};

/// Injective over (set, way). Throws Error(OUT_OF_RANGE).
RowLocation locate(std::uint32_t set, std::uint32_t way, const CacheGeometry& geom,
                   const SubarrayPlan& plan);

struct AddressIndex {
  std::uint64_t tag;
  std::uint32_t set;
};

inline AddressIndex index_address(std::uint64_t addr, const CacheGeometry& geom) {
  std::uint64_t line = addr / LINE_BYTES;
  return {line / geom.sets, static_cast<std::uint32_t>(line % geom.sets)};
}

inline std::uint64_t line_address(std::uint64_t tag, std::uint32_t set,
                                  const CacheGeometry& geom) {
  return (tag * geom.sets + set) * LINE_BYTES;
}

/// Staggered refresh spacing: one row per subarray every retention/rows.
inline ps_t stagger_period_ps(const SubarrayPlan& plan, ps_t retention_ps) {
  return retention_ps / plan.rows_per_subarray;
}

/// Rows of `subarray_id` actually backed by cache sets. The last subarray in
/// a way's chain may be partially populated; unoccupied rows are neither
/// refreshed nor charged leakage.
std::uint32_t populated_rows(const SubarrayPlan& plan, std::uint32_t subarray_id);

}  // namespace hetcache
