#include "hetcache/geometry.hpp"

namespace hetcache {

CacheGeometry CacheGeometry::make(std::uint64_t capacity_bytes,
                                  std::uint32_t associativity) {
  if (capacity_bytes == 0 || associativity == 0)
    throw Error("INVALID_GEOMETRY", "capacity and associativity must be positive");
  std::uint64_t way_bytes = static_cast<std::uint64_t>(LINE_BYTES) * associativity;
  if (capacity_bytes % way_bytes != 0)
    throw Error("INVALID_GEOMETRY",
                "capacity not divisible by line_bytes * associativity");
  std::uint64_t sets = capacity_bytes / way_bytes;
  if ((sets & (sets - 1)) != 0)
    throw Error("INVALID_GEOMETRY",
                "set count " + std::to_string(sets) + " is not a power of two");
  return {capacity_bytes, associativity, static_cast<std::uint32_t>(sets)};
}

SubarrayPlan plan_subarrays(const CacheGeometry& geom) {
  SubarrayPlan plan;
  plan.sets = geom.sets;
  if (geom.sets >= 256) {
    plan.rows_per_subarray = 256;
    plan.subarrays_per_way = (geom.sets + 255) / 256;
  } else {
    plan.rows_per_subarray = geom.sets;
    plan.subarrays_per_way = 1;
  }
  plan.total_subarrays = geom.associativity * plan.subarrays_per_way;
  return plan;
}

RowLocation locate(std::uint32_t set, std::uint32_t way, const CacheGeometry& geom,
                   const SubarrayPlan& plan) {
  if (set >= geom.sets || way >= geom.associativity)
    throw Error("OUT_OF_RANGE", "set " + std::to_string(set) + " way " +
                                    std::to_string(way) + " outside geometry");
  return {way * plan.subarrays_per_way + set / plan.rows_per_subarray,
          set % plan.rows_per_subarray};
}

std::uint32_t populated_rows(const SubarrayPlan& plan, std::uint32_t subarray_id) {
  std::uint32_t chain_pos = subarray_id % plan.subarrays_per_way;
  std::uint64_t first_set = static_cast<std::uint64_t>(chain_pos) * plan.rows_per_subarray;
  if (first_set >= plan.sets) return 0;
  std::uint64_t remaining = plan.sets - first_set;
  return static_cast<std::uint32_t>(
      remaining < plan.rows_per_subarray ? remaining : plan.rows_per_subarray);
}

}  // namespace hetcache
