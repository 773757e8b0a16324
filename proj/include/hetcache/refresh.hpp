#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hetcache/geometry.hpp"
#include "hetcache/tech.hpp"
#include "hetcache/units.hpp"

namespace hetcache {

/// A retention bin: `fraction_bp` (basis points of the rows) refreshed at
/// `multiplier_milli`/1000 times the worst-case retention.
struct RetentionBin {
  long long multiplier_milli = 1000;  // >= 1000: bins never undercut worst case
  int fraction_bp = 10000;
};

struct RefreshEvent {
  std::uint32_t subarray = 0;
  std::uint32_t row = 0;
  ps_t start_ps = 0;
};

/// Staggered concurrent refresh over the refreshable subarrays of one cache
/// level. Each subarray cycles its rows round-robin, one row per stagger
/// period (retention / rows): slot k starts at anchor + k * period and
/// refreshes row k mod rows, so every row is refreshed exactly once per
/// retention window. Decoupled-bitline cells split the slot into a read half
/// and a writeback half; other cells block for the whole slot.
class RefreshScheduler {
 public:
  RefreshScheduler(const SubarrayPlan& plan, std::uint32_t refreshable_subarrays,
                   const RefreshParams& refresh, bool decoupled, bool synchronized,
                   long long interval_multiplier_milli,
                   const std::vector<RetentionBin>& bins);

  /// Emits every refresh slot with start < now (in time order per subarray),
  /// advancing the round-robin state. Slots for unpopulated rows are skipped
  /// entirely. `now` must not decrease.
  void advance(ps_t now_ps, const std::function<void(const RefreshEvent&)>& emit);

  /// Delay a demand access arriving at `t` must take, if it falls inside an
  /// active refresh slot of `subarray`. Decoupled cells accept writes in the
  /// read half and reads in the writeback half.
  std::optional<ps_t> collides(std::uint32_t subarray, bool is_read, ps_t t_ps) const;

  /// Start of the most recent slot refreshing this row at or before `t`
  /// (closed form; independent of how far advance() has run).
  std::optional<ps_t> last_refresh_before(std::uint32_t subarray, std::uint32_t row,
                                          ps_t t_ps) const;

  std::uint64_t events() const { return events_; }
  ps_t busy_ps() const { return busy_ps_; }
  ps_t slot_ps() const { return slot_ps_; }
  ps_t base_period_ps() const { return base_period_ps_; }
  ps_t effective_retention_ps() const { return retention_ps_; }
  std::uint32_t subarrays() const { return static_cast<std::uint32_t>(anchors_.size()); }

 private:
  struct Bin {
    std::uint32_t row_begin = 0;
    std::uint32_t row_count = 0;
    ps_t period_ps = 0;
  };
  struct BinState {
    std::uint64_t next_k = 0;  // next slot index, start = anchor + k * period
  };

  ps_t anchor(std::uint32_t subarray) const { return anchors_[subarray]; }

  SubarrayPlan plan_;
  ps_t retention_ps_;
  ps_t slot_ps_;
  ps_t half_ps_;  // 0 when not decoupled
  ps_t base_period_ps_;
  std::vector<Bin> bins_;
  std::vector<ps_t> anchors_;             // per subarray
  std::vector<BinState> state_;           // subarray-major, bins minor
  std::vector<std::uint32_t> populated_;  // per subarray
  std::uint64_t events_ = 0;
  ps_t busy_ps_ = 0;
  ps_t last_now_ = 0;
  ps_t next_due_ps_ = -1;  // earliest unemitted slot start; -1 forces a scan
};

/// Refresh energy for `rows` refreshed rows: rows * 512 * per-bit energy.
inline aj_t refresh_energy_aj(std::uint64_t rows, const TechParams& params) {
  if (!params.refresh) throw Error("UNSUPPORTED_PAIR", "technology has no refresh");
  return static_cast<aj_t>(rows) * LINE_BITS * params.refresh->energy_aj_per_bit;
}

/// Validates bin fractions (sum to one) and multipliers (>= 1).
void validate_bins(const std::vector<RetentionBin>& bins);

}  // namespace hetcache
