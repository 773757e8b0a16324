#include "hetcache/refresh.hpp"

namespace hetcache {

void validate_bins(const std::vector<RetentionBin>& bins) {
  if (bins.empty()) throw Error("CONFIG_ERROR", "bin list is empty");
  long long total = 0;
  for (const auto& b : bins) {
    if (b.multiplier_milli < 1000)
      throw Error("CONFIG_ERROR", "bin retention below worst case");
    if (b.fraction_bp <= 0)
      throw Error("CONFIG_ERROR", "bin fraction must be positive");
    total += b.fraction_bp;
  }
  if (total != 10000)
    throw Error("CONFIG_ERROR", "bin fractions must sum to 1 (10000 bp), got " +
                                    std::to_string(total));
}

RefreshScheduler::RefreshScheduler(const SubarrayPlan& plan,
                                   std::uint32_t refreshable_subarrays,
                                   const RefreshParams& refresh, bool decoupled,
                                   bool synchronized,
                                   long long interval_multiplier_milli,
                                   const std::vector<RetentionBin>& bins)
    : plan_(plan) {
  if (interval_multiplier_milli < 1000)
    throw Error("CONFIG_ERROR", "refresh interval multiplier must be >= 1");
  retention_ps_ = refresh.retention_ps * interval_multiplier_milli / 1000;
  slot_ps_ = decoupled ? 2 * refresh.row_period_ps : refresh.row_period_ps;
  half_ps_ = decoupled ? refresh.row_period_ps : 0;
  base_period_ps_ = stagger_period_ps(plan, retention_ps_);

  std::vector<RetentionBin> use = bins;
  if (use.empty()) use.push_back(RetentionBin{});
  validate_bins(use);
  std::uint32_t assigned = 0;
  for (std::size_t i = 0; i < use.size(); ++i) {
    Bin b;
    b.row_begin = assigned;
    b.row_count = (i + 1 == use.size())
                      ? plan.rows_per_subarray - assigned
                      : static_cast<std::uint32_t>(
                            static_cast<std::uint64_t>(plan.rows_per_subarray) *
                            use[i].fraction_bp / 10000);
    if (b.row_count == 0)
      throw Error("CONFIG_ERROR", "bin fraction maps to zero rows");
    b.period_ps = retention_ps_ * use[i].multiplier_milli / 1000 / b.row_count;
    assigned += b.row_count;
    bins_.push_back(b);
  }

  anchors_.resize(refreshable_subarrays);
  for (std::uint32_t s = 0; s < refreshable_subarrays; ++s)
    anchors_[s] = synchronized
                      ? 0
                      : static_cast<ps_t>(s) * base_period_ps_ / refreshable_subarrays;
  state_.resize(static_cast<std::size_t>(refreshable_subarrays) * bins_.size());
  populated_.resize(refreshable_subarrays);
  for (std::uint32_t s = 0; s < refreshable_subarrays; ++s)
    populated_[s] = populated_rows(plan, s);
}

void RefreshScheduler::advance(ps_t now_ps,
                               const std::function<void(const RefreshEvent&)>& emit) {
  if (now_ps < last_now_)
    throw Error("OUT_OF_RANGE", "refresh clock must not run backwards");
  last_now_ = now_ps;
  if (now_ps <= next_due_ps_) return;  // nothing scheduled before now
  ps_t next_due = -1;
  for (std::uint32_t s = 0; s < anchors_.size(); ++s) {
    BinState* st = state_.data() + static_cast<std::size_t>(s) * bins_.size();
    // Merge the per-bin slot streams of this subarray in time order.
    for (;;) {
      int best = -1;
      ps_t best_start = 0;
      for (std::size_t b = 0; b < bins_.size(); ++b) {
        ps_t start = anchor(s) + static_cast<ps_t>(st[b].next_k) * bins_[b].period_ps;
        if (start >= now_ps) {
          if (next_due < 0 || start < next_due) next_due = start;
          continue;
        }
        if (best < 0 || start < best_start) {
          best = static_cast<int>(b);
          best_start = start;
        }
      }
      if (best < 0) break;
      const Bin& bin = bins_[best];
      std::uint32_t row =
          bin.row_begin + static_cast<std::uint32_t>(st[best].next_k % bin.row_count);
      ++st[best].next_k;
      if (row >= populated_[s]) continue;  // unoccupied rows are not refreshed
      ++events_;
      busy_ps_ += slot_ps_;
      emit(RefreshEvent{s, row, best_start});
    }
  }
  next_due_ps_ = next_due;
}

std::optional<ps_t> RefreshScheduler::last_refresh_before(std::uint32_t subarray,
                                                          std::uint32_t row,
                                                          ps_t t_ps) const {
  if (subarray >= anchors_.size()) return std::nullopt;
  if (row >= populated_[subarray]) return std::nullopt;
  ps_t a = anchor(subarray);
  for (const Bin& bin : bins_) {
    if (row < bin.row_begin || row >= bin.row_begin + bin.row_count) continue;
    // Slots for this row have indices k = (row - row_begin) + n * count.
    std::uint64_t k0 = row - bin.row_begin;
    ps_t first = a + static_cast<ps_t>(k0) * bin.period_ps;
    if (t_ps < first) return std::nullopt;
    std::uint64_t n = static_cast<std::uint64_t>((t_ps - first) /
                                                 (bin.period_ps * bin.row_count));
    return a + static_cast<ps_t>(k0 + n * bin.row_count) * bin.period_ps;
  }
  return std::nullopt;
}

std::optional<ps_t> RefreshScheduler::collides(std::uint32_t subarray, bool is_read,
                                               ps_t t_ps) const {
  if (subarray >= anchors_.size()) return std::nullopt;
  ps_t a = anchor(subarray);
  if (t_ps < a) return std::nullopt;
  for (std::size_t b = 0; b < bins_.size(); ++b) {
    const Bin& bin = bins_[b];
    std::uint64_t k = static_cast<std::uint64_t>((t_ps - a) / bin.period_ps);
    ps_t start = a + static_cast<ps_t>(k) * bin.period_ps;
    if (t_ps >= start + slot_ps_) continue;
    std::uint32_t row = bin.row_begin + static_cast<std::uint32_t>(k % bin.row_count);
    if (row >= populated_[subarray]) continue;
    if (half_ps_ == 0) return start + slot_ps_ - t_ps;  // blocking refresh
    if (t_ps < start + half_ps_) {
      // Refresh is reading: the write port is free, reads wait for the half.
      if (is_read) return start + half_ps_ - t_ps;
      return std::nullopt;
    }
    // Refresh is writing back: the read port is free, writes wait for the end.
    if (is_read) return std::nullopt;
    return start + slot_ps_ - t_ps;
  }
  return std::nullopt;
}

}  // namespace hetcache
