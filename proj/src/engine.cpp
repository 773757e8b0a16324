#include "hetcache/engine.hpp"

#include <algorithm>
#include <future>

namespace hetcache {

namespace {
constexpr int kDefaultSimilarityBp = 7600;
constexpr int kL1dSimilarityBp = 9400;

std::uint64_t aligned(std::uint64_t addr) { return addr & ~static_cast<std::uint64_t>(LINE_BYTES - 1); }
}  // namespace

struct Simulator::LevelRuntime {
  LevelKind kind;
  std::uint32_t core = 0;
  LevelConfig cfg;
  CacheGeometry geom;
  SubarrayPlan plan;
  // Primary covers the whole cache for pure levels and the GC partition for
  // the hybrid LLC; secondary is the STT-RAM partition.
  TechParams primary, secondary;
  TechClass primary_tech = TechClass::SRAM, secondary_tech = TechClass::SRAM;
  TechVariant variant = TechVariant::Pure;
  cycle_t primary_read_cy = 0, primary_write_cy = 0;
  cycle_t secondary_read_cy = 0, secondary_write_cy = 0;
  ps_t retention_eff_ps = 0;  // 0 for static technologies
  std::uint32_t model_gc_ways = 0;
  std::uint32_t refreshable_subarrays = 0;
  CacheModel::NrpConfig nrp;
  int similarity_bp = -1;  // resolved fallback; -1 disabled
  cycle_t overlap_w = 0;
  std::uint64_t gc_bits = 0, stt_bits = 0;

  std::unique_ptr<CacheModel> model;
  std::optional<RefreshScheduler> refresh;
  WblShadow shadow;
  struct Pending {
    bool active = false;
    cycle_t issue = 0;
  };
  std::vector<Pending> pending;
  std::unordered_set<std::uint64_t> nrp_ghost;
  std::uint64_t refresh_rows_logged = 0;
  std::vector<CacheModel::Invalidation> inv_scratch;
};

namespace {

const char* level_section(LevelKind k) {
  switch (k) {
    case LevelKind::L1I: return "l1i";
    case LevelKind::L1D: return "l1d";
    case LevelKind::L2: return "l2";
    case LevelKind::LLC: return "llc";
  }
  return "?";
}

}  // namespace

Simulator::Simulator(const Catalog& catalog, const HierarchyConfig& config)
    : catalog_(catalog), config_(config) {
  if (config_.cores < 1) throw Error("CONFIG_ERROR", "cores must be >= 1");
  if (config_.clock_mhz <= 0) throw Error("CONFIG_ERROR", "clock must be positive");
  report_.label = config_.label;
  report_.seed = config_.seed;
  report_.clock_mhz = config_.clock_mhz;
  report_.cores = config_.cores;

  auto build = [&](LevelKind kind, std::uint32_t core) {
    const LevelConfig& cfg = config_.level(kind);
    const char* section = level_section(kind);
    auto rt = std::make_unique<LevelRuntime>();
    rt->kind = kind;
    rt->core = core;
    rt->cfg = cfg;
    rt->geom = CacheGeometry::make(cfg.capacity_bytes, cfg.associativity);
    rt->plan = plan_subarrays(rt->geom);
    node_index(cfg.node_nm);
    long long mhz = config_.clock_mhz;

    if (cfg.hybrid) {
      if (kind != LevelKind::LLC)
        throw Error("CONFIG_ERROR",
                    std::string(section) + ": hybrid split is allowed only at the LLC");
      if (cfg.gc_ways == 0 || cfg.gc_ways >= cfg.associativity)
        throw Error("CONFIG_ERROR", std::string(section) +
                                        ".gc_ways: must split the set between GC "
                                        "and STT-RAM ways");
      rt->primary = scale(catalog_.params(CacheLevel::LLC, TechClass::GC,
                                          TechVariant::Hybrid),
                          28, cfg.node_nm);
      rt->secondary =
          scale(catalog_.params(CacheLevel::LLC, TechClass::STTRAM), 28, cfg.node_nm);
      rt->primary_tech = TechClass::GC;
      rt->secondary_tech = TechClass::STTRAM;
      rt->variant = TechVariant::Hybrid;
      rt->model_gc_ways = cfg.gc_ways;
    } else {
      try {
        rt->primary = scale(catalog_.params(catalog_level(kind), cfg.tech), 28,
                            cfg.node_nm);
      } catch (const Error& e) {
        throw Error("CONFIG_ERROR", std::string(section) + ".tech: " + e.what());
      }
      rt->secondary = rt->primary;
      rt->primary_tech = rt->secondary_tech = cfg.tech;
      rt->model_gc_ways = cfg.associativity;
    }
    rt->primary_read_cy = rt->primary.read_cycles(mhz);
    rt->primary_write_cy = rt->primary.write_cycles(mhz);
    rt->secondary_read_cy = rt->secondary.read_cycles(mhz);
    rt->secondary_write_cy = rt->secondary.write_cycles(mhz);

    const LevelFlags& f = cfg.flags;
    if (f.refresh_interval_multiplier_milli < 1000)
      throw Error("CONFIG_ERROR",
                  std::string(section) + ".refresh_interval_multiplier: must be >= 1");
    if (rt->primary.refresh)
      rt->retention_eff_ps = rt->primary.refresh->retention_ps *
                             f.refresh_interval_multiplier_milli / 1000;

    if (f.nrp) {
      if (!rt->primary.refresh)
        throw Error("CONFIG_ERROR", std::string(section) +
                                        ".nrp: requires a refreshable technology");
      if (f.nrp_counter_bits < 1 || f.nrp_counter_bits > 8)
        throw Error("CONFIG_ERROR",
                    std::string(section) + ".nrp_counter_bits: must be in [1, 8]");
      rt->nrp.enabled = true;
      rt->nrp.counter_bits = f.nrp_counter_bits;
      rt->nrp.epoch_ps = rt->retention_eff_ps >> f.nrp_counter_bits;
      rt->nrp.read_resets = f.nrp_read_resets;
    }
    if (!f.bins.empty()) {
      if (!rt->primary.refresh || f.nrp)
        throw Error("CONFIG_ERROR",
                    std::string(section) + ": retention bins require active refresh");
      validate_bins(f.bins);
    }
    bool has_gc = cfg.hybrid || decoupled_bitlines(cfg.tech);
    if (f.asymmetric_writes && !has_gc)
      throw Error("CONFIG_ERROR",
                  std::string(section) +
                      ".asymmetric_writes: requires decoupled-bitline (GC) cells");
    if (f.overlap && !has_gc)
      throw Error("CONFIG_ERROR", std::string(section) +
                                      ".overlap: requires decoupled-bitline (GC) cells");
    if (f.write_similarity_bp == -2)
      rt->similarity_bp = kind == LevelKind::L1D ? kL1dSimilarityBp : kDefaultSimilarityBp;
    else if (f.write_similarity_bp == -1)
      rt->similarity_bp = -1;
    else if (f.write_similarity_bp >= 0 && f.write_similarity_bp <= 10000)
      rt->similarity_bp = f.write_similarity_bp;
    else
      throw Error("CONFIG_ERROR",
                  std::string(section) + ".write_similarity_bp: out of range");
    rt->overlap_w = f.overlap_window_cycles ? f.overlap_window_cycles
                                            : rt->primary_write_cy;

    if (rt->primary.refresh && !f.nrp) {
      std::uint32_t refreshable_ways = cfg.hybrid ? cfg.gc_ways : cfg.associativity;
      rt->refreshable_subarrays = refreshable_ways * rt->plan.subarrays_per_way;
    }

    std::uint64_t line_bits = LINE_BITS;
    std::uint32_t gcw = cfg.hybrid ? cfg.gc_ways : cfg.associativity;
    rt->gc_bits = static_cast<std::uint64_t>(rt->geom.sets) * gcw * line_bits;
    rt->stt_bits = static_cast<std::uint64_t>(rt->geom.sets) *
                   (cfg.associativity - gcw) * line_bits;

    LevelStats& st = stats(kind);
    st.storage_bits += rt->gc_bits + rt->stt_bits;
    st.refreshable_subarrays += rt->refreshable_subarrays;
    levels_.push_back(std::move(rt));
  };

  for (std::uint32_t c = 0; c < config_.cores; ++c) {
    build(LevelKind::L1I, c);
    build(LevelKind::L1D, c);
    build(LevelKind::L2, c);
  }
  build(LevelKind::LLC, 0);
}

Simulator::~Simulator() = default;

Simulator::LevelRuntime* Simulator::next_level(LevelRuntime& rt) {
  switch (rt.kind) {
    case LevelKind::L1I:
    case LevelKind::L1D: return levels_[rt.core * 3 + 2].get();
    case LevelKind::L2: return levels_.back().get();
    case LevelKind::LLC: return nullptr;
  }
  return nullptr;
}

void Simulator::sync_level(LevelRuntime& rt, ps_t now_ps) {
  if (rt.refresh) {
    LevelStats& st = stats(rt.kind);
    rt.refresh->advance(now_ps, [&](const RefreshEvent& ev) {
      ++st.refresh_events;
      st.refresh_busy_ps += rt.refresh->slot_ps();
      ledger().charge_refresh_rows(rt.kind, rt.primary, 1);
      ++rt.refresh_rows_logged;
      std::uint32_t way = ev.subarray / rt.plan.subarrays_per_way;
      std::uint32_t set = (ev.subarray % rt.plan.subarrays_per_way) *
                              rt.plan.rows_per_subarray +
                          ev.row;
      rt.model->stamp_refresh(set, way, ev.start_ps);
    });
  }
  if (rt.nrp.enabled) {
    rt.inv_scratch.clear();
    rt.model->advance_nrp(now_ps, &rt.inv_scratch);
    LevelStats& st = stats(rt.kind);
    for (const auto& inv : rt.inv_scratch) {
      ++st.nrp_invalidations;
      std::uint64_t addr = line_address(inv.tag, inv.set, rt.geom);
      rt.nrp_ghost.insert(addr);
      if (inv.dirty) {
        ++st.nrp_dirty_writebacks;
        writeback_below(rt, addr, data_bearing_ ? &inv.payload : nullptr, inv.at_ps);
      }
    }
  }
}

void Simulator::sync_all(ps_t now_ps) {
  // Bottom-up so NRP writebacks land in already-synced lower levels.
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) sync_level(**it, now_ps);
}

aj_t Simulator::charge_array_read(LevelRuntime& rt, bool stt_way) {
  const TechParams& p = stt_way ? rt.secondary : rt.primary;
  aj_t e = ledger().charge_read(rt.kind, p);
  if (record_events_) {
    EnergyEvent ev{};
    ev.kind = EnergyEvent::Kind::Read;
    ev.level = rt.kind;
    ev.tech = stt_way ? rt.secondary_tech : rt.primary_tech;
    ev.variant = stt_way ? TechVariant::Pure : rt.variant;
    events_.push_back(ev);
  }
  return e;
}

aj_t Simulator::charge_array_write(LevelRuntime& rt, std::uint32_t set,
                                   std::uint32_t way, const Line512* payload,
                                   WriteOrigin origin, const Line512* old_line) {
  bool stt_way = rt.model->hybrid() && !rt.model->is_gc_way(way);
  const TechParams& p = stt_way ? rt.secondary : rt.primary;
  TechClass tech = stt_way ? rt.secondary_tech : rt.primary_tech;
  TechVariant variant = stt_way ? TechVariant::Pure : rt.variant;
  EnergyEvent ev{};
  ev.level = rt.kind;
  ev.tech = tech;
  ev.variant = variant;
  ev.origin = origin;
  aj_t e;
  if (rt.cfg.flags.asymmetric_writes && decoupled_bitlines(tech)) {
    if (data_bearing_) {
      Line512 line = payload ? *payload : Line512{};
      std::uint32_t sub = locate(set, way, rt.geom, rt.plan).subarray_id;
      Line512& shadow = rt.shadow.last[sub];
      const Line512& reference =
          (rt.cfg.flags.compare_victim_on_fill && origin == WriteOrigin::Fill)
              ? (old_line ? *old_line : Line512{})
              : shadow;
      int d = line.dissimilar_bits(reference);
      e = ledger().charge_write_dissimilar(rt.kind, p, origin, d);
      shadow = line;
      ev.kind = EnergyEvent::Kind::WriteAsym;
      ev.arg = static_cast<std::uint32_t>(d);
    } else if (rt.similarity_bp >= 0) {
      e = ledger().charge_write_model(rt.kind, p, origin, rt.similarity_bp);
      ev.kind = EnergyEvent::Kind::WriteModel;
      ev.arg = static_cast<std::uint32_t>(rt.similarity_bp);
    } else {
      throw Error("MISSING_PAYLOAD",
                  "asymmetric accounting needs payloads or a similarity model");
    }
  } else {
    e = ledger().charge_write_full(rt.kind, p, origin);
    ev.kind = EnergyEvent::Kind::WriteFull;
  }
  if (record_events_) events_.push_back(ev);
  return e;
}

cycle_t Simulator::resolve_pending_write(LevelRuntime& rt, std::uint32_t subarray,
                                         cycle_t now_cy, bool incoming_is_read) {
  if (rt.pending.empty()) return 0;
  LevelRuntime::Pending& p = rt.pending[subarray];
  if (!p.active) return 0;
  LevelStats& st = stats(rt.kind);
  p.active = false;
  if (incoming_is_read) {
    // Decoupled bitlines: the read proceeds regardless; within the window it
    // also retires the write with zero array occupancy.
    if (now_cy <= p.issue + rt.overlap_w)
      ++st.overlapped_writes;
    else
      ++st.serialized_writes;
    return 0;
  }
  ++st.serialized_writes;
  cycle_t busy_end = p.issue + rt.primary_write_cy;
  return now_cy < busy_end ? busy_end - now_cy : 0;
}

void Simulator::check_freshness(LevelRuntime& rt, std::uint32_t set, std::uint32_t way,
                                ps_t arrive_ps) {
  if (rt.retention_eff_ps == 0) return;
  if (rt.model->hybrid() && !rt.model->is_gc_way(way)) return;
  ps_t fresh = rt.model->line(set, way).fresh_ps;
  if (rt.refresh) {
    RowLocation loc = locate(set, way, rt.geom, rt.plan);
    if (auto last = rt.refresh->last_refresh_before(loc.subarray_id, loc.row, arrive_ps))
      fresh = std::max(fresh, *last);
  }
  if (arrive_ps - fresh > rt.retention_eff_ps)
    ++stats(rt.kind).freshness_violations;
}

void Simulator::writeback_below(LevelRuntime& from, std::uint64_t addr,
                                const Line512* payload, ps_t now_ps) {
  ++stats(from.kind).writebacks_out;
  if (LevelRuntime* next = next_level(from)) {
    handle_writeback(*next, addr, payload, now_ps);
    return;
  }
  ledger().charge_dram(true, catalog_.dram());
  if (record_events_) {
    EnergyEvent ev{};
    ev.kind = EnergyEvent::Kind::DramWrite;
    ev.level = LevelKind::LLC;
    events_.push_back(ev);
  }
  if (data_bearing_ && payload) memory_image_[aligned(addr)] = *payload;
}

void Simulator::handle_writeback(LevelRuntime& rt, std::uint64_t addr,
                                 const Line512* payload, ps_t now_ps) {
  LevelStats& st = stats(rt.kind);
  ++st.writeback_lookups;
  AddressIndex ai = index_address(addr, rt.geom);
  if (auto way = rt.model->lookup(ai.set, ai.tag)) {
    ++st.writeback_hits;
    charge_array_write(rt, ai.set, *way, payload, WriteOrigin::Writeback, nullptr);
    rt.model->write_line(ai.set, *way, payload, now_ps);
    return;
  }
  ++st.writeback_fills;
  do_fill(rt, ai.set, ai.tag, payload, /*dirty=*/true, now_ps);
}

void Simulator::do_fill(LevelRuntime& rt, std::uint32_t set, std::uint64_t tag,
                        const Line512* payload, bool dirty, ps_t now_ps) {
  std::optional<CacheModel::Evicted> ev;
  std::uint32_t way = rt.model->fill(set, tag, payload, dirty, now_ps, &ev);
  LevelStats& st = stats(rt.kind);
  if (ev) {
    ++st.evictions;
    if (ev->dirty) {
      ++st.dirty_evictions;
      writeback_below(rt, line_address(ev->tag, set, rt.geom),
                      data_bearing_ ? &ev->payload : nullptr, now_ps);
    }
  }
  charge_array_write(rt, set, way, payload, WriteOrigin::Fill,
                     ev ? &ev->payload : nullptr);
}

Simulator::Descend Simulator::dram_fetch(std::uint64_t addr) {
  Descend d;
  d.cycles = catalog_.dram().access_cycles(config_.clock_mhz);
  ledger().charge_dram(false, catalog_.dram());
  if (record_events_) {
    EnergyEvent ev{};
    ev.kind = EnergyEvent::Kind::DramRead;
    ev.level = LevelKind::LLC;
    events_.push_back(ev);
  }
  if (data_bearing_) {
    auto it = memory_image_.find(aligned(addr));
    d.data = it != memory_image_.end() ? it->second : Line512{};
  }
  return d;
}

Simulator::Descend Simulator::access_at(LevelRuntime& rt, TraceOp op,
                                        std::uint64_t addr, const Line512* payload,
                                        cycle_t arrive_cy) {
  LevelStats& st = stats(rt.kind);
  ps_t arrive_ps = ps_for_cycles(arrive_cy, config_.clock_mhz);
  bool is_read = op != TraceOp::Write;
  ++st.demand_lookups;
  if (is_read) ++st.read_lookups;
  AddressIndex ai = index_address(addr, rt.geom);

  if (auto hit_way = rt.model->lookup(ai.set, ai.tag)) {
    ++st.hits;
    Descend out;
    bool stt_hit = rt.model->hybrid() && !rt.model->is_gc_way(*hit_way);
    if (stt_hit) {
      // Swap-based promotion into the GC ways; the access pays the STT read
      // latency, the swap is charged in energy off the critical path.
      ++st.hit_stt_way;
      ++st.promotions;
      auto promo = rt.model->touch_hit(ai.set, *hit_way,
                                       rt.cfg.flags.hybrid_promote_mru, arrive_ps);
      std::uint32_t gc_way = promo->gc_way;
      if (!is_read) rt.model->write_line(ai.set, gc_way, payload, arrive_ps);
      charge_array_read(rt, /*stt_way=*/true);
      const Line512* line_data =
          data_bearing_ ? &rt.model->payload(ai.set, gc_way) : nullptr;
      charge_array_write(rt, ai.set, gc_way, line_data, WriteOrigin::Swap, nullptr);
      if (promo->demoted) {
        const Line512* demoted =
            data_bearing_ ? &rt.model->payload(ai.set, promo->stt_way) : nullptr;
        charge_array_write(rt, ai.set, promo->stt_way, demoted, WriteOrigin::Swap,
                           nullptr);
      }
      out.cycles = rt.secondary_read_cy;
      if (data_bearing_) out.data = rt.model->payload(ai.set, gc_way);
      return out;
    }

    if (rt.model->hybrid()) ++st.hit_gc_way;
    std::uint32_t sub = locate(ai.set, *hit_way, rt.geom, rt.plan).subarray_id;
    bool gc_way = decoupled_bitlines(rt.primary_tech);
    bool posted = !is_read && rt.cfg.flags.overlap && gc_way;
    cycle_t delay_cy = 0;
    if (rt.cfg.flags.overlap && gc_way)
      delay_cy += resolve_pending_write(rt, sub, arrive_cy, is_read);
    if (!posted && rt.refresh) {
      if (auto d = rt.refresh->collides(sub, is_read, arrive_ps)) {
        ++st.refresh_collisions;
        cycle_t dc = cycles_for_ps(*d, config_.clock_mhz);
        st.refresh_delay_cycles += dc;
        delay_cy += dc;
      }
    }
    rt.model->touch_hit(ai.set, *hit_way, rt.cfg.flags.hybrid_promote_mru, arrive_ps);
    if (is_read) {
      check_freshness(rt, ai.set, *hit_way, arrive_ps);
      rt.model->note_read(ai.set, *hit_way, arrive_ps);
      charge_array_read(rt, false);
      out.cycles = rt.primary_read_cy + delay_cy;
      if (data_bearing_) out.data = rt.model->payload(ai.set, *hit_way);
    } else {
      charge_array_write(rt, ai.set, *hit_way, payload, WriteOrigin::Demand, nullptr);
      rt.model->write_line(ai.set, *hit_way, payload, arrive_ps);
      if (posted) {
        rt.pending[sub] = {true, arrive_cy + delay_cy};
        out.cycles = delay_cy;  // write latency hidden behind the posted write
      } else {
        out.cycles = rt.primary_write_cy + delay_cy;
      }
      if (data_bearing_) out.data = rt.model->payload(ai.set, *hit_way);
    }
    return out;
  }

  // Miss: the probe costs one array read; the line is fetched below and
  // filled here (a demand write merges into the fill).
  ++st.misses;
  if (rt.nrp_ghost.erase(aligned(addr)) && is_read) ++st.nrp_read_misses;
  charge_array_read(rt, false);
  Descend below;
  if (LevelRuntime* next = next_level(rt))
    below = access_at(*next, TraceOp::Read, addr, nullptr, arrive_cy + rt.primary_read_cy);
  else
    below = dram_fetch(addr);
  const Line512* fetched = below.data ? &*below.data : nullptr;
  const Line512* fill_data = (op == TraceOp::Write) ? payload : fetched;
  do_fill(rt, ai.set, ai.tag, fill_data, /*dirty=*/op == TraceOp::Write, arrive_ps);
  Descend out;
  out.cycles = rt.primary_read_cy + below.cycles;
  out.data = below.data;
  return out;
}

void Simulator::finalize(ps_t end_ps) {
  sync_all(end_ps);
  for (auto& rtp : levels_) {
    LevelRuntime& rt = *rtp;
    LevelStats& st = stats(rt.kind);
    for (auto& p : rt.pending)
      if (p.active) {
        p.active = false;
        ++st.serialized_writes;
      }
    if (rt.refresh_rows_logged && record_events_) {
      EnergyEvent ev{};
      ev.kind = EnergyEvent::Kind::RefreshRows;
      ev.level = rt.kind;
      ev.tech = rt.primary_tech;
      ev.variant = rt.variant;
      ev.count = rt.refresh_rows_logged;
      events_.push_back(ev);
    }
    auto leak = [&](std::uint64_t bits, const TechParams& p, TechClass tech,
                    TechVariant variant) {
      if (bits == 0 || end_ps == 0) return;
      ledger().charge_leakage(rt.kind, bits, end_ps, p.leakage_aw_per_bit);
      if (record_events_) {
        EnergyEvent ev{};
        ev.kind = EnergyEvent::Kind::Leakage;
        ev.level = rt.kind;
        ev.tech = tech;
        ev.variant = variant;
        ev.bits = bits;
        ev.duration_ps = end_ps;
        events_.push_back(ev);
      }
    };
    leak(rt.gc_bits, rt.primary, rt.primary_tech, rt.variant);
    if (rt.cfg.hybrid)
      leak(rt.stt_bits, rt.secondary, rt.secondary_tech, TechVariant::Pure);
  }
}

SimReport Simulator::run(TraceSource& trace, const SimOptions& options) {
  if (ran_) throw Error("CONFIG_ERROR", "a Simulator instance runs only once");
  ran_ = true;
  record_events_ = options.record_events;
  const TraceHeader& header = trace.header();
  if (header.cores > config_.cores)
    throw Error("CONFIG_ERROR", "trace uses " + std::to_string(header.cores) +
                                    " cores but the hierarchy has " +
                                    std::to_string(config_.cores));
  data_bearing_ = header.data_bearing;
  for (auto& rtp : levels_) {
    LevelRuntime& rt = *rtp;
    if (rt.cfg.flags.asymmetric_writes && !data_bearing_ && rt.similarity_bp < 0)
      throw Error("MISSING_PAYLOAD",
                  std::string(level_section(rt.kind)) +
                      ": asymmetric accounting enabled but the trace carries no "
                      "payloads and the similarity fallback is disabled");
    rt.model = std::make_unique<CacheModel>(rt.geom, rt.model_gc_ways, data_bearing_,
                                            rt.nrp);
    if (rt.refreshable_subarrays)
      rt.refresh.emplace(rt.plan, rt.refreshable_subarrays, *rt.primary.refresh,
                         decoupled_bitlines(rt.primary_tech),
                         rt.cfg.flags.synchronized_subarrays,
                         rt.cfg.flags.refresh_interval_multiplier_milli,
                         rt.cfg.flags.bins);
    if (rt.cfg.flags.asymmetric_writes)
      rt.shadow = WblShadow(rt.plan.total_subarrays);
    if (rt.cfg.flags.overlap) rt.pending.assign(rt.plan.total_subarrays, {});
  }

  // Per-core pull buffers over the single merged stream.
  std::vector<std::deque<TraceRecord>> queue(config_.cores);
  bool exhausted = false;
  auto ensure = [&](std::uint32_t core) {
    while (queue[core].empty() && !exhausted) {
      auto r = trace.next();
      if (!r) {
        exhausted = true;
        break;
      }
      queue[r->core].push_back(std::move(*r));
    }
    return !queue[core].empty();
  };

  std::vector<cycle_t> completion(config_.cores, 0);
  for (;;) {
    int best = -1;
    cycle_t best_issue = 0;
    for (std::uint32_t c = 0; c < config_.cores; ++c) {
      if (!ensure(c)) continue;
      cycle_t issue = completion[c] + queue[c].front().gap;
      if (best < 0 || issue < best_issue) {
        best = static_cast<int>(c);
        best_issue = issue;
      }
    }
    if (best < 0) break;
    TraceRecord rec = std::move(queue[best].front());
    queue[best].pop_front();
    sync_all(ps_for_cycles(best_issue, config_.clock_mhz));
    LevelRuntime& first = rec.op == TraceOp::Ifetch ? *levels_[best * 3]
                                                    : *levels_[best * 3 + 1];
    const Line512* payload = rec.payload ? &*rec.payload : nullptr;
    Descend d = access_at(first, rec.op, rec.addr, payload, best_issue);
    completion[best] = best_issue + d.cycles;
    ++report_.records;
    report_.total_latency_cycles += d.cycles;
  }

  report_.total_cycles = *std::max_element(completion.begin(), completion.end());
  report_.total_time_ps = ps_for_cycles(report_.total_cycles, config_.clock_mhz);
  finalize(report_.total_time_ps);
  return report_;
}

SimReport simulate(const Catalog& catalog, const HierarchyConfig& config,
                   TraceSource& trace, const SimOptions& options) {
  Simulator sim(catalog, config);
  return sim.run(trace, options);
}

std::vector<SimReport> run_sweep(const Catalog& catalog,
                                 const std::vector<HierarchyConfig>& configs,
                                 const Trace& trace) {
  std::vector<std::future<SimReport>> futures;
  futures.reserve(configs.size());
  for (const auto& cfg : configs) {
    futures.push_back(std::async(std::launch::async, [&catalog, &cfg, &trace] {
      auto src = trace_from_ref(trace);
      return simulate(catalog, cfg, *src);
    }));
  }
  std::vector<SimReport> out;
  out.reserve(configs.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace hetcache
