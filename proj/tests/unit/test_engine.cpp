#include <doctest.h>

#include "../support/pricer.hpp"
#include "hetcache/engine.hpp"
#include "hetcache/report.hpp"

using namespace hetcache;

namespace {

const Catalog& cat() {
  static Catalog c = Catalog::builtin();
  return c;
}

LevelConfig level(std::uint64_t cap, std::uint32_t assoc, TechClass tech) {
  LevelConfig c;
  c.capacity_bytes = cap;
  c.associativity = assoc;
  c.tech = tech;
  return c;
}

HierarchyConfig table_hierarchy(TechClass tech) {
  HierarchyConfig h;
  h.label = "test";
  h.l1i = level(32 * 1024, 8, tech);
  h.l1d = level(32 * 1024, 8, tech);
  h.l2 = level(256 * 1024, 8, tech);
  h.llc = level(8 * 1024 * 1024, 16, tech);
  return h;
}

HierarchyConfig tiny_hybrid() {
  HierarchyConfig h;
  h.label = "tiny-hybrid";
  h.l1i = level(64, 1, TechClass::GC);
  h.l1d = level(64, 1, TechClass::GC);
  h.l2 = level(128, 2, TechClass::GC);
  h.llc = level(384, 6, TechClass::GC);
  h.llc.hybrid = true;
  h.llc.gc_ways = 2;
  return h;
}

Trace reads(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> addr_gap) {
  Trace t;
  for (auto [addr, gap] : addr_gap) {
    TraceRecord r;
    r.addr = addr;
    r.gap = gap;
    r.op = TraceOp::Read;
    t.records.push_back(r);
  }
  return t;
}

SimReport run(const HierarchyConfig& cfg, Trace trace) {
  auto src = trace_from_vector(std::move(trace));
  return simulate(cat(), cfg, *src);
}

}  // namespace

TEST_CASE("additive miss latency") {
  SUBCASE("a full GC miss costs 2 + 5 + 9 + 340 cycles") {
    SimReport r = run(table_hierarchy(TechClass::GC), reads({{0x40, 0}}));
    CHECK(r.total_latency_cycles == 356);
    CHECK(r.ledger.dram().reads == 1);
  }
  SUBCASE("a full SRAM miss costs 2 + 5 + 10 + 340 cycles") {
    SimReport r = run(table_hierarchy(TechClass::SRAM), reads({{0x40, 0}}));
    CHECK(r.total_latency_cycles == 357);
  }
  SUBCASE("an all-hit GC stream settles at 2 cycles per access") {
    Trace t;
    for (int i = 0; i < 1000; ++i) {
      TraceRecord r;
      r.addr = 0x80;
      r.op = TraceOp::Read;
      t.records.push_back(r);
    }
    SimReport r = run(table_hierarchy(TechClass::GC), std::move(t));
    CHECK(r.total_latency_cycles == 356 + 999 * 2);
    CHECK(r.level(LevelKind::L1D).hits == 999);
    CHECK(r.amat_cycles() == doctest::Approx(2.0).epsilon(0.2));
  }
  SUBCASE("L1 miss plus L2 hit costs 2 + 5 cycles") {
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    h.l1d = level(64, 1, TechClass::SRAM);  // single-line L1D
    // B evicts A from the one-line L1; A then hits in L2.
    SimReport r = run(h, reads({{0x0, 0}, {0x40, 0}, {0x0, 0}}));
    CHECK(r.total_latency_cycles == 357 + 357 + 7);
    CHECK(r.level(LevelKind::L2).hits == 1);
  }
}

TEST_CASE("ifetch routes to the instruction cache") {
  Trace t;
  TraceRecord r;
  r.addr = 0x1000;
  r.op = TraceOp::Ifetch;
  t.records.push_back(r);
  SimReport rep = run(table_hierarchy(TechClass::SRAM), std::move(t));
  CHECK(rep.level(LevelKind::L1I).demand_lookups == 1);
  CHECK(rep.level(LevelKind::L1D).demand_lookups == 0);
}

TEST_CASE("traffic conservation between levels") {
  GenCommon g;
  g.seed = 1234;
  g.payload = PayloadMode::Random;
  Trace t = gen_random(4 * 1024 * 1024, 20000, 5000, g);
  HierarchyConfig h = table_hierarchy(TechClass::SRAM);
  h.l1d = level(4 * 1024, 4, TechClass::SRAM);  // force eviction traffic
  h.l2 = level(16 * 1024, 4, TechClass::SRAM);
  h.llc = level(64 * 1024, 4, TechClass::SRAM);
  SimReport r = run(h, std::move(t));
  const LevelStats& l1d = r.level(LevelKind::L1D);
  const LevelStats& l1i = r.level(LevelKind::L1I);
  const LevelStats& l2 = r.level(LevelKind::L2);
  const LevelStats& llc = r.level(LevelKind::LLC);
  CHECK(l1d.hits + l1d.misses == l1d.demand_lookups);
  CHECK(l2.hits + l2.misses == l2.demand_lookups);
  CHECK(llc.hits + llc.misses == llc.demand_lookups);
  CHECK(l2.demand_lookups == l1d.misses + l1i.misses);
  CHECK(l2.writeback_lookups == l1d.writebacks_out + l1i.writebacks_out);
  CHECK(llc.demand_lookups == l2.misses);
  CHECK(llc.writeback_lookups == l2.writebacks_out);
  CHECK(r.ledger.dram().reads == llc.misses);
  CHECK(r.ledger.dram().writes == llc.writebacks_out);
  CHECK(llc.writebacks_out == llc.dirty_evictions + llc.nrp_dirty_writebacks);
  CHECK(l1d.writebacks_out == l1d.dirty_evictions);
}

TEST_CASE("determinism: identical runs produce identical reports") {
  GenCommon g;
  g.seed = 77;
  g.payload = PayloadMode::Random;
  Trace t = gen_random(1024 * 1024, 5000, 3000, g);
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  h.l1d.flags.asymmetric_writes = true;
  SimReport a = run(h, t);
  SimReport b = run(h, t);
  CHECK(report_text(a) == report_text(b));
}

TEST_CASE("write/read overlap") {
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  h.l1d.flags.overlap = true;

  SUBCASE("strict alternation overlaps every posted write") {
    Trace t = gen_alternating(100, {});
    SimReport r = run(h, std::move(t));
    const LevelStats& s = r.level(LevelKind::L1D);
    CHECK(s.overlapped_writes == 99);  // the first write is the cold fill
    CHECK(s.serialized_writes == 0);
    CHECK(r.overlapped_write_fraction(LevelKind::L1D) == 1.0);
    // posted writes add no latency: miss + first read + 99 x (write 0 + read 2)
    CHECK(r.total_latency_cycles == 356 + 2 + 99 * 2);
  }
  SUBCASE("writes only never overlap") {
    Trace t = gen_write_only(100, {});
    SimReport r = run(h, std::move(t));
    const LevelStats& s = r.level(LevelKind::L1D);
    CHECK(s.overlapped_writes == 0);
    CHECK(s.serialized_writes == 99);
    CHECK(r.overlapped_write_fraction(LevelKind::L1D) == 0.0);
  }
  SUBCASE("reads only report a vacuous zero") {
    SimReport r = run(h, reads({{0x40, 0}, {0x40, 0}, {0x40, 0}}));
    CHECK(r.overlapped_write_fraction(LevelKind::L1D) == 0.0);
  }
  SUBCASE("with the flag off writes pay their latency") {
    HierarchyConfig plain = table_hierarchy(TechClass::GC);
    Trace t = gen_alternating(100, {});
    SimReport r = run(plain, std::move(t));
    // miss + first read + 99 x (write 2 + read 2)
    CHECK(r.total_latency_cycles == 356 + 2 + 99 * 4);
    CHECK(r.level(LevelKind::L1D).overlapped_writes == 0);
  }
}

TEST_CASE("refresh collision delays a read in the read half") {
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  // L1D has 64 sets, one subarray per way, stagger 1.12 ms / 64 = 17.5 us
  // (59500 cycles). Slot 1 refreshes row 1 starting exactly there.
  std::uint64_t set1_addr = 0x40;
  SimReport r = run(h, reads({{set1_addr, 0}, {set1_addr, 59500 - 356}}));
  const LevelStats& s = r.level(LevelKind::L1D);
  CHECK(s.refresh_collisions == 1);
  // delayed to the half boundary: 1.5 ns at 3.4 GHz rounds up to 6 cycles
  CHECK(r.total_latency_cycles == 356 + 2 + 6);
  CHECK(s.refresh_delay_cycles == 6);
}

TEST_CASE("refresh events accrue energy and never violate freshness") {
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  // Hold one line for more than a retention window with periodic reads.
  Trace t;
  for (int i = 0; i < 40; ++i) {
    TraceRecord r;
    r.addr = 0x400;
    r.gap = 100000;  // ~29 us apart, total ~1.2 ms
    r.op = TraceOp::Read;
    t.records.push_back(r);
  }
  SimReport r = run(h, std::move(t));
  CHECK(r.level(LevelKind::L1D).refresh_events > 0);
  CHECK(r.ledger.level(LevelKind::L1D).refresh_aj > 0);
  for (LevelKind k : {LevelKind::L1I, LevelKind::L1D, LevelKind::L2, LevelKind::LLC})
    CHECK(r.level(k).freshness_violations == 0);
}

TEST_CASE("NRP inside the hierarchy") {
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  h.l1d.flags.nrp = true;  // L1D invalidates instead of refreshing

  SUBCASE("a dirty line expires at the 31st epoch and writes back") {
    // Write at t=0 (completes at 356), read issued exactly at the 31st
    // epoch boundary (1.085 ms = cycle 3,689,000): the line is gone.
    Trace t;
    TraceRecord w;
    w.addr = 0x400;
    w.op = TraceOp::Write;
    t.records.push_back(w);
    TraceRecord rd;
    rd.addr = 0x400;
    rd.gap = 3689000 - 356;
    rd.op = TraceOp::Read;
    t.records.push_back(rd);
    SimReport r = run(h, std::move(t));
    const LevelStats& s = r.level(LevelKind::L1D);
    CHECK(s.nrp_invalidations == 1);
    CHECK(s.nrp_dirty_writebacks == 1);
    CHECK(s.writebacks_out == 1);
    CHECK(s.nrp_read_misses == 1);
    CHECK(s.misses == 2);
    CHECK(r.level(LevelKind::L2).writeback_lookups == 1);
    CHECK(s.refresh_events == 0);  // NRP replaces refresh at this level
  }
  SUBCASE("one cycle earlier the line still hits") {
    Trace t;
    TraceRecord w;
    w.addr = 0x400;
    w.op = TraceOp::Write;
    t.records.push_back(w);
    TraceRecord rd;
    rd.addr = 0x400;
    rd.gap = 3689000 - 356 - 1;
    rd.op = TraceOp::Read;
    t.records.push_back(rd);
    SimReport r = run(h, std::move(t));
    CHECK(r.level(LevelKind::L1D).hits == 1);
    CHECK(r.level(LevelKind::L1D).misses == 1);  // only the cold miss
    CHECK(r.level(LevelKind::L1D).nrp_read_misses == 0);
    CHECK(r.level(LevelKind::L1D).freshness_violations == 0);
  }
  SUBCASE("randomized accesses never trip the freshness check") {
    GenCommon g;
    g.seed = 5150;
    Trace t = gen_random(64 * 1024, 50000, 3000, g);
    HierarchyConfig hh = table_hierarchy(TechClass::GC);
    hh.l1d.flags.nrp = true;
    hh.l2.flags.nrp = true;
    SimReport r = run(hh, std::move(t));
    for (LevelKind k : {LevelKind::L1D, LevelKind::L2})
      CHECK(r.level(k).freshness_violations == 0);
  }
}

TEST_CASE("hybrid LLC integration") {
  HierarchyConfig h = tiny_hybrid();
  // A misses everywhere and fills an STT way; B and C push it out of L1/L2;
  // A's second touch hits the STT way and promotes it into a GC way, ditto
  // B; D then flushes A out of L2 so A's third touch hits the LLC GC way.
  Trace t = reads({{0x000, 0}, {0x040, 0}, {0x080, 0}, {0x000, 0}, {0x040, 0},
                   {0x0c0, 0}, {0x000, 0}});
  SimReport r = run(h, std::move(t));
  const LevelStats& llc = r.level(LevelKind::LLC);
  CHECK(llc.hit_stt_way == 2);  // A and B promoted on their second touch
  CHECK(llc.promotions == 2);
  CHECK(llc.hit_gc_way == 1);  // A's third touch hits the GC way
  CHECK(r.ledger.dram().reads == 4);
  // Latency: four cold misses (2+5+10+340), two STT hits (2+5+89), one GC
  // hit (2+5+10).
  CHECK(r.total_latency_cycles == 4 * 357 + 2 * 96 + 17);
}

TEST_CASE("hybrid demand write rides the promotion swap") {
  HierarchyConfig h = tiny_hybrid();
  Trace t;
  TraceRecord w1;
  w1.addr = 0x000;
  w1.op = TraceOp::Write;
  t.records.push_back(w1);
  for (std::uint64_t a : {0x040ull, 0x080ull}) {
    TraceRecord r;
    r.addr = a;
    r.op = TraceOp::Read;
    t.records.push_back(r);
  }
  TraceRecord w2;
  w2.addr = 0x000;
  w2.op = TraceOp::Write;  // misses L1/L2, hits the LLC STT way
  t.records.push_back(w2);
  SimReport r = run(h, std::move(t));
  CHECK(r.level(LevelKind::LLC).hit_stt_way == 1);
  // The dirty bit lands on the promoted line; no DRAM write happened.
  CHECK(r.ledger.dram().writes == 0);
}

TEST_CASE("energy ledger matches the independent pricer") {
  GenCommon g;
  g.seed = 31337;
  g.payload = PayloadMode::Random;
  Trace t = gen_random(2 * 1024 * 1024, 30000, 5000, g);

  SUBCASE("plain SRAM hierarchy") {
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    auto src = trace_from_vector(t);
    Simulator sim(cat(), h);
    SimOptions opt;
    opt.record_events = true;
    SimReport r = sim.run(*src, opt);
    CHECK(hetcache_test::price_events(cat(), h, sim.events()) == r.ledger);
  }
  SUBCASE("GC hierarchy with asymmetric writes and NRP") {
    HierarchyConfig h = table_hierarchy(TechClass::GC);
    h.l1d.flags.asymmetric_writes = true;
    h.l2.flags.asymmetric_writes = true;
    h.l1d.flags.nrp = true;
    auto src = trace_from_vector(t);
    Simulator sim(cat(), h);
    SimOptions opt;
    opt.record_events = true;
    SimReport r = sim.run(*src, opt);
    CHECK(hetcache_test::price_events(cat(), h, sim.events()) == r.ledger);
  }
  SUBCASE("hybrid LLC at a scaled node") {
    HierarchyConfig h = tiny_hybrid();
    h.llc.node_nm = 14;
    h.llc.flags.asymmetric_writes = true;
    auto src = trace_from_vector(t);
    Simulator sim(cat(), h);
    SimOptions opt;
    opt.record_events = true;
    SimReport r = sim.run(*src, opt);
    CHECK(hetcache_test::price_events(cat(), h, sim.events()) == r.ledger);
  }
}

TEST_CASE("iso-capacity GC and SRAM agree on all counts") {
  GenCommon g;
  g.seed = 2024;
  g.payload = PayloadMode::Random;
  Trace t = gen_random(32 * 1024 * 1024, 30000, 5000, g);
  SimReport gc = run(table_hierarchy(TechClass::GC), t);
  SimReport sram = run(table_hierarchy(TechClass::SRAM), t);
  for (LevelKind k : {LevelKind::L1I, LevelKind::L1D, LevelKind::L2, LevelKind::LLC}) {
    CHECK(gc.level(k).hits == sram.level(k).hits);
    CHECK(gc.level(k).misses == sram.level(k).misses);
    CHECK(gc.level(k).writebacks_out == sram.level(k).writebacks_out);
  }
  CHECK(gc.ledger.dram().reads == sram.ledger.dram().reads);
  CHECK(gc.ledger.dram().writes == sram.ledger.dram().writes);
  // and the GC run burns strictly less dynamic cache energy
  aj_t gc_dyn = 0, sram_dyn = 0;
  for (LevelKind k : {LevelKind::L1I, LevelKind::L1D, LevelKind::L2, LevelKind::LLC}) {
    gc_dyn += gc.ledger.level(k).dynamic_read_aj + gc.ledger.level(k).dynamic_write_aj;
    sram_dyn +=
        sram.ledger.level(k).dynamic_read_aj + sram.ledger.level(k).dynamic_write_aj;
  }
  CHECK(gc_dyn < sram_dyn);
}

TEST_CASE("leakage is charged for configured bits over the whole run") {
  HierarchyConfig h = table_hierarchy(TechClass::SRAM);
  SimReport r = run(h, reads({{0x40, 0}, {0x40, 10000}}));
  const TechParams& sram = cat().params(CacheLevel::L1, TechClass::SRAM);
  aj_t expect = leakage_energy_aj(32ull * 1024 * 8, r.total_time_ps,
                                  sram.leakage_aw_per_bit);
  CHECK(r.ledger.level(LevelKind::L1D).leakage_aj == expect);
  CHECK(r.level(LevelKind::L1D).storage_bits == 32ull * 1024 * 8);
  CHECK(r.level(LevelKind::LLC).storage_bits == 8ull * 1024 * 1024 * 8);
}

TEST_CASE("hierarchy is non-inclusive: an L1 hit needs no L2 state") {
  HierarchyConfig h = table_hierarchy(TechClass::SRAM);
  h.l1d = level(128, 1, TechClass::SRAM);  // 2 sets, direct-mapped
  h.l2 = level(128, 2, TechClass::SRAM);   // 1 set, 2 ways
  // A sits in L1 set 0; B and C both land in L1 set 1 and together evict A
  // from the single L2 set. A must still hit in L1 afterwards.
  SimReport r = run(h, reads({{0x00, 0}, {0x40, 0}, {0xc0, 0}, {0x00, 0}}));
  CHECK(r.level(LevelKind::L1D).hits == 1);
  CHECK(r.level(LevelKind::L1D).misses == 3);
  CHECK(r.level(LevelKind::L2).evictions > 0);  // A was dropped from L2
}

TEST_CASE("multi-core interleaving and the shared LLC") {
  // Two cores touching the same line: core 1's access hits the LLC copy that
  // core 0 brought in.
  Trace t;
  t.header.cores = 2;
  TraceRecord a;
  a.addr = 0x40;
  a.core = 0;
  a.op = TraceOp::Read;
  t.records.push_back(a);
  TraceRecord b = a;
  b.core = 1;
  b.gap = 10000;
  t.records.push_back(b);
  HierarchyConfig h = table_hierarchy(TechClass::SRAM);
  h.cores = 2;
  SimReport r = run(h, std::move(t));
  CHECK(r.ledger.dram().reads == 1);
  CHECK(r.level(LevelKind::LLC).hits == 1);
  CHECK(r.level(LevelKind::L1D).demand_lookups == 2);
}

TEST_CASE("config validation") {
  SUBCASE("STT-RAM at L1 is rejected, naming the field") {
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    h.l1d = level(32 * 1024, 8, TechClass::STTRAM);
    try {
      Simulator sim(cat(), h);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "CONFIG_ERROR");
      CHECK(std::string(e.what()).find("l1d.tech") != std::string::npos);
    }
  }
  SUBCASE("hybrid split outside the LLC is rejected") {
    HierarchyConfig h = table_hierarchy(TechClass::GC);
    h.l2.hybrid = true;
    h.l2.gc_ways = 4;
    CHECK_THROWS_AS(Simulator(cat(), h), Error);
  }
  SUBCASE("NRP needs a refreshable technology") {
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    h.l1d.flags.nrp = true;
    CHECK_THROWS_AS(Simulator(cat(), h), Error);
  }
  SUBCASE("asymmetric writes need decoupled bitlines") {
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    h.l1d.flags.asymmetric_writes = true;
    CHECK_THROWS_AS(Simulator(cat(), h), Error);
  }
  SUBCASE("payload-free trace plus disabled fallback cannot run") {
    HierarchyConfig h = table_hierarchy(TechClass::GC);
    h.l1d.flags.asymmetric_writes = true;
    h.l1d.flags.write_similarity_bp = -1;
    Trace t = reads({{0x40, 0}});
    auto src = trace_from_vector(std::move(t));
    Simulator sim(cat(), h);
    CHECK_THROWS_AS(sim.run(*src), Error);
  }
  SUBCASE("trace with more cores than the hierarchy") {
    Trace t;
    t.header.cores = 4;
    auto src = trace_from_vector(std::move(t));
    HierarchyConfig h = table_hierarchy(TechClass::SRAM);
    Simulator sim(cat(), h);
    CHECK_THROWS_AS(sim.run(*src), Error);
  }
}

TEST_CASE("run_sweep matches individual runs") {
  GenCommon g;
  g.seed = 99;
  Trace t = gen_loop(256 * 1024, 64, 2, 0, g);
  std::vector<HierarchyConfig> cfgs = {table_hierarchy(TechClass::SRAM),
                                       table_hierarchy(TechClass::GC)};
  auto reports = run_sweep(cat(), cfgs, t);
  REQUIRE(reports.size() == 2);
  SimReport a = run(cfgs[0], t);
  SimReport b = run(cfgs[1], t);
  CHECK(report_text(reports[0]) == report_text(a));
  CHECK(report_text(reports[1]) == report_text(b));
}

TEST_CASE("empty trace yields an empty report") {
  Trace t;
  SimReport r = run(table_hierarchy(TechClass::SRAM), std::move(t));
  CHECK(r.records == 0);
  CHECK(r.total_time_ps == 0);
  CHECK(r.ledger.total_aj() == 0);
  CHECK(r.edp_js() == 0.0);
}

TEST_CASE("victim-compare fills price against the evicted line") {
  // One-way, two-set L1D: both sets share way 0's subarray, so the bitline
  // shadow and the victim payload can be made to differ.
  Line512 zeros{};
  Line512 ones;
  for (auto& w : ones.w) w = ~0ull;
  auto build = [&](bool victim_compare) {
    HierarchyConfig h = table_hierarchy(TechClass::GC);
    h.l1d = level(128, 1, TechClass::GC);
    h.l1d.flags.asymmetric_writes = true;
    h.l1d.flags.compare_victim_on_fill = victim_compare;
    Trace t;
    t.header.data_bearing = true;
    TraceRecord w1;  // set 0, payload all-zero
    w1.addr = 0x00;
    w1.op = TraceOp::Write;
    w1.payload = zeros;
    t.records.push_back(w1);
    TraceRecord w2;  // set 1, payload all-ones: shadow becomes all-ones
    w2.addr = 0x40;
    w2.op = TraceOp::Write;
    w2.payload = ones;
    t.records.push_back(w2);
    TraceRecord w3;  // set 0 again, all-zero: evicts w1's line (also all-zero)
    w3.addr = 0x80;
    w3.op = TraceOp::Write;
    w3.payload = zeros;
    t.records.push_back(w3);
    return run(h, std::move(t));
  };
  SimReport shadow_priced = build(false);
  SimReport victim_priced = build(true);
  // Against the shadow (all-ones) the last fill flips 512 bits; against the
  // evicted line (all-zero) it flips none.
  CHECK(shadow_priced.ledger.level(LevelKind::L1D).dissimilar_bits == 1024);
  CHECK(victim_priced.ledger.level(LevelKind::L1D).dissimilar_bits == 512);
}

TEST_CASE("offset refresh anchors also keep lines fresh") {
  HierarchyConfig h = table_hierarchy(TechClass::GC);
  h.l1d.flags.synchronized_subarrays = false;
  h.l2.flags.synchronized_subarrays = false;
  h.llc.flags.synchronized_subarrays = false;
  Trace t;
  for (int i = 0; i < 30; ++i) {
    TraceRecord r;
    r.addr = 0x1000 + (i % 4) * 64;
    r.gap = 150'000;  // ~1.3 ms total, past one retention window
    r.op = i % 5 == 0 ? TraceOp::Write : TraceOp::Read;
    t.records.push_back(r);
  }
  SimReport r = run(h, std::move(t));
  CHECK(r.level(LevelKind::L1D).refresh_events > 0);
  for (LevelKind k : {LevelKind::L1I, LevelKind::L1D, LevelKind::L2, LevelKind::LLC})
    CHECK(r.level(k).freshness_violations == 0);
}
