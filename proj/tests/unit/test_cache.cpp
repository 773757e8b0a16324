#include <doctest.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "../support/oracles.hpp"
#include "hetcache/cache.hpp"

using namespace hetcache;
using hetcache_test::LruOracle;
using hetcache_test::HybridOracle;
using hetcache_test::group_tags;

namespace {

CacheModel make_plain(std::uint32_t ways, CacheModel::NrpConfig nrp = {}) {
  auto geom = CacheGeometry::make(64ull * ways, ways);  // one set
  return CacheModel(geom, ways, /*with_payloads=*/false, nrp);
}

CacheModel make_hybrid(std::uint32_t gc, std::uint32_t stt) {
  auto geom = CacheGeometry::make(64ull * (gc + stt), gc + stt);
  return CacheModel(geom, gc, /*with_payloads=*/false, {});
}

}  // namespace

TEST_CASE("lookup basics") {
  CacheModel m = make_plain(2);
  CHECK_FALSE(m.lookup(0, 7).has_value());
  access(m, 0, AccessOp::Read, 7, nullptr, 0);
  CHECK(m.lookup(0, 7).has_value());
  access(m, 0, AccessOp::Read, 9, nullptr, 0);
  CHECK(m.lookup(0, 7).has_value());  // 2-way set, no conflict
  CHECK(m.lookup(0, 9).has_value());
  CHECK_FALSE(m.lookup(0, 8).has_value());
}

TEST_CASE("plain LRU behavior") {
  SUBCASE("fills A,B then touch A then fill C evicts B") {
    CacheModel m = make_plain(2);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    access(m, 0, AccessOp::Read, 'B', nullptr, 0);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    AccessResult r = access(m, 0, AccessOp::Read, 'C', nullptr, 0);
    CHECK(r.outcome == Outcome::Miss);
    REQUIRE(r.victim.has_value());
    CHECK(r.victim->tag == 'B');
    CHECK_FALSE(r.victim->dirty);
  }
  SUBCASE("write hit dirties without a victim") {
    CacheModel m = make_plain(2);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    AccessResult r = access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    CHECK(r.outcome == Outcome::Hit);
    CHECK_FALSE(r.victim.has_value());
    CHECK(m.line(0, *m.lookup(0, 'A')).dirty);
  }
  SUBCASE("read miss over clean lines emits a clean victim") {
    CacheModel m = make_plain(2);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    access(m, 0, AccessOp::Read, 'B', nullptr, 0);
    AccessResult r = access(m, 0, AccessOp::Read, 'C', nullptr, 0);
    REQUIRE(r.victim.has_value());
    CHECK_FALSE(r.victim->dirty);
  }
}

TEST_CASE("LRU matches the reference stack algorithm exhaustively") {
  // Every access sequence of length 8 from 4 tags on a 2-way set (all
  // shorter sequences are prefixes and are checked step by step).
  constexpr int kLen = 8;
  constexpr std::uint64_t kTags = 4;
  std::uint64_t total = 1;
  for (int i = 0; i < kLen; ++i) total *= kTags;
  for (std::uint64_t code = 0; code < total; ++code) {
    CacheModel m = make_plain(2);
    LruOracle oracle{2, {}};
    std::uint64_t c = code;
    for (int step = 0; step < kLen; ++step) {
      std::uint64_t tag = 100 + c % kTags;
      c /= kTags;
      std::optional<std::uint64_t> want_victim;
      bool want_hit = oracle.access(tag, &want_victim);
      AccessResult got = access(m, 0, AccessOp::Read, tag, nullptr, 0);
      bool got_hit = got.outcome != Outcome::Miss;
      if (want_hit != got_hit) {
        REQUIRE(want_hit == got_hit);
      }
      bool want_evict = want_victim.has_value();
      bool got_evict = got.victim.has_value();
      REQUIRE(want_evict == got_evict);
      if (want_evict) REQUIRE(*want_victim == got.victim->tag);
    }
  }
}

TEST_CASE("hybrid policy examples") {
  SUBCASE("STT hit swaps with the GC LRU line, no eviction") {
    CacheModel m = make_hybrid(2, 4);
    // Fill X via miss (lands in STT), then promote GC lines Y and Z.
    for (std::uint64_t t : {'X', 'Y', 'Z'}) access(m, 0, AccessOp::Read, t, nullptr, 0);
    access(m, 0, AccessOp::Read, 'Y', nullptr, 0);  // Y -> GC
    access(m, 0, AccessOp::Read, 'Z', nullptr, 0);  // Z -> GC; GC now full
    auto gc_before = group_tags(m, 0, true);
    REQUIRE(gc_before.size() == 2);
    std::uint64_t gc_lru = gc_before.back();
    AccessResult r = access(m, 0, AccessOp::Read, 'X', nullptr, 0);
    CHECK(r.outcome == Outcome::HitSttWay);
    CHECK_FALSE(r.victim.has_value());  // pure swap, no memory traffic
    auto gc_after = group_tags(m, 0, true);
    auto stt_after = group_tags(m, 0, false);
    CHECK(std::find(gc_after.begin(), gc_after.end(), 'X') != gc_after.end());
    CHECK(std::find(stt_after.begin(), stt_after.end(), gc_lru) != stt_after.end());
    CHECK(stt_after.back() == gc_lru);  // demoted to the STT LRU position
  }
  SUBCASE("cold miss fills an STT way, never a GC way") {
    CacheModel m = make_hybrid(2, 4);
    AccessResult r = access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    CHECK(r.outcome == Outcome::Miss);
    CHECK_FALSE(m.is_gc_way(r.way));
    CHECK(group_tags(m, 0, true).empty());
  }
  SUBCASE("GC hit leaves way membership unchanged") {
    CacheModel m = make_hybrid(2, 4);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);  // promoted into GC
    auto way = *m.lookup(0, 'A');
    CHECK(m.is_gc_way(way));
    AccessResult r = access(m, 0, AccessOp::Read, 'A', nullptr, 0);
    CHECK(r.outcome == Outcome::HitGcWay);
    CHECK(*m.lookup(0, 'A') == way);
  }
}

TEST_CASE("hybrid policy matches the hand-executable oracle exhaustively") {
  // All sequences of length 6 from 7 tags on a 2 GC + 4 STT way set.
  constexpr int kLen = 6;
  constexpr std::uint64_t kTags = 7;
  std::uint64_t total = 1;
  for (int i = 0; i < kLen; ++i) total *= kTags;
  for (bool promote_mru : {false, true}) {
    for (std::uint64_t code = 0; code < total; ++code) {
      CacheModel m = make_hybrid(2, 4);
      HybridOracle oracle{2, 4, promote_mru, {}, {}};
      std::uint64_t c = code;
      for (int step = 0; step < kLen; ++step) {
        std::uint64_t tag = 200 + c % kTags;
        c /= kTags;
        auto want = oracle.access(tag);
        AccessResult got = access(m, 0, AccessOp::Read, tag, nullptr, 0, promote_mru);
        REQUIRE(want.outcome == got.outcome);
        REQUIRE(want.victim.has_value() == got.victim.has_value());
        if (want.victim) REQUIRE(*want.victim == got.victim->tag);
        // Group contents and recency order must agree exactly.
        REQUIRE(oracle.gc == group_tags(m, 0, true));
        REQUIRE(oracle.stt == group_tags(m, 0, false));
        // Post-STT-hit containment: the hit tag now resides in a GC way.
        if (want.outcome == Outcome::HitSttWay) {
          auto w = m.lookup(0, tag);
          REQUIRE(w.has_value());
          REQUIRE(m.is_gc_way(*w));
        }
      }
    }
  }
}

TEST_CASE("NRP counters") {
  // GC retention 1.12 ms, 5-bit counter: epoch 35 us, invalidation at tick 31.
  CacheModel::NrpConfig nrp;
  nrp.enabled = true;
  nrp.counter_bits = 5;
  nrp.epoch_ps = 35'000'000;

  SUBCASE("an untouched line dies at exactly 31 epochs") {
    CacheModel m = make_plain(2, nrp);
    access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    std::vector<CacheModel::Invalidation> invs;
    m.advance_nrp(31 * 35'000'000LL - 1, &invs);
    CHECK(invs.empty());
    CHECK(m.lookup(0, 'A').has_value());
    m.advance_nrp(31 * 35'000'000LL, &invs);
    REQUIRE(invs.size() == 1);
    CHECK(invs[0].tag == 'A');
    CHECK(invs[0].dirty);  // the fill was a demand write
    CHECK(invs[0].at_ps == 31 * 35'000'000LL);
    CHECK_FALSE(m.lookup(0, 'A').has_value());
    const CacheLine& l = m.line(0, invs[0].way);
    CHECK_FALSE(l.valid);
    CHECK_FALSE(l.dirty);
    CHECK(l.nrp_counter == 0);
  }

  SUBCASE("a line rewritten every 30 us never dies") {
    CacheModel m = make_plain(2, nrp);
    access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    std::vector<CacheModel::Invalidation> invs;
    for (ps_t t = 30'000'000; t < 10'000'000'000LL; t += 30'000'000) {
      m.advance_nrp(t, &invs);
      auto way = m.lookup(0, 'A');
      REQUIRE(way.has_value());
      m.write_line(0, *way, nullptr, t);
    }
    CHECK(invs.empty());
  }

  SUBCASE("clean lines are invalidated without a writeback payload") {
    CacheModel m = make_plain(2, nrp);
    access(m, 0, AccessOp::Read, 'A', nullptr, 0);  // clean fill
    std::vector<CacheModel::Invalidation> invs;
    m.advance_nrp(31 * 35'000'000LL, &invs);
    REQUIRE(invs.size() == 1);
    CHECK_FALSE(invs[0].dirty);
  }

  SUBCASE("reads do not reset the counter by default") {
    CacheModel m = make_plain(2, nrp);
    access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    std::vector<CacheModel::Invalidation> invs;
    for (int k = 1; k <= 30; ++k) {
      m.advance_nrp(static_cast<ps_t>(k) * 35'000'000, &invs);
      access(m, 0, AccessOp::Read, 'A', nullptr, static_cast<ps_t>(k) * 35'000'000);
    }
    m.advance_nrp(31 * 35'000'000LL, &invs);
    CHECK(invs.size() == 1);  // reads did not help
  }

  SUBCASE("the read-resets variant keeps read lines alive") {
    CacheModel::NrpConfig rr = nrp;
    rr.read_resets = true;
    CacheModel m = make_plain(2, rr);
    access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    std::vector<CacheModel::Invalidation> invs;
    for (int k = 1; k <= 64; ++k) {
      m.advance_nrp(static_cast<ps_t>(k) * 35'000'000, &invs);
      if (auto w = m.lookup(0, 'A'))
        m.note_read(0, *w, static_cast<ps_t>(k) * 35'000'000);
    }
    CHECK(invs.empty());
    CHECK(m.lookup(0, 'A').has_value());
  }

  SUBCASE("narrow counters saturate earlier") {
    CacheModel::NrpConfig n3;
    n3.enabled = true;
    n3.counter_bits = 3;                 // saturates at 7
    n3.epoch_ps = 1'120'000'000LL / 8;  // 140 us epochs
    CacheModel m = make_plain(2, n3);
    access(m, 0, AccessOp::Write, 'A', nullptr, 0);
    std::vector<CacheModel::Invalidation> invs;
    m.advance_nrp(7 * 140'000'000LL - 1, &invs);
    CHECK(invs.empty());
    m.advance_nrp(7 * 140'000'000LL, &invs);
    CHECK(invs.size() == 1);
  }
}

TEST_CASE("invalidated ways are refilled first") {
  CacheModel::NrpConfig nrp;
  nrp.enabled = true;
  nrp.counter_bits = 5;
  nrp.epoch_ps = 35'000'000;
  CacheModel m = make_plain(4, nrp);
  for (std::uint64_t t : {1, 2, 3, 4}) access(m, 0, AccessOp::Read, t, nullptr, 0);
  std::vector<CacheModel::Invalidation> invs;
  m.advance_nrp(31 * 35'000'000LL, &invs);
  CHECK(invs.size() == 4);
  // refills must consume the invalid ways without evicting anything
  for (std::uint64_t t : {5, 6, 7, 8}) {
    AccessResult r = access(m, 0, AccessOp::Read, t, nullptr, 31 * 35'000'000LL);
    CHECK(r.outcome == Outcome::Miss);
    CHECK_FALSE(r.victim.has_value());
  }
}
