#include "hetcache/cache.hpp"

#include <algorithm>

namespace hetcache {

CacheModel::CacheModel(const CacheGeometry& geom, std::uint32_t gc_ways,
                       bool with_payloads, const NrpConfig& nrp)
    : geom_(geom), gc_ways_(gc_ways), with_payloads_(with_payloads), nrp_(nrp) {
  if (gc_ways_ > geom_.associativity)
    throw Error("CONFIG_ERROR", "gc_ways exceeds associativity");
  std::size_t n = static_cast<std::size_t>(geom_.sets) * geom_.associativity;
  lines_.resize(n);
  if (with_payloads_) payloads_.resize(n);
  stack_.resize(n);
  for (std::uint32_t s = 0; s < geom_.sets; ++s)
    for (std::uint32_t w = 0; w < geom_.associativity; ++w) stack(s)[w] = w;
  if (nrp_.enabled && nrp_.epoch_ps <= 0)
    throw Error("CONFIG_ERROR", "NRP requires a positive epoch");
}

std::optional<std::uint32_t> CacheModel::lookup(std::uint32_t set,
                                                std::uint64_t tag) const {
  for (std::uint32_t w = 0; w < geom_.associativity; ++w) {
    const CacheLine& l = lines_[index(set, w)];
    if (l.valid && l.tag == tag) return w;
  }
  return std::nullopt;
}

void CacheModel::move_to_front(std::uint32_t set, std::uint32_t way) {
  std::uint32_t* st = stack(set);
  std::uint32_t* pos = std::find(st, st + geom_.associativity, way);
  std::rotate(st, pos, pos + 1);
}

void CacheModel::move_to_back(std::uint32_t set, std::uint32_t way) {
  std::uint32_t* st = stack(set);
  std::uint32_t* pos = std::find(st, st + geom_.associativity, way);
  std::rotate(pos, pos + 1, st + geom_.associativity);
}

std::uint32_t CacheModel::pick_victim(std::uint32_t set, std::uint32_t way_begin,
                                      std::uint32_t way_end) const {
  const std::uint32_t* st = stack(set);
  std::uint32_t lru = geom_.associativity;
  for (std::uint32_t i = geom_.associativity; i-- > 0;) {
    std::uint32_t w = st[i];
    if (w < way_begin || w >= way_end) continue;
    if (lru == geom_.associativity) lru = w;  // group LRU
    if (!lines_[index(set, w)].valid) return w;  // last invalid in recency order
  }
  assert(lru != geom_.associativity);
  return lru;
}

void CacheModel::clear_line(std::uint32_t set, std::uint32_t way) {
  CacheLine& l = lines_[index(set, way)];
  l = CacheLine{};
  if (with_payloads_) payloads_[index(set, way)] = Line512{};
}

std::optional<CacheModel::Promotion> CacheModel::touch_hit(std::uint32_t set,
                                                           std::uint32_t way,
                                                           bool promote_mru,
                                                           ps_t now_ps) {
  if (!hybrid() || is_gc_way(way)) {
    move_to_front(set, way);
    return std::nullopt;
  }
  // STT-RAM way hit: swap the line into the GC ways. The promoted line lands
  // at the GC LRU position (the conventional MRU insertion is opt-in).
  std::uint32_t gc_way = pick_victim(set, 0, gc_ways_);
  CacheLine& promoted = lines_[index(set, way)];
  CacheLine& displaced = lines_[index(set, gc_way)];
  Promotion promo{gc_way, way, displaced.valid};
  std::swap(promoted, displaced);
  if (with_payloads_)
    std::swap(payloads_[index(set, way)], payloads_[index(set, gc_way)]);
  // Entering a GC way physically rewrites the cells.
  lines_[index(set, gc_way)].nrp_counter = 0;
  lines_[index(set, gc_way)].fresh_ps = now_ps;
  lines_[index(set, way)].nrp_counter = 0;
  if (promote_mru)
    move_to_front(set, gc_way);
  else
    move_to_back(set, gc_way);
  move_to_back(set, way);  // displaced line (or freed slot) to the STT LRU end
  return promo;
}

void CacheModel::write_line(std::uint32_t set, std::uint32_t way,
                            const Line512* payload, ps_t now_ps) {
  CacheLine& l = lines_[index(set, way)];
  assert(l.valid);
  l.dirty = true;
  l.nrp_counter = 0;
  l.fresh_ps = now_ps;
  if (with_payloads_ && payload) payloads_[index(set, way)] = *payload;
}

void CacheModel::note_read(std::uint32_t set, std::uint32_t way, ps_t now_ps) {
  if (!nrp_.enabled || !nrp_.read_resets) return;
  if (hybrid() && !is_gc_way(way)) return;
  CacheLine& l = lines_[index(set, way)];
  l.nrp_counter = 0;
  l.fresh_ps = now_ps;  // this variant models reads as restoring the window
}

void CacheModel::stamp_refresh(std::uint32_t set, std::uint32_t way, ps_t now_ps) {
  CacheLine& l = lines_[index(set, way)];
  if (l.valid) l.fresh_ps = now_ps;
}

std::uint32_t CacheModel::fill(std::uint32_t set, std::uint64_t tag,
                               const Line512* payload, bool dirty, ps_t now_ps,
                               std::optional<Evicted>* evicted) {
  std::uint32_t begin = hybrid() ? gc_ways_ : 0;
  std::uint32_t way = pick_victim(set, begin, geom_.associativity);
  CacheLine& l = lines_[index(set, way)];
  if (l.valid && evicted) {
    Evicted ev;
    ev.tag = l.tag;
    ev.dirty = l.dirty;
    if (with_payloads_) ev.payload = payloads_[index(set, way)];
    *evicted = ev;
  }
  l.tag = tag;
  l.valid = true;
  l.dirty = dirty;
  l.nrp_counter = 0;
  l.fresh_ps = now_ps;
  if (with_payloads_) payloads_[index(set, way)] = payload ? *payload : Line512{};
  if (hybrid())
    move_to_back(set, way);  // new lines enter at the STT LRU position
  else
    move_to_front(set, way);
  return way;
}

void CacheModel::apply_nrp_tick(ps_t tick_ps, std::vector<Invalidation>* out) {
  std::uint8_t max = static_cast<std::uint8_t>((1u << nrp_.counter_bits) - 1);
  std::uint32_t limit = hybrid() ? gc_ways_ : geom_.associativity;
  for (std::uint32_t s = 0; s < geom_.sets; ++s) {
    for (std::uint32_t w = 0; w < limit; ++w) {
      CacheLine& l = lines_[index(s, w)];
      if (!l.valid) continue;
      if (l.nrp_counter < max) ++l.nrp_counter;
      if (l.nrp_counter == max) {
        if (out) {
          Invalidation inv;
          inv.set = s;
          inv.way = w;
          inv.tag = l.tag;
          inv.dirty = l.dirty;
          if (with_payloads_) inv.payload = payloads_[index(s, w)];
          inv.at_ps = tick_ps;
          out->push_back(inv);
        }
        clear_line(s, w);
        move_to_back(s, w);
      }
    }
  }
}

void CacheModel::advance_nrp(ps_t now_ps, std::vector<Invalidation>* out) {
  if (!nrp_.enabled) return;
  while (static_cast<ps_t>(nrp_next_tick_ * nrp_.epoch_ps) <= now_ps) {
    apply_nrp_tick(static_cast<ps_t>(nrp_next_tick_ * nrp_.epoch_ps), out);
    ++nrp_next_tick_;
    ++nrp_ticks_applied_;
  }
}

std::vector<std::uint32_t> CacheModel::recency_order(std::uint32_t set) const {
  return {stack(set), stack(set) + geom_.associativity};
}

AccessResult access(CacheModel& cache, std::uint32_t set, AccessOp op,
                    std::uint64_t tag, const Line512* payload, ps_t now_ps,
                    bool promote_mru) {
  AccessResult r;
  if (auto way = cache.lookup(set, tag)) {
    bool stt = cache.hybrid() && !cache.is_gc_way(*way);
    r.outcome = cache.hybrid() ? (stt ? Outcome::HitSttWay : Outcome::HitGcWay)
                               : Outcome::Hit;
    r.promotion = cache.touch_hit(set, *way, promote_mru, now_ps);
    r.way = r.promotion ? r.promotion->gc_way : *way;
    if (op == AccessOp::Write)
      cache.write_line(set, r.way, payload, now_ps);
    else
      cache.note_read(set, r.way, now_ps);
    return r;
  }
  r.outcome = Outcome::Miss;
  std::optional<CacheModel::Evicted> ev;
  r.way = cache.fill(set, tag, payload, op == AccessOp::Write, now_ps, &ev);
  r.victim = ev;
  return r;
}

}  // namespace hetcache
