#include "hetcache/ledger.hpp"

namespace hetcache {

std::string to_string(LevelKind k) {
  switch (k) {
    case LevelKind::L1I: return "L1I";
    case LevelKind::L1D: return "L1D";
    case LevelKind::L2: return "L2";
    case LevelKind::LLC: return "LLC";
  }
  return "?";
}

aj_t EnergyLedger::charge_read(LevelKind k, const TechParams& p) {
  aj_t e = static_cast<aj_t>(LINE_BITS) * p.read_energy_aj_per_bit;
  LevelLedger& l = level(k);
  ++l.reads;
  l.dynamic_read_aj += e;
  return e;
}

aj_t EnergyLedger::add_write(LevelKind k, WriteOrigin origin, aj_t energy,
                             int dissimilar, bool data_driven) {
  LevelLedger& l = level(k);
  if (origin == WriteOrigin::Fill)
    ++l.fills;
  else
    ++l.writes;
  l.dynamic_write_aj += energy;
  if (data_driven) {
    l.dissimilar_bits += dissimilar;
    l.total_write_bits += LINE_BITS;
  }
  return energy;
}

aj_t EnergyLedger::charge_write_full(LevelKind k, const TechParams& p,
                                     WriteOrigin origin) {
  aj_t e = static_cast<aj_t>(LINE_BITS) * p.write_energy_aj_per_bit;
  return add_write(k, origin, e, 0, false);
}

aj_t EnergyLedger::charge_write_dissimilar(LevelKind k, const TechParams& p,
                                           WriteOrigin origin, int dissimilar) {
  aj_t e = static_cast<aj_t>(dissimilar) * p.write_energy_aj_per_bit +
           static_cast<aj_t>(LINE_BITS - dissimilar) * p.same_bit_write_energy_aj_per_bit;
  return add_write(k, origin, e, dissimilar, true);
}

aj_t EnergyLedger::charge_write_asymmetric(LevelKind k, const TechParams& p,
                                           WriteOrigin origin,
                                           const Line512& new_line,
                                           Line512& shadow) {
  int d = new_line.dissimilar_bits(shadow);
  shadow = new_line;
  return charge_write_dissimilar(k, p, origin, d);
}

aj_t EnergyLedger::charge_write_asymmetric_vs(LevelKind k, const TechParams& p,
                                              WriteOrigin origin,
                                              const Line512& new_line,
                                              const Line512& old_line,
                                              Line512& shadow) {
  int d = new_line.dissimilar_bits(old_line);
  shadow = new_line;
  return charge_write_dissimilar(k, p, origin, d);
}

aj_t model_write_energy_aj(const TechParams& p, int similarity_bp) {
  if (similarity_bp < 0 || similarity_bp > 10000)
    throw Error("CONFIG_ERROR", "similarity must be within [0, 10000] bp");
  __int128 per_bit = static_cast<__int128>(similarity_bp) *
                         p.same_bit_write_energy_aj_per_bit +
                     static_cast<__int128>(10000 - similarity_bp) *
                         p.write_energy_aj_per_bit;
  return static_cast<aj_t>(static_cast<__int128>(LINE_BITS) * per_bit / 10000);
}

aj_t EnergyLedger::charge_write_model(LevelKind k, const TechParams& p,
                                      WriteOrigin origin, int similarity_bp) {
  return add_write(k, origin, model_write_energy_aj(p, similarity_bp), 0, false);
}

aj_t EnergyLedger::charge_refresh_rows(LevelKind k, const TechParams& p,
                                       std::uint64_t rows) {
  if (!p.refresh) throw Error("UNSUPPORTED_PAIR", "technology has no refresh");
  aj_t e = static_cast<aj_t>(rows) * LINE_BITS * p.refresh->energy_aj_per_bit;
  level(k).refresh_aj += e;
  return e;
}

aj_t leakage_energy_aj(std::uint64_t bits, ps_t duration_ps, aw_t leakage_aw_per_bit) {
  // aJ = aW * s = aW * ps / 1e12; the product needs 128-bit room.
  __int128 n = static_cast<__int128>(bits) * leakage_aw_per_bit * duration_ps;
  return static_cast<aj_t>(n / 1'000'000'000'000LL);
}

aj_t EnergyLedger::charge_leakage(LevelKind k, std::uint64_t bits, ps_t duration_ps,
                                  aw_t leakage_aw_per_bit) {
  aj_t e = leakage_energy_aj(bits, duration_ps, leakage_aw_per_bit);
  level(k).leakage_aj += e;
  return e;
}

aj_t EnergyLedger::charge_dram(bool is_write, const DramParams& p) {
  aj_t e = is_write ? p.write_energy_aj_per_line : p.read_energy_aj_per_line;
  if (is_write)
    ++dram_.writes;
  else
    ++dram_.reads;
  dram_.energy_aj += e;
  return e;
}

double edp_joule_seconds(aj_t total_aj, ps_t total_time_ps) {
  return static_cast<double>(total_aj) * 1e-18 * static_cast<double>(total_time_ps) *
         1e-12;
}

}  // namespace hetcache
