#pragma once

#include <memory>
#include <string>

#include "hetcache/engine.hpp"
#include "hetcache/trace.hpp"

namespace hetcache {

/// Trace input: either a file path or a synthetic generator spec.
struct TraceSpec {
  std::string path;  // non-empty: read this file, ignore the generator fields
  std::string kind;  // loop | random | stream | hotcold | alternating | writeonly
  std::uint64_t working_set_bytes = 0;
  std::uint64_t stride = 64;
  std::uint32_t iterations = 1;
  std::uint64_t records = 0;
  std::uint64_t hot_bytes = 0;
  std::uint64_t cold_every = 0;
  int write_ratio_bp = 0;
  std::uint64_t gap = 0;
  PayloadMode payload = PayloadMode::None;
  std::uint64_t base_addr = 0;
  std::uint32_t copies = 1;  // replicate across this many cores
};

struct RunConfig {
  HierarchyConfig hierarchy;
  TraceSpec trace;
};

/// Strict schema validation: unknown keys are rejected.
RunConfig parse_run_config(const std::string& text, const std::string& origin);
RunConfig load_run_config(const std::string& path);

/// Builds the described trace (generator seeded from `seed`).
Trace build_trace(const TraceSpec& spec, std::uint64_t seed);

/// Streaming source: file-backed traces stream, generated traces
/// materialize.
std::unique_ptr<TraceSource> open_spec_trace(const TraceSpec& spec, std::uint64_t seed);

/// "32KB" / "8MB" / plain byte counts.
std::uint64_t parse_capacity(const std::string& text);

}  // namespace hetcache
