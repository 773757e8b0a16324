#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hetcache/units.hpp"

namespace hetcache {

enum class TraceOp : std::uint8_t { Read, Write, Ifetch };

struct TraceHeader {
  int version = 1;
  std::uint32_t cores = 1;
  bool data_bearing = false;
  std::string description;
};

/// One memory reference. `gap` is the issue delay in cycles after the
/// previous record of the same core completes (blocking core model).
/// In data-bearing traces every WRITE carries a 64-byte payload and
/// READ/IFETCH records carry none.
struct TraceRecord {
  std::uint64_t addr = 0;
  std::uint64_t gap = 0;
  std::uint32_t core = 0;
  TraceOp op = TraceOp::Read;
  std::optional<Line512> payload;

  bool operator==(const TraceRecord&) const = default;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
};

// -- text format: `HYTRACE v1 cores=<n> data=<0|1>` then one record per line
//    `<core> <gap> <R|W|I> <addr> [<128 hex payload>]`, '#' comments.
// -- binary twin: "HYTB" magic, same semantics, for large traces.

void write_text(const Trace& trace, std::ostream& os);
void write_binary(const Trace& trace, std::ostream& os);
/// Writes by extension: ".bin" binary, anything else text.
void write_file(const Trace& trace, const std::string& path);

/// Streaming trace source (constant memory for file-backed traces).
class TraceSource {
 public:
  virtual ~TraceSource() = default;
  virtual const TraceHeader& header() const = 0;
  virtual std::optional<TraceRecord> next() = 0;
};

/// Opens a trace file, sniffing text vs binary. Throws Error(BAD_HEADER) /
/// Error(MALFORMED_LINE line:<n>) on invalid input.
std::unique_ptr<TraceSource> open_trace(const std::string& path);
std::unique_ptr<TraceSource> trace_from_stream(std::unique_ptr<std::istream> in,
                                               const std::string& origin);
std::unique_ptr<TraceSource> trace_from_vector(Trace trace);
/// Non-owning source over a trace that outlives it (avoids copying).
std::unique_ptr<TraceSource> trace_from_ref(const Trace& trace);

/// Fully parses a stream (tests / small traces).
Trace parse_text(std::istream& in, const std::string& origin = "<stream>");

// -- synthetic generators; all are deterministic for a fixed seed --

enum class PayloadMode { None, Random, Zero };

struct GenCommon {
  std::uint64_t gap = 0;
  PayloadMode payload = PayloadMode::None;
  std::uint64_t seed = 1;
  std::uint64_t base_addr = 0;
};

/// Cyclic sweep over a working set: iterations * (working_set/stride) records.
Trace gen_loop(std::uint64_t working_set_bytes, std::uint64_t stride,
               std::uint32_t iterations, int write_ratio_bp, const GenCommon& common);

/// Uniform random line addresses within a working set.
Trace gen_random(std::uint64_t working_set_bytes, std::uint64_t records,
                 int write_ratio_bp, const GenCommon& common);

/// Monotone streaming (no reuse).
Trace gen_stream(std::uint64_t records, std::uint64_t stride, int write_ratio_bp,
                 const GenCommon& common);

/// Tight loop over a hot set with a never-reused cold line every
/// `cold_every` records; exercises a quiet LLC under a busy L1.
Trace gen_hotcold(std::uint64_t hot_bytes, std::uint64_t cold_every,
                  std::uint64_t records, const GenCommon& common);

/// Strict write/read alternation to a single line (pairs W,R per round).
Trace gen_alternating(std::uint64_t rounds, const GenCommon& common);

/// Writes-only hammering of a single line.
Trace gen_write_only(std::uint64_t records, const GenCommon& common);

/// Merges per-core traces into one stream ordered by cumulative per-core
/// issue time (sum of gaps), ties broken by core id ascending. Stream i
/// becomes core i.
Trace interleave(const std::vector<Trace>& per_core);

/// `copies` cores each running `single` in a disjoint address range.
Trace replicate(const Trace& single, std::uint32_t copies);

}  // namespace hetcache
