#include "hetcache/trace.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace hetcache {

namespace {

constexpr char kBinaryMagic[4] = {'H', 'Y', 'T', 'B'};
constexpr std::uint64_t kCoreAddressStride = 1ull << 40;  // per-core address space

char op_char(TraceOp op) {
  switch (op) {
    case TraceOp::Read: return 'R';
    case TraceOp::Write: return 'W';
    case TraceOp::Ifetch: return 'I';
  }
  return '?';
}

TraceOp op_from_char(char c, const std::string& where) {
  switch (c) {
    case 'R': return TraceOp::Read;
    case 'W': return TraceOp::Write;
    case 'I': return TraceOp::Ifetch;
  }
  throw Error("MALFORMED_LINE", where + ": bad op '" + std::string(1, c) + "'");
}

void check_payload_rule(const TraceHeader& h, const TraceRecord& r,
                        const std::string& where) {
  bool want = h.data_bearing && r.op == TraceOp::Write;
  if (want && !r.payload)
    throw Error("MALFORMED_LINE", where + ": data-bearing trace write lacks payload");
  if (!want && r.payload)
    throw Error("MALFORMED_LINE", where + ": unexpected payload");
}

}  // namespace

void write_text(const Trace& trace, std::ostream& os) {
  os << "HYTRACE v" << trace.header.version << " cores=" << trace.header.cores
     << " data=" << (trace.header.data_bearing ? 1 : 0) << "\n";
  if (!trace.header.description.empty())
    os << "#! " << trace.header.description << "\n";
  char buf[32];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "0x%llx",
                  static_cast<unsigned long long>(r.addr));
    os << r.core << ' ' << r.gap << ' ' << op_char(r.op) << ' ' << buf;
    if (r.payload) os << ' ' << print_line_hex(*r.payload);
    os << "\n";
  }
}

void write_binary(const Trace& trace, std::ostream& os) {
  os.write(kBinaryMagic, 4);
  std::uint8_t version = static_cast<std::uint8_t>(trace.header.version);
  std::uint8_t data = trace.header.data_bearing ? 1 : 0;
  std::uint16_t cores = static_cast<std::uint16_t>(trace.header.cores);
  std::uint64_t count = trace.records.size();
  os.write(reinterpret_cast<const char*>(&version), 1);
  os.write(reinterpret_cast<const char*>(&data), 1);
  os.write(reinterpret_cast<const char*>(&cores), 2);
  os.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& r : trace.records) {
    std::uint16_t core = static_cast<std::uint16_t>(r.core);
    std::uint8_t op = static_cast<std::uint8_t>(r.op);
    std::uint8_t has_payload = r.payload ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&r.addr), 8);
    os.write(reinterpret_cast<const char*>(&r.gap), 8);
    os.write(reinterpret_cast<const char*>(&core), 2);
    os.write(reinterpret_cast<const char*>(&op), 1);
    os.write(reinterpret_cast<const char*>(&has_payload), 1);
    if (r.payload)
      os.write(reinterpret_cast<const char*>(r.payload->w.data()), LINE_BYTES);
  }
}

void write_file(const Trace& trace, const std::string& path) {
  bool binary = path.size() > 4 && path.substr(path.size() - 4) == ".bin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("FILE_ERROR", "cannot write '" + path + "'");
  if (binary)
    write_binary(trace, out);
  else
    write_text(trace, out);
}

namespace {

class TextSource : public TraceSource {
 public:
  TextSource(std::unique_ptr<std::istream> in, std::string origin)
      : in_(std::move(in)), origin_(std::move(origin)) {
    std::string line;
    if (!std::getline(*in_, line))
      throw Error("BAD_HEADER", origin_ + ": empty trace");
    ++line_no_;
    parse_header(line);
    // optional description line
    if (in_->peek() == '#') {
      std::streampos pos = in_->tellg();
      std::string c;
      std::getline(*in_, c);
      ++line_no_;
      if (c.rfind("#! ", 0) == 0) {
        header_.description = c.substr(3);
      } else if (!in_->seekg(pos)) {
        throw Error("FILE_ERROR", origin_ + ": stream not seekable");
      } else {
        --line_no_;
      }
    }
  }

  const TraceHeader& header() const override { return header_; }

  std::optional<TraceRecord> next() override {
    std::string line;
    while (std::getline(*in_, line)) {
      ++line_no_;
      std::size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      if (line[b] == '#') continue;
      return parse_record(line);
    }
    return std::nullopt;
  }

 private:
  void parse_header(const std::string& line) {
    std::istringstream ss(line);
    std::string magic, ver, cores, data;
    ss >> magic >> ver >> cores >> data;
    if (magic != "HYTRACE" || ver != "v1" || cores.rfind("cores=", 0) != 0 ||
        data.rfind("data=", 0) != 0)
      throw Error("BAD_HEADER", origin_ + ": expected 'HYTRACE v1 cores=<n> data=<0|1>'");
    header_.version = 1;
    try {
      header_.cores = static_cast<std::uint32_t>(std::stoul(cores.substr(6)));
    } catch (...) {
      throw Error("BAD_HEADER", origin_ + ": bad core count");
    }
    if (header_.cores < 1) throw Error("BAD_HEADER", origin_ + ": cores must be >= 1");
    if (data == "data=0")
      header_.data_bearing = false;
    else if (data == "data=1")
      header_.data_bearing = true;
    else
      throw Error("BAD_HEADER", origin_ + ": data must be 0 or 1");
  }

  TraceRecord parse_record(const std::string& line) {
    std::string where = origin_ + ":" + std::to_string(line_no_);
    std::istringstream ss(line);
    std::string core, gap, op, addr, payload, extra;
    ss >> core >> gap >> op >> addr;
    if (addr.empty())
      throw Error("MALFORMED_LINE", where + ": expected '<core> <gap> <op> <addr>'");
    TraceRecord r;
    try {
      r.core = static_cast<std::uint32_t>(std::stoul(core));
      r.gap = std::stoull(gap);
      r.addr = std::stoull(addr, nullptr, 0);
    } catch (...) {
      throw Error("MALFORMED_LINE", where + ": bad numeric field");
    }
    if (op.size() != 1) throw Error("MALFORMED_LINE", where + ": bad op");
    r.op = op_from_char(op[0], where);
    if (r.core >= header_.cores)
      throw Error("MALFORMED_LINE", where + ": core id outside header range");
    if (ss >> payload) r.payload = parse_line_hex(payload);
    if (ss >> extra) throw Error("MALFORMED_LINE", where + ": trailing fields");
    check_payload_rule(header_, r, where);
    return r;
  }

  std::unique_ptr<std::istream> in_;
  std::string origin_;
  TraceHeader header_;
  std::uint64_t line_no_ = 0;
};

class BinarySource : public TraceSource {
 public:
  BinarySource(std::unique_ptr<std::istream> in, std::string origin)
      : in_(std::move(in)), origin_(std::move(origin)) {
    char magic[4];
    std::uint8_t version = 0, data = 0;
    std::uint16_t cores = 0;
    in_->read(magic, 4);
    in_->read(reinterpret_cast<char*>(&version), 1);
    in_->read(reinterpret_cast<char*>(&data), 1);
    in_->read(reinterpret_cast<char*>(&cores), 2);
    in_->read(reinterpret_cast<char*>(&remaining_), 8);
    if (!*in_ || std::memcmp(magic, kBinaryMagic, 4) != 0 || version != 1)
      throw Error("BAD_HEADER", origin_ + ": bad binary trace header");
    header_.version = version;
    header_.cores = cores;
    header_.data_bearing = data != 0;
    if (header_.cores < 1) throw Error("BAD_HEADER", origin_ + ": cores must be >= 1");
  }

  const TraceHeader& header() const override { return header_; }

  std::optional<TraceRecord> next() override {
    if (remaining_ == 0) return std::nullopt;
    --remaining_;
    TraceRecord r;
    std::uint16_t core = 0;
    std::uint8_t op = 0, has_payload = 0;
    in_->read(reinterpret_cast<char*>(&r.addr), 8);
    in_->read(reinterpret_cast<char*>(&r.gap), 8);
    in_->read(reinterpret_cast<char*>(&core), 2);
    in_->read(reinterpret_cast<char*>(&op), 1);
    in_->read(reinterpret_cast<char*>(&has_payload), 1);
    if (has_payload) {
      Line512 p;
      in_->read(reinterpret_cast<char*>(p.w.data()), LINE_BYTES);
      r.payload = p;
    }
    if (!*in_) throw Error("MALFORMED_LINE", origin_ + ": truncated binary record");
    if (op > 2) throw Error("MALFORMED_LINE", origin_ + ": bad binary op");
    r.core = core;
    r.op = static_cast<TraceOp>(op);
    if (r.core >= header_.cores)
      throw Error("MALFORMED_LINE", origin_ + ": core id outside header range");
    check_payload_rule(header_, r, origin_);
    return r;
  }

 private:
  std::unique_ptr<std::istream> in_;
  std::string origin_;
  TraceHeader header_;
  std::uint64_t remaining_ = 0;
};

class RefSource : public TraceSource {
 public:
  explicit RefSource(const Trace& t) : trace_(t) {}
  const TraceHeader& header() const override { return trace_.header; }
  std::optional<TraceRecord> next() override {
    if (pos_ >= trace_.records.size()) return std::nullopt;
    return trace_.records[pos_++];
  }

 private:
  const Trace& trace_;
  std::size_t pos_ = 0;
};

class VectorSource : public TraceSource {
 public:
  explicit VectorSource(Trace trace) : trace_(std::move(trace)) {}
  const TraceHeader& header() const override { return trace_.header; }
  std::optional<TraceRecord> next() override {
    if (pos_ >= trace_.records.size()) return std::nullopt;
    return trace_.records[pos_++];
  }

 private:
  Trace trace_;
  std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<TraceSource> trace_from_stream(std::unique_ptr<std::istream> in,
                                               const std::string& origin) {
  // Both formats start with 'H'; sniff the first four bytes, then rewind.
  char head[4] = {};
  in->read(head, 4);
  bool is_binary = in->gcount() == 4 && std::memcmp(head, kBinaryMagic, 4) == 0;
  in->clear();
  in->seekg(0);
  if (is_binary) return std::make_unique<BinarySource>(std::move(in), origin);
  return std::make_unique<TextSource>(std::move(in), origin);
}

std::unique_ptr<TraceSource> open_trace(const std::string& path) {
  auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*f) throw Error("FILE_ERROR", "cannot open trace '" + path + "'");
  return trace_from_stream(std::move(f), path);
}

std::unique_ptr<TraceSource> trace_from_vector(Trace trace) {
  return std::make_unique<VectorSource>(std::move(trace));
}

std::unique_ptr<TraceSource> trace_from_ref(const Trace& trace) {
  return std::make_unique<RefSource>(trace);
}

Trace parse_text(std::istream& in, const std::string& origin) {
  std::stringstream copy;
  copy << in.rdbuf();
  auto src = trace_from_stream(std::make_unique<std::stringstream>(copy.str()), origin);
  Trace t;
  t.header = src->header();
  while (auto r = src->next()) t.records.push_back(*r);
  return t;
}

// ---- generators ----

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  bool chance_bp(int bp) { return static_cast<int>(g() % 10000) < bp; }
  std::uint64_t below(std::uint64_t n) { return g() % n; }
  Line512 line() {
    Line512 l;
    for (auto& w : l.w) w = g();
    return l;
  }
};

std::optional<Line512> make_payload(PayloadMode mode, TraceOp op, Rng& rng) {
  if (mode == PayloadMode::None || op != TraceOp::Write) return std::nullopt;
  if (mode == PayloadMode::Zero) return Line512{};
  return rng.line();
}

TraceHeader gen_header(PayloadMode mode) {
  TraceHeader h;
  h.cores = 1;
  h.data_bearing = mode != PayloadMode::None;
  return h;
}

}  // namespace

Trace gen_loop(std::uint64_t working_set_bytes, std::uint64_t stride,
               std::uint32_t iterations, int write_ratio_bp, const GenCommon& c) {
  if (stride < LINE_BYTES) throw Error("CONFIG_ERROR", "stride must be >= 64");
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  std::uint64_t lines = working_set_bytes / stride;
  t.records.reserve(lines * iterations);
  for (std::uint32_t it = 0; it < iterations; ++it) {
    for (std::uint64_t i = 0; i < lines; ++i) {
      TraceRecord r;
      r.addr = c.base_addr + i * stride;
      r.gap = c.gap;
      r.op = rng.chance_bp(write_ratio_bp) ? TraceOp::Write : TraceOp::Read;
      r.payload = make_payload(c.payload, r.op, rng);
      t.records.push_back(std::move(r));
    }
  }
  return t;
}

Trace gen_random(std::uint64_t working_set_bytes, std::uint64_t records,
                 int write_ratio_bp, const GenCommon& c) {
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  std::uint64_t lines = working_set_bytes / LINE_BYTES;
  if (lines == 0) throw Error("CONFIG_ERROR", "working set smaller than one line");
  t.records.reserve(records);
  for (std::uint64_t i = 0; i < records; ++i) {
    TraceRecord r;
    r.addr = c.base_addr + rng.below(lines) * LINE_BYTES;
    r.gap = c.gap;
    r.op = rng.chance_bp(write_ratio_bp) ? TraceOp::Write : TraceOp::Read;
    r.payload = make_payload(c.payload, r.op, rng);
    t.records.push_back(std::move(r));
  }
  return t;
}

Trace gen_stream(std::uint64_t records, std::uint64_t stride, int write_ratio_bp,
                 const GenCommon& c) {
  if (stride < LINE_BYTES) throw Error("CONFIG_ERROR", "stride must be >= 64");
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  t.records.reserve(records);
  for (std::uint64_t i = 0; i < records; ++i) {
    TraceRecord r;
    r.addr = c.base_addr + i * stride;
    r.gap = c.gap;
    r.op = rng.chance_bp(write_ratio_bp) ? TraceOp::Write : TraceOp::Read;
    r.payload = make_payload(c.payload, r.op, rng);
    t.records.push_back(std::move(r));
  }
  return t;
}

Trace gen_hotcold(std::uint64_t hot_bytes, std::uint64_t cold_every,
                  std::uint64_t records, const GenCommon& c) {
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  std::uint64_t hot_lines = hot_bytes / LINE_BYTES;
  if (hot_lines == 0) throw Error("CONFIG_ERROR", "hot set smaller than one line");
  if (cold_every == 0) throw Error("CONFIG_ERROR", "cold_every must be positive");
  std::uint64_t cold_base = c.base_addr + (1ull << 36);  // far from the hot set
  std::uint64_t cold_next = 0;
  t.records.reserve(records);
  for (std::uint64_t i = 0; i < records; ++i) {
    TraceRecord r;
    r.gap = c.gap;
    r.op = TraceOp::Read;
    if ((i + 1) % cold_every == 0)
      r.addr = cold_base + (cold_next++) * LINE_BYTES;
    else
      r.addr = c.base_addr + (i % hot_lines) * LINE_BYTES;
    t.records.push_back(std::move(r));
  }
  return t;
}

Trace gen_alternating(std::uint64_t rounds, const GenCommon& c) {
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  t.records.reserve(rounds * 2);
  for (std::uint64_t i = 0; i < rounds; ++i) {
    TraceRecord w;
    w.addr = c.base_addr;
    w.gap = c.gap;
    w.op = TraceOp::Write;
    w.payload = make_payload(c.payload, w.op, rng);
    t.records.push_back(std::move(w));
    TraceRecord r;
    r.addr = c.base_addr;
    r.gap = c.gap;
    r.op = TraceOp::Read;
    t.records.push_back(std::move(r));
  }
  return t;
}

Trace gen_write_only(std::uint64_t records, const GenCommon& c) {
  Trace t;
  t.header = gen_header(c.payload);
  Rng rng(c.seed);
  t.records.reserve(records);
  for (std::uint64_t i = 0; i < records; ++i) {
    TraceRecord w;
    w.addr = c.base_addr;
    w.gap = c.gap;
    w.op = TraceOp::Write;
    w.payload = make_payload(c.payload, w.op, rng);
    t.records.push_back(std::move(w));
  }
  return t;
}

Trace interleave(const std::vector<Trace>& per_core) {
  if (per_core.empty()) throw Error("CONFIG_ERROR", "no traces to interleave");
  Trace out;
  out.header.cores = static_cast<std::uint32_t>(per_core.size());
  out.header.data_bearing = per_core.front().header.data_bearing;
  std::size_t total = 0;
  for (const auto& t : per_core) {
    if (t.header.data_bearing != out.header.data_bearing)
      throw Error("CONFIG_ERROR", "mixed data-bearing flags across cores");
    total += t.records.size();
  }
  out.records.reserve(total);

  struct Cursor {
    std::size_t next = 0;
    std::uint64_t issue = 0;  // cumulative gap time of the next record
  };
  std::vector<Cursor> cur(per_core.size());
  for (std::size_t c = 0; c < per_core.size(); ++c)
    if (!per_core[c].records.empty())
      cur[c].issue = per_core[c].records[0].gap;
  for (;;) {
    int best = -1;
    for (std::size_t c = 0; c < per_core.size(); ++c) {
      if (cur[c].next >= per_core[c].records.size()) continue;
      if (best < 0 || cur[c].issue < cur[best].issue) best = static_cast<int>(c);
    }
    if (best < 0) break;
    TraceRecord r = per_core[best].records[cur[best].next];
    r.core = static_cast<std::uint32_t>(best);
    out.records.push_back(std::move(r));
    ++cur[best].next;
    if (cur[best].next < per_core[best].records.size())
      cur[best].issue += per_core[best].records[cur[best].next].gap;
  }
  return out;
}

Trace replicate(const Trace& single, std::uint32_t copies) {
  std::vector<Trace> per_core;
  per_core.reserve(copies);
  for (std::uint32_t c = 0; c < copies; ++c) {
    Trace t = single;
    for (auto& r : t.records) r.addr += c * kCoreAddressStride;
    per_core.push_back(std::move(t));
  }
  return interleave(per_core);
}

}  // namespace hetcache
