#include "hetcache/kvfile.hpp"

#include <fstream>
#include <sstream>

namespace hetcache {

namespace {
std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

bool KvFile::Section::has(const std::string& key) const {
  for (const auto& [k, v] : items)
    if (k == key) return true;
  return false;
}

std::string KvFile::Section::take(const std::string& key) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].first == key) {
      consumed_.insert(i);
      return items[i].second;
    }
  }
  throw Error("MISSING_KEY", origin_ + ": [" + name + "] is missing '" + key + "'");
}

std::string KvFile::Section::take_or(const std::string& key,
                                     const std::string& fallback) {
  return has(key) ? take(key) : fallback;
}

long long KvFile::Section::take_int(const std::string& key) {
  return parse_fixed(take(key), 0);
}

long long KvFile::Section::take_int_or(const std::string& key, long long fallback) {
  return has(key) ? take_int(key) : fallback;
}

long long KvFile::Section::take_fixed(const std::string& key, int frac_digits) {
  return parse_fixed(take(key), frac_digits);
}

long long KvFile::Section::take_fixed_or(const std::string& key, int frac_digits,
                                         long long fallback) {
  return has(key) ? take_fixed(key, frac_digits) : fallback;
}

std::vector<std::string> KvFile::Section::take_all(const std::string& key) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].first == key) {
      consumed_.insert(i);
      out.push_back(items[i].second);
    }
  }
  return out;
}

void KvFile::Section::reject_unknown() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!consumed_.count(i))
      throw Error("UNKNOWN_KEY",
                  origin_ + ": [" + name + "] has unknown key '" + items[i].first + "'");
  }
}

KvFile KvFile::parse_text(const std::string& text, const std::string& origin) {
  KvFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  Section* cur = nullptr;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error("BAD_SECTION", origin + ":" + std::to_string(line_no) +
                                       ": unterminated section header");
      kv.sections_.push_back({});
      cur = &kv.sections_.back();
      cur->name = strip(line.substr(1, line.size() - 2));
      cur->origin_ = origin;
      continue;
    }
    if (!cur)
      throw Error("BAD_SECTION", origin + ":" + std::to_string(line_no) +
                                     ": key outside any section");
    std::size_t sp = line.find_first_of(" \t");
    if (sp == std::string::npos)
      throw Error("BAD_KEY", origin + ":" + std::to_string(line_no) +
                                 ": expected 'key value'");
    cur->items.emplace_back(line.substr(0, sp), strip(line.substr(sp + 1)));
  }
  return kv;
}

KvFile KvFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("FILE_ERROR", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

}  // namespace hetcache
