#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hetcache/units.hpp"

namespace hetcache {

/// Line-oriented `key value` file with `[section]` headers and '#' comments.
/// Used by the catalog, run configs and reports. Sections track which keys
/// were consumed so unknown keys can be rejected.
class KvFile {
 public:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> items;  // in file order

    bool has(const std::string& key) const;
    /// Raw string value; throws Error(MISSING_KEY) if absent.
    std::string take(const std::string& key);
    std::string take_or(const std::string& key, const std::string& fallback);
    long long take_int(const std::string& key);
    long long take_int_or(const std::string& key, long long fallback);
    /// Fixed-point decimal scaled by 10^frac_digits.
    long long take_fixed(const std::string& key, int frac_digits);
    long long take_fixed_or(const std::string& key, int frac_digits,
                            long long fallback);
    /// All values for a repeated key, each consumed.
    std::vector<std::string> take_all(const std::string& key);
    /// Throws Error(UNKNOWN_KEY) if any key was never consumed.
    void reject_unknown() const;

   private:
    friend class KvFile;
    std::set<std::size_t> consumed_;
    std::string origin_;
  };

  static KvFile parse_text(const std::string& text, const std::string& origin);
  static KvFile parse_file(const std::string& path);

  std::vector<Section>& sections() { return sections_; }
  /// First section with the given name, or nullptr.
  Section* find(const std::string& name);
  const std::string& origin() const { return origin_; }

 private:
  std::vector<Section> sections_;
  std::string origin_;
};

}  // namespace hetcache
