#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "hetcache/engine.hpp"

namespace hetcache {

/// Line-oriented report with a stable field order (golden-file friendly).
void write_report(const SimReport& report, std::ostream& os);
std::string report_text(const SimReport& report);

/// Plot-ready series: `section,metric,value` rows.
void write_report_csv(const SimReport& report, std::ostream& os);

/// A parsed report: "<section>.<key>" -> value string.
struct ParsedReport {
  int schema = 0;
  std::string label;
  std::map<std::string, std::string> fields;

  bool has(const std::string& key) const { return fields.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
};

ParsedReport parse_report_file(const std::string& path);
ParsedReport parse_report_text(const std::string& text, const std::string& origin);

/// Ratio table a/b over the numeric fields both reports share. Throws
/// Error(SCHEMA_MISMATCH) when the schema versions differ.
std::string compare_reports(const ParsedReport& a, const ParsedReport& b);

}  // namespace hetcache
