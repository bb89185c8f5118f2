#ifndef SGL_IO_HPP
#define SGL_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sgl/rational.hpp"

namespace sgl {

// --- config files -----------------------------------------------------------

/**
 * "key = value" sections, INI style:
 *
 *   [experiment]
 *   kind = verify-lemmas
 *   groupoid = builtin:z4
 *
 * Keys are addressed as "section.key"; keys before any section header live
 * in section "" and are addressed bare.  '#' starts a comment.
 */
struct Config {
  std::map<std::string, std::string> values;
  std::string raw_text;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  std::string require(const std::string& key) const;  // throws with key name
  long get_int(const std::string& key, long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  Rat get_rational(const std::string& key, const Rat& fallback) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

// FNV-1a over the canonicalized config text (comments and blank lines
// stripped); every result row carries this hash for provenance.
std::string config_hash(const Config& cfg);

// --- stage files ------------------------------------------------------------

// Lines "stage j: d=<int> seeds=<int> corruption=<int>".
struct StageSpec {
  int index = 0;
  int d = 0;
  int seeds = 1;
  int corruption = 0;
};

std::vector<StageSpec> parse_stage_lines(const std::string& text);
std::string format_stage_lines(const std::vector<StageSpec>& stages);

// --- result tables ----------------------------------------------------------

/**
 * Row-oriented result table persisted as CSV plus a JSON mirror.
 * The CSV opens with a "# timestamp:" comment line which is excluded from
 * the determinism contract; the JSON mirror carries no timestamp.
 */
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells);
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_csv(bool with_timestamp = true) const;
  std::string to_json() const;
  void write(const std::string& csv_path) const;  // also writes <path>.json

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Float formatting for persisted results: shortest round-trip digits,
// "-inf" sentinel for minus infinity.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sgl

#endif
