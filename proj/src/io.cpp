#include "sgl/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sgl {

// --- rationals (declared in rational.hpp) -----------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw std::invalid_argument("empty rational literal");
  auto bad = [&] { throw std::invalid_argument("malformed rational: '" + t + "'"); };
  bool neg = false;
  size_t pos = 0;
  if (t[pos] == '+' || t[pos] == '-') neg = (t[pos++] == '-');
  std::string digits, frac_digits, denom_digits;
  bool seen_slash = false, seen_dot = false;
  for (; pos < t.size(); ++pos) {
    char c = t[pos];
    if (c >= '0' && c <= '9') {
      (seen_slash ? denom_digits : seen_dot ? frac_digits : digits) += c;
    } else if (c == '/' && !seen_slash && !seen_dot) {
      seen_slash = true;
    } else if (c == '.' && !seen_dot && !seen_slash) {
      seen_dot = true;
    } else {
      bad();
    }
  }
  if (digits.empty() && frac_digits.empty()) bad();
  if (digits.empty()) digits = "0";
  BigInt num(digits);
  if (seen_slash) {
    if (denom_digits.empty()) bad();
    BigInt den(denom_digits);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
    Rat r(num, den);
    return neg ? -r : r;
  }
  Rat r(num, 1);
  if (!frac_digits.empty()) {
    BigInt scale = 1;
    for (size_t i = 0; i < frac_digits.size(); ++i) scale *= 10;
    r += Rat(BigInt(frac_digits), scale);
  }
  return neg ? -r : r;
}

std::string format_rational(const Rat& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << "/" << denominator(r);
  return out.str();
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

// --- config -----------------------------------------------------------------

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw std::runtime_error("config: missing required key '" + key + "'");
  return it->second;
}

long Config::get_int(const std::string& key, long fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  return std::stol(it->second);
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  return std::stod(it->second);
}

Rat Config::get_rational(const std::string& key, const Rat& fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  return parse_rational(it->second);
}

Config parse_config(const std::string& text) {
  Config cfg;
  cfg.raw_text = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": empty key");
    cfg.values[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  return parse_config(read_file(path));
}

std::string config_hash(const Config& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  for (const auto& [k, v] : cfg.values) {
    mix(k);
    mix(v);
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

// --- stage files ------------------------------------------------------------

std::vector<StageSpec> parse_stage_lines(const std::string& text) {
  std::vector<StageSpec> stages;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    StageSpec s;
    int matched = std::sscanf(line.c_str(), "stage %d: d=%d seeds=%d corruption=%d",
                              &s.index, &s.d, &s.seeds, &s.corruption);
    if (matched != 4)
      throw std::runtime_error("stage line " + std::to_string(lineno) +
                               ": expected 'stage j: d=<int> seeds=<int> corruption=<int>'");
    if (s.d <= 0 || s.seeds <= 0 || s.corruption < 0)
      throw std::runtime_error("stage line " + std::to_string(lineno) +
                               ": values out of range");
    stages.push_back(s);
  }
  return stages;
}

std::string format_stage_lines(const std::vector<StageSpec>& stages) {
  std::ostringstream out;
  for (const auto& s : stages)
    out << "stage " << s.index << ": d=" << s.d << " seeds=" << s.seeds
        << " corruption=" << s.corruption << "\n";
  return out.str();
}

// --- result tables ----------------------------------------------------------

void ResultTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw std::logic_error("ResultTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string ResultTable::to_csv(bool with_timestamp) const {
  std::ostringstream out;
  if (with_timestamp) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    out << "# timestamp: "
        << std::chrono::duration_cast<std::chrono::seconds>(now).count() << "\n";
  }
  for (size_t i = 0; i < columns_.size(); ++i)
    out << (i ? "," : "") << csv_escape(columns_[i]);
  out << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_escape(row[i]);
    out << "\n";
  }
  return out.str();
}

std::string ResultTable::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj;
    for (size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = row[i];
    arr.push_back(obj);
  }
  return arr.dump(2) + "\n";
}

void ResultTable::write(const std::string& csv_path) const {
  write_file(csv_path, to_csv());
  write_file(csv_path + ".json", to_json());
}

std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace sgl
