#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return SOFICLAB_CLI_PATH; }

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("soficlab_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const fs::path& stderr_to = {}) {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stderr_to.empty()) cmd += " 2> " + stderr_to.string();
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// CSV minus comment lines, as rows of cells
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# timestamp:", 0) == 0) continue;
    out += line;
    out += '\n';
  }
  return out;
}

int column(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

TEST_CASE("verify-lemmas passes on the cyclic groupoid and is thread-invariant") {
  fs::path cfg = work_dir() / "lemmas.cfg";
  write(cfg,
        "[input]\n"
        "groupoid = builtin:z4\n"
        "stages = stage 0: d=8 seeds=6 corruption=2; stage 1: d=16 seeds=6 corruption=1\n");
  fs::path out1 = work_dir() / "lemmas_t1.csv";
  fs::path out4 = work_dir() / "lemmas_t4.csv";
  REQUIRE(run("verify-lemmas --config " + cfg.string() + " --seed 7 --threads 1 --out " +
              out1.string()) == 0);
  REQUIRE(run("verify-lemmas --config " + cfg.string() + " --seed 7 --threads 4 --out " +
              out4.string()) == 0);

  auto rows = parse_csv(slurp(out1));
  REQUIRE(rows.size() == 13);  // header + 12 jobs
  int l33 = column(rows[0], "l33_holds");
  int l82 = column(rows[0], "l82_holds");
  int l126 = column(rows[0], "l126_holds");
  int hash_col = column(rows[0], "config_hash");
  REQUIRE(l33 >= 0);
  for (size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r][l33] == "1");
    CHECK(rows[r][l82] == "1");
    CHECK(rows[r][l126] == "1");
    CHECK(!rows[r][hash_col].empty());
  }

  // byte-identical output across worker counts, timestamps excluded
  CHECK(strip_timestamp(slurp(out1)) == strip_timestamp(slurp(out4)));
  CHECK(slurp(out1.string() + ".json") == slurp(out4.string() + ".json"));
}

TEST_CASE("different seeds change the sampled rows but not the schema") {
  fs::path cfg = work_dir() / "lemmas_seed.cfg";
  write(cfg,
        "[input]\n"
        "groupoid = builtin:z4\n"
        "stages = stage 0: d=8 seeds=8 corruption=2\n");
  fs::path a = work_dir() / "seed_a.csv", b = work_dir() / "seed_b.csv";
  REQUIRE(run("verify-lemmas --config " + cfg.string() + " --seed 1 --out " +
              a.string()) == 0);
  REQUIRE(run("verify-lemmas --config " + cfg.string() + " --seed 2 --out " +
              b.string()) == 0);
  auto ra = parse_csv(slurp(a)), rb = parse_csv(slurp(b));
  CHECK(ra[0] == rb[0]);
  CHECK(ra.size() == rb.size());
  CHECK(strip_timestamp(slurp(a)) != strip_timestamp(slurp(b)));
}

TEST_CASE("entropy-partition reports zero terms for identity extensions") {
  fs::path cfg = work_dir() / "part.cfg";
  write(cfg,
        "[input]\n"
        "groupoid = builtin:delta2\n"
        "[params]\n"
        "delta = 1/10\n"
        "multiplicities = 1,2,3\n"
        "family = singletons\n");
  fs::path out = work_dir() / "part.csv";
  REQUIRE(run("entropy-partition --config " + cfg.string() + " --out " +
              out.string()) == 0);
  auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 4);
  int ne = column(rows[0], "hom_nonempty");
  int term = column(rows[0], "entropy_term");
  for (size_t r = 1; r < rows.size(); ++r) {
    CHECK(rows[r][ne] == "1");
    CHECK(rows[r][term] == "0");
  }
}

TEST_CASE("malformed rational fields are rejected with the field name") {
  fs::path cfg = work_dir() / "bad.cfg";
  write(cfg,
        "[input]\n"
        "groupoid = builtin:delta2\n"
        "[params]\n"
        "delta = 1/0\n");
  fs::path err = work_dir() / "bad.err";
  CHECK(run("entropy-partition --config " + cfg.string() + " --out " +
            (work_dir() / "bad.csv").string(),
            err) == 2);
  std::string msg = slurp(err);
  CHECK(msg.find("params.delta") != std::string::npos);
}

TEST_CASE("missing required keys name the key") {
  fs::path cfg = work_dir() / "empty.cfg";
  write(cfg, "# nothing here\n");
  fs::path err = work_dir() / "empty.err";
  CHECK(run("verify-lemmas --config " + cfg.string() + " --out " +
            (work_dir() / "empty.csv").string(),
            err) == 2);
  CHECK(slurp(err).find("input.groupoid") != std::string::npos);
}

TEST_CASE("dump-groupoid round-trips through the exchange format") {
  fs::path cfg1 = work_dir() / "dump1.cfg";
  write(cfg1, "[input]\ngroupoid = builtin:delta3\n");
  fs::path dumped = work_dir() / "delta3.gpd";
  REQUIRE(run("dump-groupoid --config " + cfg1.string() + " --out " +
              dumped.string()) == 0);
  fs::path cfg2 = work_dir() / "dump2.cfg";
  write(cfg2, "[input]\ngroupoid = " + dumped.string() + "\n");
  fs::path dumped2 = work_dir() / "delta3_again.gpd";
  REQUIRE(run("dump-groupoid --config " + cfg2.string() + " --out " +
              dumped2.string()) == 0);
  CHECK(slurp(dumped) == slurp(dumped2));
  CHECK(!slurp(dumped).empty());
}

TEST_CASE("irs-check exit status reflects the verdict") {
  fs::path good = work_dir() / "irs_good.cfg";
  write(good,
        "[input]\n"
        "group = builtin:z4\n"
        "irs = subgroup = {e}; weight = 1\n"
        "[params]\n"
        "sigma = regular\n"
        "delta = 0\n"
        "radius = 0\n");
  fs::path out = work_dir() / "irs_good.csv";
  CHECK(run("irs-check --config " + good.string() + " --out " + out.string()) == 0);
  auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][column(rows[0], "pass")] == "1");

  fs::path badc = work_dir() / "irs_bad.cfg";
  write(badc,
        "[input]\n"
        "group = builtin:z4\n"
        "irs = subgroup = {e, b}; weight = 1\n"
        "[params]\n"
        "sigma = regular\n"
        "delta = 0\n"
        "radius = 0\n");
  CHECK(run("irs-check --config " + badc.string() + " --out " +
            (work_dir() / "irs_bad.csv").string()) == 1);
}

TEST_CASE("bernoulli oracle trends toward the shannon entropy") {
  fs::path cfg = work_dir() / "bern.cfg";
  write(cfg,
        "[input]\n"
        "base = K=2; kappa=1/2,1/2\n"
        "[params]\n"
        "delta = 1/20\n"
        "degrees = 16,64\n");
  fs::path out = work_dir() / "bern.csv";
  REQUIRE(run("bernoulli --config " + cfg.string() + " --out " + out.string()) == 0);
  auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 3);
  int oracle = column(rows[0], "oracle");
  int shannon = column(rows[0], "shannon");
  double o16 = std::stod(rows[1][oracle]);
  double o64 = std::stod(rows[2][oracle]);
  double target = std::stod(rows[1][shannon]);
  CHECK(o16 <= o64);
  CHECK(o64 <= target + 1e-12);
}
