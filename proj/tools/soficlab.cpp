// soficlab: batch experiment runner for the sofic-entropy laboratory.
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sgl/bernoulli.hpp"
#include "sgl/groupoid.hpp"
#include "sgl/hom.hpp"
#include "sgl/io.hpp"
#include "sgl/irs.hpp"
#include "sgl/metric.hpp"
#include "sgl/partition.hpp"
#include "sgl/rng.hpp"
#include "sgl/sofic.hpp"

namespace {

using namespace sgl;

struct RunOptions {
  std::string config_path;
  long seed = -1;  // -1: take the config's seed (default 1)
  int threads = 1;
  std::string out_path = "results.csv";
};

Rat rat_field(const Config& cfg, const std::string& key, const Rat& fallback) {
  try {
    return cfg.get_rational(key, fallback);
  } catch (const std::exception& e) {
    throw std::runtime_error("config field '" + key + "': " + e.what());
  }
}

std::vector<int> int_list_field(const Config& cfg, const std::string& key,
                                const std::string& fallback) {
  std::istringstream in(cfg.get(key, fallback));
  std::vector<int> out;
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::runtime_error("config field '" + key + "': bad integer '" + tok + "'");
    }
  }
  if (out.empty()) throw std::runtime_error("config field '" + key + "': empty list");
  return out;
}

FiniteGroupoid load_groupoid(const std::string& spec) {
  if (spec == "builtin:triv") return build_cyclic_group_groupoid(1);
  if (spec == "builtin:z2") return build_cyclic_group_groupoid(2);
  if (spec == "builtin:z4") return build_cyclic_group_groupoid(4);
  if (spec == "builtin:delta2") return build_full_groupoid(2);
  if (spec == "builtin:delta3") return build_full_groupoid(3);
  if (spec == "builtin:rel21") return build_relation_groupoid({0, 0, 1});
  return groupoid_from_text(read_file(spec));
}

FiniteGroupTable load_group(const std::string& spec) {
  if (spec == "builtin:z2") return FiniteGroupTable::cyclic(2);
  if (spec == "builtin:z4") return FiniteGroupTable::cyclic(4);
  if (spec == "builtin:klein4") return FiniteGroupTable::klein4();
  if (spec == "builtin:s3") return FiniteGroupTable::symmetric3();
  return group_from_text(read_file(spec));
}

// Base-space line: "K=2; kappa=1/2,1/2".
BaseSpace parse_base_space(const std::string& line) {
  BaseSpace b;
  int k = 0;
  auto kpos = line.find("K=");
  auto kappos = line.find("kappa=");
  if (kpos == std::string::npos || kappos == std::string::npos)
    throw std::runtime_error("config field 'base': expected \"K=<n>; kappa=...\"");
  k = std::stoi(line.substr(kpos + 2));
  std::istringstream in(line.substr(kappos + 6));
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      b.kappa.push_back(parse_rational(tok));
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("config field 'kappa': ") + e.what());
    }
  }
  b.symbols = k;
  b.validate();
  return b;
}

// Deterministic key family: all units together plus every morphism graph.
std::vector<PartialAutomorphism> singleton_family(const FiniteGroupoid& h) {
  std::vector<PartialAutomorphism> fam{PartialAutomorphism::full_units(h)};
  for (int m = 0; m < h.m; ++m) fam.push_back(PartialAutomorphism::singleton(h, m));
  return fam;
}

/**
 * Runs `count` independent tasks sharded over `threads` workers, collecting
 * each task's rows and appending them in task order so the output is
 * independent of the worker count.
 */
void sharded_rows(int count, int threads,
                  const std::function<std::vector<std::vector<std::string>>(int)>& task,
                  ResultTable& table) {
  std::vector<std::vector<std::vector<std::string>>> results(count);
  std::vector<std::string> errors(count);
  auto worker = [&](int shard) {
    for (int i = shard; i < count; i += threads) {
      try {
        results[i] = task(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& t : pool) t.join();
  for (int i = 0; i < count; ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
    for (auto& row : results[i]) table.add_row(std::move(row));
  }
}

std::vector<StageSpec> load_stages(const Config& cfg) {
  std::string text;
  if (cfg.has("input.stage_file")) {
    text = read_file(cfg.require("input.stage_file"));
  } else {
    text = cfg.require("input.stages");
    for (char& c : text)
      if (c == ';') c = '\n';
  }
  return parse_stage_lines(text);
}

int multiplicity_for(const FiniteGroupoid& h, int d) {
  int unit = exact_degree_unit(h);
  if (d % unit != 0)
    throw std::runtime_error("stage degree " + std::to_string(d) +
                             " is not a multiple of the groupoid's exact degree unit " +
                             std::to_string(unit));
  return d / unit;
}

// --- subcommands -------------------------------------------------------------

int run_verify_lemmas(const Config& cfg, std::uint64_t seed, int threads,
                      const std::string& out) {
  FiniteGroupoid h = load_groupoid(cfg.require("input.groupoid"));
  std::vector<StageSpec> stages = load_stages(cfg);
  std::string hash = config_hash(cfg);
  ResultTable table({"config_hash", "seed", "stage", "d", "mult_defect", "trace_defect",
                     "cont_defect", "l33_holds", "l82_holds", "l126_holds", "min_slack"});

  struct Job {
    int stage, seed_idx;
  };
  std::vector<Job> jobs;
  for (const auto& st : stages)
    for (int s = 0; s < st.seeds; ++s) jobs.push_back({st.index, s});

  SplitRng master(seed);
  sharded_rows(
      static_cast<int>(jobs.size()), threads,
      [&](int i) {
        const Job& job = jobs[i];
        const StageSpec& st = stages[job.stage];
        SplitRng rng = SplitRng(seed).split(
            static_cast<std::uint64_t>(job.stage) * 1000003u + job.seed_idx);
        SoficMap sigma = exact_sofic_from_quotient(h, multiplicity_for(h, st.d));
        // corrupt one non-unit morphism graph
        std::vector<int> non_units;
        for (int m = 0; m < h.m; ++m)
          if (!h.is_unit(m)) non_units.push_back(m);
        int fm = non_units.empty() ? 0
                                   : non_units[rng.below(non_units.size())];
        PartialAutomorphism f = PartialAutomorphism::singleton(h, fm);
        if (st.corruption > 0) corrupt_assignment(sigma, f, st.corruption, rng);
        PartialAutomorphism p = PartialAutomorphism::full_units(h);
        int gm = non_units.empty() ? 0 : non_units[rng.below(non_units.size())];
        PartialAutomorphism g = PartialAutomorphism::singleton(h, gm);

        DefectReport def = measure_defects(
            sigma, {f, pa_invert(f), g, pa_invert(g), p});
        BoundReport l33 = check_lemma33(sigma, f, p);
        BoundReport l82 = check_lemma82(sigma, f, g);
        BoundReport l126 = check_lemma126(sigma, f);
        Rat slack = std::min({l33.min_slack(), l82.min_slack(), l126.min_slack()});
        std::vector<std::string> row{
            hash,
            std::to_string(job.seed_idx),
            std::to_string(job.stage),
            std::to_string(st.d),
            format_rational(def.mult_defect),
            format_rational(def.trace_defect),
            format_rational(def.cont_defect),
            l33.holds() ? "1" : "0",
            l82.holds() ? "1" : "0",
            l126.holds() ? "1" : "0",
            format_rational(slack)};
        return std::vector<std::vector<std::string>>{row};
      },
      table);
  table.write(out);
  return 0;
}

int run_entropy_partition(const Config& cfg, std::uint64_t seed, int threads,
                          const std::string& out) {
  FiniteGroupoid h = load_groupoid(cfg.require("input.groupoid"));
  Rat delta = rat_field(cfg, "params.delta", Rat(1, 10));
  std::vector<int> mults = int_list_field(cfg, "params.multiplicities", "1,2,4");
  std::string family = cfg.get("params.family", "units");
  std::vector<PartialAutomorphism> F;
  if (family == "singletons") {
    F = singleton_family(h);
  } else if (family == "units") {
    F = {PartialAutomorphism::full_units(h)};
  } else {
    throw std::runtime_error("config field 'params.family': unknown family '" +
                             family + "'");
  }
  std::string hash = config_hash(cfg);
  ResultTable table({"config_hash", "seed", "stage", "d", "hom_nonempty", "entropy_term"});
  std::vector<IdentityStage> stages = identity_extension_entropy(h, mults, F, delta);
  (void)threads;
  for (size_t j = 0; j < stages.size(); ++j)
    table.add_row({hash, std::to_string(seed), std::to_string(j),
                   std::to_string(stages[j].d), stages[j].hom_nonempty ? "1" : "0",
                   format_double(stages[j].entropy_term)});
  table.write(out);
  return 0;
}

int run_entropy_metric(const Config& cfg, std::uint64_t seed, int threads,
                       const std::string& out) {
  FiniteGroupoid h = load_groupoid(cfg.require("input.groupoid"));
  Rat delta = rat_field(cfg, "params.delta", Rat(1, 10));
  Rat eps = rat_field(cfg, "params.eps", Rat(1, 4));
  std::vector<int> mults = int_list_field(cfg, "params.multiplicities", "1,2");
  std::string flavor_s = cfg.get("params.flavor", "rho2");
  RhoFlavor flavor = flavor_s == "rhoinf" ? RhoFlavor::inf : RhoFlavor::two;
  std::string orbit_s = cfg.get("params.orbit", "mu");
  OrbitFlavor orbit = orbit_s == "nu" ? OrbitFlavor::nu : OrbitFlavor::mu;
  std::uint64_t budget = cfg.get_int("params.budget", 2000000);
  std::uint64_t samples = cfg.get_int("params.samples", 5000);

  GroupoidMorphism pi = identity_extension(h);
  std::vector<PartialAutomorphism> F = singleton_family(h);
  PseudoMetric rho = PseudoMetric::discrete(h.n_units());
  std::vector<TestFunction> K;
  for (int u = 0; u < h.n_units(); ++u) {
    TestFunction k;
    k.values.assign(h.n_units(), Rat(0));
    k.values[u] = 1;
    K.push_back(k);
  }
  std::string hash = config_hash(cfg);
  ResultTable table({"config_hash", "seed", "stage", "d", "orbit_size", "n_eps",
                     "exact", "entropy_term"});
  sharded_rows(
      static_cast<int>(mults.size()), threads,
      [&](int j) {
        SoficMap sigma = exact_sofic_from_quotient(h, mults[j]);
        MetricStageResult res =
            metric_stage_entropy(sigma, pi, F, K, delta, rho, flavor, orbit, eps,
                                 budget, samples, SplitRng(seed).split(j).next());
        std::vector<std::string> row{hash,
                                     std::to_string(seed),
                                     std::to_string(j),
                                     std::to_string(res.d),
                                     std::to_string(res.orbit_size),
                                     std::to_string(res.n_eps),
                                     res.exact ? "1" : "0",
                                     format_double(res.entropy_term)};
        return std::vector<std::vector<std::string>>{row};
      },
      table);
  table.write(out);
  return 0;
}

int run_bernoulli(const Config& cfg, std::uint64_t seed, int threads,
                  const std::string& out) {
  BaseSpace base = parse_base_space(cfg.require("input.base"));
  Rat delta = rat_field(cfg, "params.delta", Rat(1, 20));
  std::vector<int> degrees = int_list_field(cfg, "params.degrees", "64,128,256");
  std::string hash = config_hash(cfg);
  // Over the trivial base groupoid the finite-stage count coincides with the
  // multinomial oracle, so the entropy term is the oracle value itself.
  ResultTable table(
      {"config_hash", "seed", "d", "entropy_term", "oracle", "shannon"});
  double shannon = shannon_entropy(base);
  sharded_rows(
      static_cast<int>(degrees.size()), threads,
      [&](int j) {
        BinomialOracleResult res = binomial_entropy_oracle(base, degrees[j], delta);
        std::vector<std::string> row{hash,
                                     std::to_string(seed),
                                     std::to_string(degrees[j]),
                                     format_double(res.log_count_over_d),
                                     format_double(res.log_count_over_d),
                                     format_double(shannon)};
        return std::vector<std::vector<std::string>>{row};
      },
      table);
  table.write(out);
  return 0;
}

int run_irs_check(const Config& cfg, std::uint64_t seed, int threads,
                  const std::string& out) {
  (void)threads;
  FiniteGroupTable g = load_group(cfg.require("input.group"));
  std::string irs_text;
  if (cfg.has("input.irs_file")) {
    irs_text = read_file(cfg.require("input.irs_file"));
  } else {
    // inline entries are separated by '|' (';' is part of the line format)
    irs_text = cfg.require("input.irs");
    for (char& c : irs_text)
      if (c == '|') c = '\n';
  }
  StabilizerDistribution eta = irs_from_text(g, irs_text);

  std::vector<int> K;
  std::string kspec = cfg.get("params.window", "all");
  if (kspec == "all") {
    for (int a = 0; a < g.n; ++a) K.push_back(a);
  } else {
    std::istringstream in(kspec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t") + 1);
      auto it = std::find(g.names.begin(), g.names.end(), tok);
      if (it == g.names.end())
        throw std::runtime_error("config field 'params.window': unknown element '" +
                                 tok + "'");
      K.push_back(static_cast<int>(it - g.names.begin()));
    }
  }
  Rat delta = rat_field(cfg, "params.delta", Rat(1, 100));
  Rat radius = rat_field(cfg, "params.radius", Rat(0));
  std::string sig = cfg.get("params.sigma", "regular");
  SymMap sigma;
  if (sig == "regular") {
    sigma = SymMap::regular(g);
  } else if (sig == "trivial") {
    sigma = SymMap::trivial(g, static_cast<int>(cfg.get_int("params.d", g.n)));
  } else {
    throw std::runtime_error("config field 'params.sigma': unknown map '" + sig + "'");
  }
  IrsCheckReport rep = check_sofic_irs(g, eta, K, delta, radius, sigma);
  ResultTable table({"config_hash", "seed", "pass", "worst_mult_fraction",
                     "tv_distance"});
  table.add_row({config_hash(cfg), std::to_string(seed), rep.pass ? "1" : "0",
                 format_rational(rep.worst_mult_fraction),
                 format_rational(rep.tv_distance)});
  table.write(out);
  return rep.pass ? 0 : 1;
}

int run_dump_groupoid(const Config& cfg, const std::string& out) {
  FiniteGroupoid h = load_groupoid(cfg.require("input.groupoid"));
  ValidationReport rep = validate_groupoid(h);
  if (!rep.ok()) {
    std::cerr << "groupoid invalid: " << rep.violations.front().axiom << " ("
              << rep.violations.front().witness << ")\n";
    return 1;
  }
  write_file(out, groupoid_to_text(h));
  std::cout << "m=" << h.m << " units=" << h.n_units() << " valid=1\n";
  return 0;
}

int dispatch(const std::string& kind, const RunOptions& opt) {
  Config cfg = load_config(opt.config_path);
  std::uint64_t seed =
      opt.seed >= 0 ? static_cast<std::uint64_t>(opt.seed)
                    : static_cast<std::uint64_t>(cfg.get_int("params.seed", 1));
  int threads = std::max(opt.threads, 1);
  if (kind == "verify-lemmas")
    return run_verify_lemmas(cfg, seed, threads, opt.out_path);
  if (kind == "entropy-partition")
    return run_entropy_partition(cfg, seed, threads, opt.out_path);
  if (kind == "entropy-metric")
    return run_entropy_metric(cfg, seed, threads, opt.out_path);
  if (kind == "bernoulli") return run_bernoulli(cfg, seed, threads, opt.out_path);
  if (kind == "irs-check") return run_irs_check(cfg, seed, threads, opt.out_path);
  if (kind == "dump-groupoid") return run_dump_groupoid(cfg, opt.out_path);
  std::cerr << "unknown subcommand " << kind << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sofic entropy laboratory"};
  app.require_subcommand(1);
  RunOptions opt;
  std::vector<std::string> kinds{"verify-lemmas", "entropy-partition", "entropy-metric",
                                 "bernoulli",     "irs-check",         "dump-groupoid"};
  std::string chosen;
  for (const auto& kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind);
    sub->add_option("--config", opt.config_path, "experiment config path")->required();
    sub->add_option("--seed", opt.seed, "master seed (overrides the config)");
    sub->add_option("--threads", opt.threads, "worker count (output-invariant)");
    sub->add_option("--out", opt.out_path, "result CSV path (JSON mirror alongside)");
    sub->callback([&chosen, kind] { chosen = kind; });
  }
  CLI11_PARSE(app, argc, argv);
  try {
    return dispatch(chosen, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
