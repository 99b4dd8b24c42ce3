// Command-line harness: instance generation, single-problem solving, and
// the two benchmark experiments.
//
// Exit codes: 0 success, 1 partial failures recorded, 2 usage/parse error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qaga/bench.hpp"
#include "qaga/postprocess.hpp"
#include "qaga/qaga.hpp"
#include "qaga/rng.hpp"
#include "qaga/samplers.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

struct GenerateOptions {
  int num_vars = 50;
  double sparsity = 1.0;
  std::string distribution = "normal";
  std::uint64_t seed = 0;
  std::string out;
};

struct SolveOptions {
  std::string model_path;
  int num_vars = 50;
  double sparsity = 1.0;
  std::string distribution = "normal";
  std::uint64_t problem_seed = 0;
  bool from_spec = false;

  std::string method = "qaga";
  double theta = 0.0;
  int num_reads = 1000;
  int gauges = 10;
  int max_stages = 64;
  int num_sweeps = 1000;
  double beta_initial = 0.1;
  double beta_final = 10.0;
  bool no_local_search = false;
  std::uint64_t seed = 0;
  std::string out;
  std::string remote_endpoint;
  double remote_timeout = 30.0;
};

qaga::IsingModel load_model(const SolveOptions& opt) {
  if (!opt.model_path.empty())
    return qaga::model_from_json(read_file(opt.model_path)).first;
  qaga::ProblemSpec spec;
  spec.num_vars = opt.num_vars;
  spec.sparsity = opt.sparsity;
  spec.distribution = qaga::distribution_from_string(opt.distribution);
  spec.seed = opt.problem_seed;
  return qaga::random_model(spec);
}

std::shared_ptr<const qaga::Sampler> make_sampler(const SolveOptions& opt) {
  qaga::SaConfig sa;
  sa.num_sweeps = opt.num_sweeps;
  sa.beta_initial = opt.beta_initial;
  sa.beta_final = opt.beta_final;
  std::shared_ptr<const qaga::Sampler> inner;
  if (!opt.remote_endpoint.empty())
    inner = std::make_shared<qaga::RemoteSampler>(opt.remote_endpoint,
                                                  opt.remote_timeout);
  else if (opt.method == "exact")
    inner = std::make_shared<qaga::ExactSampler>();
  else
    inner = std::make_shared<qaga::SaSampler>(sa);
  return inner;
}

int run_solve(const SolveOptions& opt) {
  qaga::IsingModel model = load_model(opt);
  nlohmann::json report;
  report["method"] = opt.method;
  report["num_vars"] = model.num_vars();

  qaga::Sample solution;
  double energy = 0.0;

  if (opt.method == "exact") {
    auto set = qaga::exact_sample(model, 1, opt.seed);
    solution = set.samples.front();
    energy = *solution.energy;
  } else if (opt.method == "sa") {
    auto sampler = make_sampler(opt);
    auto set = sampler->sample(model, opt.num_reads, opt.seed);
    auto best = std::min_element(
        set.samples.begin(), set.samples.end(),
        [](const auto& a, const auto& b) { return *a.energy < *b.energy; });
    solution = *best;
    energy = *solution.energy;
  } else if (opt.method == "qa" || opt.method == "mqc") {
    auto inner = make_sampler(opt);
    auto set = qaga::gauge_averaged_sample(*inner, opt.gauges, model,
                                           opt.num_reads, opt.seed);
    if (opt.method == "qa") {
      auto best = std::min_element(
          set.samples.begin(), set.samples.end(),
          [](const auto& a, const auto& b) { return *a.energy < *b.energy; });
      solution = *best;
    } else {
      solution = qaga::mqc_reduce(model, set);
    }
    energy = *solution.energy;
  } else if (opt.method == "sqc-polish") {
    // draw SA samples, keep the best, polish it with single-spin descent
    auto sampler = make_sampler(opt);
    auto set = sampler->sample(model, opt.num_reads, opt.seed);
    auto best = std::min_element(
        set.samples.begin(), set.samples.end(),
        [](const auto& a, const auto& b) { return *a.energy < *b.energy; });
    solution = qaga::sqc(model, *best);
    energy = *solution.energy;
  } else if (opt.method == "qaga") {
    qaga::QagaConfig cfg;
    cfg.theta = opt.theta;
    cfg.num_reads = opt.num_reads;
    cfg.max_stages = opt.max_stages;
    cfg.final_local_search = !opt.no_local_search;
    cfg.seed = opt.seed;
    auto inner = make_sampler(opt);
    if (opt.gauges > 1 && opt.remote_endpoint.empty() &&
        opt.method != "exact")
      cfg.sampler =
          std::make_shared<qaga::GaugeAveragedSampler>(inner, opt.gauges);
    else
      cfg.sampler = inner;
    auto result = qaga::qaga_solve(model, cfg);
    solution = result.solution;
    energy = result.energy;
    report["stages"] = nlohmann::json::parse(qaga::stages_to_json(result));
    report["used_mqc_fallback"] = result.used_mqc_fallback;
    report["used_incumbent"] = result.used_incumbent;
  } else {
    throw CLI::ValidationError("--method", "unknown method: " + opt.method);
  }

  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [label, spin] : solution.assignment)
    assignment[std::to_string(label)] = spin;
  report["solution"] = std::move(assignment);
  report["energy"] = energy;

  std::cout << "method: " << opt.method << "\n"
            << "energy: " << std::setprecision(17) << energy << "\n";
  if (report.contains("stages"))
    std::cout << "stages: " << report["stages"].size() << "\n";
  if (!opt.out.empty()) write_file(opt.out, report.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAGA: greedy Ising minimization with pluggable samplers"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "generate a random instance");
  generate->add_option("--n", gen.num_vars, "number of variables")
      ->check(CLI::PositiveNumber);
  generate->add_option("--sparsity", gen.sparsity, "edge probability")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--dist", gen.distribution,
                       "binary | uniform | normal");
  generate->add_option("--seed", gen.seed, "instance seed");
  generate->add_option("--out", gen.out, "output model JSON path");

  SolveOptions sol;
  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--model", sol.model_path, "model JSON file");
  solve->add_option("--n", sol.num_vars, "generated instance size");
  solve->add_option("--sparsity", sol.sparsity, "generated edge probability")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--dist", sol.distribution, "generated coefficient law");
  solve->add_option("--problem-seed", sol.problem_seed, "instance seed");
  solve->add_option("--method", sol.method,
                    "exact | sa | qa | mqc | qaga | sqc-polish");
  solve->add_option("--theta", sol.theta, "QAGA fixing threshold")
      ->check(CLI::Range(0.0, 0.4999999));
  solve->add_option("--reads", sol.num_reads, "samples per stage")
      ->check(CLI::PositiveNumber);
  solve->add_option("--gauges", sol.gauges, "spin-reversal transforms")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-stages", sol.max_stages, "stage guard")
      ->check(CLI::PositiveNumber);
  solve->add_option("--sweeps", sol.num_sweeps, "SA sweeps per read")
      ->check(CLI::PositiveNumber);
  solve->add_option("--beta-initial", sol.beta_initial, "SA initial beta");
  solve->add_option("--beta-final", sol.beta_final, "SA final beta");
  solve->add_flag("--no-local-search", sol.no_local_search,
                  "skip the final sqc polish");
  solve->add_option("--seed", sol.seed, "method seed");
  solve->add_option("--out", sol.out, "JSON report path");
  solve->add_option("--endpoint", sol.remote_endpoint,
                    "remote sampler URL (replaces SA)");
  solve->add_option("--timeout", sol.remote_timeout,
                    "remote timeout in seconds");

  qaga::bench::ExperimentAConfig acfg;
  std::vector<std::string> a_dists{"binary", "uniform", "normal"};
  std::string a_out = "expa";
  std::string a_format = "csv";
  auto* expa = app.add_subcommand(
      "expa", "win/tie/loss comparison: QAGA vs QA vs MQC");
  expa->add_option("--problems", acfg.num_problems, "problems per cell")
      ->check(CLI::PositiveNumber);
  expa->add_option("--n", acfg.num_vars, "variables per problem")
      ->check(CLI::PositiveNumber);
  expa->add_option("--sparsity", acfg.sparsities, "sparsity grid");
  expa->add_option("--dist", a_dists, "distribution list");
  expa->add_option("--reads", acfg.num_reads, "samples per method")
      ->check(CLI::PositiveNumber);
  expa->add_option("--gauges", acfg.gauges, "spin-reversal transforms")
      ->check(CLI::PositiveNumber);
  expa->add_option("--theta", acfg.theta, "QAGA threshold")
      ->check(CLI::Range(0.0, 0.4999999));
  expa->add_option("--sweeps", acfg.sa.num_sweeps, "SA sweeps per read")
      ->check(CLI::PositiveNumber);
  expa->add_option("--seed", acfg.seed, "master seed");
  expa->add_option("--out", a_out, "output path prefix");
  expa->add_option("--format", a_format)
      ->check(CLI::IsMember({"csv", "json"}));

  qaga::bench::ExperimentBConfig bcfg;
  std::string b_out = "expb";
  std::string b_format = "csv";
  auto* expb =
      app.add_subcommand("expb", "mean stage count over a theta grid");
  expb->add_option("--problems", bcfg.num_problems, "problems per cell")
      ->check(CLI::PositiveNumber);
  expb->add_option("--n", bcfg.num_vars, "variables per problem")
      ->check(CLI::PositiveNumber);
  expb->add_option("--sparsity", bcfg.sparsities, "sparsity grid");
  expb->add_option("--theta", bcfg.thetas, "threshold grid");
  expb->add_option("--reads", bcfg.num_reads, "samples per stage")
      ->check(CLI::PositiveNumber);
  expb->add_option("--gauges", bcfg.gauges, "spin-reversal transforms")
      ->check(CLI::PositiveNumber);
  expb->add_option("--sweeps", bcfg.sa.num_sweeps, "SA sweeps per read")
      ->check(CLI::PositiveNumber);
  expb->add_flag("--exact", bcfg.use_exact_sampler,
                 "use the enumeration sampler (small N only)");
  expb->add_option("--seed", bcfg.seed, "master seed");
  expb->add_option("--out", b_out, "output path prefix");
  expb->add_option("--format", b_format)
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) {
      qaga::ProblemSpec spec;
      spec.num_vars = gen.num_vars;
      spec.sparsity = gen.sparsity;
      spec.distribution = qaga::distribution_from_string(gen.distribution);
      spec.seed = gen.seed;
      std::string json = qaga::model_to_json(qaga::random_model(spec));
      if (gen.out.empty())
        std::cout << json << "\n";
      else
        write_file(gen.out, json + "\n");
      return 0;
    }
    if (solve->parsed()) return run_solve(sol);
    if (expa->parsed()) {
      acfg.distributions.clear();
      for (const auto& d : a_dists)
        acfg.distributions.push_back(qaga::distribution_from_string(d));
      auto report = qaga::bench::run_experiment_a(acfg);
      qaga::bench::persist_experiment_a(report, a_out);
      std::cout << (a_format == "json"
                        ? qaga::bench::report_to_json(report)
                        : qaga::bench::cells_to_csv(report.cells));
      if (report.num_failed > 0) {
        std::cerr << report.num_failed << " problems failed\n";
        return 1;
      }
      return 0;
    }
    if (expb->parsed()) {
      auto report = qaga::bench::run_experiment_b(bcfg);
      qaga::bench::persist_experiment_b(report, b_out);
      std::cout << (b_format == "json" ? qaga::bench::table_to_json(report)
                                       : qaga::bench::table_to_csv(report));
      if (report.num_failed > 0) {
        std::cerr << report.num_failed << " problems failed\n";
        return 1;
      }
      return 0;
    }
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const qaga::ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const qaga::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qaga::RemoteError& e) {
    std::cerr << "remote error: " << e.what() << "\n";
    return 1;
  } catch (const qaga::SamplerError& e) {
    // guard violations (e.g. exact enumeration above the size cap)
    std::cerr << "sampler error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
