// Compares the OpenMP SA kernel against the serial reference on one
// instance and checks that their outputs are identical.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "qaga/samplers.hpp"

namespace {

double time_call(const std::function<qaga::SampleSet()>& fn,
                 qaga::SampleSet& out) {
  auto start = std::chrono::steady_clock::now();
  out = fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SA kernel benchmark: OpenMP vs serial reference"};
  int num_vars = 50;
  double sparsity = 1.0;
  int num_reads = 1000;
  int num_sweeps = 1000;
  std::uint64_t seed = 0;
  int repeats = 3;
  app.add_option("--n", num_vars)->check(CLI::PositiveNumber);
  app.add_option("--sparsity", sparsity)->check(CLI::Range(0.0, 1.0));
  app.add_option("--reads", num_reads)->check(CLI::PositiveNumber);
  app.add_option("--sweeps", num_sweeps)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  app.add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  qaga::ProblemSpec spec;
  spec.num_vars = num_vars;
  spec.sparsity = sparsity;
  spec.distribution = qaga::Distribution::Normal;
  spec.seed = seed;
  qaga::IsingModel model = qaga::random_model(spec);

  qaga::SaConfig config;
  config.num_sweeps = num_sweeps;

  double best_serial = 1e300, best_parallel = 1e300;
  qaga::SampleSet serial, parallel;
  for (int r = 0; r < repeats; ++r) {
    best_serial = std::min(
        best_serial, time_call(
                         [&] {
                           return qaga::sa_sample_reference(model, num_reads,
                                                            seed, config);
                         },
                         serial));
    best_parallel = std::min(
        best_parallel,
        time_call(
            [&] { return qaga::sa_sample(model, num_reads, seed, config); },
            parallel));
  }

  bool identical = serial.samples.size() == parallel.samples.size();
  for (std::size_t i = 0; identical && i < serial.samples.size(); ++i)
    identical = serial.samples[i].assignment == parallel.samples[i].assignment;

  std::cout << "N=" << num_vars << " reads=" << num_reads
            << " sweeps=" << num_sweeps << "\n"
            << "serial    : " << best_serial << " s\n"
            << "openmp    : " << best_parallel << " s\n"
            << "speedup   : " << best_serial / best_parallel << "x\n"
            << "identical : " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
