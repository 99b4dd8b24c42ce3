#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qaga/ising.hpp"
#include "qaga/postprocess.hpp"
#include "qaga/samplers.hpp"

namespace qaga {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct QagaConfig {
  double theta = 0.0;       // fixing threshold, in [0, 0.5)
  int num_reads = 1000;     // samples per stage
  int max_stages = 64;      // hard guard on the stage loop
  std::shared_ptr<const Sampler> sampler;
  bool final_local_search = true;  // apply sqc to the assembled solution
  std::uint64_t seed = 0;   // stage t samples with child seed derive(seed, t)
  MqcPolicy mqc_policy;

  void validate() const {
    if (!(theta >= 0.0 && theta < 0.5))
      throw ConfigError("theta must be in [0, 0.5)");
    if (num_reads < 1) throw ConfigError("num_reads must be >= 1");
    if (max_stages < 1) throw ConfigError("max_stages must be >= 1");
    if (!sampler) throw ConfigError("sampler required");
  }
};

/// One stage of the loop: sizes before contraction, what got fixed, and the
/// best raw sampled energy completed to a full assignment where defined.
struct StageRecord {
  int stage = 0;
  int num_vars = 0;
  int num_couplers = 0;
  std::map<int, int> fixed;  // label -> spin fixed this stage
  double best_energy = 0.0;  // on the ORIGINAL model, via the partial assembly
};

struct QagaResult {
  Sample solution;           // covers all original variables
  double energy = 0.0;       // always recomputed on the original model
  std::vector<StageRecord> stages;
  bool used_mqc_fallback = false;
  bool used_incumbent = false;
};

/// Eq-style column uncertainty: 1 - |sum_j z_i^j| / n, in [0,1].
/// 0 iff all samples agree on variable i.
double estimate_uncertainty(const SampleSet& set, int label);

/// Sign of the column sum; requires a nonzero sum.
int majority_sign(const SampleSet& set, int label);

/// Variables whose uncertainty is <= theta, mapped to their majority sign.
std::map<int, int> select_fixable(const SampleSet& set, double theta);

/// Substitutes fixed spins into the Hamiltonian: biases of fixed variables
/// and couplers they touch disappear, neighbors' biases absorb c*J, and the
/// constant parts accumulate into the returned offset so that
/// E_original(fixed + r) = E_contracted(r) + offset for every residual r.
std::pair<IsingModel, double> contract(const IsingModel& model,
                                       const std::map<int, int>& fixed);

/// The stage loop: sample, fix low-uncertainty variables, contract; stop
/// when a stage fixes nothing, nothing remains, or max_stages is hit.
/// Leftover variables are assigned by mqc_reduce on the last stage's
/// samples. The assembled solution is optionally sqc-polished, then
/// compared against the incumbent (best raw sample completed to a full
/// assignment); the lower-energy one is returned, ties going to the
/// assembled solution.
QagaResult qaga_solve(const IsingModel& model, const QagaConfig& config);

struct StageTrace {
  int stage_count = 0;
  std::vector<int> vars_per_stage;
  std::vector<int> couplers_per_stage;
  std::vector<int> fixed_per_stage;
  bool used_mqc_fallback = false;
};

StageTrace stage_trace(const QagaResult& result);

/// Stage trace as a JSON array (fields t, vars, couplers, fixed,
/// best_energy), for the CLI report.
std::string stages_to_json(const QagaResult& result);

}  // namespace qaga
