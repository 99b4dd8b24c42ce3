#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qaga/qaga.hpp"
#include "qaga/samplers.hpp"

namespace qaga::bench {

enum class Verdict { Win, Tie, Loss };  // from QAGA's point of view

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// QAGA wins when its energy is lower by more than the tie tolerance.
inline constexpr double kTieTolerance = 1e-9;
Verdict compare_energies(double qaga_energy, double baseline_energy);

/// Experiment A protocol: random problems per (distribution, sparsity)
/// cell, QAGA vs gauge-averaged sampling (QA) vs MQC over the QA samples.
struct ExperimentAConfig {
  int num_problems = 100;
  int num_vars = 50;
  std::vector<double> sparsities{0.05, 0.25, 0.5, 0.75, 1.0};
  std::vector<Distribution> distributions{
      Distribution::Binary, Distribution::Uniform, Distribution::Normal};
  int num_reads = 1000;
  int gauges = 10;
  double theta = 0.0;
  int max_stages = 64;
  SaConfig sa;
  std::uint64_t seed = 0;
};

/// Experiment B protocol: mean stage count over a theta grid, normal
/// coefficients only.
struct ExperimentBConfig {
  std::vector<double> thetas{0.25, 0.15, 0.05, 0.00};
  int num_problems = 100;
  int num_vars = 50;
  std::vector<double> sparsities{0.05, 0.25, 0.5, 0.75, 1.0};
  int num_reads = 1000;
  int gauges = 10;
  int max_stages = 64;
  SaConfig sa;
  bool use_exact_sampler = false;  // enumeration oracle instead of SA
  std::uint64_t seed = 0;
};

struct ComparisonRecord {
  std::string distribution;
  double sparsity = 0.0;
  int problem_index = 0;
  std::uint64_t problem_seed = 0;
  double qa_energy = 0.0;
  double mqc_energy = 0.0;
  double qaga_energy = 0.0;
  Verdict vs_qa = Verdict::Tie;
  Verdict vs_mqc = Verdict::Tie;
  int stages = 0;
  double wall_time_seconds = 0.0;  // informational; not persisted
  bool failed = false;
  std::string error;
};

struct CellCounts {
  std::string distribution;
  double sparsity = 0.0;
  int wins_vs_qa = 0, ties_vs_qa = 0, losses_vs_qa = 0;
  int wins_vs_mqc = 0, ties_vs_mqc = 0, losses_vs_mqc = 0;
};

struct ExperimentAReport {
  std::vector<ComparisonRecord> records;  // problem-index order per cell
  std::vector<CellCounts> cells;
  int num_failed = 0;
};

struct ExperimentBReport {
  // means[theta_index][sparsity_index]
  std::vector<std::vector<double>> means;
  std::vector<double> thetas;
  std::vector<double> sparsities;
  int num_failed = 0;
};

/// Seed splitting: problem seed = derive(master, 10, dist_idx, sp_idx) then
/// derive(., problem_idx); per-method seeds derive from the problem seed
/// with tags 1 (QA sampling) and 2 (QAGA). Reports are pure functions of
/// the config; failed problems are recorded and skipped.
ExperimentAReport run_experiment_a(const ExperimentAConfig& config);
ExperimentBReport run_experiment_b(const ExperimentBConfig& config);

// --- persistence ------------------------------------------------------------

/// Lossless one-record-per-row CSV. Header:
/// distribution,sparsity,problem_index,problem_seed,qa_energy,mqc_energy,
/// qaga_energy,vs_qa,vs_mqc,stages,failed,error
std::string records_to_csv(const std::vector<ComparisonRecord>& records);
std::vector<ComparisonRecord> records_from_csv(const std::string& text);

/// Long-format win/tie/loss counts, one (cell, baseline, verdict) per row.
std::string cells_to_csv(const std::vector<CellCounts>& cells);

std::string report_to_json(const ExperimentAReport& report);

std::string table_to_csv(const ExperimentBReport& report);
std::string table_to_json(const ExperimentBReport& report);

/// Writes records CSV, long-format cells CSV, and the JSON summary under
/// `prefix` (prefix.records.csv, prefix.cells.csv, prefix.summary.json).
void persist_experiment_a(const ExperimentAReport& report,
                          const std::string& prefix);
void persist_experiment_b(const ExperimentBReport& report,
                          const std::string& prefix);

}  // namespace qaga::bench
