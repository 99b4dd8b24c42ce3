#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaga {

/// Thrown when an assignment or gauge does not cover a model's variable set.
struct DomainMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown on invalid model construction (self-coupler, non-finite value, ...).
struct ModelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

using Edge = std::pair<int, int>;  // always stored with first < second

/// Sparse Ising Hamiltonian  E(z) = sum_i h_i z_i + sum_{i<j} J_ij z_i z_j.
///
/// Labels are stable identifiers, not indices: contraction removes variables
/// without renumbering the survivors. Absent coefficients are exactly zero
/// and never stored. Immutable after construction.
class IsingModel {
 public:
  /// Variable set = label_set; h keys and J endpoints must be subsets.
  IsingModel(std::vector<int> labels, std::map<int, double> h,
             std::map<Edge, double> j);

  /// Variable set inferred as union of h keys and J endpoints.
  IsingModel(std::map<int, double> h, std::map<Edge, double> j);

  int num_vars() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels() const { return labels_; }  // sorted
  bool has_variable(int label) const;

  const std::map<int, double>& h() const { return h_; }
  const std::map<Edge, double>& j() const { return j_; }

  double bias(int i) const;           // 0.0 if absent
  double coupler(int i, int j) const; // either order; 0.0 if absent

  std::size_t num_couplers() const { return j_.size(); }

 private:
  void validate() const;

  std::vector<int> labels_;
  std::map<int, double> h_;
  std::map<Edge, double> j_;
};

/// One spin assignment over a model's variable set.
struct Sample {
  std::map<int, int> assignment;  // label -> spin in {-1,+1}
  std::optional<double> energy;
};

/// An ordered multiset of samples sharing one variable set.
struct SampleSet {
  std::vector<Sample> samples;
  std::vector<int> labels;  // variable set the samples cover, sorted

  int num_reads() const { return static_cast<int>(samples.size()); }
};

/// QUBO form  E(x) = sum_{i<=j} x_i Q_ij x_j  with x in {0,1}.
/// offset links it to the Ising energy: E_ising(z) = E_qubo(x) + offset
/// under z = 2x - 1.
struct QuboModel {
  int num_vars = 0;
  std::map<Edge, double> q;  // (i,j) with i <= j; diagonal = linear term
  double offset = 0.0;
};

/// Spin-reversal transform vector.
struct Gauge {
  std::map<int, int> g;  // label -> spin in {-1,+1}
};

enum class Distribution { Binary, Uniform, Normal };

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& name);

/// Random-instance parameters: edge probability `sparsity`, coefficient law
/// `distribution`, deterministic in `seed`.
struct ProblemSpec {
  int num_vars = 1;
  double sparsity = 1.0;
  Distribution distribution = Distribution::Normal;
  std::uint64_t seed = 0;
};

// --- energies ---------------------------------------------------------------

double ising_energy(const IsingModel& model, const Sample& z);

/// Quadratic form only; callers add qubo.offset when comparing to Ising.
double qubo_energy(const QuboModel& qubo, const std::map<int, int>& x);

// --- transforms -------------------------------------------------------------

QuboModel ising_to_qubo(const IsingModel& model);

/// Inverse of ising_to_qubo. Returned offset satisfies
/// E_qubo(x) + qubo.offset = E_ising(z), i.e. it folds the QUBO offset back.
std::pair<IsingModel, double> qubo_to_ising(const QuboModel& qubo);

/// h'_i = g_i h_i, J'_ij = g_i g_j J_ij. Energy-preserving under z' = g.z.
IsingModel apply_gauge(const IsingModel& model, const Gauge& g);

Sample ungauge_sample(const Sample& z_gauged, const Gauge& g);

Gauge identity_gauge(const IsingModel& model);
Gauge random_gauge(const IsingModel& model, std::uint64_t seed);

/// Divides all coefficients by scale = max(max|h|/2, max|J|, 1) so that
/// h lands in [-2,2] and J in [-1,1]. Never upscales.
std::pair<IsingModel, double> normalize(const IsingModel& model);

// --- generation -------------------------------------------------------------

/// Labels 1..N. Every bias present; each of the N(N-1)/2 edges kept
/// independently with probability `sparsity`. Byte-reproducible per seed.
IsingModel random_model(const ProblemSpec& spec);

// --- graph utilities --------------------------------------------------------

/// Connected components of the coupling graph induced on `subset`,
/// ordered by smallest member label.
std::vector<std::vector<int>> connected_components(
    const IsingModel& model, const std::vector<int>& subset);

// --- serialization ----------------------------------------------------------

std::string model_to_json(const IsingModel& model, double offset = 0.0);
std::pair<IsingModel, double> model_from_json(const std::string& text);

std::string sampleset_to_json(const SampleSet& set, const IsingModel& model);
SampleSet sampleset_from_json(const std::string& text);

/// FNV-1a 64 over the canonical model JSON, as a lowercase hex string.
std::string model_digest(const IsingModel& model);

// --- internal dense view ----------------------------------------------------

/// Index-based view of a model for hot loops (SA sweeps, enumeration).
struct IndexedModel {
  std::vector<int> labels;  // index -> label, sorted
  std::vector<double> h;    // by index
  std::vector<std::vector<std::pair<int, double>>> adj;  // (neighbor idx, J)
  std::vector<std::tuple<int, int, double>> edges;       // (i, j, J), i < j

  static IndexedModel from(const IsingModel& model);

  int size() const { return static_cast<int>(labels.size()); }

  double energy(const std::vector<signed char>& z) const;
  Sample to_sample(const std::vector<signed char>& z) const;
};

}  // namespace qaga
