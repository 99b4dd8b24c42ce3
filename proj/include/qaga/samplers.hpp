#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "qaga/ising.hpp"

namespace qaga {

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Drop-in stand-in for the annealer: n reads from a model, deterministic
/// per seed. Implementations are stateless across calls; concurrent calls
/// with distinct seeds must not interfere.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual SampleSet sample(const IsingModel& model, int num_reads,
                           std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

// --- exact enumeration ------------------------------------------------------

inline constexpr int kExactMaxVars = 24;

/// Enumerates all 2^N configurations and returns num_reads draws uniformly
/// from the set of global minimizers. Verification oracle; N <= 24.
SampleSet exact_sample(const IsingModel& model, int num_reads,
                       std::uint64_t seed);

class ExactSampler final : public Sampler {
 public:
  SampleSet sample(const IsingModel& model, int num_reads,
                   std::uint64_t seed) const override {
    return exact_sample(model, num_reads, seed);
  }
  std::string name() const override { return "exact"; }
};

// --- simulated annealing ----------------------------------------------------

/// Metropolis single-spin-flip schedule. Defaults reliably ground-solve
/// small (N <= 12) instances; they are engineering choices, not a tuned
/// reproduction of any hardware behavior.
struct SaConfig {
  int num_sweeps = 1000;
  double beta_initial = 0.1;
  double beta_final = 10.0;

  void validate() const {
    if (num_sweeps < 1) throw SamplerError("num_sweeps must be >= 1");
    if (!(beta_initial > 0.0) || !(beta_final > beta_initial))
      throw SamplerError("require beta_final > beta_initial > 0");
  }
};

/// One independent Metropolis chain per read: random initial spins,
/// num_sweeps full sweeps, beta interpolated geometrically. Read r uses
/// child seed derive(seed, r), so output is independent of scheduling.
/// Runs reads OpenMP-parallel; bit-identical to sa_sample_reference.
SampleSet sa_sample(const IsingModel& model, int num_reads, std::uint64_t seed,
                    const SaConfig& config = {});

/// Serial reference implementation of sa_sample, kept for testing and
/// benchmarking against the parallel kernel.
SampleSet sa_sample_reference(const IsingModel& model, int num_reads,
                              std::uint64_t seed, const SaConfig& config = {});

class SaSampler final : public Sampler {
 public:
  explicit SaSampler(SaConfig config = {}) : config_(config) {
    config_.validate();
  }
  SampleSet sample(const IsingModel& model, int num_reads,
                   std::uint64_t seed) const override {
    return sa_sample(model, num_reads, seed, config_);
  }
  std::string name() const override { return "sa"; }
  const SaConfig& config() const { return config_; }

 private:
  SaConfig config_;
};

// --- gauge averaging --------------------------------------------------------

/// Samples under k spin-reversal transforms (first = identity, rest drawn
/// fresh per call), un-gauges, and concatenates. Reads split as evenly as
/// possible; the remainder goes to the earliest gauges.
SampleSet gauge_averaged_sample(const Sampler& inner, int k,
                                const IsingModel& model, int num_reads,
                                std::uint64_t seed);

class GaugeAveragedSampler final : public Sampler {
 public:
  GaugeAveragedSampler(std::shared_ptr<const Sampler> inner, int k)
      : inner_(std::move(inner)), k_(k) {
    if (!inner_) throw SamplerError("inner sampler required");
    if (k_ < 1) throw SamplerError("k must be >= 1");
  }
  SampleSet sample(const IsingModel& model, int num_reads,
                   std::uint64_t seed) const override {
    return gauge_averaged_sample(*inner_, k_, model, num_reads, seed);
  }
  std::string name() const override {
    return "gauge(" + inner_->name() + ",k=" + std::to_string(k_) + ")";
  }

 private:
  std::shared_ptr<const Sampler> inner_;
  int k_;
};

// --- remote client ----------------------------------------------------------

struct RemoteError : SamplerError {
  RemoteError(const std::string& what, std::string payload_)
      : SamplerError(what), payload(std::move(payload_)) {}
  std::string payload;  // raw response body, for diagnosis
};
struct RemoteTransportError : RemoteError {
  using RemoteError::RemoteError;
};
struct RemoteMalformedResponse : RemoteError {
  using RemoteError::RemoteError;
};

/// POSTs the model JSON plus {"num_reads", "seed"} to `endpoint`
/// (e.g. "http://127.0.0.1:8080/sample"), parses the SampleSet response,
/// validates the sample domain, and recomputes all energies locally.
SampleSet remote_sample(const std::string& endpoint, const IsingModel& model,
                        int num_reads, std::uint64_t seed,
                        double timeout_seconds = 30.0);

class RemoteSampler final : public Sampler {
 public:
  explicit RemoteSampler(std::string endpoint, double timeout_seconds = 30.0)
      : endpoint_(std::move(endpoint)), timeout_(timeout_seconds) {}
  SampleSet sample(const IsingModel& model, int num_reads,
                   std::uint64_t seed) const override {
    return remote_sample(endpoint_, model, num_reads, seed, timeout_);
  }
  std::string name() const override { return "remote"; }

 private:
  std::string endpoint_;
  double timeout_;
};

}  // namespace qaga
