#include "qaga/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "qaga/rng.hpp"
#include "httplib.h"
#include "json.hpp"

namespace qaga {

namespace {

SampleSet make_set(const IsingModel& model) {
  SampleSet set;
  set.labels = model.labels();
  return set;
}

}  // namespace

// --- exact ------------------------------------------------------------------

SampleSet exact_sample(const IsingModel& model, int num_reads,
                       std::uint64_t seed) {
  if (model.num_vars() > kExactMaxVars)
    throw SamplerError("exact_sample: model exceeds " +
                       std::to_string(kExactMaxVars) + " variables");
  if (num_reads < 1) throw SamplerError("num_reads must be >= 1");

  IndexedModel im = IndexedModel::from(model);
  int n = im.size();
  std::uint64_t total = 1ULL << n;
  std::vector<std::uint64_t> minimizers;
  double best = 0.0;
  std::vector<signed char> z(n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < n; ++i) z[i] = (mask >> i) & 1 ? +1 : -1;
    double e = im.energy(z);
    if (minimizers.empty() || e < best) {
      best = e;
      minimizers.clear();
      minimizers.push_back(mask);
    } else if (e == best) {
      minimizers.push_back(mask);
    }
  }

  rng::Stream stream(seed);
  SampleSet set = make_set(model);
  for (int r = 0; r < num_reads; ++r) {
    std::uint64_t mask = minimizers[stream.next_below(minimizers.size())];
    for (int i = 0; i < n; ++i) z[i] = (mask >> i) & 1 ? +1 : -1;
    Sample s = im.to_sample(z);
    s.energy = best;
    set.samples.push_back(std::move(s));
  }
  return set;
}

// --- simulated annealing ----------------------------------------------------

namespace {

struct SaPlan {
  IndexedModel im;
  std::vector<double> betas;  // one per sweep, geometric in beta

  SaPlan(const IsingModel& model, const SaConfig& cfg)
      : im(IndexedModel::from(model)) {
    betas.resize(cfg.num_sweeps);
    if (cfg.num_sweeps == 1) {
      betas[0] = cfg.beta_initial;
    } else {
      double ratio = cfg.beta_final / cfg.beta_initial;
      for (int t = 0; t < cfg.num_sweeps; ++t)
        betas[t] = cfg.beta_initial *
                   std::pow(ratio, static_cast<double>(t) /
                                       (cfg.num_sweeps - 1));
    }
  }
};

Sample run_chain(const SaPlan& plan, std::uint64_t chain_seed) {
  const IndexedModel& im = plan.im;
  int n = im.size();
  rng::Stream stream(chain_seed);
  std::vector<signed char> z(n);
  for (int i = 0; i < n; ++i) z[i] = static_cast<signed char>(stream.next_spin());

  // local field f_i = h_i + sum_j J_ij z_j, maintained incrementally
  std::vector<double> field(im.h);
  for (const auto& [a, b, jij] : im.edges) {
    field[a] += jij * z[b];
    field[b] += jij * z[a];
  }

  for (double beta : plan.betas) {
    for (int i = 0; i < n; ++i) {
      double delta = -2.0 * z[i] * field[i];
      bool accept = delta <= 0.0 ||
                    stream.next_double() < std::exp(-beta * delta);
      if (accept) {
        z[i] = static_cast<signed char>(-z[i]);
        for (const auto& [nbr, jij] : im.adj[i])
          field[nbr] += 2.0 * jij * z[i];
      }
    }
  }

  Sample s = im.to_sample(z);
  s.energy = im.energy(z);
  return s;
}

}  // namespace

SampleSet sa_sample_reference(const IsingModel& model, int num_reads,
                              std::uint64_t seed, const SaConfig& config) {
  config.validate();
  if (num_reads < 1) throw SamplerError("num_reads must be >= 1");
  SaPlan plan(model, config);
  SampleSet set = make_set(model);
  set.samples.resize(num_reads);
  for (int r = 0; r < num_reads; ++r)
    set.samples[r] = run_chain(plan, rng::derive(seed, r));
  return set;
}

SampleSet sa_sample(const IsingModel& model, int num_reads, std::uint64_t seed,
                    const SaConfig& config) {
  config.validate();
  if (num_reads < 1) throw SamplerError("num_reads must be >= 1");
  SaPlan plan(model, config);
  SampleSet set = make_set(model);
  set.samples.resize(num_reads);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < num_reads; ++r)
    set.samples[r] = run_chain(plan, rng::derive(seed, r));
  return set;
}

// --- gauge averaging --------------------------------------------------------

SampleSet gauge_averaged_sample(const Sampler& inner, int k,
                                const IsingModel& model, int num_reads,
                                std::uint64_t seed) {
  if (k < 1) throw SamplerError("k must be >= 1");
  if (num_reads < k)
    throw SamplerError("num_reads must be >= number of gauges");

  SampleSet set = make_set(model);
  int base = num_reads / k;
  int remainder = num_reads % k;
  for (int g = 0; g < k; ++g) {
    int reads_here = base + (g < remainder ? 1 : 0);
    Gauge gauge = (g == 0) ? identity_gauge(model)
                           : random_gauge(model, rng::derive(seed, 1, g));
    IsingModel gauged = apply_gauge(model, gauge);
    SampleSet inner_set =
        inner.sample(gauged, reads_here, rng::derive(seed, 2, g));
    for (const auto& s : inner_set.samples) {
      Sample original = ungauge_sample(s, gauge);
      original.energy = ising_energy(model, original);
      set.samples.push_back(std::move(original));
    }
  }
  return set;
}

// --- remote client ----------------------------------------------------------

SampleSet remote_sample(const std::string& endpoint, const IsingModel& model,
                        int num_reads, std::uint64_t seed,
                        double timeout_seconds) {
  if (num_reads < 1) throw SamplerError("num_reads must be >= 1");
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw RemoteTransportError("endpoint must be a http URL: " + endpoint, "");
  auto path_start = endpoint.find('/', scheme_end + 3);
  std::string host = path_start == std::string::npos
                         ? endpoint
                         : endpoint.substr(0, path_start);
  std::string path =
      path_start == std::string::npos ? "/" : endpoint.substr(path_start);

  nlohmann::json request = nlohmann::json::parse(model_to_json(model));
  request["num_reads"] = num_reads;
  request["seed"] = seed;

  httplib::Client client(host);
  auto seconds = static_cast<time_t>(timeout_seconds);
  auto micros = static_cast<time_t>((timeout_seconds - seconds) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);

  auto result = client.Post(path, request.dump(), "application/json");
  if (!result)
    throw RemoteTransportError(
        "transport failure contacting " + endpoint + ": " +
            httplib::to_string(result.error()),
        "");
  if (result->status != 200)
    throw RemoteTransportError(
        "remote returned status " + std::to_string(result->status),
        result->body);

  SampleSet set;
  try {
    set = sampleset_from_json(result->body);
  } catch (const DomainMismatchError&) {
    throw;
  } catch (const std::exception& e) {
    throw RemoteMalformedResponse(
        std::string("malformed remote response: ") + e.what(), result->body);
  }
  if (set.num_reads() != num_reads)
    throw RemoteMalformedResponse(
        "remote returned " + std::to_string(set.num_reads()) + " reads, want " +
            std::to_string(num_reads),
        result->body);
  // never trust remote energies
  for (auto& s : set.samples) s.energy = ising_energy(model, s);
  set.labels = model.labels();
  return set;
}

}  // namespace qaga
