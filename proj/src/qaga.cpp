#include "qaga/qaga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qaga/rng.hpp"
#include "json.hpp"

namespace qaga {

namespace {

long column_sum(const SampleSet& set, int label) {
  long sum = 0;
  for (const auto& s : set.samples) {
    auto it = s.assignment.find(label);
    if (it == s.assignment.end())
      throw DomainMismatchError("sample set has no variable " +
                                std::to_string(label));
    sum += it->second;
  }
  return sum;
}

}  // namespace

double estimate_uncertainty(const SampleSet& set, int label) {
  if (set.samples.empty()) throw std::invalid_argument("empty sample set");
  long sum = column_sum(set, label);
  return 1.0 - static_cast<double>(std::labs(sum)) / set.num_reads();
}

int majority_sign(const SampleSet& set, int label) {
  long sum = column_sum(set, label);
  if (sum == 0)
    throw std::logic_error("majority_sign on a zero-sum column (variable " +
                           std::to_string(label) + ")");
  return sum > 0 ? +1 : -1;
}

std::map<int, int> select_fixable(const SampleSet& set, double theta) {
  if (!(theta >= 0.0 && theta < 0.5))
    throw ConfigError("theta must be in [0, 0.5)");
  std::map<int, int> fixed;
  for (int label : set.labels)
    if (estimate_uncertainty(set, label) <= theta)
      fixed[label] = majority_sign(set, label);
  return fixed;
}

std::pair<IsingModel, double> contract(const IsingModel& model,
                                       const std::map<int, int>& fixed) {
  for (const auto& [label, spin] : fixed) {
    if (!model.has_variable(label))
      throw DomainMismatchError("fixing unknown variable " +
                                std::to_string(label));
    if (spin != -1 && spin != 1)
      throw DomainMismatchError("fixed value must be a spin");
  }

  double offset = 0.0;
  std::map<int, double> h;
  std::vector<int> labels;
  for (int label : model.labels())
    if (!fixed.count(label)) labels.push_back(label);
  for (const auto& [label, hi] : model.h()) {
    auto it = fixed.find(label);
    if (it != fixed.end())
      offset += it->second * hi;
    else
      h[label] += hi;
  }
  std::map<Edge, double> j;
  for (const auto& [edge, jij] : model.j()) {
    auto a = fixed.find(edge.first);
    auto b = fixed.find(edge.second);
    if (a != fixed.end() && b != fixed.end()) {
      offset += a->second * b->second * jij;
    } else if (a != fixed.end()) {
      h[edge.second] += a->second * jij;
    } else if (b != fixed.end()) {
      h[edge.first] += b->second * jij;
    } else {
      j[edge] = jij;
    }
  }
  std::map<int, double> h_clean;
  for (const auto& [label, v] : h)
    if (v != 0.0) h_clean[label] = v;
  return {IsingModel(std::move(labels), std::move(h_clean), std::move(j)),
          offset};
}

namespace {

Sample assemble(const std::map<int, int>& fixed, const Sample& residual) {
  Sample full;
  full.assignment = fixed;
  for (const auto& [label, spin] : residual.assignment)
    full.assignment[label] = spin;
  return full;
}

SampleSet restrict_to(const SampleSet& set, const std::vector<int>& labels) {
  SampleSet out;
  out.labels = labels;
  for (const auto& s : set.samples) {
    Sample r;
    for (int label : labels) r.assignment[label] = s.assignment.at(label);
    out.samples.push_back(std::move(r));
  }
  return out;
}

}  // namespace

QagaResult qaga_solve(const IsingModel& model, const QagaConfig& config) {
  config.validate();
  QagaResult result;

  std::map<int, int> fixed;          // accumulated assignment
  IsingModel current = model;        // the contracted Hamiltonian H^t
  std::optional<SampleSet> last_set;

  Sample incumbent;
  double incumbent_energy = std::numeric_limits<double>::infinity();

  for (int t = 0; t < config.max_stages && current.num_vars() > 0; ++t) {
    SampleSet set = config.sampler->sample(current, config.num_reads,
                                           rng::derive(config.seed, t));

    StageRecord record;
    record.stage = t;
    record.num_vars = current.num_vars();
    record.num_couplers = static_cast<int>(current.num_couplers());

    record.best_energy = std::numeric_limits<double>::infinity();
    for (const auto& s : set.samples) {
      Sample full = assemble(fixed, s);
      double e = ising_energy(model, full);
      record.best_energy = std::min(record.best_energy, e);
      if (e < incumbent_energy) {
        incumbent_energy = e;
        incumbent = std::move(full);
      }
    }

    std::map<int, int> fixable = select_fixable(set, config.theta);
    record.fixed = fixable;
    result.stages.push_back(std::move(record));
    last_set = std::move(set);

    if (fixable.empty()) break;  // H^{t+1} == H^t

    auto [contracted, off] = contract(current, fixable);
    current = std::move(contracted);
    fixed.insert(fixable.begin(), fixable.end());
  }

  if (current.num_vars() > 0) {
    // Assign leftovers from the last stage's samples. After a no-fix stage
    // the restriction is the identity; after guard exhaustion it projects
    // away the variables fixed meanwhile.
    result.used_mqc_fallback = true;
    if (!last_set) throw std::logic_error("no samples drawn before fallback");
    SampleSet residual_set = restrict_to(*last_set, current.labels());
    Sample completion = mqc_reduce(current, residual_set, config.mqc_policy);
    for (const auto& [label, spin] : completion.assignment)
      fixed[label] = spin;
  }

  Sample assembled;
  assembled.assignment = fixed;
  if (config.final_local_search) assembled = sqc(model, assembled);
  double assembled_energy = ising_energy(model, assembled);

  if (incumbent_energy < assembled_energy) {
    result.used_incumbent = true;
    result.solution = std::move(incumbent);
    result.energy = incumbent_energy;
  } else {
    result.solution = std::move(assembled);
    result.energy = assembled_energy;
  }
  result.solution.energy = result.energy;
  return result;
}

StageTrace stage_trace(const QagaResult& result) {
  StageTrace trace;
  trace.stage_count = static_cast<int>(result.stages.size());
  for (const auto& s : result.stages) {
    trace.vars_per_stage.push_back(s.num_vars);
    trace.couplers_per_stage.push_back(s.num_couplers);
    trace.fixed_per_stage.push_back(static_cast<int>(s.fixed.size()));
  }
  trace.used_mqc_fallback = result.used_mqc_fallback;
  return trace;
}

std::string stages_to_json(const QagaResult& result) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : result.stages) {
    nlohmann::json rec;
    rec["t"] = s.stage;
    rec["vars"] = s.num_vars;
    rec["couplers"] = s.num_couplers;
    nlohmann::json fixed = nlohmann::json::object();
    for (const auto& [label, spin] : s.fixed)
      fixed[std::to_string(label)] = spin;
    rec["fixed"] = std::move(fixed);
    rec["best_energy"] = s.best_energy;
    arr.push_back(std::move(rec));
  }
  return arr.dump();
}

}  // namespace qaga
