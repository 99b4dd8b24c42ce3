#include "qaga/postprocess.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qaga {

namespace {

int spin_of(const Sample& s, int label) {
  auto it = s.assignment.find(label);
  if (it == s.assignment.end())
    throw DomainMismatchError("sample missing variable " +
                              std::to_string(label));
  return it->second;
}

}  // namespace

Sample mqc_pair(const IsingModel& model, const Sample& a, const Sample& b,
                const MqcPolicy& policy) {
  (void)policy;  // single tie-break variant for now
  std::vector<int> disagree;
  for (int label : model.labels())
    if (spin_of(a, label) != spin_of(b, label)) disagree.push_back(label);
  if (disagree.empty()) {
    Sample out = a;
    out.energy.reset();
    return out;
  }

  Sample out = a;
  out.energy.reset();
  std::set<int> disagree_set(disagree.begin(), disagree.end());

  // No coupler joins two distinct components of the disagreement set, so
  // each component's parent choice is energy-independent of the others.
  for (const auto& comp : connected_components(model, disagree)) {
    std::set<int> members(comp.begin(), comp.end());
    // Energy delta of switching this component from a's values to b's.
    // Spins outside the disagreement set agree between parents, and spins
    // in other components carry no couplers into this one.
    double delta = 0.0;
    for (int i : comp) {
      int za = spin_of(a, i);
      int zb = spin_of(b, i);
      delta += model.bias(i) * (zb - za);
    }
    for (const auto& [edge, jij] : model.j()) {
      bool first_in = members.count(edge.first) > 0;
      bool second_in = members.count(edge.second) > 0;
      if (!first_in && !second_in) continue;
      if (first_in && second_in) {
        delta += jij * (spin_of(b, edge.first) * spin_of(b, edge.second) -
                        spin_of(a, edge.first) * spin_of(a, edge.second));
      } else {
        int inside = first_in ? edge.first : edge.second;
        int outside = first_in ? edge.second : edge.first;
        // the endpoint outside this component cannot disagree (it would be
        // in the same component), so both parents agree on its value
        delta += jij * spin_of(a, outside) *
                 (spin_of(b, inside) - spin_of(a, inside));
      }
    }
    if (delta < 0.0) {
      for (int i : comp) out.assignment[i] = spin_of(b, i);
    }
  }
  return out;
}

Sample mqc_reduce(const IsingModel& model, const SampleSet& set,
                  const MqcPolicy& policy) {
  if (set.samples.empty())
    throw std::invalid_argument("mqc_reduce: empty SampleSet");
  Sample acc = set.samples.front();
  acc.energy.reset();
  for (std::size_t i = 1; i < set.samples.size(); ++i)
    acc = mqc_pair(model, acc, set.samples[i], policy);
  acc.energy = ising_energy(model, acc);
  return acc;
}

Sample sqc(const IsingModel& model, const Sample& z) {
  IndexedModel im = IndexedModel::from(model);
  int n = im.size();
  std::vector<signed char> spins(n);
  for (int i = 0; i < n; ++i)
    spins[i] = static_cast<signed char>(spin_of(z, im.labels[i]));

  std::vector<double> field(im.h);
  for (const auto& [a, b, jij] : im.edges) {
    field[a] += jij * spins[b];
    field[b] += jij * spins[a];
  }

  for (;;) {
    int best = -1;
    double best_delta = 0.0;
    for (int i = 0; i < n; ++i) {
      double delta = -2.0 * spins[i] * field[i];
      if (delta < best_delta) {  // strict: ties keep the smaller label
        best_delta = delta;
        best = i;
      }
    }
    if (best < 0) break;
    spins[best] = static_cast<signed char>(-spins[best]);
    for (const auto& [nbr, jij] : im.adj[best])
      field[nbr] += 2.0 * jij * spins[best];
  }

  Sample out = im.to_sample(spins);
  out.energy = im.energy(spins);
  return out;
}

}  // namespace qaga
