#include "qaga/ising.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "qaga/rng.hpp"
#include "json.hpp"

namespace qaga {

IsingModel::IsingModel(std::vector<int> labels, std::map<int, double> h,
                       std::map<Edge, double> j)
    : labels_(std::move(labels)), h_(std::move(h)), j_(std::move(j)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  validate();
}

IsingModel::IsingModel(std::map<int, double> h, std::map<Edge, double> j)
    : h_(std::move(h)), j_(std::move(j)) {
  std::set<int> labels;
  for (const auto& [i, v] : h_) labels.insert(i);
  for (const auto& [e, v] : j_) {
    labels.insert(e.first);
    labels.insert(e.second);
  }
  labels_.assign(labels.begin(), labels.end());
  validate();
}

void IsingModel::validate() const {
  for (const auto& [i, v] : h_) {
    if (!std::isfinite(v)) throw ModelError("non-finite bias");
    if (!has_variable(i)) throw ModelError("bias on unknown variable");
  }
  for (const auto& [e, v] : j_) {
    if (e.first == e.second) throw ModelError("self-coupler");
    if (e.first > e.second) throw ModelError("coupler key not ordered i<j");
    if (!std::isfinite(v)) throw ModelError("non-finite coupler");
    if (!has_variable(e.first) || !has_variable(e.second))
      throw ModelError("coupler on unknown variable");
  }
}

bool IsingModel::has_variable(int label) const {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

double IsingModel::bias(int i) const {
  auto it = h_.find(i);
  return it == h_.end() ? 0.0 : it->second;
}

double IsingModel::coupler(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = j_.find({i, j});
  return it == j_.end() ? 0.0 : it->second;
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Binary: return "binary";
    case Distribution::Uniform: return "uniform";
    case Distribution::Normal: return "normal";
  }
  return "?";
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "binary") return Distribution::Binary;
  if (name == "uniform") return Distribution::Uniform;
  if (name == "normal") return Distribution::Normal;
  throw std::invalid_argument("unknown distribution: " + name);
}

namespace {

int spin_at(const Sample& z, int label) {
  auto it = z.assignment.find(label);
  if (it == z.assignment.end())
    throw DomainMismatchError("assignment missing variable " +
                              std::to_string(label));
  int s = it->second;
  if (s != -1 && s != 1)
    throw DomainMismatchError("non-spin value for variable " +
                              std::to_string(label));
  return s;
}

}  // namespace

double ising_energy(const IsingModel& model, const Sample& z) {
  if (z.assignment.size() != static_cast<std::size_t>(model.num_vars()))
    throw DomainMismatchError("assignment size does not match variable set");
  double e = 0.0;
  for (const auto& [i, hi] : model.h()) e += hi * spin_at(z, i);
  for (const auto& [edge, jij] : model.j())
    e += jij * spin_at(z, edge.first) * spin_at(z, edge.second);
  // variables with no coefficients still must be covered
  for (int label : model.labels()) (void)spin_at(z, label);
  return e;
}

double qubo_energy(const QuboModel& qubo, const std::map<int, int>& x) {
  for (const auto& [i, xi] : x)
    if (xi != 0 && xi != 1)
      throw DomainMismatchError("non-binary value in QUBO assignment");
  double e = 0.0;
  for (const auto& [edge, q] : qubo.q) {
    auto a = x.find(edge.first);
    auto b = x.find(edge.second);
    if (a == x.end() || b == x.end())
      throw DomainMismatchError("QUBO assignment missing variable");
    e += q * a->second * b->second;
  }
  return e;
}

QuboModel ising_to_qubo(const IsingModel& model) {
  QuboModel qubo;
  qubo.num_vars = model.num_vars();
  double offset = 0.0;
  std::map<int, double> diag;
  for (const auto& [i, hi] : model.h()) {
    diag[i] += 2.0 * hi;
    offset -= hi;
  }
  for (const auto& [edge, jij] : model.j()) {
    qubo.q[{edge.first, edge.second}] += 4.0 * jij;
    diag[edge.first] -= 2.0 * jij;
    diag[edge.second] -= 2.0 * jij;
    offset += jij;
  }
  for (int label : model.labels()) {
    auto it = diag.find(label);
    if (it != diag.end() && it->second != 0.0) qubo.q[{label, label}] = it->second;
  }
  qubo.offset = offset;
  return qubo;
}

std::pair<IsingModel, double> qubo_to_ising(const QuboModel& qubo) {
  std::map<int, double> h;
  std::map<Edge, double> j;
  std::set<int> labels;
  for (const auto& [edge, q] : qubo.q) {
    labels.insert(edge.first);
    labels.insert(edge.second);
    if (edge.first == edge.second) {
      h[edge.first] += q / 2.0;
    } else {
      double jij = q / 4.0;
      if (jij != 0.0) j[{edge.first, edge.second}] = jij;
      h[edge.first] += jij;
      h[edge.second] += jij;
    }
  }
  std::map<int, double> h_clean;
  for (const auto& [i, v] : h)
    if (v != 0.0) h_clean[i] = v;
  IsingModel model(std::vector<int>(labels.begin(), labels.end()),
                   std::move(h_clean), std::move(j));
  // Constant picked up by substituting x = (z+1)/2, folded with the QUBO's
  // own offset so that E_qubo(x) + qubo.offset = E_ising(z) + returned offset.
  double constant = 0.0;
  for (const auto& [edge, q] : qubo.q)
    constant += (edge.first == edge.second) ? q / 2.0 : q / 4.0;
  return {std::move(model), constant + qubo.offset};
}

namespace {

int gauge_at(const Gauge& g, int label) {
  auto it = g.g.find(label);
  if (it == g.g.end())
    throw DomainMismatchError("gauge missing variable " +
                              std::to_string(label));
  if (it->second != -1 && it->second != 1)
    throw DomainMismatchError("non-spin gauge value");
  return it->second;
}

}  // namespace

IsingModel apply_gauge(const IsingModel& model, const Gauge& g) {
  std::map<int, double> h;
  std::map<Edge, double> j;
  for (const auto& [i, hi] : model.h()) h[i] = gauge_at(g, i) * hi;
  for (const auto& [edge, jij] : model.j())
    j[edge] = gauge_at(g, edge.first) * gauge_at(g, edge.second) * jij;
  for (int label : model.labels()) (void)gauge_at(g, label);
  return IsingModel(model.labels(), std::move(h), std::move(j));
}

Sample ungauge_sample(const Sample& z_gauged, const Gauge& g) {
  Sample out;
  for (const auto& [i, s] : z_gauged.assignment)
    out.assignment[i] = gauge_at(g, i) * s;
  return out;
}

Gauge identity_gauge(const IsingModel& model) {
  Gauge g;
  for (int label : model.labels()) g.g[label] = +1;
  return g;
}

Gauge random_gauge(const IsingModel& model, std::uint64_t seed) {
  rng::Stream stream(seed);
  Gauge g;
  for (int label : model.labels()) g.g[label] = stream.next_spin();
  return g;
}

std::pair<IsingModel, double> normalize(const IsingModel& model) {
  double scale = 1.0;
  for (const auto& [i, hi] : model.h())
    scale = std::max(scale, std::abs(hi) / 2.0);
  for (const auto& [e, jij] : model.j())
    scale = std::max(scale, std::abs(jij));
  if (scale == 1.0) return {model, 1.0};
  std::map<int, double> h;
  std::map<Edge, double> j;
  for (const auto& [i, hi] : model.h()) h[i] = hi / scale;
  for (const auto& [e, jij] : model.j()) j[e] = jij / scale;
  return {IsingModel(model.labels(), std::move(h), std::move(j)), scale};
}

namespace {

// Stream ids for random_model: kind 1 = edge decision, kind 2 = coupler
// value, kind 3 = bias value.
double draw_coefficient(rng::Stream& s, Distribution dist) {
  switch (dist) {
    case Distribution::Binary: return s.next_spin() > 0 ? 1.0 : -1.0;
    case Distribution::Uniform: return 2.0 * s.next_double() - 1.0;
    case Distribution::Normal: return s.next_normal();
  }
  return 0.0;
}

}  // namespace

IsingModel random_model(const ProblemSpec& spec) {
  if (spec.num_vars < 1) throw ModelError("num_vars must be >= 1");
  if (spec.sparsity < 0.0 || spec.sparsity > 1.0)
    throw ModelError("sparsity must be in [0,1]");
  std::vector<int> labels;
  std::map<int, double> h;
  std::map<Edge, double> j;
  for (int i = 1; i <= spec.num_vars; ++i) {
    labels.push_back(i);
    rng::Stream s(rng::derive(spec.seed, 3, i));
    h[i] = draw_coefficient(s, spec.distribution);
  }
  for (int i = 1; i <= spec.num_vars; ++i) {
    for (int k = i + 1; k <= spec.num_vars; ++k) {
      rng::Stream pick(rng::derive(spec.seed, 1, i, k));
      if (pick.next_double() < spec.sparsity) {
        rng::Stream val(rng::derive(spec.seed, 2, i, k));
        j[{i, k}] = draw_coefficient(val, spec.distribution);
      }
    }
  }
  return IsingModel(std::move(labels), std::move(h), std::move(j));
}

std::vector<std::vector<int>> connected_components(
    const IsingModel& model, const std::vector<int>& subset) {
  std::set<int> members(subset.begin(), subset.end());
  for (int label : members)
    if (!model.has_variable(label))
      throw DomainMismatchError("subset member not in model");
  std::map<int, std::vector<int>> adj;
  for (const auto& [edge, jij] : model.j()) {
    if (jij == 0.0) continue;
    if (members.count(edge.first) && members.count(edge.second)) {
      adj[edge.first].push_back(edge.second);
      adj[edge.second].push_back(edge.first);
    }
  }
  std::vector<std::vector<int>> components;
  std::set<int> seen;
  for (int start : members) {  // std::set iterates in label order
    if (seen.count(start)) continue;
    std::vector<int> comp;
    std::queue<int> frontier;
    frontier.push(start);
    seen.insert(start);
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      comp.push_back(v);
      for (int w : adj[v]) {
        if (!seen.count(w)) {
          seen.insert(w);
          frontier.push(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

// --- serialization ----------------------------------------------------------

using nlohmann::json;

std::string model_to_json(const IsingModel& model, double offset) {
  json doc;
  doc["num_vars"] = model.num_vars();
  json h = json::object();
  for (const auto& [i, hi] : model.h()) h[std::to_string(i)] = hi;
  json j = json::object();
  for (const auto& [edge, jij] : model.j())
    j[std::to_string(edge.first) + "," + std::to_string(edge.second)] = jij;
  doc["h"] = std::move(h);
  doc["J"] = std::move(j);
  doc["offset"] = offset;
  return doc.dump();
}

namespace {

int parse_label(const std::string& s) {
  std::size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw ModelError("bad label: " + s);
  return v;
}

}  // namespace

std::pair<IsingModel, double> model_from_json(const std::string& text) {
  json doc = json::parse(text);
  std::map<int, double> h;
  std::map<Edge, double> j;
  std::vector<int> labels;
  for (const auto& [key, val] : doc.at("h").items())
    h[parse_label(key)] = val.get<double>();
  for (const auto& [key, val] : doc.at("J").items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw ModelError("bad coupler key: " + key);
    int a = parse_label(key.substr(0, comma));
    int b = parse_label(key.substr(comma + 1));
    if (a == b) throw ModelError("self-coupler in JSON");
    if (a > b) std::swap(a, b);  // lenient on read
    j[{a, b}] += val.get<double>();
  }
  for (const auto& [i, v] : h) labels.push_back(i);
  for (const auto& [e, v] : j) {
    labels.push_back(e.first);
    labels.push_back(e.second);
  }
  double offset = doc.value("offset", 0.0);
  IsingModel model(std::move(labels), std::move(h), std::move(j));
  if (doc.contains("num_vars") &&
      doc.at("num_vars").get<int>() != model.num_vars())
    throw ModelError("num_vars does not match coefficient maps");
  return {std::move(model), offset};
}

std::string model_digest(const IsingModel& model) {
  std::string canonical = model_to_json(model);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

std::string sampleset_to_json(const SampleSet& set, const IsingModel& model) {
  json doc;
  json samples = json::array();
  for (const auto& s : set.samples) {
    json entry;
    json assignment = json::object();
    for (const auto& [i, v] : s.assignment) assignment[std::to_string(i)] = v;
    entry["assignment"] = std::move(assignment);
    entry["energy"] = s.energy ? *s.energy : ising_energy(model, s);
    samples.push_back(std::move(entry));
  }
  doc["samples"] = std::move(samples);
  doc["model_digest"] = model_digest(model);
  return doc.dump();
}

SampleSet sampleset_from_json(const std::string& text) {
  json doc = json::parse(text);
  SampleSet set;
  std::set<int> labels;
  for (const auto& entry : doc.at("samples")) {
    Sample s;
    for (const auto& [key, val] : entry.at("assignment").items()) {
      int spin = val.get<int>();
      if (spin != -1 && spin != 1)
        throw DomainMismatchError("non-spin value in sample JSON");
      s.assignment[parse_label(key)] = spin;
      labels.insert(parse_label(key));
    }
    if (entry.contains("energy")) s.energy = entry.at("energy").get<double>();
    set.samples.push_back(std::move(s));
  }
  set.labels.assign(labels.begin(), labels.end());
  for (const auto& s : set.samples)
    if (s.assignment.size() != set.labels.size())
      throw DomainMismatchError("samples disagree on variable set");
  return set;
}

// --- indexed view -----------------------------------------------------------

IndexedModel IndexedModel::from(const IsingModel& model) {
  IndexedModel im;
  im.labels = model.labels();
  im.h.assign(im.labels.size(), 0.0);
  im.adj.resize(im.labels.size());
  std::map<int, int> index;
  for (std::size_t i = 0; i < im.labels.size(); ++i)
    index[im.labels[i]] = static_cast<int>(i);
  for (const auto& [label, hi] : model.h()) im.h[index[label]] = hi;
  for (const auto& [edge, jij] : model.j()) {
    int a = index[edge.first];
    int b = index[edge.second];
    im.adj[a].push_back({b, jij});
    im.adj[b].push_back({a, jij});
    im.edges.push_back({a, b, jij});
  }
  return im;
}

double IndexedModel::energy(const std::vector<signed char>& z) const {
  double e = 0.0;
  for (int i = 0; i < size(); ++i) e += h[i] * z[i];
  for (const auto& [a, b, jij] : edges) e += jij * z[a] * z[b];
  return e;
}

Sample IndexedModel::to_sample(const std::vector<signed char>& z) const {
  Sample s;
  for (int i = 0; i < size(); ++i) s.assignment[labels[i]] = z[i];
  return s;
}

}  // namespace qaga
