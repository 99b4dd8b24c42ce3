#include <cmath>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "oracle.hpp"
#include "qaga/qaga.hpp"
#include "qaga/rng.hpp"

using namespace qaga;

namespace {

SampleSet columns(std::vector<std::vector<int>> rows) {
  // rows[j] is sample j over labels 1..width
  SampleSet set;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    Sample s;
    for (std::size_t i = 0; i < rows[j].size(); ++i)
      s.assignment[static_cast<int>(i) + 1] = rows[j][i];
    set.samples.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < rows.front().size(); ++i)
    set.labels.push_back(static_cast<int>(i) + 1);
  return set;
}

QagaConfig exact_config(double theta = 0.0) {
  QagaConfig cfg;
  cfg.theta = theta;
  cfg.num_reads = 32;
  cfg.sampler = std::make_shared<ExactSampler>();
  return cfg;
}

}  // namespace

TEST_CASE("estimate_uncertainty") {
  SampleSet set = columns({{+1}, {+1}, {+1}, {+1}});
  CHECK(estimate_uncertainty(set, 1) == doctest::Approx(0.0));

  set = columns({{+1}, {-1}, {+1}, {-1}});
  CHECK(estimate_uncertainty(set, 1) == doctest::Approx(1.0));

  set = columns({{+1}, {+1}, {+1}, {-1}});
  CHECK(estimate_uncertainty(set, 1) == doctest::Approx(0.5));

  CHECK_THROWS_AS(estimate_uncertainty(set, 9), DomainMismatchError);
}

TEST_CASE("uncertainty bounds, exhaustive for n <= 8") {
  for (int n = 1; n <= 8; ++n) {
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      std::vector<std::vector<int>> rows;
      int sum = 0;
      for (int j = 0; j < n; ++j) {
        int spin = (mask >> j) & 1 ? +1 : -1;
        rows.push_back({spin});
        sum += spin;
      }
      SampleSet set = columns(rows);
      double u = estimate_uncertainty(set, 1);
      REQUIRE(u >= 0.0);
      REQUIRE(u <= 1.0);
      REQUIRE((u == 0.0) == (std::abs(sum) == n));  // unanimous iff u=0
      if (u < 0.5) REQUIRE(sum != 0);  // u <= theta < 0.5 => sign defined
    }
  }
}

TEST_CASE("majority_sign") {
  CHECK(majority_sign(columns({{+1}, {+1}, {-1}, {+1}}), 1) == +1);
  CHECK(majority_sign(columns({{-1}, {-1}, {-1}}), 1) == -1);
  CHECK_THROWS_AS(majority_sign(columns({{+1}, {-1}}), 1), std::logic_error);
}

TEST_CASE("select_fixable") {
  SampleSet set = columns({{+1, +1}, {+1, -1}});
  auto fixed = select_fixable(set, 0.0);
  CHECK(fixed == std::map<int, int>{{1, +1}});

  // u = 0.5 is excluded at theta = 0.49 (strict boundary of Eq-style rule)
  SampleSet half = columns({{+1}, {+1}, {+1}, {-1}});
  CHECK(select_fixable(half, 0.49).empty());
  CHECK(select_fixable(half, 0.5 - 1e-12).empty());

  SampleSet unanimous = columns({{+1, -1}, {+1, -1}});
  CHECK(select_fixable(unanimous, 0.0) ==
        std::map<int, int>{{1, +1}, {2, -1}});

  CHECK_THROWS_AS(select_fixable(set, 0.5), ConfigError);
  CHECK_THROWS_AS(select_fixable(set, -0.1), ConfigError);
}

TEST_CASE("contract worked example") {
  IsingModel m({{1, 0.5}, {2, -1.0}}, {{{1, 2}, -0.6}});
  auto [contracted, offset] = contract(m, {{1, +1}});
  CHECK(contracted.num_vars() == 1);
  CHECK(contracted.labels() == std::vector<int>{2});
  CHECK(contracted.bias(2) == doctest::Approx(-1.6));
  CHECK(contracted.num_couplers() == 0);
  CHECK(offset == doctest::Approx(0.5));
}

TEST_CASE("contract with nothing fixed is the identity") {
  IsingModel m({{1, 0.5}, {2, -1.0}}, {{{1, 2}, -0.6}});
  auto [contracted, offset] = contract(m, {});
  CHECK(contracted.h() == m.h());
  CHECK(contracted.j() == m.j());
  CHECK(offset == 0.0);
}

TEST_CASE("contracting everything leaves the full energy as offset") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ProblemSpec spec;
    spec.num_vars = 8;
    spec.sparsity = 0.5;
    spec.distribution = Distribution::Normal;
    spec.seed = seed;
    IsingModel m = random_model(spec);
    rng::Stream stream(seed + 1);
    std::map<int, int> fixed;
    for (int label : m.labels()) fixed[label] = stream.next_spin();
    auto [contracted, offset] = contract(m, fixed);
    CHECK(contracted.num_vars() == 0);
    REQUIRE(offset == doctest::Approx(oracle::energy(m, fixed)).epsilon(1e-12));
  }
}

TEST_CASE("contraction identity on random triples, all subset sizes") {
  for (std::uint64_t trial = 0; trial < 400; ++trial) {
    ProblemSpec spec;
    spec.num_vars = 10;
    spec.sparsity = 0.5;
    spec.distribution = static_cast<Distribution>(trial % 3);
    spec.seed = trial;
    IsingModel m = random_model(spec);
    rng::Stream stream(trial * 31 + 7);
    for (int subset_size : {0, 1, spec.num_vars / 2, spec.num_vars - 1,
                            spec.num_vars}) {
      std::vector<int> labels = m.labels();
      // deterministic shuffle
      for (std::size_t i = labels.size() - 1; i > 0; --i)
        std::swap(labels[i], labels[stream.next_below(i + 1)]);
      std::map<int, int> fixed;
      for (int i = 0; i < subset_size; ++i)
        fixed[labels[i]] = stream.next_spin();
      auto [contracted, offset] = contract(m, fixed);

      std::map<int, int> full = fixed;
      Sample residual;
      for (int label : contracted.labels()) {
        int spin = stream.next_spin();
        residual.assignment[label] = spin;
        full[label] = spin;
      }
      double direct = oracle::energy(m, full);
      double via = ising_energy(contracted, residual) + offset;
      REQUIRE(direct == doctest::Approx(via).epsilon(1e-9));
    }
  }
}

TEST_CASE("contract rejects bad input") {
  IsingModel m({{1, 0.5}}, {});
  CHECK_THROWS_AS(contract(m, {{9, +1}}), DomainMismatchError);
  CHECK_THROWS_AS(contract(m, {{1, 0}}), DomainMismatchError);
}

TEST_CASE("qaga_solve on the two-variable model: one stage, exact ground") {
  IsingModel m({{1, -2.0}, {2, 0.0}}, {{{1, 2}, 1.0}});
  QagaResult result = qaga_solve(m, exact_config());
  CHECK(result.solution.assignment == std::map<int, int>{{1, +1}, {2, -1}});
  CHECK(result.energy == doctest::Approx(-3.0));
  CHECK(result.stages.size() == 1);
  CHECK_FALSE(result.used_mqc_fallback);
}

TEST_CASE("qaga_solve degenerate ground goes through the MQC fallback") {
  IsingModel m({{1, 0.0}}, {});
  QagaResult result = qaga_solve(m, exact_config());
  CHECK(result.used_mqc_fallback);
  CHECK(result.energy == doctest::Approx(0.0));
  int spin = result.solution.assignment.at(1);
  CHECK((spin == +1 || spin == -1));
  CHECK(result.stages.size() == 1);
  CHECK(result.stages[0].fixed.empty());
}

TEST_CASE("qaga_solve oracle equivalence on random instances") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ProblemSpec spec;
    spec.num_vars = 5 + static_cast<int>(seed % 8);  // up to 12
    spec.sparsity = (seed % 2) ? 1.0 : 0.25;
    spec.distribution = static_cast<Distribution>(seed % 3);
    spec.seed = seed;
    IsingModel m = random_model(spec);
    QagaConfig cfg = exact_config();
    cfg.seed = seed;
    QagaResult result = qaga_solve(m, cfg);
    double ground = oracle::ground_states(m).energy;
    REQUIRE(result.energy == doctest::Approx(ground).epsilon(1e-9));
    REQUIRE(result.solution.assignment.size() ==
            static_cast<std::size_t>(m.num_vars()));
  }
}

TEST_CASE("qaga_solve config validation") {
  IsingModel m({{1, 1.0}}, {});
  QagaConfig cfg = exact_config();
  cfg.theta = 0.5;
  CHECK_THROWS_AS(qaga_solve(m, cfg), ConfigError);
  cfg = exact_config();
  cfg.sampler = nullptr;
  CHECK_THROWS_AS(qaga_solve(m, cfg), ConfigError);
  cfg = exact_config();
  cfg.num_reads = 0;
  CHECK_THROWS_AS(qaga_solve(m, cfg), ConfigError);
}

namespace {

// sampler that always returns the same fixed assignment, then a
// disagreeing pair on later stages; used to exercise the incumbent guard
class ScriptedSampler final : public Sampler {
 public:
  explicit ScriptedSampler(std::vector<int> script) : script_(script) {}
  SampleSet sample(const IsingModel& model, int num_reads,
                   std::uint64_t) const override {
    SampleSet set;
    set.labels = model.labels();
    for (int r = 0; r < num_reads; ++r) {
      Sample s;
      for (int label : model.labels())
        s.assignment[label] = script_.at(label - 1);
      s.energy = ising_energy(model, s);
      set.samples.push_back(std::move(s));
    }
    return set;
  }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<int> script_;
};

}  // namespace

TEST_CASE("incumbent guard: result is never worse than the best raw sample") {
  // scripted sampler pushes QAGA to fix the wrong signs; the incumbent and
  // local search keep the result at least as good as what was sampled
  IsingModel m({{1, 1.0}, {2, 1.0}}, {{{1, 2}, -2.0}});
  QagaConfig cfg;
  cfg.num_reads = 4;
  cfg.sampler = std::make_shared<ScriptedSampler>(std::vector<int>{+1, +1});
  cfg.final_local_search = false;
  QagaResult result = qaga_solve(m, cfg);
  double best_sampled =
      oracle::energy(m, std::map<int, int>{{1, +1}, {2, +1}});
  CHECK(result.energy <= best_sampled + 1e-12);
  CHECK(result.stages.size() == 1);
}

TEST_CASE("stage bookkeeping: sizes shrink by the number of fixings") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    ProblemSpec spec;
    spec.num_vars = 10;
    spec.sparsity = 0.5;
    spec.distribution = Distribution::Normal;
    spec.seed = seed + 400;
    IsingModel m = random_model(spec);
    QagaConfig cfg = exact_config();
    cfg.seed = seed;
    QagaResult result = qaga_solve(m, cfg);
    StageTrace trace = stage_trace(result);
    CHECK(trace.stage_count == static_cast<int>(result.stages.size()));
    CHECK(trace.stage_count <= spec.num_vars + 1);
    for (std::size_t t = 1; t < result.stages.size(); ++t)
      REQUIRE(result.stages[t].num_vars ==
              result.stages[t - 1].num_vars -
                  static_cast<int>(result.stages[t - 1].fixed.size()));
    // fixed sets are disjoint across stages and within the variable set
    std::set<int> seen;
    for (const auto& s : result.stages)
      for (const auto& [label, spin] : s.fixed) REQUIRE(seen.insert(label).second);
    // solution covers the original labels exactly
    std::vector<int> solution_labels;
    for (const auto& [label, spin] : result.solution.assignment)
      solution_labels.push_back(label);
    REQUIRE(solution_labels == m.labels());
  }
}

TEST_CASE("stage trace serializes to the documented JSON fields") {
  IsingModel m({{1, -2.0}, {2, 0.0}}, {{{1, 2}, 1.0}});
  QagaResult result = qaga_solve(m, exact_config());
  auto arr = nlohmann::json::parse(stages_to_json(result));
  REQUIRE(arr.is_array());
  REQUIRE(arr.size() == 1);
  CHECK(arr[0].at("t") == 0);
  CHECK(arr[0].at("vars") == 2);
  CHECK(arr[0].at("couplers") == 1);
  CHECK(arr[0].at("fixed").size() == 2);
  CHECK(arr[0].at("best_energy").get<double>() == doctest::Approx(-3.0));
}

TEST_CASE("max_stages guard with a sticky sampler still terminates") {
  // theta just under 0.5 with a scripted constant sampler fixes everything
  // in one stage; with a plain SA sampler and tiny reads the loop is still
  // bounded by max_stages
  ProblemSpec spec;
  spec.num_vars = 12;
  spec.sparsity = 0.9;
  spec.distribution = Distribution::Normal;
  spec.seed = 5;
  IsingModel m = random_model(spec);
  QagaConfig cfg;
  cfg.theta = 0.45;
  cfg.num_reads = 3;
  cfg.max_stages = 2;
  SaConfig sa;
  sa.num_sweeps = 5;
  sa.beta_final = 1.0;
  cfg.sampler = std::make_shared<SaSampler>(sa);
  cfg.seed = 99;
  QagaResult result = qaga_solve(m, cfg);
  CHECK(result.stages.size() <= 2);
  CHECK(result.solution.assignment.size() == 12);
}
