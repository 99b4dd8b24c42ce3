#include "qaga/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qaga/postprocess.hpp"
#include "qaga/rng.hpp"
#include "json.hpp"

namespace qaga::bench {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Win: return "win";
    case Verdict::Tie: return "tie";
    case Verdict::Loss: return "loss";
  }
  return "?";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "win") return Verdict::Win;
  if (s == "tie") return Verdict::Tie;
  if (s == "loss") return Verdict::Loss;
  throw std::invalid_argument("unknown verdict: " + s);
}

Verdict compare_energies(double qaga_energy, double baseline_energy) {
  if (qaga_energy < baseline_energy - kTieTolerance) return Verdict::Win;
  if (qaga_energy > baseline_energy + kTieTolerance) return Verdict::Loss;
  return Verdict::Tie;
}

namespace {

constexpr std::uint64_t kTagProblem = 10;
constexpr std::uint64_t kTagQa = 1;
constexpr std::uint64_t kTagQaga = 2;

std::uint64_t problem_seed(std::uint64_t master, std::size_t dist_idx,
                           std::size_t sp_idx, int problem_idx) {
  return rng::derive(rng::derive(master, kTagProblem, dist_idx, sp_idx),
                     static_cast<std::uint64_t>(problem_idx));
}

ComparisonRecord solve_problem(const ExperimentAConfig& config,
                               std::size_t dist_idx, std::size_t sp_idx,
                               int problem_idx) {
  ComparisonRecord rec;
  rec.distribution = to_string(config.distributions[dist_idx]);
  rec.sparsity = config.sparsities[sp_idx];
  rec.problem_index = problem_idx;
  rec.problem_seed = problem_seed(config.seed, dist_idx, sp_idx, problem_idx);
  auto start = std::chrono::steady_clock::now();
  try {
    ProblemSpec spec;
    spec.num_vars = config.num_vars;
    spec.sparsity = config.sparsities[sp_idx];
    spec.distribution = config.distributions[dist_idx];
    spec.seed = rec.problem_seed;
    IsingModel model = random_model(spec);

    auto inner = std::make_shared<SaSampler>(config.sa);
    auto sampler =
        std::make_shared<GaugeAveragedSampler>(inner, config.gauges);

    SampleSet qa_set = sampler->sample(model, config.num_reads,
                                       rng::derive(rec.problem_seed, kTagQa));
    double qa_best = std::numeric_limits<double>::infinity();
    for (const auto& s : qa_set.samples)
      qa_best = std::min(qa_best, *s.energy);
    rec.qa_energy = qa_best;

    rec.mqc_energy = *mqc_reduce(model, qa_set).energy;

    QagaConfig qcfg;
    qcfg.theta = config.theta;
    qcfg.num_reads = config.num_reads;
    qcfg.max_stages = config.max_stages;
    qcfg.sampler = sampler;
    qcfg.seed = rng::derive(rec.problem_seed, kTagQaga);
    QagaResult result = qaga_solve(model, qcfg);
    rec.qaga_energy = result.energy;
    rec.stages = static_cast<int>(result.stages.size());

    rec.vs_qa = compare_energies(rec.qaga_energy, rec.qa_energy);
    rec.vs_mqc = compare_energies(rec.qaga_energy, rec.mqc_energy);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  rec.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rec;
}

}  // namespace

ExperimentAReport run_experiment_a(const ExperimentAConfig& config) {
  if (config.sparsities.empty() || config.distributions.empty())
    throw ConfigError("sparsity and distribution lists must be nonempty");
  ExperimentAReport report;
  for (std::size_t d = 0; d < config.distributions.size(); ++d) {
    for (std::size_t s = 0; s < config.sparsities.size(); ++s) {
      CellCounts cell;
      cell.distribution = to_string(config.distributions[d]);
      cell.sparsity = config.sparsities[s];
      for (int p = 0; p < config.num_problems; ++p) {
        ComparisonRecord rec = solve_problem(config, d, s, p);
        if (rec.failed) {
          ++report.num_failed;
        } else {
          switch (rec.vs_qa) {
            case Verdict::Win: ++cell.wins_vs_qa; break;
            case Verdict::Tie: ++cell.ties_vs_qa; break;
            case Verdict::Loss: ++cell.losses_vs_qa; break;
          }
          switch (rec.vs_mqc) {
            case Verdict::Win: ++cell.wins_vs_mqc; break;
            case Verdict::Tie: ++cell.ties_vs_mqc; break;
            case Verdict::Loss: ++cell.losses_vs_mqc; break;
          }
        }
        report.records.push_back(std::move(rec));
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

ExperimentBReport run_experiment_b(const ExperimentBConfig& config) {
  if (config.thetas.empty() || config.sparsities.empty())
    throw ConfigError("theta and sparsity lists must be nonempty");
  for (double theta : config.thetas)
    if (!(theta >= 0.0 && theta < 0.5))
      throw ConfigError("theta must be in [0, 0.5)");

  ExperimentBReport report;
  report.thetas = config.thetas;
  report.sparsities = config.sparsities;
  for (std::size_t t = 0; t < config.thetas.size(); ++t) {
    std::vector<double> row;
    for (std::size_t s = 0; s < config.sparsities.size(); ++s) {
      double total_stages = 0.0;
      int solved = 0;
      for (int p = 0; p < config.num_problems; ++p) {
        try {
          ProblemSpec spec;
          spec.num_vars = config.num_vars;
          spec.sparsity = config.sparsities[s];
          spec.distribution = Distribution::Normal;
          // same instance set for every theta: seeds ignore the theta index
          spec.seed = problem_seed(config.seed, 0, s, p);
          IsingModel model = random_model(spec);

          std::shared_ptr<const Sampler> inner;
          if (config.use_exact_sampler)
            inner = std::make_shared<ExactSampler>();
          else
            inner = std::make_shared<SaSampler>(config.sa);
          auto sampler =
              std::make_shared<GaugeAveragedSampler>(inner, config.gauges);
          QagaConfig qcfg;
          qcfg.theta = config.thetas[t];
          qcfg.num_reads = config.num_reads;
          qcfg.max_stages = config.max_stages;
          qcfg.sampler = sampler;
          qcfg.seed = rng::derive(spec.seed, kTagQaga, t);
          QagaResult result = qaga_solve(model, qcfg);
          total_stages += static_cast<double>(result.stages.size());
          ++solved;
        } catch (const std::exception&) {
          ++report.num_failed;
        }
      }
      row.push_back(solved > 0 ? total_stages / solved : 0.0);
    }
    report.means.push_back(std::move(row));
  }
  return report;
}

// --- persistence ------------------------------------------------------------

namespace {

// Round-trip-exact float text (shortest form via max precision).
std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

constexpr const char* kRecordHeader =
    "distribution,sparsity,problem_index,problem_seed,qa_energy,mqc_energy,"
    "qaga_energy,vs_qa,vs_mqc,stages,failed,error";

}  // namespace

std::string records_to_csv(const std::vector<ComparisonRecord>& records) {
  std::ostringstream out;
  out << kRecordHeader << "\n";
  for (const auto& r : records) {
    out << r.distribution << ',' << fmt(r.sparsity) << ',' << r.problem_index
        << ',' << r.problem_seed << ',' << fmt(r.qa_energy) << ','
        << fmt(r.mqc_energy) << ',' << fmt(r.qaga_energy) << ','
        << to_string(r.vs_qa) << ',' << to_string(r.vs_mqc) << ',' << r.stages
        << ',' << (r.failed ? 1 : 0) << ',' << csv_escape(r.error) << "\n";
  }
  return out.str();
}

std::vector<ComparisonRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader)
    throw std::invalid_argument("unexpected CSV header");
  std::vector<ComparisonRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != 12) throw std::invalid_argument("bad CSV row: " + line);
    ComparisonRecord r;
    r.distribution = f[0];
    r.sparsity = std::stod(f[1]);
    r.problem_index = std::stoi(f[2]);
    r.problem_seed = std::stoull(f[3]);
    r.qa_energy = std::stod(f[4]);
    r.mqc_energy = std::stod(f[5]);
    r.qaga_energy = std::stod(f[6]);
    r.vs_qa = verdict_from_string(f[7]);
    r.vs_mqc = verdict_from_string(f[8]);
    r.stages = std::stoi(f[9]);
    r.failed = f[10] == "1";
    r.error = f[11];
    records.push_back(std::move(r));
  }
  return records;
}

std::string cells_to_csv(const std::vector<CellCounts>& cells) {
  std::ostringstream out;
  out << "distribution,sparsity,baseline,verdict,count\n";
  for (const auto& c : cells) {
    out << c.distribution << ',' << fmt(c.sparsity) << ",qa,win,"
        << c.wins_vs_qa << "\n";
    out << c.distribution << ',' << fmt(c.sparsity) << ",qa,tie,"
        << c.ties_vs_qa << "\n";
    out << c.distribution << ',' << fmt(c.sparsity) << ",qa,loss,"
        << c.losses_vs_qa << "\n";
    out << c.distribution << ',' << fmt(c.sparsity) << ",mqc,win,"
        << c.wins_vs_mqc << "\n";
    out << c.distribution << ',' << fmt(c.sparsity) << ",mqc,tie,"
        << c.ties_vs_mqc << "\n";
    out << c.distribution << ',' << fmt(c.sparsity) << ",mqc,loss,"
        << c.losses_vs_mqc << "\n";
  }
  return out.str();
}

std::string report_to_json(const ExperimentAReport& report) {
  nlohmann::json doc;
  doc["num_failed"] = report.num_failed;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cell;
    cell["distribution"] = c.distribution;
    cell["sparsity"] = c.sparsity;
    cell["vs_qa"] = {{"win", c.wins_vs_qa},
                     {"tie", c.ties_vs_qa},
                     {"loss", c.losses_vs_qa}};
    cell["vs_mqc"] = {{"win", c.wins_vs_mqc},
                      {"tie", c.ties_vs_mqc},
                      {"loss", c.losses_vs_mqc}};
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

std::string table_to_csv(const ExperimentBReport& report) {
  std::ostringstream out;
  out << "theta";
  for (double s : report.sparsities) out << ',' << fmt(s);
  out << "\n";
  for (std::size_t t = 0; t < report.thetas.size(); ++t) {
    out << fmt(report.thetas[t]);
    for (double mean : report.means[t]) out << ',' << fmt(mean);
    out << "\n";
  }
  return out.str();
}

std::string table_to_json(const ExperimentBReport& report) {
  nlohmann::json doc;
  doc["thetas"] = report.thetas;
  doc["sparsities"] = report.sparsities;
  doc["mean_stages"] = report.means;
  doc["num_failed"] = report.num_failed;
  return doc.dump(2) + "\n";
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void persist_experiment_a(const ExperimentAReport& report,
                          const std::string& prefix) {
  write_file(prefix + ".records.csv", records_to_csv(report.records));
  write_file(prefix + ".cells.csv", cells_to_csv(report.cells));
  write_file(prefix + ".summary.json", report_to_json(report));
}

void persist_experiment_b(const ExperimentBReport& report,
                          const std::string& prefix) {
  write_file(prefix + ".table.csv", table_to_csv(report));
  write_file(prefix + ".table.json", table_to_json(report));
}

}  // namespace qaga::bench
