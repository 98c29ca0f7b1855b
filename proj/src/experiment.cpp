#include "linkobs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>

#include "linkobs/serialize.hpp"

namespace linkobs {

namespace {

const std::vector<std::string> kExperiments = {"linking-degree",        "flow-group-law",
                                               "linear-obstruction",    "conjugate-obstruction",
                                               "width-classification", "approximation-bound"};

// Per-run generator: the run seed mixed with the grid coordinates so that
// adding a width or depth does not shift other runs' draws.
std::mt19937_64 run_rng(std::uint64_t seed, int a, int b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  return std::mt19937_64(seq);
}

std::string run_dir_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%04zu", k);
  return buf;
}

std::string verdict_of(const SeparationReport& r) {
  if (r.separated) return "separated";
  return r.indeterminate ? "not-separated-indeterminate" : "not-separated";
}

nlohmann::json matrix_rows(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

// 1-row output matrix split into the two sides' intervals.
bool intervals_disjoint(const Mat& outputs, Eigen::Index na) {
  const auto a = outputs.row(0).head(na);
  const auto b = outputs.row(0).tail(outputs.cols() - na);
  return a.maxCoeff() < b.minCoeff() || b.maxCoeff() < a.minCoeff();
}

struct Writer {
  const ExperimentConfig& cfg;
  ExperimentResult& res;

  void run(const RunRow& row, const nlohmann::json& report, const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    const std::string dir = run_dir_name(res.rows.size());
    nlohmann::json j = report;
    j["seed"] = row.seed;
    j["width"] = row.width;
    j["depth"] = row.depth;
    j["verdict"] = row.verdict;
    write_text_file(cfg.out_dir + "/" + dir + "/report.json", j.dump(2) + "\n");
    res.artifacts.push_back(dir + "/report.json");
    for (const auto& [name, text] : extra) {
      write_text_file(cfg.out_dir + "/" + dir + "/" + name, text);
      res.artifacts.push_back(dir + "/" + name);
    }
    res.rows.push_back(row);
  }
};

void linking_degree(const ExperimentConfig& cfg, Writer& w) {
  std::vector<std::string> names;
  if (cfg.pair == "builtin")
    names = builtin_pair_names();
  else
    names = {cfg.pair};
  for (const auto& name : names) {
    const EmbeddedPair pair = load_pair(name, cfg.samples, cfg.dim);
    const DegreeReport rep = pair_degree(pair);
    RunRow row;
    row.verdict = !pair.expected_degree ? "no-expectation" : (*pair.expected_degree == rep.rounded ? "match" : "mismatch");
    row.min_gap = pair.min_gap;
    row.degree = rep.rounded;
    row.metric = rep.residual;
    nlohmann::json j{{"pair", name}, {"degree", rep}};
    if (pair.expected_degree) j["expected_degree"] = *pair.expected_degree;
    w.run(row, j);
  }
}

void flow_group_law(const ExperimentConfig& cfg, Writer& w) {
  const ActivationKind act = ActivationKind::parse(cfg.activation);
  const int dim = cfg.dim;
  for (const auto seed : cfg.seeds) {
    auto rng = run_rng(seed, dim, 0);
    std::uniform_real_distribution<double> box(-5.0, 5.0), unit(0.0, 1.0);
    std::vector<Vec> xs;
    for (int k = 0; k < 200; ++k) {
      Vec x(dim);
      for (int i = 0; i < dim; ++i) x(i) = box(rng);
      xs.push_back(x);
    }
    std::vector<std::pair<double, double>> times;
    for (int k = 0; k < 20; ++k) {
      const double total = 5.0 * unit(rng);
      const double t1 = total * unit(rng);
      times.emplace_back(t1, total - t1);
    }
    const double dev = check_group_law(act, xs, times);
    RunRow row;
    row.seed = seed;
    row.verdict = dev < 1e-6 ? "law-holds" : "law-violated";
    row.activation = act.name();
    row.metric = dev;
    w.run(row, {{"activation", act.name()}, {"dim", dim}, {"inputs", xs.size()}, {"time_pairs", times.size()},
                {"max_deviation", dev}, {"step", kDefaultFlowStep}});
  }
}

void linear_like(const ExperimentConfig& cfg, Writer& w, bool conjugate) {
  const EmbeddedPair pair = load_pair(cfg.pair, cfg.samples, cfg.dim);
  const EmbeddedPair refined = load_pair(cfg.pair, 2 * cfg.samples, cfg.dim);
  std::optional<int> degree;
  if (has_defined_degree(pair)) degree = pair_degree(pair).rounded;
  const int n = pair.ambient_dim();
  const std::vector<int> dims = cfg.widths.empty() ? std::vector<int>{1, 2} : cfg.widths;
  for (const auto seed : cfg.seeds) {
    for (const int m : dims) {
      require(m >= 1 && m < n, "target dimension must lie in [1, n)");
      auto rng = run_rng(seed, m, conjugate ? 1 : 0);
      SeparationReport rep, rep2;
      nlohmann::json j{{"pair", cfg.pair}, {"target_dim", m}};
      if (conjugate) {
        const Mat L = random_full_rank_map(m, n, rng);
        const Homeomorphism pre = random_monotone_homeomorphism(n, rng);
        const Homeomorphism post = random_monotone_homeomorphism(m, rng);
        rep = conjugate_map_check(pair, L, pre, post, cfg.threshold);
        rep2 = conjugate_map_check(refined, L, pre, post, cfg.threshold);
        j["linear"] = matrix_rows(L);
        j["pre"] = pre.kind_name();
        j["post"] = post.kind_name();
      } else {
        const Mat L = random_linear_map(m, n, rng);
        j["linear"] = matrix_rows(L);
        rep = linear_map_check(pair, L, cfg.threshold);
        rep2 = linear_map_check(refined, L, cfg.threshold);
      }
      j["separation"] = rep;
      j["refined_samples"] = 2 * cfg.samples;
      j["refined_min_gap"] = rep2.min_inter_gap;
      RunRow row;
      row.seed = seed;
      row.width = m;
      row.verdict = verdict_of(rep);
      row.min_gap = rep.min_inter_gap;
      row.degree = degree;
      row.metric = rep.min_inter_gap > 0.0 ? rep2.min_inter_gap / rep.min_inter_gap : 0.0;
      w.run(row, j);
    }
  }
}

void width_classification(const ExperimentConfig& cfg, Writer& w) {
  const EmbeddedPair pair = load_pair(cfg.pair, cfg.samples, cfg.dim);
  std::optional<int> degree;
  if (has_defined_degree(pair)) degree = pair_degree(pair).rounded;
  const ActivationKind act = ActivationKind::parse(cfg.activation);
  const TrainingData data = separation_data(pair);
  const auto na = static_cast<Eigen::Index>(pair.side_a.size());
  for (const auto seed : cfg.seeds)
    for (const int width : cfg.widths)
      for (const int depth : cfg.depths) {
        const MLPSpec spec = MLPSpec::uniform(pair.ambient_dim(), width, depth, 1, act, FinalActivation::None, seed);
        const MLP net = init(spec);
        const SeparationReport at_init = classify_check(net, pair, cfg.threshold);
        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.epochs = cfg.epochs;
        tc.loss = LossKind::HingeSeparation;
        tc.momentum = cfg.momentum;
        tc.seed = seed;
        int disjoint_epochs = 0;
        const TrainResult tr = train(net, data, tc, [&](int, double, const Mat& out) {
          if (intervals_disjoint(out, na)) ++disjoint_epochs;
        });
        const SeparationReport final_rep = classify_check(tr.net, pair, cfg.threshold);
        RunRow row;
        row.seed = seed;
        row.width = width;
        row.depth = depth;
        row.verdict = verdict_of(final_rep);
        row.min_gap = final_rep.min_inter_gap;
        row.degree = degree;
        row.activation = act.name();
        row.metric = tr.loss_trace.empty() ? 0.0 : tr.loss_trace.back();
        nlohmann::json j{{"pair", cfg.pair},
                         {"activation", act.name()},
                         {"at_init", at_init},
                         {"after_training", final_rep},
                         {"final_loss", row.metric},
                         {"epochs", cfg.epochs},
                         {"epochs_with_disjoint_intervals", disjoint_epochs},
                         {"net", tr.net}};
        w.run(row, j, {{"loss.csv", loss_trace_to_csv(tr.loss_trace)}});
      }
}

void approximation_bound(const ExperimentConfig& cfg, Writer& w) {
  const ActivationKind act = ActivationKind::parse(cfg.activation);
  require(cfg.training == "none" || cfg.training == "mse" || cfg.training == "adversarial",
          "training must be none, mse or adversarial");
  const std::size_t sphere_samples = cfg.samples;
  const TrainingData data = approximation_data(cfg.dim, cfg.delta, sphere_samples);
  for (const auto seed : cfg.seeds)
    for (const int width : cfg.widths)
      for (const int depth : cfg.depths) {
        MLP net = init(MLPSpec::uniform(cfg.dim, width, depth, 1, act, FinalActivation::None, seed));
        std::vector<double> trace;
        if (cfg.training != "none") {
          TrainConfig tc;
          tc.learning_rate = cfg.learning_rate;
          tc.epochs = cfg.epochs;
          tc.loss = LossKind::MeanSquaredError;
          tc.momentum = cfg.momentum;
          tc.seed = seed;
          TrainResult tr = train(net, data, tc);
          trace = tr.loss_trace;
          if (cfg.training == "adversarial") {
            // second phase descends the reported gap itself
            tc.loss = LossKind::SupGap;
            tc.learning_rate = 1e-3;
            tc.momentum = 0.0;
            tr = train(tr.net, data, tc);
            trace.insert(trace.end(), tr.loss_trace.begin(), tr.loss_trace.end());
          }
          net = tr.net;
        }
        const ApproxGapReport rep = approximation_gap(net, cfg.dim, cfg.delta, sphere_samples);
        RunRow row;
        row.seed = seed;
        row.width = width;
        row.depth = depth;
        row.verdict = rep.sup_error_lower_bound >= cfg.delta - 1e-6 ? "bound-holds" : "below-delta";
        const auto [lo, hi] = rep.net_range_on_sphere;
        row.min_gap = std::max({0.0, lo - rep.net_at_origin, rep.net_at_origin - hi});
        row.activation = act.name();
        row.metric = rep.sup_error_lower_bound;
        nlohmann::json j{{"activation", act.name()}, {"training", cfg.training}, {"gap", rep}, {"net", net}};
        std::vector<std::pair<std::string, std::string>> extra;
        if (!trace.empty()) extra.emplace_back("loss.csv", loss_trace_to_csv(trace));
        w.run(row, j, extra);
      }
}

}  // namespace

void ExperimentConfig::validate() const {
  require(std::find(kExperiments.begin(), kExperiments.end(), experiment) != kExperiments.end(),
          "unknown experiment: " + experiment);
  require(!seeds.empty(), "seeds must not be empty");
  require(samples >= 8 && samples <= (1 << 20), "samples must lie in [8, 2^20]");
  require(delta > 0.0, "delta must be positive");
  require(threshold >= 0.0, "threshold must be nonnegative");
  require(epochs >= 1, "epochs must be positive");
  require(learning_rate > 0.0 && learning_rate <= 1.0, "learning rate must lie in (0,1]");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must lie in [0,1)");
  require(dim >= 2, "dim must be at least 2");
  require(!out_dir.empty(), "out_dir must not be empty");
  if (experiment == "width-classification" || experiment == "approximation-bound") {
    require(!widths.empty() && !depths.empty(), "widths and depths must not be empty");
    for (int v : widths) require(v >= 1, "widths must be positive");
    for (int v : depths) require(v >= 2, "depths must be at least 2");
  }
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"experiment", c.experiment}, {"pair", c.pair},         {"widths", c.widths},
                     {"depths", c.depths},         {"activation", c.activation}, {"seeds", c.seeds},
                     {"delta", c.delta},           {"samples", c.samples},   {"threshold", c.threshold},
                     {"out_dir", c.out_dir},       {"epochs", c.epochs},     {"lr", c.learning_rate},
                     {"momentum", c.momentum},     {"training", c.training}, {"dim", c.dim}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  static const std::vector<std::string> known = {"experiment", "pair",    "widths",  "depths", "activation",
                                                 "seeds",      "delta",   "samples", "threshold", "out_dir",
                                                 "epochs",     "lr",      "momentum", "training", "dim"};
  require(j.is_object(), "experiment config must be a JSON object");
  for (const auto& [key, _] : j.items())
    require(std::find(known.begin(), known.end(), key) != known.end(), "unknown config field: " + key);
  require(j.contains("experiment"), "config needs an experiment name");
  try {
    ExperimentConfig d;
    c.experiment = j.at("experiment").get<std::string>();
    c.pair = j.value("pair", d.pair);
    c.widths = j.value("widths", d.widths);
    c.depths = j.value("depths", d.depths);
    c.activation = j.value("activation", d.activation);
    for (const auto& s : j.value("seeds", nlohmann::json::array({0})))
      require(s.is_number_unsigned(), "seeds must be nonnegative integers");
    c.seeds = j.value("seeds", d.seeds);
    c.delta = j.value("delta", d.delta);
    const auto samples = j.value("samples", static_cast<std::int64_t>(d.samples));
    require(samples >= 8 && samples <= (1 << 20), "samples must lie in [8, 2^20]");
    c.samples = static_cast<std::size_t>(samples);
    c.threshold = j.value("threshold", d.threshold);
    c.out_dir = j.value("out_dir", d.out_dir);
    c.epochs = j.value("epochs", d.epochs);
    c.learning_rate = j.value("lr", d.learning_rate);
    c.momentum = j.value("momentum", d.momentum);
    c.training = j.value("training", d.training);
    c.dim = j.value("dim", d.dim);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
}

std::vector<std::string> experiment_names() { return kExperiments; }

EmbeddedPair load_pair(const std::string& name_or_path, std::size_t samples, int dim) {
  const auto names = builtin_pair_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return builtin_pair(name_or_path, samples, dim);
  if (!std::filesystem::exists(name_or_path))
    throw InvalidArgument("not a builtin pair or readable file: " + name_or_path);
  try {
    return nlohmann::json::parse(read_text_file(name_or_path)).get<EmbeddedPair>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed pair file " + name_or_path + ": " + e.what());
  }
}

std::string rows_to_csv(const std::vector<RunRow>& rows) {
  std::string out = "seed,width,depth,verdict,min_gap,degree,activation,metric\n";
  for (const auto& r : rows) {
    out += std::to_string(r.seed) + "," + std::to_string(r.width) + "," + std::to_string(r.depth) + "," + r.verdict +
           "," + format_double(r.min_gap) + "," + (r.degree ? std::to_string(*r.degree) : "") + "," + r.activation +
           "," + format_double(r.metric) + "\n";
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  const nlohmann::json cfg_json = cfg;
  res.config_hash = fnv1a_hex(cfg_json.dump());
  Writer w{cfg, res};

  if (cfg.experiment == "linking-degree")
    linking_degree(cfg, w);
  else if (cfg.experiment == "flow-group-law")
    flow_group_law(cfg, w);
  else if (cfg.experiment == "linear-obstruction")
    linear_like(cfg, w, false);
  else if (cfg.experiment == "conjugate-obstruction")
    linear_like(cfg, w, true);
  else if (cfg.experiment == "width-classification")
    width_classification(cfg, w);
  else
    approximation_bound(cfg, w);

  std::map<std::string, int> verdicts;
  double worst = res.rows.empty() ? 0.0 : res.rows.front().metric;
  double best = worst;
  for (const auto& r : res.rows) {
    ++verdicts[r.verdict];
    worst = std::max(worst, r.metric);
    best = std::min(best, r.metric);
  }
  res.summary = {{"runs", res.rows.size()}, {"verdicts", verdicts}, {"metric_min", best}, {"metric_max", worst}};

  write_text_file(cfg.out_dir + "/results.csv", rows_to_csv(res.rows));
  res.artifacts.push_back("results.csv");
  const nlohmann::json manifest{{"experiment", cfg.experiment}, {"config_hash", res.config_hash},
                                {"config", cfg_json},           {"artifacts", res.artifacts},
                                {"summary", res.summary}};
  write_text_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
  return res;
}

}  // namespace linkobs
