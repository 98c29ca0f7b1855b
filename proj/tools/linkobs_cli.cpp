// linkobs: command-line front end.
//
// Exit codes: 0 success, 1 verdict differs from --expect, 2 usage or
// invalid input, 3 numeric failure.

#include <cmath>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "linkobs/experiment.hpp"
#include "linkobs/serialize.hpp"

using namespace linkobs;

namespace {

struct Common {
  std::string pair = "hopf";
  std::size_t samples = 512;
  int dim = 3;
  std::uint64_t seed = 0;
  std::string out;
};

void add_pair_opts(CLI::App* sub, Common& c) {
  sub->add_option("--pair", c.pair, "builtin pair name or pair JSON file")->capture_default_str();
  sub->add_option("--samples", c.samples, "samples per side")->capture_default_str()->check(CLI::Range(8, 1 << 20));
  sub->add_option("--dim", c.dim, "dimension for sphere pairs")->capture_default_str()->check(CLI::Range(2, 16));
}

// Prints to stdout and optionally to a file.
void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) write_text_file(out, text);
}

int verdict_exit(const std::optional<std::string>& expect, const std::string& got) {
  if (expect && *expect != got) {
    std::cerr << "expected " << *expect << ", got " << got << "\n";
    return 1;
  }
  return 0;
}

MLP load_net(const std::string& path) { return json::parse(read_text_file(path)).get<MLP>(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linking-number obstructions for narrow networks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--seed", c.seed, "seed for every random choice")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "write a pair as JSON (and optional CSV sides)");
  add_pair_opts(gen, c);
  gen->add_option("--out", c.out, "pair JSON path")->required();
  std::string csv_prefix;
  gen->add_option("--csv", csv_prefix, "write <prefix>_a.csv and <prefix>_b.csv");

  // degree
  auto* deg = app.add_subcommand("degree", "print the degree report of a pair");
  add_pair_opts(deg, c);
  deg->add_option("--out", c.out, "also write the report here");
  std::optional<int> expect_degree;
  deg->add_option("--expect", expect_degree, "exit 1 unless the rounded degree equals this");

  // flow
  auto* flow = app.add_subcommand("flow", "check the activation flow");
  std::string activation = "relu";
  std::string check = "group-law";
  int points = 200, time_pairs = 20;
  int flow_dim = 4;
  double step = kDefaultFlowStep, tolerance = 1e-6;
  flow->add_option("--activation", activation)->capture_default_str();
  flow->add_option("--check", check, "group-law or relu-limit")
      ->capture_default_str()
      ->check(CLI::IsMember({"group-law", "relu-limit"}));
  flow->add_option("--dim", flow_dim)->capture_default_str()->check(CLI::Range(1, 64));
  flow->add_option("--points", points)->capture_default_str()->check(CLI::Range(1, 100000));
  flow->add_option("--pairs", time_pairs, "number of (t1,t2) pairs")->capture_default_str()->check(CLI::Range(1, 10000));
  flow->add_option("--step", step)->capture_default_str();
  flow->add_option("--tolerance", tolerance, "exit 1 when the deviation reaches this")->capture_default_str();
  flow->add_option("--out", c.out, "also write the report here");

  // train
  auto* tr = app.add_subcommand("train", "train a network to separate the two sides of a pair");
  add_pair_opts(tr, c);
  int width = 3, depth = 2, epochs = 2000;
  double lr = 0.02, momentum = 0.9;
  std::string loss = "hinge-separation";
  std::string final_act = "none";
  tr->add_option("--width", width)->capture_default_str()->check(CLI::Range(1, 4096));
  tr->add_option("--depth", depth)->capture_default_str()->check(CLI::Range(1, 64));
  tr->add_option("--activation", activation)->capture_default_str();
  tr->add_option("--final-activation", final_act, "none or hidden")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "hidden"}));
  tr->add_option("--epochs", epochs)->capture_default_str()->check(CLI::NonNegativeNumber);
  tr->add_option("--lr", lr)->capture_default_str();
  tr->add_option("--momentum", momentum)->capture_default_str();
  tr->add_option("--loss", loss)->capture_default_str();
  tr->add_option("--out", c.out, "output directory for net.json and loss.csv")->required();

  // separate
  auto* sep = app.add_subcommand("separate", "test whether a map separates the two sides");
  add_pair_opts(sep, c);
  std::string net_path;
  int project_dim = 0, random_linear_dim = 0;
  double threshold = 0.0;
  std::optional<std::string> expect_sep;
  auto* o_net = sep->add_option("--net", net_path, "MLP JSON file");
  auto* o_proj = sep->add_option("--project", project_dim, "keep the first m coordinates");
  auto* o_lin = sep->add_option("--random-linear", random_linear_dim, "random Gaussian m x n map from --seed");
  o_net->excludes(o_proj)->excludes(o_lin);
  o_proj->excludes(o_lin);
  sep->add_option("--threshold", threshold, "0 selects the default")->capture_default_str();
  sep->add_option("--expect", expect_sep)->check(CLI::IsMember({"separated", "not-separated"}));
  sep->add_option("--out", c.out, "also write the report here");

  // approx
  auto* ap = app.add_subcommand("approx", "approximation gap against the 0 / 2δ target");
  double delta = 0.1;
  std::size_t sphere_samples = 1000;
  std::optional<std::string> expect_bound;
  ap->add_option("--net", net_path, "MLP JSON file (otherwise a random net)");
  ap->add_option("--width", width)->capture_default_str()->check(CLI::Range(1, 4096));
  ap->add_option("--depth", depth)->capture_default_str()->check(CLI::Range(1, 64));
  ap->add_option("--activation", activation)->capture_default_str();
  ap->add_option("--dim", c.dim)->capture_default_str()->check(CLI::Range(2, 16));
  ap->add_option("--delta", delta)->capture_default_str()->check(CLI::PositiveNumber);
  ap->add_option("--samples", sphere_samples)->capture_default_str()->check(CLI::Range(8, 1 << 20));
  ap->add_option("--expect", expect_bound)->check(CLI::IsMember({"bound-holds", "below-delta"}));
  ap->add_option("--out", c.out, "also write the report here");

  // experiment
  auto* ex = app.add_subcommand("experiment", "run an experiment from a JSON config");
  std::string config_path, out_dir;
  ex->add_option("--config", config_path)->required();
  ex->add_option("--out-dir", out_dir, "overrides out_dir from the config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const EmbeddedPair pair = load_pair(c.pair, c.samples, c.dim);
      write_text_file(c.out, json(pair).dump(2) + "\n");
      if (!csv_prefix.empty()) {
        write_text_file(csv_prefix + "_a.csv", cloud_to_csv(pair.side_a));
        write_text_file(csv_prefix + "_b.csv", cloud_to_csv(pair.side_b));
      }
      std::cout << "wrote " << c.out << ": " << pair.side_a.size() << " + " << pair.side_b.size()
                << " points in R^" << pair.ambient_dim() << ", min gap " << format_double(pair.min_gap) << "\n";
      return 0;
    }
    if (*deg) {
      const EmbeddedPair pair = load_pair(c.pair, c.samples, c.dim);
      const DegreeReport rep = pair_degree(pair);
      emit(rep, c.out);
      if (expect_degree && *expect_degree != rep.rounded) {
        std::cerr << "expected degree " << *expect_degree << ", got " << rep.rounded << "\n";
        return 1;
      }
      return 0;
    }
    if (*flow) {
      const ActivationKind act = ActivationKind::parse(activation);
      require(step > 0.0 && step <= kMaxFlowStep, "step must lie in (0, 1e-2]");
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> box(-5.0, 5.0), unit(0.0, 1.0);
      std::vector<Vec> xs;
      for (int k = 0; k < points; ++k) {
        Vec x(flow_dim);
        for (int i = 0; i < flow_dim; ++i) x(i) = box(rng);
        xs.push_back(x);
      }
      json rep{{"activation", act.name()}, {"check", check}, {"dim", flow_dim}, {"points", points}, {"step", step}};
      double dev = 0.0;
      if (check == "group-law") {
        std::vector<std::pair<double, double>> times;
        for (int k = 0; k < time_pairs; ++k) {
          const double total = 5.0 * unit(rng);
          const double t1 = total * unit(rng);
          times.emplace_back(t1, total - t1);
        }
        dev = check_group_law(act, xs, times, step);
        rep["time_pairs"] = time_pairs;
      } else {
        // relu flow: fixed on x >= 0, x e^{-t} below
        require(act.tag == ActivationKind::Tag::Relu, "relu-limit check needs --activation relu");
        for (int k = 0; k < time_pairs; ++k) {
          const double t = 5.0 * unit(rng);
          for (const auto& x : xs) {
            const Vec y = integrate_flow(act, x, t, step);
            for (int i = 0; i < flow_dim; ++i) {
              const double want = x(i) >= 0.0 ? x(i) : x(i) * std::exp(-t);
              dev = std::max(dev, std::abs(y(i) - want));
            }
          }
        }
        rep["times"] = time_pairs;
      }
      rep["max_deviation"] = dev;
      rep["tolerance"] = tolerance;
      rep["passed"] = dev < tolerance;
      emit(rep, c.out);
      return dev < tolerance ? 0 : 1;
    }
    if (*tr) {
      const EmbeddedPair pair = load_pair(c.pair, c.samples, c.dim);
      const MLPSpec spec = MLPSpec::uniform(pair.ambient_dim(), width, depth, 1, ActivationKind::parse(activation),
                                            final_act == "none" ? FinalActivation::None : FinalActivation::SameAsHidden,
                                            c.seed);
      TrainConfig cfg;
      cfg.learning_rate = lr;
      cfg.epochs = epochs;
      cfg.loss = loss_kind_from_string(loss);
      cfg.momentum = momentum;
      cfg.seed = c.seed;
      require(cfg.loss != LossKind::SupGap, "train separates pairs; use hinge-separation or mean-squared-error");
      const TrainResult res = train(init(spec), separation_data(pair), cfg);
      write_text_file(c.out + "/net.json", json(res.net).dump(2) + "\n");
      write_text_file(c.out + "/loss.csv", loss_trace_to_csv(res.loss_trace));
      const SeparationReport rep = classify_check(res.net, pair, 0.0);
      write_text_file(c.out + "/separation.json", json(rep).dump(2) + "\n");
      std::cout << "final loss " << format_double(res.loss_trace.empty() ? 0.0 : res.loss_trace.back()) << ", "
                << (rep.separated ? "separated" : "not separated") << ", min gap " << format_double(rep.min_inter_gap)
                << "\n";
      return 0;
    }
    if (*sep) {
      const EmbeddedPair pair = load_pair(c.pair, c.samples, c.dim);
      SeparationReport rep;
      if (!net_path.empty()) {
        rep = classify_check(load_net(net_path), pair, threshold);
      } else if (project_dim > 0) {
        require(project_dim < pair.ambient_dim(), "--project needs m < n");
        rep = projection_probe(pair, project_dim, 2, threshold).report;
      } else {
        require(random_linear_dim > 0, "give one of --net, --project, --random-linear");
        std::mt19937_64 rng(c.seed);
        rep = linear_map_check(pair, random_linear_map(random_linear_dim, pair.ambient_dim(), rng), threshold);
      }
      emit(rep, c.out);
      return verdict_exit(expect_sep, rep.separated ? "separated" : "not-separated");
    }
    if (*ap) {
      MLP net = net_path.empty() ? init(MLPSpec::uniform(c.dim, width, depth, 1, ActivationKind::parse(activation),
                                                         FinalActivation::None, c.seed))
                                 : load_net(net_path);
      const ApproxGapReport rep = approximation_gap(net, c.dim, delta, sphere_samples);
      json j = rep;
      j["width"] = net.spec.width();
      j["depth"] = net.spec.depth();
      emit(j, c.out);
      return verdict_exit(expect_bound, rep.sup_error_lower_bound >= delta - 1e-6 ? "bound-holds" : "below-delta");
    }
    if (*ex) {
      ExperimentConfig cfg;
      try {
        cfg = json::parse(read_text_file(config_path)).get<ExperimentConfig>();
      } catch (const json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
      }
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      const ExperimentResult res = run_experiment(cfg);
      std::cout << cfg.experiment << ": " << res.rows.size() << " runs, config " << res.config_hash << "\n";
      for (const auto& [verdict, count] : res.summary["verdicts"].items())
        std::cout << "  " << verdict << " " << count.get<int>() << "\n";
      std::cout << "wrote " << cfg.out_dir << "/results.csv and manifest.json\n";
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
