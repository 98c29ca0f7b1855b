#include <doctest.h>

#include <filesystem>
#include <random>

#include "linkobs/analysis.hpp"
#include "linkobs/experiment.hpp"
#include "linkobs/serialize.hpp"

using namespace linkobs;

namespace {

PointCloud line_cloud(std::vector<double> xs) {
  PointCloud c;
  c.points = Eigen::Map<Mat>(xs.data(), 1, static_cast<Eigen::Index>(xs.size()));
  return c;
}

PointCloud random_cloud(std::mt19937_64& rng, int dim, int n, const Vec& shift, double spread) {
  std::normal_distribution<double> g;
  PointCloud c;
  c.points = Mat::NullaryExpr(dim, n, [&] { return spread * g(rng); });
  c.points.colwise() += shift;
  return c;
}

std::string slurp(const std::string& p) { return read_text_file(p); }

}  // namespace

TEST_CASE("interval separation examples") {
  SeparationReport r = check_separation(line_cloud({0, 0.5, 1}), line_cloud({2, 2.5, 3}));
  CHECK(r.separated);
  CHECK(r.method == SeparationMethod::Interval1d);
  REQUIRE(r.ball_certificate.has_value());
  CHECK(r.min_inter_gap == doctest::Approx(1.0));
  r = check_separation(line_cloud({0, 0.8, 1.6, 2}), line_cloud({1, 1.7, 3}));
  CHECK_FALSE(r.separated);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->first(0) >= 1.0);
  CHECK(r.witness->first(0) <= 2.0);
  CHECK(r.min_inter_gap == doctest::Approx(0.1));
  CHECK_THROWS_AS(check_separation(line_cloud({}), line_cloud({1})), InvalidArgument);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(check_separation(line_cloud({0}), random_cloud(rng, 2, 3, Vec::Zero(2), 1)), InvalidArgument);
}

TEST_CASE("minimum enclosing balls") {
  // equilateral triangle: circumradius 1
  Mat tri(2, 3);
  tri << 1, -0.5, -0.5, 0, std::sqrt(3.0) / 2, -std::sqrt(3.0) / 2;
  Ball b = min_enclosing_ball(tri);
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.center.norm() < 1e-12);
  // obtuse triangle: the longest side is a diameter
  Mat obt(2, 3);
  obt << -1, 1, 0, 0, 0, 0.2;
  b = min_enclosing_ball(obt);
  CHECK(b.radius == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(3);
  for (int dim : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const PointCloud c = random_cloud(rng, dim, 200, Vec::Zero(dim), 1.0);
      const Ball ball = min_enclosing_ball(c.points);
      for (Eigen::Index i = 0; i < c.points.cols(); ++i) CHECK(ball.contains(c.points.col(i)));
      // no smaller ball about the same centre covers the farthest point
      double far = 0.0;
      for (Eigen::Index i = 0; i < c.points.cols(); ++i) far = std::max(far, (c.points.col(i) - ball.center).norm());
      CHECK(far == doctest::Approx(ball.radius).epsilon(1e-9));
    }
  }
}

TEST_CASE("separated verdicts always carry a valid certificate") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 6.0);
  int separated = 0, not_separated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 3;
    const Vec shift = Vec::Constant(dim, u(rng));
    const PointCloud a = random_cloud(rng, dim, 40, Vec::Zero(dim), 1.0);
    const PointCloud b = random_cloud(rng, dim, 40, shift, 1.0);
    const SeparationReport r = check_separation(a, b);
    if (r.separated) {
      ++separated;
      CHECK(certificate_holds(r, a, b));
    } else {
      ++not_separated;
      CHECK((r.witness.has_value() || r.indeterminate));
    }
  }
  CHECK(separated > 0);
  CHECK(not_separated > 0);
}

TEST_CASE("linear maps cannot separate the hopf pair") {
  const EmbeddedPair p = builtin_pair("hopf", 256);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    for (int m : {1, 2}) CHECK_FALSE(linear_map_check(p, random_linear_map(m, 3, rng)).separated);
  }
  // zero-degree control: keep the x axis of the far pair
  const EmbeddedPair far = builtin_pair("far-separated", 256);
  Mat keep_x = Mat::Zero(1, 3);
  keep_x(0, 0) = 1.0;
  const SeparationReport r = linear_map_check(far, keep_x);
  CHECK(r.separated);
  CHECK_THROWS_AS(linear_map_check(p, Mat::Identity(3, 3)), InvalidArgument);
}

TEST_CASE("conjugated linear maps") {
  const EmbeddedPair p = builtin_pair("hopf", 256);
  std::mt19937_64 rng(8);
  const Mat L = random_full_rank_map(2, 3, rng);
  const SeparationReport plain = linear_map_check(p, L);
  const SeparationReport conj = conjugate_map_check(p, L, Homeomorphism::identity(3), Homeomorphism::identity(2));
  CHECK(plain.separated == conj.separated);
  CHECK(plain.min_inter_gap == doctest::Approx(conj.min_inter_gap).epsilon(1e-12));
  for (int k = 0; k < 10; ++k) {
    const Mat M = random_full_rank_map(1 + k % 2, 3, rng);
    const Homeomorphism pre = random_monotone_homeomorphism(3, rng);
    const Homeomorphism post = random_monotone_homeomorphism(static_cast<int>(M.rows()), rng);
    CHECK_NOTHROW(pre.validate());
    CHECK_FALSE(conjugate_map_check(p, M, pre, post).separated);
  }
  CHECK_THROWS_AS(conjugate_map_check(p, L, Homeomorphism::identity(3), Homeomorphism::identity(3)),
                  InvalidArgument);
}

TEST_CASE("width-4 nets can separate what width-3 nets cannot") {
  const EmbeddedPair p = builtin_pair("hopf", 128);
  int narrow_separated = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed)
    for (int depth : {2, 3, 4})
      narrow_separated += classify_check(
          init(MLPSpec::uniform(3, 1 + static_cast<int>(seed % 3), depth, 1, ActivationKind::relu(), FinalActivation::None,
                                seed)),
          p).separated;
  CHECK(narrow_separated == 0);
  // far pair: Net(x) = x1 separates
  MLP id;
  id.spec = MLPSpec::uniform(3, 1, 2, 1, ActivationKind::relu(), FinalActivation::None, 0);
  id.weights = {(Mat(1, 3) << 1, 0, 0).finished(), Mat::Ones(1, 1)};
  id.biases = {Vec::Constant(1, 5.0), Vec::Zero(1)};
  CHECK(classify_check(id, builtin_pair("far-separated", 128)).separated);
}

TEST_CASE("approximation gap") {
  // constant δ: error δ at the origin and on the sphere
  MLP c;
  c.spec = MLPSpec::uniform(3, 3, 2, 1, ActivationKind::relu(), FinalActivation::None, 0);
  c.weights = {Mat::Zero(3, 3), Mat::Zero(1, 3)};
  c.biases = {Vec::Zero(3), Vec::Constant(1, 0.1)};
  const ApproxGapReport r = approximation_gap(c, 3, 0.1);
  CHECK(r.sup_error_lower_bound == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(r.net_at_origin == doctest::Approx(0.1));

  // polishing only ever adds sphere points
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MLP net = init(MLPSpec::uniform(3, 3, 3, 1, ActivationKind::relu(), FinalActivation::None, seed));
    const ApproxGapReport raw = approximation_gap(net, 3, 0.1, 500, 0);
    const ApproxGapReport pol = approximation_gap(net, 3, 0.1, 500);
    CHECK(pol.sup_error_lower_bound >= raw.sup_error_lower_bound);
    CHECK(pol.sup_error_lower_bound >= 0.1 - 1e-6);
    CHECK(std::abs(pol.argmax_point.norm() - (pol.argmax_point.isZero() ? 0.0 : 1.0)) < 1e-12);
  }

  const TrainingData d = approximation_data(3, 0.1, 200);
  CHECK(d.inputs.cols() == 201);
  CHECK(d.targets(0, 0) == doctest::Approx(0.2));
  CHECK(d.targets(0, 200) == 0.0);
  CHECK(d.weights(200) == doctest::Approx(d.weights.head(200).sum()));
  CHECK_THROWS_AS(approximation_gap(init(MLPSpec::uniform(3, 3, 2, 2, ActivationKind::relu(), FinalActivation::None, 0)),
                                    3, 0.1),
                  InvalidArgument);
}

TEST_CASE("experiment configs") {
  ExperimentConfig cfg = nlohmann::json::parse(R"({"experiment":"flow-group-law","seeds":[0,1],"dim":4})")
                             .get<ExperimentConfig>();
  CHECK(cfg.seeds.size() == 2);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"experiment":"x","colour":1})").get<ExperimentConfig>(), InvalidArgument);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"experiment":"flow-group-law","seeds":"0"})").get<ExperimentConfig>(),
                  InvalidArgument);
  ExperimentConfig bad = cfg;
  bad.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(bad), InvalidArgument);
  bad = cfg;
  bad.experiment = "width-classification";
  CHECK_THROWS_AS(run_experiment(bad), InvalidArgument);
}

TEST_CASE("experiments write the same bytes twice") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "linkobs_test_analysis";
  fs::remove_all(root);
  ExperimentConfig cfg;
  cfg.experiment = "width-classification";
  cfg.widths = {3};
  cfg.depths = {2};
  cfg.seeds = {0, 1};
  cfg.samples = 64;
  cfg.epochs = 50;
  std::vector<std::string> csv;
  for (const char* sub : {"a", "b"}) {
    cfg.out_dir = (root / sub).string();
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.rows.size() == 2);
    for (const auto& row : res.rows) CHECK(row.verdict == "not-separated");
    csv.push_back(slurp(cfg.out_dir + "/results.csv"));
    for (const auto& art : res.artifacts) CHECK(fs::exists(cfg.out_dir + "/" + art));
  }
  CHECK(csv[0] == csv[1]);
  CHECK(slurp((root / "a/run_0001/report.json").string()) == slurp((root / "b/run_0001/report.json").string()));
  CHECK(csv[0].rfind("seed,width,depth,verdict,min_gap,degree,activation,metric\n", 0) == 0);
  const auto manifest = nlohmann::json::parse(slurp((root / "a/manifest.json").string()));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
  CHECK(manifest["summary"]["runs"] == 2);
  fs::remove_all(root);
}
