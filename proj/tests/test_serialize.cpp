#include <doctest.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <limits>
#include <random>

#include "linkobs/serialize.hpp"

using namespace linkobs;

namespace {

bool bitwise_equal(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// doubles across many magnitudes, including subnormals and negative zero
double wild_double(std::mt19937_64& rng) {
  for (;;) {
    const double v = std::bit_cast<double>(rng());
    if (std::isfinite(v)) return v;
  }
}

}  // namespace

TEST_CASE("format_double reads back exactly") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 20000; ++k) {
    const double v = wild_double(rng);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1e-7) == "1e-07");
}

TEST_CASE("CSV round trip is bit exact") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 1 + trial % 5;
    PointCloud c;
    c.points = Mat::NullaryExpr(dim, 1 + trial, [&] { return wild_double(rng); });
    const std::string csv = cloud_to_csv(c);
    CHECK(csv.rfind("x1", 0) == 0);
    CHECK(bitwise_equal(cloud_from_csv(csv).points, c.points));
  }
  CHECK_THROWS_AS(cloud_from_csv("x1,x2\n1,2\n3\n"), InvalidArgument);
  CHECK_THROWS_AS(cloud_from_csv("x1\nabc\n"), InvalidArgument);
}

TEST_CASE("pair JSON round trip") {
  for (const auto& name : builtin_pair_names()) {
    const EmbeddedPair p = builtin_pair(name, 64, 3);
    const json j = p;
    const EmbeddedPair q = json::parse(j.dump()).get<EmbeddedPair>();
    CAPTURE(name);
    CHECK(bitwise_equal(p.side_a.points, q.side_a.points));
    CHECK(bitwise_equal(p.side_b.points, q.side_b.points));
    CHECK(p.expected_degree == q.expected_degree);
    CHECK(p.min_gap == q.min_gap);
    CHECK(p.side_a.kind() == q.side_a.kind());
    CHECK(p.side_a.parametrization->simplices == q.side_a.parametrization->simplices);
    CHECK(p.side_a.parametrization->descriptor == q.side_a.parametrization->descriptor);
    CHECK(json(q).dump() == j.dump());
  }
  // the degree pipeline is unchanged by a trip through text
  const EmbeddedPair h = builtin_pair("hopf", 128);
  const EmbeddedPair h2 = json::parse(json(h).dump(2)).get<EmbeddedPair>();
  CHECK(pair_degree(h).estimate == pair_degree(h2).estimate);
}

TEST_CASE("pair JSON rejects bad input") {
  json j = builtin_pair("hopf", 16);
  j["side_a"]["points"][0] = {1.0, 2.0};
  CHECK_THROWS_AS(j.get<EmbeddedPair>(), InvalidArgument);
  json k = builtin_pair("hopf", 16);
  k["side_b"]["points"][0] = k["side_a"]["points"][0];
  CHECK_THROWS_AS(k.get<EmbeddedPair>(), NumericFailure);
}

TEST_CASE("MLP JSON round trip") {
  std::mt19937_64 rng(3);
  for (const std::string act : {"relu", "leaky-relu(0.2)", "elu(1.5)", "sigmoid", "tanh", "identity"}) {
    MLP net = init(MLPSpec::uniform(3, 5, 3, 2, ActivationKind::parse(act), FinalActivation::SameAsHidden, 7));
    for (auto& b : net.biases) b = Vec::NullaryExpr(b.size(), [&] { return std::ldexp(double(rng() >> 11), -53); });
    const MLP back = json::parse(json(net).dump()).get<MLP>();
    CHECK(back.spec.layer_dims == net.spec.layer_dims);
    CHECK(back.spec.activation == net.spec.activation);
    CHECK(back.spec.final_activation == net.spec.final_activation);
    CHECK(back.spec.seed == 7);
    for (std::size_t i = 0; i < net.weights.size(); ++i) {
      CHECK(bitwise_equal(back.weights[i], net.weights[i]));
      CHECK(bitwise_equal(back.biases[i], net.biases[i]));
    }
    const Mat X = Mat::Random(3, 10);
    CHECK(bitwise_equal(back.forward_batch(X), net.forward_batch(X)));
  }
  json bad = init(MLPSpec::uniform(3, 2, 2, 1, ActivationKind::relu(), FinalActivation::None, 0));
  bad["weights"][0] = json::array({json::array({1.0})});
  CHECK_THROWS_AS(bad.get<MLP>(), InvalidArgument);
}

TEST_CASE("report JSON shapes") {
  const json d = pair_degree(builtin_pair("hopf", 64));
  for (const char* key : {"estimate", "rounded", "residual", "method", "samples_used"}) CHECK(d.contains(key));
  CHECK(d["method"] == "gauss-linking-integral");
  const json s = check_separation(builtin_pair("hopf", 64).side_a, builtin_pair("far-separated", 64).side_b);
  for (const char* key : {"separated", "min_inter_gap", "witness", "ball_certificate", "method"}) CHECK(s.contains(key));
}

TEST_CASE("trace CSVs and hashing") {
  CHECK(loss_trace_to_csv({0.5, 0.25}) == "epoch,loss\n0,0.5\n1,0.25\n");
  HomotopyTracePoint a{0.0, 1.0, 0.1, 1.0, 1};
  HomotopyTracePoint b{1.0, 0.01, 0.1, std::nullopt, std::nullopt};
  CHECK(homotopy_trace_to_csv({a, b}) == "s,min_gap,degree_estimate\n0,1,1\n1,0.01,\n");
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
