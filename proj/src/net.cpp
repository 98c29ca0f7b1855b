#include "linkobs/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace linkobs {

int MLPSpec::width() const {
  int w = 0;
  for (std::size_t i = 1; i + 1 < layer_dims.size(); ++i) w = std::max(w, layer_dims[i]);
  return w;
}

void MLPSpec::validate() const {
  require(layer_dims.size() >= 2, "network needs at least input and output dimensions");
  for (int d : layer_dims) require(d > 0, "layer dimensions must be positive");
}

MLPSpec MLPSpec::uniform(int input, int width, int depth, int output, ActivationKind act, FinalActivation fin,
                         std::uint64_t seed) {
  require(depth >= 1, "depth must be at least 1");
  MLPSpec s;
  s.layer_dims.push_back(input);
  for (int i = 1; i < depth; ++i) s.layer_dims.push_back(width);
  s.layer_dims.push_back(output);
  s.activation = act;
  s.final_activation = fin;
  s.seed = seed;
  s.validate();
  return s;
}

void MLP::validate() const {
  spec.validate();
  const auto k = static_cast<std::size_t>(spec.depth());
  require(weights.size() == k && biases.size() == k, "layer count does not match spec");
  for (std::size_t i = 0; i < k; ++i) {
    require(weights[i].rows() == spec.layer_dims[i + 1] && weights[i].cols() == spec.layer_dims[i],
            "weight shape does not match spec");
    require(biases[i].size() == spec.layer_dims[i + 1], "bias shape does not match spec");
    require(weights[i].allFinite() && biases[i].allFinite(), "network has non-finite parameters");
  }
}

MLP init(const MLPSpec& spec) {
  spec.validate();
  MLP net;
  net.spec = spec;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < spec.depth(); ++i) {
    const int in = spec.layer_dims[static_cast<std::size_t>(i)];
    const int out = spec.layer_dims[static_cast<std::size_t>(i) + 1];
    Mat w(out, in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in));
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c) w(r, c) = normal(rng) * scale;
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vec::Zero(out));
  }
  return net;
}

namespace {

bool activated(const MLP& net, std::size_t layer) {
  return layer + 1 < net.weights.size() || net.spec.final_activation == FinalActivation::SameAsHidden;
}

}  // namespace

Mat MLP::forward_batch(const Mat& xs) const {
  require(xs.rows() == input_dim(), "input dimension does not match network");
  Mat a = xs;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    Mat z = (weights[i] * a).colwise() + biases[i];
    a = activated(*this, i) ? Mat(spec.activation.apply(z.array()).matrix()) : std::move(z);
  }
  return a;
}

Vec MLP::forward(const Vec& x) const { return forward_batch(x).col(0); }

PointCloud image_of(const MLP& net, const PointCloud& cloud) {
  require(cloud.ambient_dim() == net.input_dim(), "cloud dimension does not match network input");
  PointCloud out = cloud;
  out.points = net.forward_batch(cloud.points);
  if (out.parametrization) {
    out.parametrization->descriptor["mapped_by"] = "mlp";
    if (out.ambient_dim() != cloud.ambient_dim()) out.parametrization->simplices.clear();
  }
  return out;
}

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::HingeSeparation: return "hinge-separation";
    case LossKind::MeanSquaredError: return "mean-squared-error";
    case LossKind::SupGap: return "sup-gap";
  }
  return "mean-squared-error";
}

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "hinge-separation" || s == "hinge") return LossKind::HingeSeparation;
  if (s == "mean-squared-error" || s == "mse") return LossKind::MeanSquaredError;
  if (s == "sup-gap") return LossKind::SupGap;
  throw InvalidArgument("unknown loss: " + s);
}

void TrainConfig::validate() const {
  require(learning_rate > 0.0 && learning_rate <= 1.0, "learning rate must lie in (0,1]");
  require(epochs > 0, "epochs must be positive");
  require(batch >= 0, "batch must be nonnegative");
  require(momentum >= 0.0 && momentum < 1.0, "momentum must lie in [0,1)");
}

TrainingData separation_data(const EmbeddedPair& pair) {
  TrainingData d;
  const Eigen::Index na = pair.side_a.points.cols(), nb = pair.side_b.points.cols();
  d.inputs.resize(pair.ambient_dim(), na + nb);
  d.inputs << pair.side_a.points, pair.side_b.points;
  d.targets.resize(1, na + nb);
  d.targets.leftCols(na).setOnes();
  d.targets.rightCols(nb).setConstant(-1.0);
  return d;
}

namespace {

// Loss and dLoss/dOutputs. Empty `weights` means uniform.
double loss_and_seed(const Mat& out, const Mat& targets, LossKind loss, const Vec& weights, Mat* grad) {
  require(out.cols() == targets.cols(), "target count does not match batch");
  require(weights.size() == 0 || weights.size() == out.cols(), "weight count does not match batch");
  const Vec w = weights.size() ? weights : Vec::Ones(out.cols());
  const double total_w = w.sum();
  require(total_w > 0.0 && (w.array() >= 0.0).all(), "sample weights must be nonnegative with positive sum");
  if (grad) grad->setZero(out.rows(), out.cols());
  switch (loss) {
    case LossKind::HingeSeparation: {
      require(out.rows() == 1 && targets.rows() == 1, "hinge loss needs scalar output");
      double total = 0.0;
      for (Eigen::Index i = 0; i < out.cols(); ++i) {
        const double y = targets(0, i);
        require(y == 1.0 || y == -1.0, "hinge labels must be +1 or -1");
        const double m = 1.0 - y * out(0, i);
        if (m > 0.0) {
          total += w(i) * m;
          if (grad) (*grad)(0, i) = -y * w(i) / total_w;
        }
      }
      return total / total_w;
    }
    case LossKind::MeanSquaredError: {
      require(out.rows() == targets.rows(), "target dimension does not match output");
      const Mat diff = out - targets;
      if (grad) *grad = 2.0 * (diff.array().rowwise() * w.transpose().array()).matrix() / total_w;
      return (diff.colwise().squaredNorm().transpose().array() * w.array()).sum() / total_w;
    }
    case LossKind::SupGap: {
      require(out.rows() == 1 && targets.rows() == 1, "sup-gap loss needs scalar output");
      Eigen::Index k = 0;
      const double worst = (out - targets).cwiseAbs().row(0).maxCoeff(&k);
      if (grad) (*grad)(0, k) = out(0, k) >= targets(0, k) ? 1.0 : -1.0;
      return worst;
    }
  }
  return 0.0;
}

}  // namespace

double loss_value(const Mat& outputs, const Mat& targets, LossKind loss, const Vec& weights) {
  return loss_and_seed(outputs, targets, loss, weights, nullptr);
}

Gradients loss_gradient(const MLP& net, const Mat& inputs, const Mat& targets, LossKind loss, const Vec& weights) {
  require(inputs.rows() == net.input_dim(), "input dimension does not match network");
  const std::size_t k = net.weights.size();
  std::vector<Mat> acts;  // acts[0] = inputs, acts[i+1] = output of layer i
  std::vector<Mat> pre;   // pre-activations
  acts.reserve(k + 1);
  pre.reserve(k);
  acts.push_back(inputs);
  for (std::size_t i = 0; i < k; ++i) {
    pre.push_back((net.weights[i] * acts.back()).colwise() + net.biases[i]);
    acts.push_back(activated(net, i) ? Mat(net.spec.activation.apply(pre.back().array()).matrix()) : pre.back());
  }

  Gradients g;
  g.outputs = acts.back();
  Mat delta;
  g.loss = loss_and_seed(g.outputs, targets, loss, weights, &delta);
  g.weights.resize(k);
  g.biases.resize(k);
  for (std::size_t i = k; i-- > 0;) {
    if (activated(net, i)) delta = (delta.array() * net.spec.activation.derivative(pre[i].array())).matrix();
    g.weights[i] = delta * acts[i].transpose();
    g.biases[i] = delta.rowwise().sum();
    if (i > 0) delta = net.weights[i].transpose() * delta;
  }
  return g;
}

TrainResult train(MLP net, const TrainingData& data, const TrainConfig& cfg, const EpochObserver& observer) {
  cfg.validate();
  net.validate();
  require(data.inputs.cols() == data.targets.cols(), "inputs and targets differ in count");
  require(data.targets.allFinite(), "targets must be finite");
  require(data.weights.size() == 0 || data.weights.size() == data.inputs.cols(), "weight count does not match data");

  const Eigen::Index n = data.inputs.cols();
  const bool full = cfg.batch == 0 || cfg.batch >= n;
  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  std::vector<Mat> vel_w;
  std::vector<Vec> vel_b;
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    vel_w.push_back(Mat::Zero(net.weights[i].rows(), net.weights[i].cols()));
    vel_b.push_back(Vec::Zero(net.biases[i].size()));
  }
  auto step = [&](const Gradients& g) {
    for (std::size_t i = 0; i < net.weights.size(); ++i) {
      vel_w[i] = cfg.momentum * vel_w[i] - cfg.learning_rate * g.weights[i];
      vel_b[i] = cfg.momentum * vel_b[i] - cfg.learning_rate * g.biases[i];
      net.weights[i] += vel_w[i];
      net.biases[i] += vel_b[i];
    }
  };

  TrainResult res;
  res.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    if (full) {
      const Gradients g = loss_gradient(net, data.inputs, data.targets, cfg.loss, data.weights);
      if (!std::isfinite(g.loss)) throw NumericFailure("training loss became non-finite");
      if (observer) observer(epoch, g.loss, g.outputs);
      epoch_loss = g.loss;
      step(g);
    } else {
      std::shuffle(order.begin(), order.end(), rng);
      double weighted = 0.0;
      for (Eigen::Index start = 0; start < n; start += cfg.batch) {
        const Eigen::Index len = std::min<Eigen::Index>(cfg.batch, n - start);
        Mat xb(data.inputs.rows(), len), yb(data.targets.rows(), len);
        Vec wb = data.weights.size() ? Vec(len) : Vec();
        for (Eigen::Index j = 0; j < len; ++j) {
          const Eigen::Index src = order[static_cast<std::size_t>(start + j)];
          xb.col(j) = data.inputs.col(src);
          yb.col(j) = data.targets.col(src);
          if (wb.size()) wb(j) = data.weights(src);
        }
        const Gradients g = loss_gradient(net, xb, yb, cfg.loss, wb);
        if (!std::isfinite(g.loss)) throw NumericFailure("training loss became non-finite");
        weighted += g.loss * static_cast<double>(len);
        step(g);
      }
      epoch_loss = weighted / static_cast<double>(n);
      if (observer) observer(epoch, epoch_loss, net.forward_batch(data.inputs));
    }
    res.loss_trace.push_back(epoch_loss);
  }
  if (!(net.weights.empty() || net.weights.back().allFinite())) throw NumericFailure("training diverged");
  res.net = std::move(net);
  return res;
}

}  // namespace linkobs
