#include "linkobs/activation.hpp"

#include <cmath>
#include <cstdio>

#include "linkobs/error.hpp"

namespace linkobs {

ActivationKind ActivationKind::leaky_relu(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "leaky-relu slope must lie in (0,1]");
  return {Tag::LeakyRelu, alpha};
}

ActivationKind ActivationKind::elu(double alpha) {
  require(alpha > 0.0, "elu scale must be positive");
  return {Tag::Elu, alpha};
}

ActivationKind ActivationKind::parse(const std::string& s) {
  std::string head = s;
  double arg = 0.0;
  bool has_arg = false;
  if (auto open = s.find('('); open != std::string::npos) {
    require(s.back() == ')', "malformed activation: " + s);
    head = s.substr(0, open);
    try {
      arg = std::stod(s.substr(open + 1, s.size() - open - 2));
    } catch (const std::exception&) {
      throw InvalidArgument("malformed activation parameter: " + s);
    }
    has_arg = true;
  }
  if (head == "relu") return relu();
  if (head == "leaky-relu") return leaky_relu(has_arg ? arg : 0.1);
  if (head == "elu") return elu(has_arg ? arg : 1.0);
  if (head == "sigmoid") return sigmoid();
  if (head == "tanh") return tanh();
  if (head == "identity") return identity();
  throw InvalidArgument("unknown activation: " + s);
}

std::string ActivationKind::name() const {
  auto with = [](const char* base, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s(%g)", base, a);
    return std::string(buf);
  };
  switch (tag) {
    case Tag::Relu: return "relu";
    case Tag::LeakyRelu: return with("leaky-relu", alpha);
    case Tag::Elu: return with("elu", alpha);
    case Tag::Sigmoid: return "sigmoid";
    case Tag::Tanh: return "tanh";
    case Tag::Identity: return "identity";
  }
  return "identity";
}

double ActivationKind::apply(double x) const {
  switch (tag) {
    case Tag::Relu: return x > 0.0 ? x : 0.0;
    case Tag::LeakyRelu: return x > 0.0 ? x : alpha * x;
    case Tag::Elu: return x > 0.0 ? x : alpha * std::expm1(x);
    case Tag::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Tag::Tanh: return std::tanh(x);
    case Tag::Identity: return x;
  }
  return x;
}

double ActivationKind::derivative(double x) const {
  switch (tag) {
    case Tag::Relu: return x > 0.0 ? 1.0 : 0.0;
    case Tag::LeakyRelu: return x > 0.0 ? 1.0 : alpha;
    case Tag::Elu: return x > 0.0 ? 1.0 : alpha * std::exp(x);
    case Tag::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
    case Tag::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Tag::Identity: return 1.0;
  }
  return 1.0;
}

Eigen::ArrayXXd ActivationKind::apply(const Eigen::ArrayXXd& x) const {
  switch (tag) {
    case Tag::Relu: return x.max(0.0);
    case Tag::Sigmoid: return 1.0 / (1.0 + (-x).exp());
    case Tag::Tanh: return x.tanh();
    case Tag::Identity: return x;
    default: return x.unaryExpr([this](double v) { return apply(v); });
  }
}

Eigen::ArrayXXd ActivationKind::derivative(const Eigen::ArrayXXd& x) const {
  switch (tag) {
    case Tag::Relu: return (x > 0.0).cast<double>();
    case Tag::Sigmoid: {
      const Eigen::ArrayXXd s = 1.0 / (1.0 + (-x).exp());
      return s * (1.0 - s);
    }
    case Tag::Tanh: return 1.0 - x.tanh().square();
    case Tag::Identity: return Eigen::ArrayXXd::Ones(x.rows(), x.cols());
    default: return x.unaryExpr([this](double v) { return derivative(v); });
  }
}

}  // namespace linkobs
