#pragma once

#include <string>

#include <Eigen/Dense>

namespace linkobs {

/// Scalar activation applied componentwise.
struct ActivationKind {
  enum class Tag { Relu, LeakyRelu, Elu, Sigmoid, Tanh, Identity };
  Tag tag = Tag::Relu;
  double alpha = 0.0;  // leaky-relu slope in (0,1]; elu scale > 0

  static ActivationKind relu() { return {Tag::Relu, 0.0}; }
  static ActivationKind leaky_relu(double alpha);
  static ActivationKind elu(double alpha);
  static ActivationKind sigmoid() { return {Tag::Sigmoid, 0.0}; }
  static ActivationKind tanh() { return {Tag::Tanh, 0.0}; }
  static ActivationKind identity() { return {Tag::Identity, 0.0}; }

  /// Parses "relu", "leaky-relu", "leaky-relu(0.1)", "elu(1)", "sigmoid",
  /// "tanh", "identity". Bare leaky-relu/elu use α = 0.1 and 1.
  static ActivationKind parse(const std::string& s);
  std::string name() const;

  double apply(double x) const;
  /// Derivative; the relu family uses 0 at the kink.
  double derivative(double x) const;

  Eigen::ArrayXXd apply(const Eigen::ArrayXXd& x) const;
  Eigen::ArrayXXd derivative(const Eigen::ArrayXXd& x) const;

  friend bool operator==(const ActivationKind&, const ActivationKind&) = default;
};

}  // namespace linkobs
