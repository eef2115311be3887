#pragma once

// The four size-to-effort curve families and their parameter gradients,
// templated on scalar so tests can evaluate them in extended precision.
//
//   Polynomial  y = a x^2 + b x + c
//   Exp1        y = a + b exp(c x)
//   Exp2        y = a exp(b x) + c exp(d x)
//   Exp3        y = exp(a + b x)

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string_view>

namespace ucpoint {

enum class ModelKind { Polynomial, Exp1, Exp2, Exp3 };

inline constexpr ModelKind kAllModelKinds[] = {ModelKind::Polynomial, ModelKind::Exp1,
                                               ModelKind::Exp2, ModelKind::Exp3};

constexpr int parameter_count(ModelKind kind) {
  switch (kind) {
    case ModelKind::Polynomial: return 3;
    case ModelKind::Exp1: return 3;
    case ModelKind::Exp2: return 4;
    case ModelKind::Exp3: return 2;
  }
  return 0;
}

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view token);

template <typename Derived>
typename Derived::Scalar model_value(ModelKind kind, const Eigen::MatrixBase<Derived>& p,
                                     typename Derived::Scalar x) {
  using std::exp;
  switch (kind) {
    case ModelKind::Polynomial: return (p(0) * x + p(1)) * x + p(2);
    case ModelKind::Exp1: return p(0) + p(1) * exp(p(2) * x);
    case ModelKind::Exp2: return p(0) * exp(p(1) * x) + p(2) * exp(p(3) * x);
    case ModelKind::Exp3: return exp(p(0) + p(1) * x);
  }
  return typename Derived::Scalar(0);
}

// d model_value / d params at x.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> model_gradient(
    ModelKind kind, const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar x) {
  using Scalar = typename Derived::Scalar;
  using std::exp;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(parameter_count(kind));
  switch (kind) {
    case ModelKind::Polynomial:
      g << x * x, x, Scalar(1);
      break;
    case ModelKind::Exp1: {
      const Scalar e = exp(p(2) * x);
      g << Scalar(1), e, p(1) * x * e;
      break;
    }
    case ModelKind::Exp2: {
      const Scalar e1 = exp(p(1) * x);
      const Scalar e2 = exp(p(3) * x);
      g << e1, p(0) * x * e1, e2, p(2) * x * e2;
      break;
    }
    case ModelKind::Exp3: {
      const Scalar e = exp(p(0) + p(1) * x);
      g << e, x * e;
      break;
    }
  }
  return g;
}

// Jacobian of the model over a vector of abscissae, one row per point.
template <typename Derived, typename XDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> model_jacobian(
    ModelKind kind, const Eigen::MatrixBase<Derived>& p, const Eigen::MatrixBase<XDerived>& xs) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> J(xs.size(), parameter_count(kind));
  for (Eigen::Index i = 0; i < xs.size(); ++i) J.row(i) = model_gradient(kind, p, xs(i)).transpose();
  return J;
}

template <typename Derived, typename XDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> model_values(
    ModelKind kind, const Eigen::MatrixBase<Derived>& p, const Eigen::MatrixBase<XDerived>& xs) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> y(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) y(i) = model_value(kind, p, xs(i));
  return y;
}

}  // namespace ucpoint
