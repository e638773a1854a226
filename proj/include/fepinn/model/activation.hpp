#pragma once

#include <string>

#include "fepinn/ad/jet.hpp"
#include "fepinn/core/errors.hpp"

namespace fepinn {

enum class Activation { Tanh, Sine, Relu, Gelu, Swish };

inline const char* to_string(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Sine: return "sine";
    case Activation::Relu: return "relu";
    case Activation::Gelu: return "gelu";
    case Activation::Swish: return "swish";
  }
  return "?";
}

inline Activation activation_from_string(const std::string& s) {
  if (s == "tanh") return Activation::Tanh;
  if (s == "sine") return Activation::Sine;
  if (s == "relu") return Activation::Relu;
  if (s == "gelu") return Activation::Gelu;
  if (s == "swish") return Activation::Swish;
  throw ConfigError("unknown activation '" + s + "'");
}

/// Value and first three derivatives of the activation at z. The third
/// derivative feeds the reverse pass through second-order jet components.
template <class T>
ChainDerivs<T> cd_activation(Activation kind, const T& z) {
  using std::erf;
  using std::exp;
  switch (kind) {
    case Activation::Tanh:
      return cd_tanh(z);
    case Activation::Sine:
      return cd_sin(z);
    case Activation::Relu: {
      if (primal(z) > 0.0) return {z, T(1.0), T(0.0), T(0.0)};
      return {T(0.0), T(0.0), T(0.0), T(0.0)};
    }
    case Activation::Gelu: {
      // g0 = z Phi(z) with Phi the standard normal CDF, phi its density.
      const T inv_sqrt2 = T(0.70710678118654752440);
      const T phi = exp(-0.5 * (z * z)) * T(0.39894228040143267794);
      const T Phi = 0.5 * (1.0 + erf(z * inv_sqrt2));
      return {z * Phi, Phi + z * phi, (2.0 - z * z) * phi, (z * z * z - 4.0 * z) * phi};
    }
    case Activation::Swish: {
      const T s = 1.0 / (1.0 + exp(-z));
      const T s1 = s * (1.0 - s);
      const T s2 = s1 * (1.0 - 2.0 * s);
      const T s3 = s2 * (1.0 - 2.0 * s) - 2.0 * (s1 * s1);
      return {z * s, s + z * s1, 2.0 * s1 + z * s2, 3.0 * s2 + z * s3};
    }
  }
  return {};
}

}  // namespace fepinn
