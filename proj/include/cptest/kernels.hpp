#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <string>
#include <utility>

#include "cptest/errors.hpp"
#include "cptest/matrix.hpp"

namespace cptest {

enum class KernelKind { Linear, Sign, Custom };

inline double sign_of(double x) {
  return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

/// Anti-symmetric pairwise kernel h: R^p x R^p -> R^d, h(x,y) = -h(y,x).
///
/// Built-ins:
///   linear  h(x,y) = x - y                 (d = p)
///   sign    h(x,y) = sign(x - y) per       (d = p)
///           component, with sign(0) = 0
///
/// Custom kernels are an extension point. They must be anti-symmetric and
/// shift-invariant; that is a documented contract on the callable, not a
/// runtime check. Only the built-ins have specialized evaluation paths.
class Kernel {
 public:
  using Fn = std::function<void(ConstRowRef x, ConstRowRef y, RowRef out)>;

  static Kernel linear() { return Kernel(KernelKind::Linear, "linear"); }
  static Kernel sign() { return Kernel(KernelKind::Sign, "sign"); }

  /// output_dim < 0 means "same as input dimension p".
  static Kernel custom(std::string name, Index output_dim, Fn fn) {
    Kernel k(KernelKind::Custom, std::move(name));
    k.custom_dim_ = output_dim;
    k.fn_ = std::move(fn);
    return k;
  }

  KernelKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  Index output_dim(Index p) const {
    if (kind_ == KernelKind::Custom && custom_dim_ >= 0) return custom_dim_;
    return p;
  }

  /// Writes h(x, y) into out. out must have size output_dim(x.size()).
  void apply_into(ConstRowRef x, ConstRowRef y, RowRef out) const {
    if (x.size() != y.size()) {
      throw DimensionMismatch("kernel arguments must have equal dimension");
    }
    switch (kind_) {
      case KernelKind::Linear:
        out = x - y;
        break;
      case KernelKind::Sign:
        for (Index k = 0; k < x.size(); ++k) out(k) = sign_of(x(k) - y(k));
        break;
      case KernelKind::Custom:
        fn_(x, y, out);
        break;
    }
  }

  RowVector apply(ConstRowRef x, ConstRowRef y) const {
    RowVector out(output_dim(x.size()));
    apply_into(x, y, out);
    return out;
  }

 private:
  Kernel(KernelKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  KernelKind kind_;
  std::string name_;
  Index custom_dim_ = -1;
  Fn fn_;
};

inline Kernel kernel_from_kind(KernelKind kind) {
  return kind == KernelKind::Sign ? Kernel::sign() : Kernel::linear();
}

inline const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Sign: return "sign";
    case KernelKind::Custom: return "custom";
  }
  return "unknown";
}

}  // namespace cptest
