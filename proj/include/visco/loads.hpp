#pragma once

// Load descriptions: scalar time functions, surface tractions on named face
// sets, body forces, and homogeneous Dirichlet constraints.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "visco/tensor.hpp"

namespace visco {

/// Scalar time profile, total on [0, T].
///   hat(peak_t, end_t): rises with unit slope to peak_t, falls linearly to
///                       zero at end_t, zero afterwards.
///   sin(amplitude, omega): amplitude * sin(omega t).
///   const(v): constant v.
struct TimeFunction {
  enum class Kind { Hat, Sin, Const } kind = Kind::Const;
  double a = 0.0;  // peak_t | amplitude | value
  double b = 0.0;  // end_t  | omega     | unused

  double operator()(double t) const {
    switch (kind) {
      case Kind::Hat:
        if (t <= 0.0 || t >= b) return 0.0;
        return t <= a ? t : (b - t) * a / (b - a);
      case Kind::Sin:
        return a * std::sin(b * t);
      case Kind::Const:
        return a;
    }
    return 0.0;
  }

  static TimeFunction hat(double peak_t, double end_t) {
    return {Kind::Hat, peak_t, end_t};
  }
  static TimeFunction sine(double amplitude, double omega) {
    return {Kind::Sin, amplitude, omega};
  }
  static TimeFunction constant(double v) { return {Kind::Const, v, 0.0}; }
};

/// Reference-configuration traction H(t) = f(t) * direction on a face set.
struct TractionLoad {
  std::string face_set;
  Vector3 direction = Vector3::Zero();  // Pa
  TimeFunction profile;

  Vector3 eval(double t) const { return profile(t) * direction; }
};

/// Body force B(t) = f(t) * direction per unit mass (enters as rho0 B).
struct BodyForce {
  Vector3 direction = Vector3::Zero();  // m/s^2
  TimeFunction profile;

  Vector3 eval(double t) const { return profile(t) * direction; }
};

/// Homogeneous constraint U = V = 0 on the selected components of a face set.
struct DirichletSpec {
  std::string face_set;
  std::array<bool, 3> components{true, true, true};
};

struct LoadSpec {
  std::vector<TractionLoad> tractions;
  std::vector<BodyForce> body_forces;
  std::vector<DirichletSpec> dirichlet;

  Vector3 body_at(double t) const {
    Vector3 b = Vector3::Zero();
    for (const auto& f : body_forces) b += f.eval(t);
    return b;
  }
};

}  // namespace visco
