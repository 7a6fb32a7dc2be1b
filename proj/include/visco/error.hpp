#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace visco {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A tensor required to be invertible is numerically singular.
struct SingularTensorError : Error {
  using Error::Error;
};

/// det(F) <= 0 at a material point; the current Newton iterate is unusable.
struct InvertedElementError : Error {
  using Error::Error;
};

/// Invalid or inconsistent run configuration. Carries every problem found,
/// not just the first.
struct ConfigError : Error {
  explicit ConfigError(std::vector<std::string> issues_)
      : Error(join(issues_)), issues(std::move(issues_)) {}
  explicit ConfigError(const std::string& single)
      : ConfigError(std::vector<std::string>{single}) {}

  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "configuration error";
    for (const auto& i : v) {
      s += "\n  - " + i;
    }
    return s;
  }
};

/// The Newton loop exhausted l_max without meeting a stopping criterion.
struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& what, int step_, int iterations_)
      : Error(what), step(step_), iterations(iterations_) {}
  int step = -1;
  int iterations = 0;
};

}  // namespace visco
