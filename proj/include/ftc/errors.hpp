#pragma once

#include <stdexcept>
#include <string>

namespace ftc {

/// Exact inverse (gamma = 0) evaluated at a zero relative state.
class SingularityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state component.
class NonFiniteError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ftc
