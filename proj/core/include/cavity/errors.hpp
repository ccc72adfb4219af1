#pragma once

#include <stdexcept>
#include <string>

namespace cavity {

// A response function or amplitude was evaluated exactly on a pole.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The mode condition vanished inside a finite-difference stencil.
class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument-principle contour passes through (or too close to) a zero or pole,
// or the square-root branch could not be continued around it.
class ContourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cavity
