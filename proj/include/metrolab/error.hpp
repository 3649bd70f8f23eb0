#pragma once

#include <stdexcept>
#include <string>

namespace metrolab {

// Two objects were combined that live on different Fock bases.
class BasisMismatch : public std::invalid_argument {
 public:
  explicit BasisMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical result left its admissible range (negative variance, failed
// eigendecomposition, non-PSD density matrix, truncation guard tripped).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metrolab
