#pragma once

#include <stdexcept>
#include <string>

namespace freeprob {

// Precondition violations throw std::invalid_argument. Everything that goes
// wrong inside a numerical routine (no convergence, branch errors, non-finite
// values) throws numerical_error or one of its subclasses.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class convergence_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class branch_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

}  // namespace freeprob
