#ifndef DOA_ERRORS_HPP
#define DOA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace doa {

// Violated precondition on user-supplied configuration or inputs
// (bad geometry, empty source list, out-of-range angle, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure on otherwise valid input: rank-deficient systems,
// ill-conditioned matrices, eigensolver non-convergence.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace doa

#endif  // DOA_ERRORS_HPP
