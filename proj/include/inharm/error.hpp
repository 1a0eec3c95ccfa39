#pragma once

#include <stdexcept>

namespace inharm {

// File could not be read, written or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The input is well-formed but the requested measurement has no answer
// (too few partials, no regular grid, a fit that does not converge).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace inharm
