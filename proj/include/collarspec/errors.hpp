#pragma once

#include <stdexcept>
#include <string>

namespace collarspec {

// Invalid configuration or violated precondition.  CLI exit code 2.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside a solver.  CLI exit code 3.
class solver_error : public std::runtime_error {
  public:
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace collarspec
