#pragma once

#include <stdexcept>
#include <string>

namespace shadowlab {

// Bad arguments, violated preconditions, malformed input files. CLI exit code 1.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Root finders, power iteration, failed certificates. CLI exit code 2.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measured quantity exceeded the stochastic-stability bound. CLI exit code 3.
class bound_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace shadowlab
