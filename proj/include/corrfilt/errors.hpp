#pragma once

#include <stdexcept>

namespace corrfilt {

/// Invalid parameters or configuration. The CLI maps this to exit code 1.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical or I/O failure while running an experiment (exit code 2).
class run_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace corrfilt
