#ifndef TCCROSS_ERRORS_HPP
#define TCCROSS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tc {

// Bad user-facing configuration (CLI flags, config files, sweep grids).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver ran out of budget or a constraint target is unreachable.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tc

#endif
