#pragma once

#include <stdexcept>
#include <string>

namespace polylab {

// Exit-code mapping used by the CLI: validation -> 2, capacity -> 3, numerical -> 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polylab
