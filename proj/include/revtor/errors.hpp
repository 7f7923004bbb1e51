#pragma once

#include <stdexcept>
#include <string>

namespace revtor {

/// Input/profile rejection; maps to CLI exit code 1.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature/integration/convergence failure; maps to CLI exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace revtor
