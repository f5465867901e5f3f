#pragma once
#include <stdexcept>
#include <string>

namespace lab {

struct param_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct lookup_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct schedule_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver failed to reach tolerance; carries the last relative residual.
struct solver_error : std::runtime_error {
    double residual;
    solver_error(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace lab
