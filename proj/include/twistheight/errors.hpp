#pragma once

#include <stdexcept>
#include <string>

namespace twistheight {

enum class error_kind {
    domain,            // bad argument to a pure math routine
    inexact_division,
    singular_curve,
    point_not_on_curve,
    hypothesis,        // a theorem hypothesis does not hold (square-free, 6th-power-free, minimal, ...)
    precision,         // iteration budget or factoring budget exhausted
};

class math_error : public std::runtime_error {
public:
    math_error(error_kind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

const char *to_string(error_kind kind) noexcept;

} // namespace twistheight
