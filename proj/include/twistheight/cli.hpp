#pragma once

#include "twistheight/errors.hpp"
#include "twistheight/serialize.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace twistheight {

enum class output_format { text, json };

struct CliConfig {
    unsigned precision = default_precision;
    unsigned long trial_bound = default_trial_bound;
    output_format format = output_format::text;
    /// reject D whose square-freeness is unknown
    bool strict = false;

    bool operator==(const CliConfig &) const = default;
};

Json to_json(const CliConfig &c);
/// Throws error_kind::domain on unknown formats or precision below 64.
CliConfig config_from_json(const Json &j);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int curve = 2;
inline constexpr int point = 3;
inline constexpr int hypothesis = 4;
inline constexpr int precision = 5;
} // namespace exit_code

int exit_code_for(error_kind k);

/// args excludes the program name.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace twistheight
