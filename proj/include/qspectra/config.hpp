#pragma once

// Run configuration for the command-line front end: a flat key=value file
// (one pair per line, '#' starts a comment) overlaid by --set overrides.
//
// Reserved keys: sweep.key, sweep.start, sweep.stop, sweep.steps, seed, out,
// svg. Everything else must be a parameter known to the chosen command.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspectra::cli {

/// Bad configuration (exit status 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written (exit status 4).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command {
    CpbLevels,
    CpbDispersion,
    CpbAnharmonicity,
    JunctionLevels,
    JunctionCurrent,
    JunctionParity,
    BasisMap,
    OracleCompare,
};

Command parse_command(const std::string& name);
std::string to_string(Command c);
std::vector<std::string> command_names();

struct Sweep {
    std::string key;
    double start = 0.0;
    double stop = 1.0;
    int steps = 2;

    /// Inclusive linear grid: start + (stop - start) i / (steps - 1).
    double value(int i) const;
};

using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
    Command command = Command::CpbLevels;
    KeyValues parameters;  // fully resolved, defaults included
    std::optional<Sweep> sweep;
    std::string csv_path;
    std::optional<std::string> svg_path;
    std::uint64_t seed = 0;

    double number(const std::string& key) const;
    int integer(const std::string& key) const;
    const std::string& text(const std::string& key) const;

    /// Same configuration with one parameter replaced (used per sweep point).
    RunConfig with(const std::string& key, double value) const;
};

/// Parse "key=value"; surrounding whitespace is trimmed.
std::pair<std::string, std::string> parse_assignment(const std::string& line);

KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::string& path);

/// Strict numeric parsing; the whole string must be consumed.
double parse_number(const std::string& key, const std::string& value);
int parse_integer(const std::string& key, const std::string& value);

/// Merge defaults for the command with raw pairs (file then overrides), pull
/// out reserved keys, and validate every parameter.
RunConfig resolve_config(Command command, const KeyValues& raw);

/// Keys accepted by a command together with their default values.
KeyValues default_parameters(Command command);

/// Printable form used for the CSV comment block, one "key = value" per line.
std::vector<std::string> describe(const RunConfig& config);

}  // namespace qspectra::cli
