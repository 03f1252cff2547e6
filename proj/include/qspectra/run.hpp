#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qspectra/config.hpp"
#include "qspectra/svg.hpp"

namespace qspectra::cli {

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitComputation = 3;
inline constexpr int kExitIo = 4;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    PlotSpec plot;
    std::vector<std::string> summary;  // echoed on stdout after a successful write
    std::optional<std::string> failure;  // contract violated; files are still written
};

/// Runs the computation without touching the filesystem.
Table execute(const RunConfig& config);

/// CSV text: '#' block with the resolved configuration, column row, data.
std::string format_csv(const RunConfig& config, const Table& table);

/// Full pipeline. On failure prints one line to err of the form
///   error code=<status> kind=<validation|computation|io> message="..."
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Shortest exact text for a double ("%.17g").
std::string format_number(double v);

}  // namespace qspectra::cli
