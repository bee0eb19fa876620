#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hopath/config.hpp"
#include "table.hpp"

namespace hopath::cli {

enum ExitCode : int { kSuccess = 0, kInvalidArguments = 2, kNumericalFailure = 3 };

/// Inclusive range a:b:step.
struct RealRange {
    double start;
    double stop;
    double step;

    std::vector<double> points() const;
};

/// n0, n0 f, n0 f^2, ... up to n1.
struct StepLadder {
    std::size_t first;
    std::size_t last;
    std::size_t factor;

    std::vector<std::size_t> points() const;
};

/// Throws InvalidArgument on malformed input.
RealRange parse_range(const std::string& text);
StepLadder parse_ladder(const std::string& text);

struct RunConfig {
    std::string subcommand;
    OscillatorConfig oscillator;
    std::optional<RealRange> time_range;
    std::optional<std::size_t> steps;
    std::optional<StepLadder> ladder;
    double packet_center = 0.0;
    std::optional<double> packet_width;  ///< default: coherent width sqrt(hbar / m omega), 1 if omega = 0
    double packet_momentum = 0.0;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = 0;
    std::size_t n_max = 512;
    std::size_t tuples = 0;
};

Table cmd_kernel(const RunConfig& run);
Table cmd_spectrum(const RunConfig& run);
Table cmd_scan(const RunConfig& run);
Table cmd_converge(const RunConfig& run);
Table cmd_smear(const RunConfig& run);
Table cmd_oracle_compare(const RunConfig& run);

/// Parses argv, runs the subcommand and writes the table to `--out` or
/// `out`. Diagnostics go to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopath::cli
