#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "uforge/bch.hpp"
#include "uforge/optimizer.hpp"
#include "uforge/sequence.hpp"

namespace uforge {

/// Matrix file: first line "d", then d^2 lines "row col re im" with 0-based
/// indices and 17-significant-digit values, so round-trips are bit-exact.
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

/// Sequence file: header "d N" (N = pulse count), then one line per pulse
/// "generator duration" with generator A or B.
void save_sequence(const std::filesystem::path& path, const PulseSequence& seq);
PulseSequence load_sequence(const std::filesystem::path& path,
                            std::shared_ptr<const ControlPair> controls);

/// Program file: one bracket-notation header line, then the sequence format.
void save_program(const std::filesystem::path& path, const CommutatorProgram& program);
CommutatorProgram load_program(const std::filesystem::path& path,
                               std::shared_ptr<const ControlPair> controls);

/// Two-column "time value" control samples.
std::vector<std::pair<double, double>> load_gamma_samples(const std::filesystem::path& path);

/// Nearest-neighbour resample of (time, value) samples at the m interval
/// midpoints of [0, total_time]; exact for piecewise-constant inputs whose
/// breakpoints align with the grid.
std::vector<double> resample_gamma(const std::vector<std::pair<double, double>>& samples, int m,
                                   double total_time);

/// Training-pair file: header "d M", then 2M lines of 2d values (re im per
/// amplitude), input state then output state per pair.
void save_training_pairs(const std::filesystem::path& path, const TrainingSet& ts);
TrainingSet load_training_pairs(const std::filesystem::path& path);

}  // namespace uforge
