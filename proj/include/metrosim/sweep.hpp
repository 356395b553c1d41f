// sweep.hpp
// Deterministic parameter sweeps over (N, R_a, R_b, theta) evaluated with the
// closed forms, and the CSV schema shared with the plotting scripts.
//
// Config (JSON):
//   {
//     "N": [25],
//     "theta": {"start": 0.0, "stop": 3.141592653589793, "steps": 201},
//     "loss_a": [0.0],
//     "loss_b": [0.1, 0.3, 0.5],
//     "outputs": ["N", "theta", "R_a", "R_b", "abs_R"]      (optional)
//   }
//
// CSV: UTF-8, comma separated, '#'-prefixed metadata lines, one header row,
// numbers with 17 significant digits. Sensitivity columns hold "nan" where
// the error-propagation denominator vanishes.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "metrosim/loss.hpp"

namespace metrosim::experiment {

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ThetaGrid {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;

    // Evenly spaced, both ends included.
    std::vector<double> values() const;
};

struct SweepSpec {
    std::vector<int> n;
    ThetaGrid theta;
    std::vector<double> loss_a;
    std::vector<double> loss_b;
    std::vector<std::string> outputs;  // empty selects every column

    // Throws SpecError naming the offending field.
    void validate() const;
    std::vector<std::string> columns() const;
};

SweepSpec parse_sweep_spec(std::string_view json_text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct ResultRecord {
    int n = 0;
    double theta = 0.0;
    double rate_a = 0.0;
    double rate_b = 0.0;
    double abs_r = 0.0;
    double arg_r = 0.0;
    double p_down = 0.0;
    double delta_theta_paper = 0.0;
    double delta_theta_exact = 0.0;
    double inv_delta_theta = 0.0;  // 1 / delta_theta_paper
    double sql = 0.0;              // 1/sqrt(N)
    double hl = 0.0;               // 1/N
};

// Canonical column order.
const std::vector<std::string>& all_columns();

ResultRecord evaluate_point(int n, double theta, const LossConfig& loss);

// Cartesian product of the grids, sorted by (N, R_a, R_b, theta).
std::vector<ResultRecord> run_sweep(const SweepSpec& spec, unsigned threads);

// Shortest round-trippable text is not used; every value gets 17 significant
// digits so identical inputs produce identical bytes.
std::string format_number(double value);

void write_csv(std::ostream& out, std::span<const ResultRecord> records,
               std::span<const std::string> columns, std::span<const std::string> comments);

// Reads a CSV produced by write_csv. Missing columns stay at their defaults.
std::vector<ResultRecord> read_csv(std::istream& in);

}  // namespace metrosim::experiment
