// validation.hpp
// Runs the oracle crosscheck and turns it into an exit status and report.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "metrosim/analytic.hpp"

namespace metrosim::experiment {

struct ValidationOutcome {
    int exit_code = 0;  // 0 iff every claim passed
    std::string text;
    std::string json;
    std::vector<std::string> failing_claims;
};

ValidationOutcome run_validation(analytic::WConvention convention, unsigned threads);

// Writes outcome.json to path. Throws std::runtime_error on I/O failure.
void write_report(const ValidationOutcome& outcome, const std::filesystem::path& path);

}  // namespace metrosim::experiment
