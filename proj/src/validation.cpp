#include "metrosim/validation.hpp"

#include <fstream>
#include <stdexcept>

#include "metrosim/oracle.hpp"

namespace metrosim::experiment {

ValidationOutcome run_validation(analytic::WConvention convention, unsigned threads) {
    auto config = oracle::default_crosscheck_config();
    config.convention = convention;
    config.threads = threads;
    const auto report = oracle::crosscheck(config);
    return {report.passed() ? 0 : 1, report.to_text(), report.to_json(), report.failing_claims()};
}

void write_report(const ValidationOutcome& outcome, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << outcome.json << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace metrosim::experiment
