// Acceptance gate: one PASS/FAIL line per primary criterion.
// Usage: acceptance <path to metrosim CLI> <scratch dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <string>
#include <vector>

#include "metrosim/analytic.hpp"
#include "metrosim/fock_core.hpp"
#include "metrosim/interferometer.hpp"
#include "metrosim/oracle.hpp"

using namespace metrosim;
using analytic::SensitivityMethod;
using analytic::WConvention;
using fock::Complex;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit;  // seconds, <= 0 for none
    std::function<Outcome()> run;
};

std::string format(const char* fmt, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

std::vector<double> adjudication_thetas() {
    std::vector<double> out;
    for (int k = 0; k <= 10; ++k) out.push_back(k * pi / 10);
    return out;
}

const std::vector<double> rates = {0.0, 0.1, 0.3, 0.5};

Outcome qfi_scaling() {
    double worst = 0.0;
    const auto jy = fock::BilinearGenerator::angular_momentum_y(2, 0, 1);
    for (int n = 1; n <= 10; ++n) {
        const double f = oracle::oracle_qfi(interferometer::prepare_noon_like(n), jy);
        worst = std::max(worst, std::abs(f - static_cast<double>(n * n)));
    }
    return {worst <= 1e-9, format("max |F - N^2| = %.2e (tol 1e-9)", worst)};
}

Outcome ideal_fringe() {
    double fringe = 0.0;
    double sensitivity = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k < 50; ++k) {
            const double theta = k * 2 * pi / 49;
            const auto p = interferometer::full_protocol(n, theta, {}).populations.down;
            fringe = std::max(fringe, std::abs(p - 0.5 * (1 + std::cos(n * theta))));
            if (std::abs(std::sin(n * theta)) > 0.05) {
                const double dt = analytic::delta_theta(n, theta, {}, SensitivityMethod::exact);
                sensitivity = std::max(sensitivity, std::abs(dt - 1.0 / n));
            }
        }
    return {fringe <= 1e-10 && sensitivity <= 1e-9,
            format("max fringe dev = %.2e (tol 1e-10), max |dtheta - 1/N| = %.2e (tol 1e-9)",
                   fringe, sensitivity)};
}

Outcome adjudication() {
    double appendix = 0.0;
    double main_text = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (const double theta : adjudication_thetas())
            for (const double ra : rates)
                for (const double rb : rates) {
                    const LossConfig loss{ra, rb};
                    const auto reference = oracle::oracle_R(n, theta, loss);
                    appendix = std::max(
                        appendix, std::abs(analytic::coherence_R(n, theta, loss) - reference));
                    main_text = std::max(
                        main_text,
                        std::abs(analytic::coherence_R(n, theta, loss, WConvention::main_text) -
                                 reference));
                }
    return {appendix <= 1e-8 && main_text > 1e-8,
            format("appendix max dev = %.2e (tol 1e-8); main-text control max dev = %.2e "
                   "(must fail)",
                   appendix, main_text)};
}

Outcome endpoints() {
    double closed = 0.0;
    double numeric = 0.0;
    const auto defect = [](Complex r) { return std::abs(std::abs(r) - 1.0); };
    for (const double r : {0.1, 0.3, 0.5, 0.7, 1.0}) {
        for (const int n : {1, 5, 8, 25, 100}) {
            closed = std::max({closed, defect(analytic::coherence_R(n, 0.0, {0.0, r})),
                               defect(analytic::coherence_R(n, pi, {r, 0.0}))});
        }
        for (int n = 1; n <= 8; ++n) {
            numeric = std::max({numeric, defect(oracle::oracle_R(n, 0.0, {0.0, r})),
                                defect(oracle::oracle_R(n, pi, {r, 0.0}))});
        }
    }
    return {closed <= 1e-12 && numeric <= 1e-9,
            format("closed form max ||R|-1| = %.2e (tol 1e-12), oracle = %.2e (tol 1e-9)", closed,
                   numeric)};
}

Outcome seven_times_sql() {
    const double inverse =
        1.0 / analytic::delta_theta(100, 0.01, {0.0, 0.5}, SensitivityMethod::paper_approx);
    const double ratio = inverse / std::sqrt(100.0);
    return {ratio >= 6.3 && ratio <= 7.6,
            format("(1/dtheta)/sqrt(N) = %.4f (window [6.3, 7.6])", ratio)};
}

Outcome approaching_hl() {
    double worst = 0.0;
    std::string detail;
    for (const double theta : {1e-2, 1e-3, 1e-4}) {
        const double inverse =
            1.0 / analytic::delta_theta(100, theta, {0.0, 0.1}, SensitivityMethod::paper_approx);
        worst = std::max(worst, std::abs(inverse - 100.0) / 100.0);
        detail += format("theta=%.0e: 1/dtheta=%.2f; ", theta, inverse);
    }
    return {worst <= 0.15,
            detail + format("max rel dev from HL = %.3f (tol 0.15), SQL = 10", worst)};
}

Outcome spin_diagonal() {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (const double theta : adjudication_thetas())
            for (const double ra : rates)
                for (const double rb : rates) {
                    const auto rho = interferometer::full_protocol(n, theta, {ra, rb}).spin_density;
                    worst = std::max({worst, std::abs(rho.rho[0].real() - 0.5),
                                      std::abs(rho.rho[3].real() - 0.5)});
                }
    return {worst <= 1e-10, format("max |rho_ii - 1/2| = %.2e (tol 1e-10)", worst)};
}

Outcome symmetries() {
    double swap = 0.0;
    double conj = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (const double theta : adjudication_thetas())
            for (const double ra : rates)
                for (const double rb : rates) {
                    const LossConfig loss{ra, rb};
                    swap = std::max(swap, std::abs(std::abs(analytic::coherence_R(n, theta, loss)) -
                                                   std::abs(analytic::coherence_R(
                                                       n, theta + pi, loss.swapped()))));
                    swap = std::max(swap, std::abs(std::abs(oracle::oracle_R(n, theta, loss)) -
                                                   std::abs(oracle::oracle_R(n, theta + pi,
                                                                             loss.swapped()))));
                    conj = std::max(
                        conj, std::abs(analytic::coherence_R(n, -theta, loss) -
                                       std::conj(analytic::coherence_R(n, theta, loss))));
                    conj = std::max(conj, std::abs(oracle::oracle_R(n, -theta, loss) -
                                                   std::conj(oracle::oracle_R(n, theta, loss))));
                }
    return {swap <= 1e-9 && conj <= 1e-9,
            format("swap max dev = %.2e, conjugation max dev = %.2e (tol 1e-9)", swap, conj)};
}

Outcome coherent_pair() {
    double f_o = 0.0;
    double f_e = 0.0;
    for (const double alpha : {0.5, 1.0, 1.5})
        for (const double beta : {0.5, 1.0, 1.5}) {
            const auto numeric = oracle::coherent_pair_qfi(alpha, beta);
            const auto closed = analytic::qfi_coherent_pair(alpha, beta);
            f_o = std::max(f_o, std::abs(numeric.qfi.oscillator - closed.qfi.oscillator));
            const double quoted = 4 * std::pow(alpha * beta, 2);
            f_e = std::max({f_e, std::abs(closed.qfi.entanglement - quoted),
                            std::abs(closed.entanglement_quoted - quoted)});
        }
    return {f_o <= 1e-6 && f_e <= 1e-12,
            format("oracle vs implemented f_o max dev = %.2e (tol 1e-6), f_e vs 4(Re ab)^2 = %.2e",
                   f_o, f_e)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
    const auto first = scratch / "first";
    const auto second = scratch / "second";
    fs::remove_all(first);
    fs::remove_all(second);
    for (const auto& dir : {first, second}) {
        const auto command = "\"" + cli + "\" figure --id fig2 --out \"" + dir.string() + "\"";
        if (std::system((command + " > /dev/null").c_str()) != 0) {
            return {false, "figure command failed: " + command};
        }
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(first)) {
        const auto other = second / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            return {false, "CSV differs: " + entry.path().filename().string()};
        }
        ++files;
    }
    return {files == 2, std::to_string(files) + " CSV files byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <metrosim cli> <scratch dir>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argv[2];
    fs::create_directories(scratch);

    const std::vector<Criterion> criteria = {
        {"qfi_heisenberg_scaling", 5.0, qfi_scaling},
        {"ideal_fringe_and_sensitivity", 10.0, ideal_fringe},
        {"loss_formula_adjudication", 60.0, adjudication},
        {"fig2_endpoints", 0.0, endpoints},
        {"seven_times_sql", 1.0, seven_times_sql},
        {"approaching_hl_small_loss", 0.0, approaching_hl},
        {"spin_diagonal_half", 0.0, spin_diagonal},
        {"symmetry_suite", 0.0, symmetries},
        {"coherent_pair_qfi", 0.0, coherent_pair},
        {"figure_determinism", 0.0, [&] { return determinism(cli, scratch); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome{false, ""};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool passed = outcome.passed;
        std::string timing = format("%.3f s", seconds);
        if (c.time_limit > 0.0) {
            timing += format(" (limit %.0f s)", c.time_limit);
            passed = passed && seconds < c.time_limit;
        }
        if (!passed) ++failures;
        std::printf("%s %s: %s; %s\n", passed ? "PASS" : "FAIL", c.name.c_str(),
                    outcome.detail.c_str(), timing.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
