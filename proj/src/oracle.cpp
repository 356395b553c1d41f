#include "metrosim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "metrosim/interferometer.hpp"
#include "metrosim/parallel.hpp"

namespace metrosim::oracle {

using fock::BilinearGenerator;
using fock::HybridState;
using fock::Spin;
namespace ifm = metrosim::interferometer;

namespace {

Complex ipow(Complex base, int exponent) {
    Complex result(1.0, 0.0);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

void require_oracle_size(int n) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    if (n > max_oracle_n) {
        throw std::invalid_argument("oracle limited to N <= " + std::to_string(max_oracle_n) +
                                    " (got " + std::to_string(n) + ")");
    }
}

}  // namespace

double ModeCoefficients::weight() const {
    return std::norm(a) + std::norm(b) + std::norm(e) + std::norm(c_spin);
}

ModeCoefficients pipeline_mode_coefficients(const LossConfig& loss) {
    const auto k = analytic::loss_coefficients(loss);
    return {Complex(k.u, 0.0), Complex(-k.v, 0.0), Complex(-std::sqrt(loss.rate_b / 2.0), 0.0),
            Complex(0.0, -std::sqrt(loss.rate_a / 2.0))};
}

std::vector<Complex> power_state(const fock::OccupationBasis& basis,
                                 std::span<const Complex> coefficients) {
    if (coefficients.size() != static_cast<std::size_t>(basis.modes())) {
        throw std::invalid_argument("one coefficient per mode required");
    }
    // amplitude of |n> is sqrt(N!) prod_k c_k^{n_k} / sqrt(n_k!)
    const double log_total = std::lgamma(basis.total() + 1.0);
    std::vector<Complex> out(basis.size());
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
        const auto occ = basis.occupation(idx);
        double log_weight = log_total;
        Complex product(1.0, 0.0);
        for (std::size_t k = 0; k < occ.size(); ++k) {
            log_weight -= std::lgamma(occ[k] + 1.0);
            product *= ipow(coefficients[k], occ[k]);
        }
        out[idx] = std::exp(0.5 * log_weight) * product;
    }
    return out;
}

HybridState multinomial_state(int n, const ModeCoefficients& coefficients) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    const auto basis = fock::build_basis(ifm::total_modes, n);
    // sigma_z on c^dag: +1 on the up branch, -1 on the down branch
    const Complex up_coeffs[] = {coefficients.a, coefficients.b, coefficients.c_spin,
                                 coefficients.e};
    const Complex down_coeffs[] = {coefficients.a, coefficients.b, -coefficients.c_spin,
                                   coefficients.e};
    const auto up = power_state(*basis, up_coeffs);
    const auto down = power_state(*basis, down_coeffs);
    HybridState state(basis);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < basis->size(); ++k) {
        state.at(Spin::down, k) = r * down[k];
        state.at(Spin::up, k) = r * up[k];
    }
    return state;
}

fock::SpinDensity reduced_spin_from_construction(int n, double theta, const LossConfig& loss) {
    loss.validate();
    const auto constructed = multinomial_state(n, pipeline_mode_coefficients(loss));
    // CPG^dag exp(i theta J_y) CPG seen through the preparation rotation is
    // the diagonal exp(-i theta J_z sigma_z); the rotation itself is common to
    // both spin branches and drops out of the trace.
    const auto encoded = fock::spin_conditional_evolve(
        constructed,
        BilinearGenerator::angular_momentum_z(ifm::total_modes, ifm::mode_a, ifm::mode_b),
        -theta);
    return fock::reduce_to_spin(encoded);
}

Complex oracle_R(int n, double theta, const LossConfig& loss) {
    require_oracle_size(n);
    return ifm::full_protocol(n, theta, loss).coherence();
}

double oracle_qfi(const HybridState& state, const BilinearGenerator& h) {
    return 4.0 * fock::expectation_and_variance(state, h).variance;
}

CoherentPairOracle coherent_pair_qfi(Complex alpha, Complex beta) {
    const double intensity = std::norm(alpha) + std::norm(beta);
    const int cutoff =
        static_cast<int>(std::ceil(intensity + 10.0 * std::sqrt(intensity + 1.0) + 10.0));
    if (cutoff > fock::max_sector_total) {
        throw std::invalid_argument("coherent amplitudes too large for the sector limit");
    }

    // single-mode coherent amplitudes gamma^n / sqrt(n!), without exp(-|gamma|^2/2)
    const auto coherent = [cutoff](Complex gamma) {
        std::vector<Complex> c(static_cast<std::size_t>(cutoff) + 1);
        c[0] = 1.0;
        for (int k = 1; k <= cutoff; ++k) {
            c[static_cast<std::size_t>(k)] =
                c[static_cast<std::size_t>(k) - 1] * gamma / std::sqrt(static_cast<double>(k));
        }
        return c;
    };
    const Complex i(0.0, 1.0);
    const auto plus_a = coherent(i * alpha);
    const auto minus_a = coherent(-i * alpha);
    const auto b = coherent(beta);
    const double envelope = std::exp(-intensity / 2.0);

    struct Accumulator {
        double mass = 0.0, first = 0.0, second = 0.0;
        void add(double weight, const fock::Moments& m) {
            mass += weight;
            first += weight * m.mean;
            second += weight * (m.variance + m.mean * m.mean);
        }
    };
    Accumulator branch_up, branch_down, hybrid;

    // J_y conserves the total number, so moments decompose sector by sector.
    for (int total = 0; total <= cutoff; ++total) {
        const auto basis = fock::build_basis(2, total);
        const auto jy = BilinearGenerator::angular_momentum_y(2, 0, 1);
        HybridState up_only(basis), down_only(basis), both(basis);
        double up_mass = 0.0, down_mass = 0.0;
        for (std::size_t k = 0; k < basis->size(); ++k) {
            const auto occ = basis->occupation(k);
            const auto na = static_cast<std::size_t>(occ[0]);
            const auto nb = static_cast<std::size_t>(occ[1]);
            const Complex up = envelope * plus_a[na] * b[nb];
            const Complex down = envelope * minus_a[na] * b[nb];
            up_only.at(Spin::up, k) = up;
            down_only.at(Spin::down, k) = down;
            both.at(Spin::up, k) = up / std::sqrt(2.0);
            both.at(Spin::down, k) = down / std::sqrt(2.0);
            up_mass += std::norm(up);
            down_mass += std::norm(down);
        }
        const auto normalized = [](HybridState s, double mass) {
            for (auto& x : s.amplitudes()) x /= std::sqrt(mass);
            return s;
        };
        if (up_mass > 0.0) {
            branch_up.add(up_mass,
                          fock::expectation_and_variance(normalized(up_only, up_mass), jy));
        }
        if (down_mass > 0.0) {
            branch_down.add(down_mass,
                            fock::expectation_and_variance(normalized(down_only, down_mass), jy));
        }
        const double both_mass = 0.5 * (up_mass + down_mass);
        if (both_mass > 0.0) {
            hybrid.add(both_mass, fock::expectation_and_variance(normalized(both, both_mass), jy));
        }
    }

    const auto moments = [](const Accumulator& acc) {
        return std::pair{acc.first / acc.mass, acc.second / acc.mass};
    };
    const auto [m1, s1] = moments(branch_up);
    const auto [m2, s2] = moments(branch_down);
    const auto [mh, sh] = moments(hybrid);
    return {analytic::qfi_from_moments(m1, s1, m2, s2), 4.0 * (sh - mh * mh),
            1.0 - branch_up.mass, cutoff};
}

CrosscheckConfig default_crosscheck_config() {
    CrosscheckConfig config;
    for (int k = 0; k <= 10; ++k) config.thetas.push_back(k * std::numbers::pi / 10.0);
    config.loss_rates = {0.0, 0.1, 0.3, 0.5};
    return config;
}

namespace {

struct GridPoint {
    int n;
    double theta;
    LossConfig loss;
};

struct PointOutcome {
    double fringe = 0.0;           // lossless only
    double factorization = 0.0;    // lossless only
    double closed_vs_oracle = 0.0;
    double paths_agree = 0.0;
    double diagonal = 0.0;
    double endpoint = 0.0;         // endpoint points only
    double swap = 0.0;
    double conjugation = 0.0;
    double population = 0.0;
    bool lossless = false;
    bool endpoint_point = false;
};

PointOutcome evaluate(const GridPoint& p, analytic::WConvention convention) {
    PointOutcome out;
    const auto pipeline = ifm::full_protocol(p.n, p.theta, p.loss);
    const Complex oracle = pipeline.coherence();
    const auto constructed = reduced_spin_from_construction(p.n, p.theta, p.loss);
    const Complex closed = analytic::coherence_R(p.n, p.theta, p.loss, convention);

    out.lossless = p.loss.lossless();
    if (out.lossless) {
        out.fringe = std::abs(pipeline.populations.down -
                              analytic::ideal_population(p.n, p.theta));
        out.factorization = std::abs(1.0 - std::abs(oracle));
    }
    out.closed_vs_oracle = std::abs(closed - oracle);
    out.paths_agree = std::max(std::abs(constructed.coherence() - oracle),
                               std::abs(constructed.rho[0] - pipeline.spin_density.rho[0]));
    out.diagonal = std::max({std::abs(pipeline.spin_density.rho[0].real() - 0.5),
                             std::abs(pipeline.spin_density.rho[3].real() - 0.5),
                             std::abs(constructed.rho[0].real() - 0.5),
                             std::abs(constructed.rho[3].real() - 0.5)});

    const bool at_zero = p.theta == 0.0 && p.loss.rate_a == 0.0;
    const bool at_pi = std::abs(p.theta - std::numbers::pi) < 1e-15 && p.loss.rate_b == 0.0;
    out.endpoint_point = at_zero || at_pi;
    if (out.endpoint_point) {
        out.endpoint = std::max(std::abs(std::abs(closed) - 1.0), std::abs(std::abs(oracle) - 1.0));
    }

    const Complex swapped = oracle_R(p.n, p.theta + std::numbers::pi, p.loss.swapped());
    out.swap = std::abs(std::abs(oracle) - std::abs(swapped));
    const Complex mirrored = oracle_R(p.n, -p.theta, p.loss);
    out.conjugation = std::abs(mirrored - std::conj(oracle));
    out.population = std::abs(pipeline.populations.down -
                              analytic::lossy_population(p.n, p.theta, p.loss, convention));
    return out;
}

ClaimResult make_claim(std::string name, std::string description, double threshold) {
    ClaimResult c;
    c.name = std::move(name);
    c.description = std::move(description);
    c.threshold = threshold;
    return c;
}

void record(ClaimResult& claim, double deviation) {
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    claim.max_deviation = std::max(claim.max_deviation, deviation);
    claim.points += 1;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", value);
    return buf;
}

}  // namespace

CrosscheckReport crosscheck(const CrosscheckConfig& config) {
    require_oracle_size(config.max_n);
    for (const double r : config.loss_rates) LossConfig{r, r}.validate();

    std::vector<GridPoint> grid;
    for (int n = 1; n <= config.max_n; ++n)
        for (const double theta : config.thetas)
            for (const double ra : config.loss_rates)
                for (const double rb : config.loss_rates) grid.push_back({n, theta, {ra, rb}});

    std::vector<PointOutcome> outcomes(grid.size());
    parallel_for(grid.size(), config.threads,
                 [&](std::size_t i) { outcomes[i] = evaluate(grid[i], config.convention); });

    auto qfi = make_claim("qfi_heisenberg_scaling",
                          "4 Var(J_y) of the encoded NOON-like state equals N^2", state_threshold);
    for (int n = 1; n <= config.max_n; ++n) {
        const auto state = ifm::encode_phase(ifm::prepare_noon_like(n), 0.37);
        const double value =
            oracle_qfi(state, BilinearGenerator::angular_momentum_y(2, ifm::mode_a, ifm::mode_b));
        record(qfi, std::abs(value - static_cast<double>(n) * n));
    }

    auto fringe = make_claim("ideal_fringe",
                             "lossless pipeline P_down equals (1 + cos N theta)/2",
                             state_threshold);
    auto factor = make_claim("lossless_factorization",
                             "lossless disentangled state has |2 rho_01| = 1", state_threshold);
    auto adjudication = make_claim(
        "coherence_R_vs_oracle",
        std::string("closed-form R (") + analytic::to_string(config.convention) +
            " w) equals 2 rho_01 of the gate pipeline",
        state_threshold);
    auto paths = make_claim("oracle_paths_agree",
                            "multinomial construction and gate pipeline give the same spin state",
                            state_threshold);
    auto diagonal = make_claim("spin_diagonal_half",
                               "reduced spin populations before readout are 1/2", state_threshold);
    auto endpoints = make_claim(
        "fig2_endpoints",
        "|R| = 1 at theta=0 with R_a=0 and at theta=pi with R_b=0 (closed form and oracle)",
        state_threshold);
    auto swap = make_claim("swap_symmetry", "|R(theta; R_a, R_b)| = |R(theta+pi; R_b, R_a)|",
                           state_threshold);
    auto conjugation =
        make_claim("conjugation_symmetry", "R(-theta) = conj R(theta)", state_threshold);
    auto population = make_claim("lossy_population",
                                 "closed-form P_down equals the pipeline readout", state_threshold);

    for (const auto& o : outcomes) {
        if (o.lossless) {
            record(fringe, o.fringe);
            record(factor, o.factorization);
        }
        record(adjudication, o.closed_vs_oracle);
        record(paths, o.paths_agree);
        record(diagonal, o.diagonal);
        if (o.endpoint_point) record(endpoints, o.endpoint);
        record(swap, o.swap);
        record(conjugation, o.conjugation);
        record(population, o.population);
    }

    auto multinomial = make_claim(
        "multinomial_vs_pipeline",
        "undoing the preparation gates on the lossy pipeline state yields the multinomial state",
        state_threshold);
    for (int n = 1; n <= config.max_n; ++n) {
        for (const double ra : config.loss_rates) {
            for (const double rb : config.loss_rates) {
                const LossConfig loss{ra, rb};
                const auto coeffs = pipeline_mode_coefficients(loss);
                const auto piped = ifm::undo_preparation_gates(
                    ifm::apply_loss(ifm::embed_with_environment(ifm::prepare_noon_like(n)), loss));
                const auto built = multinomial_state(n, coeffs);
                record(multinomial,
                       std::max(std::abs(1.0 - fock::overlap_magnitude(piped, built)),
                                std::abs(coeffs.weight() - 1.0)));
            }
        }
    }

    auto coherent = make_claim(
        "coherent_pair_qfi",
        "truncated coherent-state QFI parts equal the closed-form coherent-pair breakdown",
        truncation_threshold);
    for (const double alpha : {0.5, 1.0, 1.5}) {
        for (const double beta : {0.5, 1.0, 1.5}) {
            const auto numeric = coherent_pair_qfi(alpha, beta);
            const auto closed = analytic::qfi_coherent_pair(alpha, beta).qfi;
            record(coherent, std::max({std::abs(numeric.qfi.oscillator - closed.oscillator),
                                       std::abs(numeric.qfi.entanglement - closed.entanglement),
                                       std::abs(numeric.total_qfi - closed.total)}));
        }
    }

    CrosscheckReport report{{qfi, fringe, factor, adjudication, paths, diagonal, endpoints, swap,
                             conjugation, population, multinomial, coherent},
                            config.convention,
                            config.max_n};
    for (auto& claim : report.claims) {
        claim.passed = claim.max_deviation <= claim.threshold;
    }
    return report;
}

bool CrosscheckReport::passed() const {
    return std::all_of(claims.begin(), claims.end(), [](const auto& c) { return c.passed; });
}

std::vector<std::string> CrosscheckReport::failing_claims() const {
    std::vector<std::string> names;
    for (const auto& c : claims)
        if (!c.passed) names.push_back(c.name);
    return names;
}

std::string CrosscheckReport::to_text() const {
    std::ostringstream out;
    out << "crosscheck (w convention: " << analytic::to_string(convention)
        << ", max N: " << max_n << ")\n";
    for (const auto& c : claims) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name
            << "  max_dev=" << format_double(c.max_deviation)
            << "  threshold=" << format_double(c.threshold) << "  points=" << c.points << "\n";
    }
    out << (passed() ? "all claims pass\n" : "some claims FAIL\n");
    return out.str();
}

std::string CrosscheckReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["w_convention"] = analytic::to_string(convention);
    doc["max_n"] = max_n;
    doc["passed"] = passed();
    auto claims_json = nlohmann::ordered_json::array();
    for (const auto& c : claims) {
        claims_json.push_back({{"name", c.name},
                               {"description", c.description},
                               {"max_deviation", c.max_deviation},
                               {"threshold", c.threshold},
                               {"points", c.points},
                               {"passed", c.passed}});
    }
    doc["claims"] = std::move(claims_json);
    return doc.dump(2) + "\n";
}

}  // namespace metrosim::oracle
