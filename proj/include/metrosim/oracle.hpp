// oracle.hpp
// Brute-force derivations that adjudicate the closed forms.
//
// Two routes to the reduced spin state are kept deliberately independent:
//   * oracle_R runs the gate pipeline (Taylor-series exponentials on the
//     4-mode sector);
//   * reduced_spin_from_construction builds the lossy state from the
//     multinomial expansion of a single creation operator, applies the
//     encoding as a diagonal spin-conditional phase and traces out.
// Neither path evaluates the closed-form R.

#pragma once

#include <string>
#include <vector>

#include "metrosim/analytic.hpp"
#include "metrosim/fock_core.hpp"
#include "metrosim/loss.hpp"

namespace metrosim::oracle {

using fock::Complex;

// Sector cap for the 4-mode oracles.
inline constexpr int max_oracle_n = 12;

// Coefficients of the creation operator
//   a_coef a^dag + b_coef b^dag + e_coef e^dag + c_spin c^dag sigma_z
// in mode order (a, b, c, e).
struct ModeCoefficients {
    Complex a;
    Complex b;
    Complex e;
    Complex c_spin;

    double weight() const;  // |a|^2 + |b|^2 + |e|^2 + |c_spin|^2
};

// The lossy input equals (prep gates) x this operator^N |vac>|+> / sqrt(N!):
// a = u, b = -v, e = -sqrt(R_b/2), c_spin = -i sqrt(R_a/2).
ModeCoefficients pipeline_mode_coefficients(const LossConfig& loss);

// (sum_k c_k a_k^dag)^N |vac> / sqrt(N!) on the given sector, one amplitude per
// basis state. coefficients.size() must equal basis.modes().
std::vector<Complex> power_state(const fock::OccupationBasis& basis,
                                 std::span<const Complex> coefficients);

// 4-mode state (. )^N |0000>|+> / sqrt(N!). Normalized only when
// coefficients.weight() == 1; otherwise its norm is weight^(N/2).
fock::HybridState multinomial_state(int n, const ModeCoefficients& coefficients);

// Multinomial state, encoding exp(-i theta J_z sigma_z) in the frame where
// the preparation gates are factored out, then the full partial trace.
fock::SpinDensity reduced_spin_from_construction(int n, double theta, const LossConfig& loss);

// 2 rho_{down,up} of the pipeline state before readout. Throws
// std::invalid_argument for n > max_oracle_n.
Complex oracle_R(int n, double theta, const LossConfig& loss);

// 4 Var(H) of a pure state.
double oracle_qfi(const fock::HybridState& state, const fock::BilinearGenerator& h);

// Truncated-coherent-state evaluation of the spin-dependent pair
// (|up>|i alpha, beta> + |down>|-i alpha, beta>)/sqrt2 under J_y.
struct CoherentPairOracle {
    analytic::QfiBreakdown qfi;  // from per-branch moments
    double total_qfi;            // 4 Var(J_y) of the hybrid state
    double tail_mass;            // probability beyond the cutoff
    int cutoff;                  // largest total excitation kept
};

CoherentPairOracle coherent_pair_qfi(Complex alpha, Complex beta);

struct ClaimResult {
    std::string name;
    std::string description;
    double max_deviation = 0.0;
    double threshold = 0.0;
    std::size_t points = 0;
    bool passed = true;
};

struct CrosscheckConfig {
    int max_n = 8;
    std::vector<double> thetas;      // default: 0, 0.1 pi, ..., pi
    std::vector<double> loss_rates;  // default: {0, 0.1, 0.3, 0.5} for both modes
    analytic::WConvention convention = analytic::WConvention::appendix;
    unsigned threads = 1;
};

CrosscheckConfig default_crosscheck_config();

struct CrosscheckReport {
    std::vector<ClaimResult> claims;
    analytic::WConvention convention;
    int max_n;

    bool passed() const;
    std::vector<std::string> failing_claims() const;
    std::string to_text() const;
    std::string to_json() const;
};

inline constexpr double state_threshold = 1e-8;
inline constexpr double truncation_threshold = 1e-6;

CrosscheckReport crosscheck(const CrosscheckConfig& config);

}  // namespace metrosim::oracle
