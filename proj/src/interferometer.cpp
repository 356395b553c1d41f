#include "metrosim/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace metrosim {

void LossConfig::validate() const {
    const auto in_range = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (!in_range(rate_a) || !in_range(rate_b)) {
        throw std::invalid_argument("loss rates must lie in [0, 1] (got R_a=" +
                                    std::to_string(rate_a) + ", R_b=" +
                                    std::to_string(rate_b) + ")");
    }
}

double LossConfig::angle_a() const { return std::asin(std::sqrt(rate_a)); }
double LossConfig::angle_b() const { return std::asin(std::sqrt(rate_b)); }

}  // namespace metrosim

namespace metrosim::interferometer {

using fock::BilinearGenerator;
using fock::HybridState;

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

void require_system_modes(const HybridState& state) {
    if (state.basis().modes() < system_modes) {
        throw std::invalid_argument("interferometer steps need at least modes a and b");
    }
}

}  // namespace

HybridState apply_preparation_gates(const HybridState& state) {
    require_system_modes(state);
    const int m = state.basis().modes();
    auto out = fock::evolve_bilinear(
        state, BilinearGenerator::angular_momentum_y(m, mode_a, mode_b), -half_pi);
    return fock::spin_conditional_evolve(out, BilinearGenerator::number(m, mode_a), half_pi);
}

HybridState undo_preparation_gates(const HybridState& state) {
    require_system_modes(state);
    const int m = state.basis().modes();
    auto out =
        fock::spin_conditional_evolve(state, BilinearGenerator::number(m, mode_a), -half_pi);
    return fock::evolve_bilinear(out, BilinearGenerator::angular_momentum_y(m, mode_a, mode_b),
                                 half_pi);
}

HybridState prepare_noon_like(int n) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
    const auto basis = fock::build_basis(system_modes, n);
    return apply_preparation_gates(fock::basis_state(basis, {n, 0}, fock::SpinInput::plus));
}

HybridState embed_with_environment(const HybridState& state) {
    if (state.basis().modes() != system_modes) {
        throw std::invalid_argument("embedding expects a two-mode state");
    }
    const auto basis = fock::build_basis(total_modes, state.basis().total());
    HybridState out(basis);
    for (std::size_t k = 0; k < state.sector_size(); ++k) {
        const auto occ = state.basis().occupation(k);
        const int extended[total_modes] = {occ[0], occ[1], 0, 0};
        const auto index = basis->index_of(extended);
        for (const auto spin : {fock::Spin::down, fock::Spin::up}) {
            out.at(spin, *index) = state.at(spin, k);
        }
    }
    return out;
}

HybridState apply_loss(const HybridState& state, const LossConfig& loss) {
    loss.validate();
    if (state.basis().modes() != total_modes) {
        throw std::invalid_argument("loss acts on the four-mode (system + environment) state");
    }
    HybridState out = state;
    if (loss.rate_a > 0.0) {
        out = fock::evolve_bilinear(
            out, BilinearGenerator::exchange(total_modes, mode_a, mode_c), loss.angle_a());
    }
    if (loss.rate_b > 0.0) {
        out = fock::evolve_bilinear(
            out, BilinearGenerator::exchange(total_modes, mode_b, mode_e), loss.angle_b());
    }
    return out;
}

HybridState encode_phase(const HybridState& state, double theta) {
    require_system_modes(state);
    const int m = state.basis().modes();
    return fock::evolve_bilinear(state, BilinearGenerator::angular_momentum_y(m, mode_a, mode_b),
                                 theta);
}

HybridState disentangle(const HybridState& state) {
    require_system_modes(state);
    const int m = state.basis().modes();
    return fock::spin_conditional_evolve(state, BilinearGenerator::number(m, mode_a), -half_pi);
}

fock::SpinPopulations readout(const HybridState& state) {
    return fock::spin_populations(fock::spin_rotation(state, fock::Axis::y, half_pi));
}

ProtocolResult full_protocol(int n, double theta, const LossConfig& loss) {
    loss.validate();
    auto state = embed_with_environment(prepare_noon_like(n));
    state = apply_loss(state, loss);
    state = encode_phase(state, theta);
    state = disentangle(state);
    auto density = fock::reduce_to_spin(state);
    const auto populations = readout(state);
    return ProtocolResult{std::move(state), density, populations, theta, loss, n};
}

}  // namespace metrosim::interferometer
