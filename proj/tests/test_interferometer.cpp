#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dense_oracle.hpp"
#include "metrosim/interferometer.hpp"
#include "metrosim/oracle.hpp"

using namespace metrosim;
using namespace metrosim::fock;
using namespace metrosim::interferometer;
using std::numbers::pi;

namespace {

const Complex I(0.0, 1.0);

// (|up> (i a^dag + b^dag)^N + |down> (-i a^dag + b^dag)^N)|0> / sqrt(2^{N+1} N!)
HybridState expected_prepared(int n) {
    const auto basis = build_basis(system_modes, n);
    const double r = 1.0 / std::sqrt(2.0);
    const Complex up[] = {I * r, r};
    const Complex down[] = {-I * r, r};
    const auto up_amps = oracle::power_state(*basis, up);
    const auto down_amps = oracle::power_state(*basis, down);
    HybridState state(basis);
    for (std::size_t k = 0; k < basis->size(); ++k) {
        state.at(Spin::up, k) = r * up_amps[k];
        state.at(Spin::down, k) = r * down_amps[k];
    }
    return state;
}

}  // namespace

TEST_CASE("NOON-like preparation") {
    SUBCASE("vacuum") {
        const auto state = prepare_noon_like(0);
        const auto rho = reduce_to_spin(state);
        CHECK(std::abs(rho.down_up() - 0.5) < 1e-15);
    }
    SUBCASE("single excitation matches the hand expansion up to a global phase") {
        const auto state = prepare_noon_like(1);
        const auto& basis = state.basis();
        const auto k10 = *basis.index_of(std::vector<int>{1, 0});
        const auto k01 = *basis.index_of(std::vector<int>{0, 1});
        HybridState expected(state.basis_ptr());
        expected.at(Spin::down, k10) = 0.5;
        expected.at(Spin::down, k01) = 0.5 * I;
        expected.at(Spin::up, k10) = -0.5;
        expected.at(Spin::up, k01) = 0.5 * I;
        CHECK(overlap_magnitude(state, expected) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("branch expansion for N up to 8") {
        for (int n = 1; n <= 8; ++n) {
            CAPTURE(n);
            const auto state = prepare_noon_like(n);
            CHECK(std::abs(state.norm() - 1.0) < 1e-13);
            CHECK(overlap_magnitude(state, expected_prepared(n)) > 1.0 - 1e-10);
        }
    }
    SUBCASE("undo inverts the gates") {
        const auto basis = build_basis(system_modes, 4);
        const auto start = basis_state(basis, {3, 1}, SpinInput::minus);
        const auto back = undo_preparation_gates(apply_preparation_gates(start));
        CHECK(dense::max_abs_diff(back.amplitudes(), start.amplitudes()) < 1e-13);
    }
    CHECK_THROWS_AS(prepare_noon_like(-1), std::invalid_argument);
}

TEST_CASE("environment embedding") {
    const auto state = embed_with_environment(
        basis_state(build_basis(system_modes, 1), {1, 0}, SpinInput::down));
    REQUIRE(state.basis().modes() == total_modes);
    const auto k = *state.basis().index_of(std::vector<int>{1, 0, 0, 0});
    CHECK(state.at(Spin::down, k) == Complex(1.0));
    CHECK(state.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(embed_with_environment(state), std::invalid_argument);
}

TEST_CASE("loss beam splitters") {
    const auto start = embed_with_environment(
        basis_state(build_basis(system_modes, 1), {1, 0}, SpinInput::down));

    SUBCASE("no loss is the identity") {
        const auto out = apply_loss(start, {0.0, 0.0});
        CHECK(dense::max_abs_diff(out.amplitudes(), start.amplitudes()) < 1e-15);
    }
    SUBCASE("single excitation in mode a with R_a = 0.36") {
        const auto out = apply_loss(start, {0.36, 0.0});
        const auto& basis = out.basis();
        const auto ka = *basis.index_of(std::vector<int>{1, 0, 0, 0});
        const auto kc = *basis.index_of(std::vector<int>{0, 0, 1, 0});
        CHECK(std::abs(out.at(Spin::down, ka) - 0.8) < 1e-14);
        CHECK(std::abs(out.at(Spin::down, kc) - (-0.6)) < 1e-14);
    }
    SUBCASE("transmitted weight of a number state follows a binomial law") {
        const auto s = embed_with_environment(
            basis_state(build_basis(system_modes, 5), {3, 2}, SpinInput::up));
        const auto out = apply_loss(s, {0.3, 0.6});
        double mean_a = 0.0;
        double mean_b = 0.0;
        for (std::size_t k = 0; k < out.sector_size(); ++k) {
            const auto occ = out.basis().occupation(k);
            const double p = std::norm(out.at(Spin::up, k));
            mean_a += p * occ[mode_a];
            mean_b += p * occ[mode_b];
        }
        CHECK(mean_a == doctest::Approx(3 * 0.7).epsilon(1e-12));
        CHECK(mean_b == doctest::Approx(2 * 0.4).epsilon(1e-12));
    }
    CHECK_THROWS_AS(apply_loss(start, {1.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_loss(start, {0.0, -0.1}), std::invalid_argument);
}

TEST_CASE("phase encoding") {
    const auto state = embed_with_environment(prepare_noon_like(4));
    CHECK(dense::max_abs_diff(encode_phase(state, 0.0).amplitudes(), state.amplitudes()) == 0.0);
    for (int n = 1; n <= 5; ++n) {
        const auto s = embed_with_environment(prepare_noon_like(n));
        const auto turned = encode_phase(s, 2.0 * pi);
        CHECK(std::abs(std::abs(inner_product(s, turned)) - 1.0) < 1e-12);
    }
}

TEST_CASE("disentangling gate") {
    const auto state = embed_with_environment(prepare_noon_like(3));
    const auto undone = spin_conditional_evolve(disentangle(state),
                                                BilinearGenerator::number(total_modes, mode_a),
                                                pi / 2);
    CHECK(dense::max_abs_diff(undone.amplitudes(), state.amplitudes()) < 1e-14);
}

TEST_CASE("lossless readout follows the ideal fringe") {
    CHECK(full_protocol(2, 0.0, {}).populations.down == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(full_protocol(2, pi / 2, {}).populations.down) < 1e-12);
    CHECK(full_protocol(4, 0.3, {}).populations.down ==
          doctest::Approx(0.5 * (1 + std::cos(1.2))).epsilon(1e-12));
    CHECK(full_protocol(5, 0.2, {}).populations.down ==
          doctest::Approx(0.5 * (1 + std::cos(1.0))).epsilon(1e-12));
    const auto big = full_protocol(25, 0.04, {});
    CHECK(std::abs(big.populations.down - 0.5 * (1 + std::cos(1.0))) < 1e-10);
}

TEST_CASE("loss in a single mode keeps the spin coherent at the matching endpoint") {
    CHECK(std::abs(full_protocol(4, 0.0, {0.0, 0.5}).coherence()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(full_protocol(4, pi, {0.5, 0.0}).coherence()) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("protocol invariants") {
    for (int n = 1; n <= 5; ++n)
        for (const double theta : {0.0, 0.4, 1.9})
            for (const LossConfig loss : {LossConfig{0.2, 0.1}, LossConfig{0.5, 0.0},
                                          LossConfig{0.0, 0.3}, LossConfig{1.0, 1.0}}) {
                CAPTURE(n);
                CAPTURE(theta);
                const auto result = full_protocol(n, theta, loss);
                const auto& rho = result.spin_density;
                CHECK(std::abs(rho.rho[0].real() - 0.5) < 1e-12);
                CHECK(std::abs(rho.rho[3].real() - 0.5) < 1e-12);
                CHECK(rho.determinant() >= -1e-12);
                CHECK(std::abs(result.populations.down + result.populations.up - 1.0) < 1e-12);
                CHECK(std::abs(result.populations.down - (0.5 + rho.down_up().real())) < 1e-10);
            }
}
