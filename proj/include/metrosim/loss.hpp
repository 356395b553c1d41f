// loss.hpp
// Particle-loss rates of the two oscillator modes.

#pragma once

namespace metrosim {

// Reflection probabilities of the beam splitters coupling mode a (resp. b) to
// its vacuum environment mode. Both rates lie in [0, 1].
struct LossConfig {
    double rate_a = 0.0;
    double rate_b = 0.0;

    // Throws std::invalid_argument for rates outside [0, 1] (or NaN).
    void validate() const;

    // Beam-splitter angle arcsin(sqrt(R)), in [0, pi/2].
    double angle_a() const;
    double angle_b() const;

    bool lossless() const { return rate_a == 0.0 && rate_b == 0.0; }
    LossConfig swapped() const { return {rate_b, rate_a}; }
};

}  // namespace metrosim
