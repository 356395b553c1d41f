#include "metrosim/analytic.hpp"

#include <cmath>
#include <string>

namespace metrosim::analytic {

namespace {

constexpr double denominator_floor = 1e-300;

void require_non_negative(int n) {
    if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
}

void require_positive(int n) {
    if (n < 1) throw std::invalid_argument("excitation number must be at least 1");
}

// exact integer power by repeated squaring; 0^0 = 1
Complex ipow(Complex base, int exponent) {
    Complex result(1.0, 0.0);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

Complex coherence_base(double theta, const LossCoefficients& c) {
    return c.u * c.u * std::polar(1.0, theta) + c.v * c.v * std::polar(1.0, -theta) + c.w;
}

Complex coherence_base_derivative(double theta, const LossCoefficients& c) {
    return Complex(0.0, 1.0) *
           (c.u * c.u * std::polar(1.0, theta) - c.v * c.v * std::polar(1.0, -theta));
}

}  // namespace

QfiBreakdown qfi_from_moments(double mean1, double second1, double mean2, double second2) {
    const double var1 = second1 - mean1 * mean1;
    const double var2 = second2 - mean2 * mean2;
    const auto tol = [](double second) { return 1e-12 * std::max(1.0, std::abs(second)); };
    if (var1 < -tol(second1) || var2 < -tol(second2)) {
        throw std::invalid_argument("second moment below squared mean");
    }
    const double oscillator = 2.0 * (std::max(var1, 0.0) + std::max(var2, 0.0));
    const double entanglement = (mean1 - mean2) * (mean1 - mean2);
    return {oscillator, entanglement, oscillator + entanglement};
}

CoherentPairQfi qfi_coherent_pair(Complex alpha, Complex beta) {
    const double intensity = std::norm(alpha) + std::norm(beta);
    const double variance = intensity / 4.0;
    // <J_y> on |+-i alpha>|beta> is -+Re(conj(alpha) beta)
    const double mean = std::real(std::conj(alpha) * beta);
    const double second = variance + mean * mean;
    const auto qfi = qfi_from_moments(-mean, second, mean, second);
    const double quoted_re = std::real(alpha * beta);
    return {qfi, variance, intensity, 4.0 * quoted_re * quoted_re};
}

double ideal_population(int n, double theta) {
    require_non_negative(n);
    return 0.5 * (1.0 + std::cos(n * theta));
}

double ideal_sensitivity(int n, double time) {
    require_positive(n);
    if (!(time > 0.0)) throw std::invalid_argument("evolution time must be positive");
    return 1.0 / (n * time);
}

double cat_population(double alpha, double beta, double theta) {
    const double s = std::sin(theta / 2.0);
    return 0.5 * (1.0 + std::exp(-8.0 * alpha * alpha * s * s) *
                            std::cos(2.0 * alpha * beta * std::sin(theta)));
}

const char* to_string(WConvention convention) {
    return convention == WConvention::appendix ? "appendix" : "main_text";
}

LossCoefficients loss_coefficients(const LossConfig& loss, WConvention convention) {
    loss.validate();
    const double ta = std::sqrt(1.0 - loss.rate_a);
    const double tb = std::sqrt(1.0 - loss.rate_b);
    const double w = convention == WConvention::appendix
                         ? 0.5 * (loss.rate_b - loss.rate_a)
                         : -0.5 * (loss.rate_a + loss.rate_b);
    return {0.5 * (ta + tb), 0.5 * (ta - tb), w};
}

Complex coherence_R(int n, double theta, const LossConfig& loss, WConvention convention) {
    require_non_negative(n);
    const auto c = loss_coefficients(loss, convention);
    return ipow(coherence_base(theta, c), n);
}

Complex coherence_R_derivative(int n, double theta, const LossConfig& loss,
                               WConvention convention) {
    require_non_negative(n);
    if (n == 0) return {};
    const auto c = loss_coefficients(loss, convention);
    return static_cast<double>(n) * ipow(coherence_base(theta, c), n - 1) *
           coherence_base_derivative(theta, c);
}

double lossy_population(int n, double theta, const LossConfig& loss, WConvention convention) {
    return 0.5 * (1.0 + coherence_R(n, theta, loss, convention).real());
}

double delta_theta(int n, double theta, const LossConfig& loss, SensitivityMethod method,
                   WConvention convention) {
    require_non_negative(n);
    const auto c = loss_coefficients(loss, convention);
    // Without loss Delta theta = 1/N identically; near the fringe extrema
    // sqrt(P - P^2) / |dP| is 0/0 and loses all precision.
    constexpr double extremum_window = 1e-3;
    if (loss.lossless() && n > 0 && std::abs(std::sin(n * theta)) < extremum_window) {
        return 1.0 / n;
    }
    const Complex base = coherence_base(theta, c);
    const Complex dbase = coherence_base_derivative(theta, c);
    const Complex r = ipow(base, n);

    double numerator = 0.0;
    double denominator = 0.0;
    if (method == SensitivityMethod::exact) {
        const double p = 0.5 * (1.0 + r.real());
        const Complex dr = n == 0 ? Complex{} : static_cast<double>(n) *
                                                    ipow(base, n - 1) * dbase;
        numerator = std::sqrt(std::max(0.0, p - p * p));
        denominator = std::abs(0.5 * dr.real());
    } else {
        // phi = N arg(base) up to 2 pi, so dphi/dtheta = N Im(base'/base)
        const double modulus = std::abs(r);
        const double phi = std::arg(r);
        const double dphi = base == Complex{} ? 0.0 : n * std::imag(dbase / base);
        const double cos_phi = std::cos(phi);
        numerator = std::sqrt(std::max(0.0, 1.0 - modulus * modulus * cos_phi * cos_phi));
        denominator = modulus * std::abs(std::sin(phi) * dphi);
    }

    if (denominator > denominator_floor) {
        const double value = numerator / denominator;
        if (std::isfinite(value) && value > 0.0) return value;
    }
    if (loss.lossless() && n > 0) return 1.0 / n;
    throw VanishingDerivative("error-propagation denominator vanishes at theta=" +
                              std::to_string(theta) + " (N=" + std::to_string(n) + ")");
}

SensitivityPoint sensitivity(int n, double theta, const LossConfig& loss,
                             WConvention convention) {
    return {theta,
            delta_theta(n, theta, loss, SensitivityMethod::paper_approx, convention),
            delta_theta(n, theta, loss, SensitivityMethod::exact, convention)};
}

double sql(int n) {
    require_positive(n);
    return 1.0 / std::sqrt(static_cast<double>(n));
}

double hl(int n) {
    require_positive(n);
    return 1.0 / n;
}

}  // namespace metrosim::analytic
