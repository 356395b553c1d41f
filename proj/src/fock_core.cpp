#include "metrosim/fock_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace metrosim::fock {

namespace {

constexpr double hermiticity_tolerance = 1e-12;
constexpr double taylor_tolerance = 1e-16;
constexpr int taylor_max_order = 100;
constexpr double population_norm_tolerance = 1e-6;

void enumerate(int mode, int remaining, int modes, std::vector<int>& current,
               std::vector<int>& flat) {
    if (mode == modes - 1) {
        current[static_cast<std::size_t>(mode)] = remaining;
        flat.insert(flat.end(), current.begin(), current.end());
        return;
    }
    for (int n = remaining; n >= 0; --n) {
        current[static_cast<std::size_t>(mode)] = n;
        enumerate(mode + 1, remaining - n, modes, current, flat);
    }
}

double squared_norm(std::span<const Complex> v) {
    double sum = 0.0;
    for (const auto& x : v) sum += std::norm(x);
    return sum;
}

void require_matching_modes(const HybridState& state, const BilinearGenerator& h) {
    if (h.modes() != state.basis().modes()) {
        throw std::invalid_argument("generator acts on " + std::to_string(h.modes()) +
                                    " modes but the state has " +
                                    std::to_string(state.basis().modes()));
    }
}

}  // namespace

std::size_t sector_dimension(int modes, int total) {
    if (modes < 1 || total < 0) return 0;
    // binomial(total + modes - 1, modes - 1), exact in integers
    std::size_t result = 1;
    const auto k = static_cast<std::size_t>(modes - 1);
    const auto n = static_cast<std::size_t>(total) + k;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

OccupationBasis::OccupationBasis(int modes, int total)
    : modes_(modes), total_(total), size_(sector_dimension(modes, total)) {
    if (modes < 1) throw std::invalid_argument("a sector needs at least one mode");
    if (total < 0) throw std::invalid_argument("total excitation number must be non-negative");
    if (total > max_sector_total) {
        throw std::invalid_argument("total excitation number " + std::to_string(total) +
                                    " exceeds the supported limit of " +
                                    std::to_string(max_sector_total));
    }
    flat_.reserve(size_ * static_cast<std::size_t>(modes));
    std::vector<int> current(static_cast<std::size_t>(modes), 0);
    enumerate(0, total, modes, current, flat_);
}

std::optional<std::size_t> OccupationBasis::index_of(std::span<const int> occupation) const {
    if (occupation.size() != static_cast<std::size_t>(modes_)) return std::nullopt;
    int remaining = total_;
    std::size_t index = 0;
    for (int i = 0; i + 1 < modes_; ++i) {
        const int n = occupation[static_cast<std::size_t>(i)];
        if (n < 0 || n > remaining) return std::nullopt;
        // tuples sharing the prefix but with a larger entry here come first
        if (n < remaining) index += sector_dimension(modes_ - i, remaining - n - 1);
        remaining -= n;
    }
    if (occupation.back() != remaining) return std::nullopt;
    return index;
}

BasisPtr build_basis(int modes, int total) {
    return std::make_shared<const OccupationBasis>(modes, total);
}

HybridState::HybridState(BasisPtr basis)
    : basis_(std::move(basis)), amplitudes_(2 * basis_->size()) {}

HybridState::HybridState(BasisPtr basis, std::vector<Complex> amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != 2 * basis_->size()) {
        throw std::invalid_argument("amplitude vector has length " +
                                    std::to_string(amplitudes_.size()) + ", expected " +
                                    std::to_string(2 * basis_->size()));
    }
}

std::span<const Complex> HybridState::block(Spin spin) const {
    const std::size_t n = basis_->size();
    return std::span<const Complex>(amplitudes_).subspan(spin == Spin::down ? 0 : n, n);
}

std::span<Complex> HybridState::block(Spin spin) {
    const std::size_t n = basis_->size();
    return std::span<Complex>(amplitudes_).subspan(spin == Spin::down ? 0 : n, n);
}

double HybridState::norm() const { return std::sqrt(squared_norm(amplitudes_)); }

Complex inner_product(const HybridState& lhs, const HybridState& rhs) {
    if (!lhs.basis().same_sector(rhs.basis())) {
        throw std::invalid_argument("states live in different sectors");
    }
    const auto a = lhs.amplitudes();
    const auto b = rhs.amplitudes();
    Complex sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

double overlap_magnitude(const HybridState& lhs, const HybridState& rhs) {
    return std::abs(inner_product(lhs, rhs));
}

BilinearGenerator::BilinearGenerator(int modes)
    : modes_(modes), coefficients_(static_cast<std::size_t>(modes * modes)) {
    if (modes < 1) throw std::invalid_argument("a generator needs at least one mode");
}

BilinearGenerator::BilinearGenerator(int modes, std::vector<Complex> row_major)
    : modes_(modes), coefficients_(std::move(row_major)) {
    if (modes < 1) throw std::invalid_argument("a generator needs at least one mode");
    if (coefficients_.size() != static_cast<std::size_t>(modes * modes)) {
        throw std::invalid_argument("generator needs modes*modes coefficients");
    }
    for (int i = 0; i < modes; ++i) {
        for (int j = 0; j < modes; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > hermiticity_tolerance) {
                throw std::invalid_argument("generator is not Hermitian at (" +
                                            std::to_string(i) + ", " + std::to_string(j) +
                                            ")");
            }
        }
    }
}

BilinearGenerator BilinearGenerator::angular_momentum_y(int modes, int a, int b) {
    std::vector<Complex> h(static_cast<std::size_t>(modes * modes));
    h[static_cast<std::size_t>(a * modes + b)] = Complex(0.0, -0.5);
    h[static_cast<std::size_t>(b * modes + a)] = Complex(0.0, 0.5);
    return BilinearGenerator(modes, std::move(h));
}

BilinearGenerator BilinearGenerator::angular_momentum_z(int modes, int a, int b) {
    std::vector<Complex> h(static_cast<std::size_t>(modes * modes));
    h[static_cast<std::size_t>(a * modes + a)] = 0.5;
    h[static_cast<std::size_t>(b * modes + b)] = -0.5;
    return BilinearGenerator(modes, std::move(h));
}

BilinearGenerator BilinearGenerator::number(int modes, int mode) {
    std::vector<Complex> h(static_cast<std::size_t>(modes * modes));
    h[static_cast<std::size_t>(mode * modes + mode)] = 1.0;
    return BilinearGenerator(modes, std::move(h));
}

BilinearGenerator BilinearGenerator::exchange(int modes, int i, int j) {
    std::vector<Complex> h(static_cast<std::size_t>(modes * modes));
    h[static_cast<std::size_t>(i * modes + j)] = Complex(0.0, -1.0);
    h[static_cast<std::size_t>(j * modes + i)] = Complex(0.0, 1.0);
    return BilinearGenerator(modes, std::move(h));
}

bool BilinearGenerator::is_diagonal() const {
    for (int i = 0; i < modes_; ++i)
        for (int j = 0; j < modes_; ++j)
            if (i != j && (*this)(i, j) != Complex{}) return false;
    return true;
}

BilinearGenerator BilinearGenerator::operator+(const BilinearGenerator& other) const {
    if (other.modes_ != modes_) throw std::invalid_argument("generator mode counts differ");
    std::vector<Complex> sum(coefficients_);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += other.coefficients_[k];
    return BilinearGenerator(modes_, std::move(sum));
}

BilinearGenerator BilinearGenerator::operator*(double scale) const {
    std::vector<Complex> scaled(coefficients_);
    for (auto& c : scaled) c *= scale;
    return BilinearGenerator(modes_, std::move(scaled));
}

SectorOperator::SectorOperator(const OccupationBasis& basis, const BilinearGenerator& h) {
    if (h.modes() != basis.modes()) {
        throw std::invalid_argument("generator and basis mode counts differ");
    }
    const int m = basis.modes();
    const std::size_t dim = basis.size();
    row_start_.reserve(dim + 1);
    row_start_.push_back(0);
    diagonal_values_.resize(dim);
    std::vector<int> target(static_cast<std::size_t>(m));

    for (std::size_t row = 0; row < dim; ++row) {
        const auto occ = basis.occupation(row);
        double diag = 0.0;
        for (int i = 0; i < m; ++i) diag += h(i, i).real() * occ[static_cast<std::size_t>(i)];
        diagonal_values_[row] = diag;
        double row_sum = std::abs(diag);
        if (diag != 0.0) {
            columns_.push_back(row);
            values_.emplace_back(diag, 0.0);
        }
        // <row| a_i^dag a_j |col> with col = row - e_i + e_j
        for (int i = 0; i < m; ++i) {
            const int ni = occ[static_cast<std::size_t>(i)];
            if (ni == 0) continue;
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                const Complex coeff = h(i, j);
                if (coeff == Complex{}) continue;
                std::copy(occ.begin(), occ.end(), target.begin());
                target[static_cast<std::size_t>(i)] -= 1;
                target[static_cast<std::size_t>(j)] += 1;
                const auto col = basis.index_of(target);
                const double amp = std::sqrt(static_cast<double>(ni) *
                                             (occ[static_cast<std::size_t>(j)] + 1));
                columns_.push_back(*col);
                values_.push_back(coeff * amp);
                row_sum += std::abs(coeff) * amp;
                diagonal_ = false;
            }
        }
        one_norm_ = std::max(one_norm_, row_sum);
        row_start_.push_back(columns_.size());
    }
}

void SectorOperator::apply(std::span<const Complex> in, std::span<Complex> out) const {
    const std::size_t dim = size();
    for (std::size_t row = 0; row < dim; ++row) {
        Complex acc{};
        for (std::size_t k = row_start_[row]; k < row_start_[row + 1]; ++k) {
            acc += values_[k] * in[columns_[k]];
        }
        out[row] = acc;
    }
}

void SectorOperator::exponentiate_in_place(double theta, std::span<Complex> vec) const {
    if (theta == 0.0) return;
    if (diagonal_) {
        for (std::size_t k = 0; k < vec.size(); ++k) {
            vec[k] *= std::polar(1.0, theta * diagonal_values_[k]);
        }
        return;
    }
    // Hermitian, so the infinity norm of the rows bounds the spectral radius.
    const auto steps = static_cast<int>(std::max(1.0, std::ceil(std::abs(theta) * one_norm_)));
    const double tau = theta / steps;
    std::vector<Complex> term(vec.size());
    std::vector<Complex> next(vec.size());
    std::vector<Complex> acc(vec.size());
    for (int s = 0; s < steps; ++s) {
        std::copy(vec.begin(), vec.end(), term.begin());
        std::copy(vec.begin(), vec.end(), acc.begin());
        bool converged = false;
        for (int order = 1; order <= taylor_max_order; ++order) {
            apply(term, next);
            const Complex factor(0.0, tau / order);
            double term_norm = 0.0;
            for (std::size_t k = 0; k < vec.size(); ++k) {
                term[k] = factor * next[k];
                acc[k] += term[k];
                term_norm += std::norm(term[k]);
            }
            if (term_norm <= taylor_tolerance * taylor_tolerance * squared_norm(acc)) {
                converged = true;
                break;
            }
        }
        if (!converged) throw std::runtime_error("Taylor series for exp(iH) did not converge");
        std::copy(acc.begin(), acc.end(), vec.begin());
    }
}

HybridState basis_state(const BasisPtr& basis, std::span<const int> occupation,
                        SpinInput spin) {
    const auto index = basis->index_of(occupation);
    if (!index) throw std::invalid_argument("occupation is not in the sector");
    HybridState state(basis);
    const double r = 1.0 / std::sqrt(2.0);
    switch (spin) {
        case SpinInput::down: state.at(Spin::down, *index) = 1.0; break;
        case SpinInput::up: state.at(Spin::up, *index) = 1.0; break;
        case SpinInput::plus:
            state.at(Spin::down, *index) = r;
            state.at(Spin::up, *index) = r;
            break;
        case SpinInput::minus:
            state.at(Spin::down, *index) = -r;
            state.at(Spin::up, *index) = r;
            break;
    }
    return state;
}

HybridState basis_state(const BasisPtr& basis, std::initializer_list<int> occupation,
                        SpinInput spin) {
    return basis_state(basis, std::span<const int>(occupation.begin(), occupation.size()),
                       spin);
}

HybridState evolve_bilinear(const HybridState& state, const BilinearGenerator& h,
                            double theta) {
    require_matching_modes(state, h);
    HybridState out = state;
    const SectorOperator op(state.basis(), h);
    op.exponentiate_in_place(theta, out.block(Spin::down));
    op.exponentiate_in_place(theta, out.block(Spin::up));
    return out;
}

HybridState spin_conditional_evolve(const HybridState& state, const BilinearGenerator& h,
                                    double theta) {
    require_matching_modes(state, h);
    HybridState out = state;
    const SectorOperator op(state.basis(), h);
    op.exponentiate_in_place(-theta, out.block(Spin::down));
    op.exponentiate_in_place(theta, out.block(Spin::up));
    return out;
}

HybridState spin_rotation(const HybridState& state, Axis axis, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    // rows/cols ordered (up, down)
    Complex m00{c, 0.0}, m11{c, 0.0}, m01, m10;
    if (axis == Axis::x) {
        m01 = m10 = Complex(0.0, -s);
    } else {
        m01 = -s;
        m10 = s;
    }
    HybridState out = state;
    const auto up_in = state.block(Spin::up);
    const auto down_in = state.block(Spin::down);
    auto up_out = out.block(Spin::up);
    auto down_out = out.block(Spin::down);
    for (std::size_t k = 0; k < up_in.size(); ++k) {
        up_out[k] = m00 * up_in[k] + m01 * down_in[k];
        down_out[k] = m10 * up_in[k] + m11 * down_in[k];
    }
    return out;
}

SpinPopulations spin_populations(const HybridState& state) {
    const double down = squared_norm(state.block(Spin::down));
    const double up = squared_norm(state.block(Spin::up));
    if (std::abs(down + up - 1.0) > population_norm_tolerance) {
        throw std::domain_error("state is not normalized (norm^2 = " +
                                std::to_string(down + up) + ")");
    }
    return {down, up};
}

double SpinDensity::determinant() const {
    return (rho[0] * rho[3] - rho[1] * rho[2]).real();
}

double SpinDensity::invariant_defect() const {
    const double hermitian = std::max({std::abs(rho[1] - std::conj(rho[2])),
                                       std::abs(rho[0].imag()), std::abs(rho[3].imag())});
    const double p00 = rho[0].real();
    const double p11 = rho[3].real();
    const double trace_defect = std::abs(p00 + p11 - 1.0);
    const double off = std::abs(rho[1]);
    const double gap = std::sqrt((p00 - p11) * (p00 - p11) + 4.0 * off * off);
    const double min_eigen = 0.5 * (p00 + p11 - gap);
    const double bound = off - std::sqrt(std::max(0.0, p00 * p11));
    return std::max({hermitian, trace_defect, -min_eigen, bound, 0.0});
}

SpinDensity reduce_to_spin(const HybridState& state) {
    const auto down = state.block(Spin::down);
    const auto up = state.block(Spin::up);
    SpinDensity out;
    double dd = 0.0;
    double uu = 0.0;
    Complex du{};
    for (std::size_t k = 0; k < down.size(); ++k) {
        dd += std::norm(down[k]);
        uu += std::norm(up[k]);
        du += down[k] * std::conj(up[k]);
    }
    out.rho = {Complex(dd, 0.0), du, std::conj(du), Complex(uu, 0.0)};
    return out;
}

Moments expectation_and_variance(const HybridState& state, const BilinearGenerator& h) {
    require_matching_modes(state, h);
    const SectorOperator op(state.basis(), h);
    std::vector<Complex> image(state.sector_size());
    Complex first{};
    double second = 0.0;
    for (const Spin spin : {Spin::down, Spin::up}) {
        const auto psi = state.block(spin);
        op.apply(psi, image);
        for (std::size_t k = 0; k < image.size(); ++k) {
            first += std::conj(psi[k]) * image[k];
            second += std::norm(image[k]);
        }
    }
    const double mean = first.real();
    return {mean, second - mean * mean};
}

}  // namespace metrosim::fock
