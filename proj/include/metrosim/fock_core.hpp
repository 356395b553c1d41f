// fock_core.hpp
// Exact linear algebra on number-conserving multi-mode Fock sectors carrying
// a spin-1/2 factor.
//
// A sector is the set of occupation tuples (n_1, ..., n_m) with fixed total
// N. Every gate used by the interferometer (two-mode rotations, beam
// splitters, controlled phases) is a bilinear form sum_ij h_ij a_i^dag a_j and
// therefore maps a sector onto itself, so states never need a truncated
// Fock cutoff.
//
// Spin convention: |up> is the sigma_z eigenstate with eigenvalue +1, |down>
// has eigenvalue -1. Amplitudes are stored as the down block followed by the
// up block.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace metrosim::fock {

using Complex = std::complex<double>;

// Largest total excitation number supported by the sector representation.
inline constexpr int max_sector_total = 60;

// binomial(total + modes - 1, modes - 1)
std::size_t sector_dimension(int modes, int total);

class OccupationBasis {
public:
    OccupationBasis(int modes, int total);

    int modes() const { return modes_; }
    int total() const { return total_; }
    std::size_t size() const { return size_; }

    std::span<const int> occupation(std::size_t index) const {
        return {flat_.data() + index * static_cast<std::size_t>(modes_),
                static_cast<std::size_t>(modes_)};
    }

    // Position of an occupation tuple, or nullopt if it is not in the sector.
    std::optional<std::size_t> index_of(std::span<const int> occupation) const;

    bool same_sector(const OccupationBasis& other) const {
        return modes_ == other.modes_ && total_ == other.total_;
    }

private:
    int modes_;
    int total_;
    std::size_t size_;
    std::vector<int> flat_;
};

using BasisPtr = std::shared_ptr<const OccupationBasis>;

// Enumerates the sector in lexicographically descending order, e.g.
// (m=2, N=2) -> (2,0), (1,1), (0,2).
BasisPtr build_basis(int modes, int total);

enum class Spin { down = 0, up = 1 };

// |plus> = (|up> + |down>)/sqrt2, |minus> = (|up> - |down>)/sqrt2.
enum class SpinInput { down, up, plus, minus };

enum class Axis { x, y };

class HybridState {
public:
    explicit HybridState(BasisPtr basis);
    HybridState(BasisPtr basis, std::vector<Complex> amplitudes);

    const OccupationBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    std::size_t sector_size() const { return basis_->size(); }

    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> amplitudes() { return amplitudes_; }

    std::span<const Complex> block(Spin spin) const;
    std::span<Complex> block(Spin spin);

    Complex& at(Spin spin, std::size_t index) { return block(spin)[index]; }
    Complex at(Spin spin, std::size_t index) const { return block(spin)[index]; }

    double norm() const;

private:
    BasisPtr basis_;
    std::vector<Complex> amplitudes_;
};

// <lhs|rhs>; both states must live in the same sector.
Complex inner_product(const HybridState& lhs, const HybridState& rhs);

// |<lhs|rhs>|, the comparison used everywhere states are equal up to a
// global phase.
double overlap_magnitude(const HybridState& lhs, const HybridState& rhs);

// Single-particle coefficient matrix of H = sum_ij h_ij a_i^dag a_j.
// Construction rejects non-Hermitian coefficients (tolerance 1e-12).
class BilinearGenerator {
public:
    explicit BilinearGenerator(int modes);
    BilinearGenerator(int modes, std::vector<Complex> row_major);

    // J_y = (a^dag b - a b^dag) / 2i on the given mode pair.
    static BilinearGenerator angular_momentum_y(int modes, int a, int b);
    // J_z = (a^dag a - b^dag b) / 2.
    static BilinearGenerator angular_momentum_z(int modes, int a, int b);
    static BilinearGenerator number(int modes, int mode);
    // -i (a_i^dag a_j - a_i a_j^dag): exp(i eta G) is the beam splitter
    // exp[eta (a_i^dag a_j - a_i a_j^dag)].
    static BilinearGenerator exchange(int modes, int i, int j);

    int modes() const { return modes_; }
    Complex operator()(int i, int j) const {
        return coefficients_[static_cast<std::size_t>(i * modes_ + j)];
    }

    bool is_diagonal() const;

    BilinearGenerator operator+(const BilinearGenerator& other) const;
    BilinearGenerator operator*(double scale) const;

private:
    int modes_;
    std::vector<Complex> coefficients_;
};

// The generator restricted to one sector, stored in compressed rows.
class SectorOperator {
public:
    SectorOperator(const OccupationBasis& basis, const BilinearGenerator& generator);

    std::size_t size() const { return row_start_.size() - 1; }
    bool diagonal() const { return diagonal_; }
    double one_norm() const { return one_norm_; }

    // out = H in
    void apply(std::span<const Complex> in, std::span<Complex> out) const;

    // vec <- exp(i theta H) vec. Diagonal operators get exact phases; the
    // general case uses a scaled Taylor series whose order adapts until the
    // last term falls below 1e-16 of the accumulated vector.
    void exponentiate_in_place(double theta, std::span<Complex> vec) const;

private:
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> columns_;
    std::vector<Complex> values_;
    std::vector<double> diagonal_values_;
    bool diagonal_ = true;
    double one_norm_ = 0.0;
};

HybridState basis_state(const BasisPtr& basis, std::span<const int> occupation,
                        SpinInput spin);
HybridState basis_state(const BasisPtr& basis, std::initializer_list<int> occupation,
                        SpinInput spin);

// exp(i theta H) acting identically on both spin blocks.
HybridState evolve_bilinear(const HybridState& state, const BilinearGenerator& h,
                            double theta);

// exp(i theta H sigma_z): exp(+i theta H) on the up block, exp(-i theta H) on
// the down block.
HybridState spin_conditional_evolve(const HybridState& state,
                                    const BilinearGenerator& h, double theta);

// exp(-i angle/2 sigma_axis) with the standard Pauli matrices in the
// (up, down) basis. A +pi/2 turn about y sends |down> to (|down> - |up>)/sqrt2
// and |up> to (|up> + |down>)/sqrt2.
HybridState spin_rotation(const HybridState& state, Axis axis, double angle);

struct SpinPopulations {
    double down;
    double up;
};

// Throws std::domain_error when the norm deviates from 1 by more than 1e-6.
SpinPopulations spin_populations(const HybridState& state);

// 2x2 reduced density matrix in the (down, up) basis.
struct SpinDensity {
    std::array<Complex, 4> rho{};

    Complex operator()(Spin row, Spin col) const {
        return rho[static_cast<std::size_t>(row) * 2 + static_cast<std::size_t>(col)];
    }
    Complex down_up() const { return rho[1]; }
    double trace() const { return rho[0].real() + rho[3].real(); }
    double determinant() const;
    // 2 * rho_{down,up}; modulus 1 for a pure equal superposition.
    Complex coherence() const { return 2.0 * rho[1]; }

    // Largest violation among Hermiticity, unit trace, positivity and the
    // |rho_01| <= sqrt(rho_00 rho_11) bound; zero for a valid density matrix.
    double invariant_defect() const;
};

SpinDensity reduce_to_spin(const HybridState& state);

struct Moments {
    double mean;
    double variance;
};

// <H> and <H^2> - <H>^2, with H acting on the oscillator of both spin blocks.
Moments expectation_and_variance(const HybridState& state, const BilinearGenerator& h);

}  // namespace metrosim::fock
