// atom.hpp - driven two-level atom: Bloch generator, resolvent, spectral decomposition
#pragma once

#include <array>
#include <complex>
#include <Eigen/Dense>

namespace cbs3 {

using cd = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

inline constexpr cd I_UNIT{0.0, 1.0};

// Laser-driven two-level atom in the rotating frame. gamma is HALF the
// spontaneous decay rate of the excited state; all frequencies are detunings
// from the driving laser in units where gamma = 1 is the usual choice.
struct AtomParams {
    cd rabi{1.0, 0.0};    // Rabi frequency of the drive (may be complex)
    double detuning{0.0}; // laser detuning from atomic resonance
    double gamma{1.0};    // half linewidth, must be > 0

    void validate() const;
};

// Constant coupling matrices that insert one probe-field interaction into the
// Bloch vector (sigma-, sigma+, sigmaz). dminus couples the positive-frequency
// drive quadrature, dplus its conjugate; each has exactly two nonzero entries.
struct CouplingMatrices {
    static const Mat3& dminus();
    static const Mat3& dplus();
    // pick by probe sign: +1 -> dplus, -1 -> dminus
    static const Mat3& by_sign(int sign);
};

// Inhomogeneous drive vector of the Bloch equations, (0, 0, -2*gamma).
Vec3 drive_vector(const AtomParams& p);

// Bloch generator M for d<sigma>/dt = M <sigma> + L in basis
// (<sigma->, <sigma+>, <sigmaz>).
Mat3 bloch_matrix(const AtomParams& p);

// Characteristic polynomial of M: f(z) = (z+2g)((z+g)^2 + d^2) + (z+g)|W|^2.
cd char_poly(const AtomParams& p, cd z);

// Resolvent (z*I - M)^{-1} by direct solve; throws if z hits an eigenvalue.
Mat3 green_matrix(const AtomParams& p, cd z);

// Stationary Bloch vector, the solution of M v = -L.
Vec3 steady_bloch(const AtomParams& p);

// Resolvent in spectral form: G(z) = sum_k P_k / (z - r_k) with rank-one
// projectors P_k. Roots are the eigenvalues of M (all with Re < 0).
struct SpectralDecomposition {
    std::array<cd, 3> roots{};
    std::array<Mat3, 3> projectors{};

    Mat3 green(cd z) const;
    // fast path used throughout the response chains
    Vec3 apply_green(cd z, const Vec3& v) const;
};

// Decompose the Bloch generator. Uses the closed diagonal path for zero drive;
// otherwise eigenvalues + Frobenius projectors. Throws on root degeneracy
// (|r_i - r_j| < 1e-8 * gamma) or a nonnegative real part.
SpectralDecomposition spectral_decomposition(const AtomParams& p);

} // namespace cbs3
