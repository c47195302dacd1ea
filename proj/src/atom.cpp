// atom.cpp - Bloch generator and its spectral decomposition
#include "cbs3/atom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cbs3 {

void AtomParams::validate() const {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("AtomParams: gamma must be positive");
    }
    if (!std::isfinite(gamma) || !std::isfinite(detuning) ||
        !std::isfinite(rabi.real()) || !std::isfinite(rabi.imag())) {
        throw std::invalid_argument("AtomParams: non-finite parameter");
    }
}

const Mat3& CouplingMatrices::dminus() {
    static const Mat3 m = [] {
        Mat3 d = Mat3::Zero();
        d(0, 2) = cd(0.0, -0.5); // sigma- row picks up -i/2 sigmaz
        d(2, 1) = cd(0.0, 1.0);  // sigmaz row picks up  i   sigma+
        return d;
    }();
    return m;
}

const Mat3& CouplingMatrices::dplus() {
    static const Mat3 m = [] {
        Mat3 d = Mat3::Zero();
        d(1, 2) = cd(0.0, 0.5);  // sigma+ row picks up  i/2 sigmaz
        d(2, 0) = cd(0.0, -1.0); // sigmaz row picks up -i   sigma-
        return d;
    }();
    return m;
}

const Mat3& CouplingMatrices::by_sign(int sign) {
    if (sign == +1) return dplus();
    if (sign == -1) return dminus();
    throw std::invalid_argument("CouplingMatrices: sign must be +1 or -1");
}

Vec3 drive_vector(const AtomParams& p) {
    p.validate();
    return Vec3(0.0, 0.0, cd(-2.0 * p.gamma, 0.0));
}

Mat3 bloch_matrix(const AtomParams& p) {
    p.validate();
    Mat3 m = Mat3::Zero();
    m(0, 0) = cd(-p.gamma, p.detuning);
    m(1, 1) = cd(-p.gamma, -p.detuning);
    m(2, 2) = cd(-2.0 * p.gamma, 0.0);
    m += p.rabi * CouplingMatrices::dminus() + std::conj(p.rabi) * CouplingMatrices::dplus();
    return m;
}

cd char_poly(const AtomParams& p, cd z) {
    const double g = p.gamma, d = p.detuning;
    const double w2 = std::norm(p.rabi);
    return (z + 2.0 * g) * ((z + g) * (z + g) + d * d) + (z + g) * w2;
}

Mat3 green_matrix(const AtomParams& p, cd z) {
    const auto sd = spectral_decomposition(p);
    const double scale = std::max({1.0, std::abs(z), p.gamma});
    for (const cd& r : sd.roots) {
        if (std::abs(z - r) < 1e-12 * scale) {
            std::ostringstream os;
            os << "green_matrix: z = (" << z.real() << "," << z.imag()
               << ") coincides with an eigenvalue of the Bloch generator";
            throw std::runtime_error(os.str());
        }
    }
    const Mat3 m = bloch_matrix(p);
    const Mat3 a = z * Mat3::Identity() - m;
    return a.partialPivLu().solve(Mat3::Identity());
}

Vec3 steady_bloch(const AtomParams& p) {
    const Mat3 m = bloch_matrix(p);
    const Vec3 l = drive_vector(p);
    return m.partialPivLu().solve(-l);
}

Mat3 SpectralDecomposition::green(cd z) const {
    Mat3 g = Mat3::Zero();
    for (int k = 0; k < 3; ++k) g += projectors[k] / (z - roots[k]);
    return g;
}

Vec3 SpectralDecomposition::apply_green(cd z, const Vec3& v) const {
    Vec3 out = Vec3::Zero();
    for (int k = 0; k < 3; ++k) out += (projectors[k] * v) / (z - roots[k]);
    return out;
}

SpectralDecomposition spectral_decomposition(const AtomParams& p) {
    p.validate();
    SpectralDecomposition sd;

    if (std::abs(p.rabi) < 1e-12) {
        // undriven atom: M is diagonal, roots may legitimately coincide
        sd.roots = {cd(-p.gamma, p.detuning), cd(-p.gamma, -p.detuning),
                    cd(-2.0 * p.gamma, 0.0)};
        for (int k = 0; k < 3; ++k) {
            sd.projectors[k] = Mat3::Zero();
            sd.projectors[k](k, k) = 1.0;
        }
        return sd;
    }

    const Mat3 m = bloch_matrix(p);
    Eigen::ComplexEigenSolver<Mat3> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("spectral_decomposition: eigenvalue solve failed");
    }
    std::array<cd, 3> r{es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
    std::sort(r.begin(), r.end(), [](const cd& a, const cd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    for (int i = 0; i < 3; ++i) {
        if (r[i].real() >= 0.0) {
            throw std::runtime_error(
                "spectral_decomposition: eigenvalue with nonnegative real part");
        }
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(r[i] - r[j]) < 1e-8 * p.gamma) {
                throw std::runtime_error(
                    "spectral_decomposition: degenerate Bloch eigenvalues");
            }
        }
    }

    sd.roots = r;
    // Frobenius covariants: P_k = prod_{l != k} (M - r_l) / (r_k - r_l)
    for (int k = 0; k < 3; ++k) {
        Mat3 num = Mat3::Identity();
        cd den = 1.0;
        for (int l = 0; l < 3; ++l) {
            if (l == k) continue;
            num = num * (m - r[l] * Mat3::Identity());
            den *= (r[k] - r[l]);
        }
        sd.projectors[k] = num / den;
    }
    return sd;
}

} // namespace cbs3
