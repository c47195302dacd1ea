// response.cpp - subset dynamic programming for probe responses and box spectra
#include "cbs3/response.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cbs3 {

namespace {
constexpr double TWO_PI = 2.0 * std::numbers::pi;

void check_size(const ProbeList& probes) {
    if (probes.size() > 8) {
        throw std::invalid_argument("probe list too long (max 8 probes)");
    }
    for (const auto& pr : probes) {
        if (pr.sign != +1 && pr.sign != -1) {
            throw std::invalid_argument("SignedProbe: sign must be +1 or -1");
        }
        if (!std::isfinite(pr.omega)) {
            throw std::invalid_argument("SignedProbe: non-finite frequency");
        }
    }
}
} // namespace

ProbeList conjugate_probes(const ProbeList& probes) {
    ProbeList out = probes;
    for (auto& pr : out) pr.sign = -pr.sign;
    return out;
}

double probe_weight(const ProbeList& probes) {
    double w = 0.0;
    for (const auto& pr : probes) w += pr.sign * pr.omega;
    return w;
}

ResponseWorkspace::ResponseWorkspace(const AtomParams& p, const ProbeList& probes)
    : sd_(spectral_decomposition(p)), probes_(probes) {
    check_size(probes_);
    build();
}

ResponseWorkspace::ResponseWorkspace(const SpectralDecomposition& sd, const Vec3& steady,
                                     const ProbeList& probes)
    : sd_(sd), probes_(probes) {
    check_size(probes_);
    (void)steady; // steady state is re-derived from the decomposition below
    build();
}

void ResponseWorkspace::build() {
    const int n = static_cast<int>(probes_.size());
    const unsigned full = (1u << n) - 1u;
    v_.assign(full + 1, Vec3::Zero());
    qp_.assign(full + 1, Vec3::Zero());
    qm_.assign(full + 1, Vec3::Zero());
    w_.assign(full + 1, 0.0);

    by_popcount_.resize(full + 1);
    for (unsigned m = 0; m <= full; ++m) by_popcount_[m] = m;
    std::stable_sort(by_popcount_.begin(), by_popcount_.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });

    for (unsigned m = 0; m <= full; ++m) {
        double w = 0.0;
        for (int j = 0; j < n; ++j) {
            if (m & (1u << j)) w += probes_[j].sign * probes_[j].omega;
        }
        w_[m] = w;
    }

    // stationary response of the undisturbed atom: V(0) = G(0) L. The drive
    // vector is recovered from the decomposition itself (trace of the
    // generator is -4 gamma), so both constructors share this path.
    const double gamma = -(sd_.roots[0] + sd_.roots[1] + sd_.roots[2]).real() / 4.0;
    const Vec3 drive(0.0, 0.0, cd(-2.0 * gamma, 0.0));
    v_[0] = sd_.apply_green(cd(0.0, 0.0), drive);

    // response recursion over subsets in ascending popcount
    for (unsigned m : by_popcount_) {
        if (m == 0) continue;
        Vec3 acc = Vec3::Zero();
        for (int j = 0; j < n; ++j) {
            const unsigned bit = 1u << j;
            if (!(m & bit)) continue;
            acc += CouplingMatrices::by_sign(probes_[j].sign) * v_[m ^ bit];
        }
        v_[m] = sd_.apply_green(cd(0.0, w_[m]), acc);
    }

    // factorized-split vectors and fluctuation vectors per subset
    const Mat3& dp = CouplingMatrices::dplus();
    const Mat3& dm = CouplingMatrices::dminus();
    for (unsigned m = 0; m <= full; ++m) {
        Vec3 gp = Vec3::Zero(), gm = Vec3::Zero();
        unsigned t = m;
        while (true) {
            const unsigned rest = m ^ t;
            gp += v_[t] * v_[rest](0);
            gm += v_[t] * v_[rest](1);
            if (t == 0) break;
            t = (t - 1) & m;
        }
        qp_[m] = -I_UNIT * (dp * v_[m]) - gp;
        qm_[m] = I_UNIT * (dm * v_[m]) - gm;
        if (m == 0) {
            qp_[m] += Vec3(0.0, 0.5, 0.0); // equal-time sigma+sigma- constant
            qm_[m] += Vec3(0.5, 0.0, 0.0);
        }
    }
}

cd ResponseWorkspace::g_value() const {
    const unsigned full = static_cast<unsigned>(v_.size()) - 1u;
    cd g = 0.0;
    unsigned t = full;
    while (true) {
        g += v_[t](1) * v_[full ^ t](0);
        if (t == 0) break;
        t = (t - 1) & full;
    }
    return g;
}

cd ResponseWorkspace::p_value(double nu) const {
    const int n = static_cast<int>(probes_.size());
    const unsigned full = (1u << n) - 1u;
    const double nu_prime = nu - w_[full];

    cd pplus = 0.0, pminus = 0.0;
    std::vector<Vec3> chain(full + 1);

    for (unsigned q = 0; q <= full; ++q) {
        const unsigned rest = full ^ q;
        // dashed-side chains: arguments i(nu' + W(Q) + W(U))
        chain[0] = sd_.apply_green(cd(0.0, nu_prime + w_[q]), qp_[q]);
        for (unsigned um : by_popcount_) {
            if (um == 0 || (um & ~rest)) continue;
            Vec3 acc = Vec3::Zero();
            for (int j = 0; j < n; ++j) {
                const unsigned bit = 1u << j;
                if (!(um & bit)) continue;
                acc += CouplingMatrices::by_sign(probes_[j].sign) * chain[um ^ bit];
            }
            chain[um] = sd_.apply_green(cd(0.0, nu_prime + w_[q] + w_[um]), acc);
        }
        pplus += chain[rest](1);

        // solid-side chains: arguments -i(nu - W(Q) - W(U))
        chain[0] = sd_.apply_green(cd(0.0, -(nu - w_[q])), qm_[q]);
        for (unsigned um : by_popcount_) {
            if (um == 0 || (um & ~rest)) continue;
            Vec3 acc = Vec3::Zero();
            for (int j = 0; j < n; ++j) {
                const unsigned bit = 1u << j;
                if (!(um & bit)) continue;
                acc += CouplingMatrices::by_sign(probes_[j].sign) * chain[um ^ bit];
            }
            chain[um] = sd_.apply_green(cd(0.0, -(nu - w_[q] - w_[um])), acc);
        }
        pminus += chain[rest](0);
    }
    return (pplus + pminus) / TWO_PI;
}

cd ResponseWorkspace::nu_integral() const {
    // Only the single-resolvent chains survive the line integral (all chain
    // poles sit in one half-plane once two or more resolvents multiply), and
    // each contributes pi times its fluctuation component.
    const unsigned full = static_cast<unsigned>(v_.size()) - 1u;
    return 0.5 * (qp_[full](1) + qm_[full](0));
}

Vec3 response_vector(const AtomParams& p, const ProbeList& probes) {
    check_size(probes);
    ResponseWorkspace ws(p, probes);
    return ws.resp((1u << probes.size()) - 1u);
}

cd factorized_g(const AtomParams& p, const ProbeList& probes) {
    ResponseWorkspace ws(p, probes);
    return ws.g_value();
}

Vec3 q_vector(const AtomParams& p, const ProbeList& probes, int branch) {
    if (branch != +1 && branch != -1) {
        throw std::invalid_argument("q_vector: branch must be +1 or -1");
    }
    ResponseWorkspace ws(p, probes);
    const unsigned full = (1u << probes.size()) - 1u;
    return branch == +1 ? ws.qplus(full) : ws.qminus(full);
}

InelasticValue inelastic_P(const AtomParams& p, const ProbeList& probes, double nu) {
    ResponseWorkspace ws(p, probes);
    InelasticValue out;
    out.value = ws.p_value(nu);
    out.nu_prime = nu - probe_weight(probes);
    return out;
}

cd box_nu_integral(const AtomParams& p, const ProbeList& probes) {
    ResponseWorkspace ws(p, probes);
    return ws.nu_integral();
}

} // namespace cbs3
