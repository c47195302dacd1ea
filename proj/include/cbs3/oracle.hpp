// oracle.hpp - independent ground truth: exact three-atom master-equation
// machinery (63 coupled moments), path-resolved fourth-order steady state,
// intensity extraction, sum-rule identities, and single-atom oracles.
#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cbs3/atom.hpp"
#include "cbs3/response.hpp"

namespace cbs3 {

using Vec63 = Eigen::Vector<cd, 63>;
using Mat63 = Eigen::Matrix<cd, 63, 63>;

// Three driven atoms with symmetric complex pair couplings T (far-field
// excitation-transfer amplitudes). Atom labels are 1-based throughout.
struct ThreeAtomConfig {
    std::array<AtomParams, 3> atoms{};
    std::array<cd, 3> pair_couplings{};  // pairs (1,2), (1,3), (2,3)

    cd coupling(int lam, int mu) const;
    void set_coupling(int lam, int mu, cd value);
    void validate() const;
};

// Far-field transfer amplitude between two atoms for a linear dipole
// orientation: i*(3/2)*gamma*(1 - (d.r)^2) * exp(-i*k*r) / (k*r).
cd coupling_from_geometry(const Eigen::Vector3d& pos_lam, const Eigen::Vector3d& pos_mu,
                          const Eigen::Vector3d& dipole, double k_laser, double gamma);

// Convenience: all three couplings from explicit positions (caller is
// responsible for k*r >> 1 far-field validity).
ThreeAtomConfig config_from_geometry(const std::array<AtomParams, 3>& atoms,
                                     const std::array<Eigen::Vector3d, 3>& positions,
                                     const Eigen::Vector3d& dipole, double k_laser);

// Stacked moment vector: x = single-atom Bloch vectors ordered (atom 3, 2, 1);
// y = pair tensors ordered (2,3), (1,3), (1,2), each flattened with the
// smaller atom label as the slow index; z = the triple tensor flattened
// (atom 1 slowest). Component order per atom is (sigma-, sigma+, sigmaz).
struct StateVector63 {
    Vec63 data = Vec63::Zero();

    static int x_index(int atom, int comp);
    static int y_index(int atom_a, int comp_a, int atom_b, int comp_b);
    static int z_index(int comp1, int comp2, int comp3);
};

// One summand of the interaction decomposition: the transfer labeled (lambda,
// mu), or its conjugate partner.
struct InteractionLabel {
    int lambda{1};
    int mu{2};
    bool conjugated{false};

    void validate() const;
    friend bool operator==(const InteractionLabel& a, const InteractionLabel& b) {
        return a.lambda == b.lambda && a.mu == b.mu && a.conjugated == b.conjugated;
    }
    friend bool operator<(const InteractionLabel& a, const InteractionLabel& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.mu != b.mu) return a.mu < b.mu;
        return a.conjugated < b.conjugated;
    }
};

// Free (coupling-independent) evolution matrix of the 63 moments:
// block-lower-triangular with single-atom, pair and triple diagonal blocks.
Mat63 build_A(const ThreeAtomConfig& config);

// Inhomogeneous drive of the moment equations (single-atom sector only).
Vec63 drive_vector63(const ThreeAtomConfig& config);

// Coupling-free steady state; factorizes into single-atom Bloch vectors.
StateVector63 zeroth_order(const ThreeAtomConfig& config);

// Apply one interaction summand to a moment vector (linear in v, proportional
// to the label's coupling).
StateVector63 apply_interaction(const InteractionLabel& label, const StateVector63& v,
                                const ThreeAtomConfig& config);

// Sum over all distinct placements of the four labels into the four
// interaction slots of G V G V G V G V G Lambda with G = -A^{-1}.
StateVector63 path_term(const std::array<InteractionLabel, 4>& labels,
                        const ThreeAtomConfig& config);

// background intensity of one atom: (1 + <sigmaz_lambda>)/2
cd extract_intensity(const StateVector63& v, int lambda);
// interference intensity: <sigma+_lambda sigma-_mu>, lambda != mu
cd extract_intensity(const StateVector63& v, int lambda, int mu);

// Steady-state factorization identities of the pair and triple sectors,
// checked by direct linear solves against the tensor-product forms.
struct SumRuleReport {
    double y_deviation{0.0};
    double z_deviation{0.0};
    double max_deviation() const { return y_deviation > z_deviation ? y_deviation : z_deviation; }
};
SumRuleReport sum_rule_check(const ThreeAtomConfig& config);

// Inelastic resonance-fluorescence spectrum of one atom from the regression
// identity, in closed form via the spectral decomposition (no time stepping):
// S(nu) = Re[ G(i nu) dC(0) ]_{sigma+} / pi with dC(0) the connected part of
// <sigma(0) sigma-(0)>.
std::vector<double> single_atom_spectrum_oracle(const AtomParams& params,
                                                const std::vector<double>& nuGrid);

// Time-domain estimate of the n-probe response vector: integrate the Bloch
// equations with explicit probe drives of amplitude epsilon, demodulate the
// quasi-stationary tail at the combination frequency, divide by epsilon^n.
// horizon <= 0 picks settle + demodulation window automatically (in units of
// the slowest damping time); an explicit horizon too short to hold both
// throws. Residual is O(epsilon) + integrator floor.
Vec3 polychromatic_obe_oracle(const AtomParams& params, const ProbeList& probes,
                              double epsilon, double horizon = 0.0);

}  // namespace cbs3
