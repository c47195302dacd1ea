// response.hpp - multi-probe response vectors, factorized splits, fluctuation spectra
#pragma once

#include <vector>

#include "cbs3/atom.hpp"

namespace cbs3 {

// One weak probe field acting on a driven atom. sign +1 tags the quadrature
// coupled through dplus (negative-frequency / dashed bookkeeping), sign -1 the
// conjugate quadrature (positive-frequency / solid). omega is the probe
// detuning from the laser.
struct SignedProbe {
    int sign{+1};
    double omega{0.0};
};

using ProbeList = std::vector<SignedProbe>;

// Flip every probe sign (the conjugate-response probe list).
ProbeList conjugate_probes(const ProbeList& probes);

// sum_j s_j * omega_j
double probe_weight(const ProbeList& probes);

// Caches all subset response data of one atom for a fixed probe list:
// response vectors V(S), factorized-split vectors, and the fluctuation
// vectors feeding the incoherent-spectrum chains. Cheap to build (n <= 8).
class ResponseWorkspace {
  public:
    ResponseWorkspace(const AtomParams& p, const ProbeList& probes);
    ResponseWorkspace(const SpectralDecomposition& sd, const Vec3& steady,
                      const ProbeList& probes);

    int n() const { return static_cast<int>(probes_.size()); }
    const ProbeList& probes() const { return probes_; }

    // response vector of the probe subset S (bitmask over probes_)
    const Vec3& resp(unsigned mask) const { return v_[mask]; }
    // fluctuation vectors of subset S
    const Vec3& qplus(unsigned mask) const { return qp_[mask]; }
    const Vec3& qminus(unsigned mask) const { return qm_[mask]; }
    double wsum(unsigned mask) const { return w_[mask]; }

    // factorized (coherent) part of the full probe list
    cd g_value() const;
    // incoherent spectrum at detected detuning nu (full probe list)
    cd p_value(double nu) const;
    // closed form of the nu-integral of p_value over the whole line
    cd nu_integral() const;

  private:
    void build();

    SpectralDecomposition sd_;
    ProbeList probes_;
    std::vector<Vec3> v_, qp_, qm_;
    std::vector<double> w_;
    std::vector<unsigned> by_popcount_; // all masks sorted by popcount
};

// n-probe response vector <sigma(omega_1..omega_n)>^{(s_1..s_n)}: the joint
// linear-response coefficient summed over all probe orderings. Components are
// (<sigma->, <sigma+>, <sigmaz>). Throws for more than 8 probes.
Vec3 response_vector(const AtomParams& p, const ProbeList& probes);

// Factorized two-circle split sum: sum over probe subsets S of
// [V(S)]_{sigma+} * [V(~S)]_{sigma-}.
cd factorized_g(const AtomParams& p, const ProbeList& probes);

// Fluctuation vector of the full probe list; branch +1 gives the dashed-out
// ("sigma+ removed") vector, branch -1 the solid-out one.
Vec3 q_vector(const AtomParams& p, const ProbeList& probes, int branch);

// Incoherent spectrum value of a correlation box.
struct InelasticValue {
    cd value{0.0, 0.0}; // spectral density at nu (complex for generic probes)
    double nu_prime{0.0}; // energy-conservation partner frequency nu - W
};

// P(probes; nu): spectral density of the detected dashed-out arrow at nu, with
// the solid-out arrow pinned at nu' = nu - sum_j s_j omega_j.
InelasticValue inelastic_P(const AtomParams& p, const ProbeList& probes, double nu);

// Closed form of  integral dnu P(probes; nu)  over the whole line.
cd box_nu_integral(const AtomParams& p, const ProbeList& probes);

} // namespace cbs3
