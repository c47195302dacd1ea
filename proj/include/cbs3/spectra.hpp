// spectra.hpp - numerical assembly of the triple-scattering intensities and
// spectra: adaptive evaluation of wired terms, elastic/inelastic sums,
// small-drive closed forms, enhancement factor, strong-drive subset.
#pragma once

#include <array>
#include <vector>

#include "cbs3/atom.hpp"
#include "cbs3/diagram.hpp"
#include "cbs3/quadrature.hpp"

namespace cbs3 {

// Closed-form small-drive references (frequencies in units of gamma).
enum class RefKind {
    ElasticL1,
    ElasticL2,
    ElasticC1,
    ElasticC2,
    InelasticL1,
    InelasticL2,
    InelasticC1,
    InelasticC2,
    IntegratedLadder,
    IntegratedCrossed,
};

// scalar forms: the four elastic intensities and the two integrated inelastic
// totals (spectral kinds require the nu overload)
double perturbative_reference(double delta, double omega, RefKind which);
// spectral densities at detected detuning nu
double perturbative_reference(double delta, double omega, RefKind which, double nu);

// Small-drive enhancement factor 1 + C/L from the integrated closed forms.
double enhancement_factor(double delta);

struct SpectrumResult {
    std::vector<double> nuGrid;
    std::vector<double> ladder1, ladder2, crossed1, crossed2;  // degeneracies applied
    std::array<double, 4> elastic{};                           // L1, L2, C1, C2
    AtomParams params;
    QuadratureConfig quad;
    std::array<int, 4> term_counts{};        // allowed terms per type
    std::array<double, 4> imag_residual{};   // largest |Im|/max|Re| before Re
};

// Value of one wired term at detected detuning nu: the product of its three
// single-atom factors integrated over the 0-2 internal frequencies. Unit
// transfer couplings; no degeneracy factor. For elastic terms the result is
// nu-independent.
cd evaluate_diagram(const AtomParams& params, const DiagramTerm& term, double nu,
                    const QuadratureConfig& quad = {});

// Sum of the nu-pinned terms of one contribution type, degeneracy applied
// (the second crossed type takes 12*Re).
double elastic_intensity(const AtomParams& params, ContributionType type,
                         const QuadratureConfig& quad = {});

// Inelastic spectral density of one contribution type on a nu grid,
// degeneracy applied (12*Re for the second crossed type).
std::vector<double> inelastic_spectrum(const AtomParams& params, ContributionType type,
                                       const std::vector<double>& nuGrid,
                                       const QuadratureConfig& quad = {});

// The all-box subset that dominates for strong driving, same conventions as
// inelastic_spectrum.
std::vector<double> strong_drive_spectrum(const AtomParams& params, ContributionType type,
                                          const std::vector<double>& nuGrid,
                                          const QuadratureConfig& quad = {});

// Total per-path intensity of one contribution type: elastic terms plus the
// nu-integrated inelastic ones, WITHOUT degeneracy factor or real-part
// folding. This is the quantity the exact three-atom solution reproduces
// path-by-path (up to the per-arrow coupling normalization).
cd per_path_total(const AtomParams& params, ContributionType type,
                  const QuadratureConfig& quad = {});

// 801 points on [-4*Og - 8, 4*Og + 8], Og the generalized Rabi frequency.
std::vector<double> default_nu_grid(const AtomParams& params, int points = 801);

// Full assembly used by the command-line front end.
SpectrumResult compute_spectrum(const AtomParams& params, const std::vector<double>& nuGrid,
                                const QuadratureConfig& quad = {});

}  // namespace cbs3
