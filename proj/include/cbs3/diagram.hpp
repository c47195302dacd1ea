// diagram.hpp - composite-block catalogs, chain wiring, loop filtering, and
// frequency assignment for the four triple-scattering contribution types.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "cbs3/response.hpp"

namespace cbs3 {

enum class ContributionType { L1, L2, C1, C2 };

ContributionType contribution_from_string(const std::string& name);
std::string to_string(ContributionType type);

// Multiplicity of equivalent atom relabelings, applied once at spectrum assembly.
int degeneracy_factor(ContributionType type);
// The second crossed type sums a conjugate family of paths via 2*Re (folded into 12).
bool takes_real_part(ContributionType type);

// One catalog entry of a composite block: either a split of the probe set over
// the two circles (elastic) or the single fluctuation box holding every probe.
struct BlockVariant {
    std::string label;  // e.g. "b3"
    bool is_box{false};
    unsigned mask{0};  // bit j set: probe j drives the sigma+ circle
};

struct CompositeBlock {
    char family{'A'};  // 'A'..'G'
    int probe_count{0};
    std::vector<BlockVariant> terms;
};

// Full term list for one composite block family ('A'..'G').
const CompositeBlock& expand_block(char family);

// Linear form over a term's frequency variables: coeff[0]*nu + coeff[k]*t_k.
struct FreqForm {
    std::vector<double> coeff;  // size 1 + n_free
    double eval(double nu, const std::vector<double>& t) const;
    bool depends_on_nu() const { return coeff.at(0) != 0.0; }
    bool depends_on_free() const;
};

struct ProbeForm {
    int sign{+1};
    FreqForm freq;
};

// One single-atom factor of a wired term.
struct FactorSpec {
    bool is_box{false};
    // elastic: probes driving the sigma+ circle and the sigma- circle
    std::vector<ProbeForm> plus_probes, minus_probes;
    // box: every probe in slot order, plus the sigma+-output spectral argument
    std::vector<ProbeForm> box_probes;
    FreqForm slot;
    bool depends_on_nu() const;
    bool depends_on_free(int k) const;  // integration variable t_k (0-based)
};

struct DiagramTerm {
    ContributionType type{ContributionType::L1};
    std::string label;  // "(c3)(f5)(d3)"
    std::array<FactorSpec, 3> factors;
    int n_free{0};       // internal integration variables (nu not counted)
    bool elastic{false};  // detection frequency pinned to the drive (nu = 0)
    int box_count{0};
    // Total-intensity shortcut: the nu integral collapses onto one box's
    // closed-form spectral weight when nu enters that box's slot and nowhere else.
    bool detector_reducible{false};
    int reducible_factor{-1};
    double reducible_scale{1.0};  // 1/|slot nu-coefficient|
};

// All allowed (loop-free) terms of a contribution type, in catalog order.
std::vector<DiagramTerm> enumerate_type(ContributionType type);

// Catalog-product size before the loop filter.
int raw_term_count(ContributionType type);

// Labels removed by the loop filter, in catalog order.
std::vector<std::string> forbidden_labels(ContributionType type);

// True when the wired term feeds an amplitude around a directed cycle that
// never reaches a detected arrow. Variant indices follow catalog order.
bool detect_closed_loop(ContributionType type, const std::array<int, 3>& variant);

// Wire and solve one catalog combination (must be loop-free).
DiagramTerm assign_frequencies(ContributionType type, const std::array<int, 3>& variant);

}  // namespace cbs3
