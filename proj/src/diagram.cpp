// diagram.cpp - enumerate wired three-atom scattering terms: composite-block
// catalogs, amplitude-loop filtering, and exact frequency assignment.
#include "cbs3/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cbs3 {

namespace {

// ---------------------------------------------------------------------------
// exact rational arithmetic for the frequency constraint solver
struct Frac {
    long long n{0}, d{1};
    Frac() = default;
    Frac(long long num) : n(num), d(1) {}
    Frac(long long num, long long den) : n(num), d(den) { normalize(); }
    void normalize() {
        if (d == 0) throw std::runtime_error("Frac: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
    }
    bool zero() const { return n == 0; }
};

Frac operator+(const Frac& a, const Frac& b) { return Frac(a.n * b.d + b.n * a.d, a.d * b.d); }
Frac operator-(const Frac& a, const Frac& b) { return Frac(a.n * b.d - b.n * a.d, a.d * b.d); }
Frac operator*(const Frac& a, const Frac& b) { return Frac(a.n * b.n, a.d * b.d); }
Frac operator/(const Frac& a, const Frac& b) {
    if (b.zero()) throw std::runtime_error("Frac: division by zero");
    return Frac(a.n * b.d, a.d * b.n);
}

// ---------------------------------------------------------------------------
// catalogs
CompositeBlock make_catalog(char family) {
    CompositeBlock blk;
    blk.family = family;
    auto elastic = [](const char* label, unsigned mask) {
        BlockVariant v;
        v.label = label;
        v.is_box = false;
        v.mask = mask;
        return v;
    };
    auto box = [](const char* label) {
        BlockVariant v;
        v.label = label;
        v.is_box = true;
        return v;
    };
    switch (family) {
        case 'A':
            blk.probe_count = 0;
            blk.terms = {elastic("a1", 0u), box("a2")};
            break;
        case 'B':
            blk.probe_count = 2;
            blk.terms = {elastic("b1", 0u), elastic("b2", 3u), elastic("b3", 1u),
                         elastic("b4", 2u), box("b5")};
            break;
        case 'C':
            blk.probe_count = 1;
            blk.terms = {elastic("c1", 1u), elastic("c2", 0u), box("c3")};
            break;
        case 'D':
            blk.probe_count = 1;
            blk.terms = {elastic("d1", 0u), elastic("d2", 1u), box("d3")};
            break;
        case 'E': {
            blk.probe_count = 4;
            // Each probe pair (+, -) lands on the circles in one of four
            // patterns; the catalog runs over both pairs independently.
            static const unsigned masks[16] = {0u,  12u, 8u, 3u, 15u, 1u, 4u, 11u,
                                               5u, 9u,  2u, 14u, 7u, 6u, 10u, 13u};
            for (int i = 0; i < 16; ++i)
                blk.terms.push_back(elastic(("e" + std::to_string(i + 1)).c_str(), masks[i]));
            blk.terms.push_back(box("e17"));
            break;
        }
        case 'F':
            blk.probe_count = 2;
            blk.terms = {elastic("f1", 0u), elastic("f2", 3u), elastic("f3", 1u),
                         elastic("f4", 2u), box("f5")};
            break;
        case 'G':
            blk.probe_count = 3;
            blk.terms = {elastic("g1", 7u), elastic("g2", 6u), elastic("g3", 5u),
                         elastic("g4", 3u), elastic("g5", 2u), elastic("g6", 1u),
                         elastic("g7", 4u), elastic("g8", 0u), box("g9")};
            break;
        default:
            throw std::invalid_argument("expand_block: unknown family");
    }
    return blk;
}

// ---------------------------------------------------------------------------
// wiring: the fixed arrow layout of each contribution type
constexpr int kDetected = -1;

struct Arrow {
    int from_slot;
    bool from_plus;  // emitted from the sigma+ side (circle or box half)
    int to_slot;     // kDetected when the arrow reaches the detector
    int probe_idx;   // probe position at the receiving block
};

struct Wiring {
    std::array<char, 3> families;
    std::array<Arrow, 6> arrows;
};

const Wiring& wiring_for(ContributionType type) {
    // Ladder chains run source -> middle -> detector block; crossed chains
    // route amplitude and conjugate amplitude through the atoms in opposite
    // order, so internal arrows run in both directions.
    static const Wiring wL1{{'A', 'B', 'B'},
                            {{{0, true, 1, 0},
                              {0, false, 1, 1},
                              {1, true, 2, 0},
                              {1, false, 2, 1},
                              {2, true, kDetected, 0},
                              {2, false, kDetected, 0}}}};
    static const Wiring wL2{{'A', 'E', 'A'},
                            {{{0, true, 1, 0},
                              {0, false, 1, 1},
                              {2, true, 1, 2},
                              {2, false, 1, 3},
                              {1, true, kDetected, 0},
                              {1, false, kDetected, 0}}}};
    static const Wiring wC1{{'C', 'F', 'D'},
                            {{{0, true, kDetected, 0},
                              {0, false, 1, 1},
                              {1, true, 0, 0},
                              {1, false, 2, 0},
                              {2, true, 1, 0},
                              {2, false, kDetected, 0}}}};
    static const Wiring wC2{{'A', 'G', 'D'},
                            {{{0, true, 1, 1},
                              {0, false, 1, 0},
                              {1, true, kDetected, 0},
                              {1, false, 2, 0},
                              {2, true, 1, 2},
                              {2, false, kDetected, 0}}}};
    switch (type) {
        case ContributionType::L1: return wL1;
        case ContributionType::L2: return wL2;
        case ContributionType::C1: return wC1;
        case ContributionType::C2: return wC2;
    }
    throw std::invalid_argument("wiring_for: unknown type");
}

// probe sign at the receiver: + when emitted from the sigma+ side
int probe_sign(const Arrow& a) { return a.from_plus ? +1 : -1; }

// arrow index delivering probe j to slot s (throws if unwired)
int probe_arrow(const Wiring& w, int slot, int probe) {
    for (int k = 0; k < 6; ++k)
        if (w.arrows[k].to_slot == slot && w.arrows[k].probe_idx == probe) return k;
    throw std::runtime_error("probe_arrow: unwired probe");
}

const BlockVariant& variant_at(const Wiring& w, const std::array<int, 3>& variant, int slot) {
    const CompositeBlock& blk = expand_block(w.families[slot]);
    return blk.terms.at(static_cast<std::size_t>(variant[slot]));
}

std::string label_of(const Wiring& w, const std::array<int, 3>& variant) {
    std::string s;
    for (int slot = 0; slot < 3; ++slot) s += "(" + variant_at(w, variant, slot).label + ")";
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------

ContributionType contribution_from_string(const std::string& name) {
    if (name == "L1") return ContributionType::L1;
    if (name == "L2") return ContributionType::L2;
    if (name == "C1") return ContributionType::C1;
    if (name == "C2") return ContributionType::C2;
    throw std::invalid_argument("contribution_from_string: expected L1, L2, C1 or C2");
}

std::string to_string(ContributionType type) {
    switch (type) {
        case ContributionType::L1: return "L1";
        case ContributionType::L2: return "L2";
        case ContributionType::C1: return "C1";
        case ContributionType::C2: return "C2";
    }
    throw std::invalid_argument("to_string: unknown type");
}

int degeneracy_factor(ContributionType type) {
    switch (type) {
        case ContributionType::L1: return 6;
        case ContributionType::L2: return 3;
        case ContributionType::C1: return 6;
        case ContributionType::C2: return 12;
    }
    throw std::invalid_argument("degeneracy_factor: unknown type");
}

bool takes_real_part(ContributionType type) { return type == ContributionType::C2; }

const CompositeBlock& expand_block(char family) {
    static const CompositeBlock A = make_catalog('A');
    static const CompositeBlock B = make_catalog('B');
    static const CompositeBlock C = make_catalog('C');
    static const CompositeBlock D = make_catalog('D');
    static const CompositeBlock E = make_catalog('E');
    static const CompositeBlock F = make_catalog('F');
    static const CompositeBlock G = make_catalog('G');
    switch (family) {
        case 'A': return A;
        case 'B': return B;
        case 'C': return C;
        case 'D': return D;
        case 'E': return E;
        case 'F': return F;
        case 'G': return G;
        default: throw std::invalid_argument("expand_block: unknown family");
    }
}

double FreqForm::eval(double nu, const std::vector<double>& t) const {
    double v = coeff.at(0) * nu;
    for (std::size_t k = 1; k < coeff.size(); ++k) v += coeff[k] * t.at(k - 1);
    return v;
}

bool FreqForm::depends_on_free() const {
    for (std::size_t k = 1; k < coeff.size(); ++k)
        if (coeff[k] != 0.0) return true;
    return false;
}

bool FactorSpec::depends_on_nu() const {
    auto any_nu = [](const std::vector<ProbeForm>& ps) {
        for (const ProbeForm& p : ps)
            if (p.freq.depends_on_nu()) return true;
        return false;
    };
    if (is_box) return any_nu(box_probes) || slot.depends_on_nu();
    return any_nu(plus_probes) || any_nu(minus_probes);
}

bool FactorSpec::depends_on_free(int k) const {
    auto dep = [k](const FreqForm& f) {
        return static_cast<std::size_t>(k + 1) < f.coeff.size() && f.coeff[k + 1] != 0.0;
    };
    auto any = [&](const std::vector<ProbeForm>& ps) {
        for (const ProbeForm& p : ps)
            if (dep(p.freq)) return true;
        return false;
    };
    if (is_box) return any(box_probes) || dep(slot);
    return any(plus_probes) || any(minus_probes);
}

// ---------------------------------------------------------------------------

bool detect_closed_loop(ContributionType type, const std::array<int, 3>& variant) {
    const Wiring& w = wiring_for(type);
    // Two flow nodes per block: the sigma+ side and the sigma- side. A box
    // has no internal connection between its halves; a circle keeps every
    // probe on the side the catalog mask assigns it. An arrow moves amplitude
    // from the emitting side of one block to the side that absorbs it at the
    // receiver; a directed cycle means that amplitude never reaches the
    // detector, which kills the term.
    auto node = [](int slot, bool plus) { return 2 * slot + (plus ? 0 : 1); };
    std::array<int, 6> next{};
    next.fill(-1);
    for (const Arrow& a : w.arrows) {
        if (a.to_slot == kDetected) continue;
        const BlockVariant& recv = variant_at(w, variant, a.to_slot);
        bool recv_plus;
        if (recv.is_box) {
            recv_plus = a.from_plus;  // positive probes drive the box's sigma+ half
        } else {
            recv_plus = (recv.mask >> a.probe_idx) & 1u;
        }
        next[static_cast<std::size_t>(node(a.from_slot, a.from_plus))] =
            node(a.to_slot, recv_plus);
    }
    // out-degree is at most one, so cycle detection is pointer chasing
    for (int start = 0; start < 6; ++start) {
        int cur = start, steps = 0;
        while (cur != -1 && steps <= 6) {
            cur = next[static_cast<std::size_t>(cur)];
            if (cur == start) return true;
            ++steps;
        }
    }
    return false;
}

DiagramTerm assign_frequencies(ContributionType type, const std::array<int, 3>& variant) {
    const Wiring& w = wiring_for(type);

    // Unknowns: six arrow frequencies (columns 0..5) plus the detection
    // frequency nu (column 6). Every block side imposes one linear relation;
    // detected arrows carry exactly nu. The system is homogeneous, so nu
    // being a pivot column pins it to zero (elastic term).
    constexpr int kCols = 7;
    std::vector<std::array<Frac, kCols>> rows;
    auto blank = [] {
        std::array<Frac, kCols> r{};
        return r;
    };

    std::array<int, 3> plus_out{-1, -1, -1}, minus_out{-1, -1, -1};
    for (int k = 0; k < 6; ++k) {
        const Arrow& a = w.arrows[k];
        (a.from_plus ? plus_out : minus_out)[static_cast<std::size_t>(a.from_slot)] = k;
        if (a.to_slot == kDetected) {
            auto r = blank();
            r[static_cast<std::size_t>(k)] = Frac(1);
            r[6] = Frac(-1);
            rows.push_back(r);
        }
    }

    for (int slot = 0; slot < 3; ++slot) {
        const BlockVariant& v = variant_at(w, variant, slot);
        const int np = expand_block(w.families[slot]).probe_count;
        if (v.is_box) {
            // sigma- output = sigma+ output - (signed sum of all probes)
            auto r = blank();
            r[static_cast<std::size_t>(minus_out[static_cast<std::size_t>(slot)])] = Frac(1);
            r[static_cast<std::size_t>(plus_out[static_cast<std::size_t>(slot)])] = Frac(-1);
            for (int j = 0; j < np; ++j) {
                int k = probe_arrow(w, slot, j);
                r[static_cast<std::size_t>(k)] =
                    r[static_cast<std::size_t>(k)] + Frac(probe_sign(w.arrows[k]));
            }
            rows.push_back(r);
        } else {
            // sigma+ circle emits the signed sum of its own probes; the
            // sigma- circle emits minus the signed sum of the rest.
            auto rp = blank(), rm = blank();
            rp[static_cast<std::size_t>(plus_out[static_cast<std::size_t>(slot)])] = Frac(1);
            rm[static_cast<std::size_t>(minus_out[static_cast<std::size_t>(slot)])] = Frac(1);
            for (int j = 0; j < np; ++j) {
                int k = probe_arrow(w, slot, j);
                Frac s(probe_sign(w.arrows[k]));
                if ((v.mask >> j) & 1u)
                    rp[static_cast<std::size_t>(k)] = rp[static_cast<std::size_t>(k)] - s;
                else
                    rm[static_cast<std::size_t>(k)] = rm[static_cast<std::size_t>(k)] + s;
            }
            rows.push_back(rp);
            rows.push_back(rm);
        }
    }

    // Gaussian elimination to reduced row echelon form, sweeping columns left
    // to right so arrow frequencies pivot before nu ever does.
    int n_rows = static_cast<int>(rows.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < kCols && row < n_rows; ++col) {
        int sel = -1;
        for (int r = row; r < n_rows; ++r)
            if (!rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)].zero()) {
                sel = r;
                break;
            }
        if (sel < 0) continue;
        std::swap(rows[static_cast<std::size_t>(row)], rows[static_cast<std::size_t>(sel)]);
        Frac inv = Frac(1) / rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        for (int c = col; c < kCols; ++c)
            rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] =
                rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] * inv;
        for (int r = 0; r < n_rows; ++r) {
            if (r == row) continue;
            Frac f = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f.zero()) continue;
            for (int c = col; c < kCols; ++c)
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -
                    f * rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
        }
        pivot_col.push_back(col);
        ++row;
    }

    bool nu_pinned =
        std::find(pivot_col.begin(), pivot_col.end(), 6) != pivot_col.end();

    // Free variables: nu first (unless pinned), then free arrow columns in
    // ascending order as t_1, t_2, ...
    std::vector<int> free_cols;
    for (int col = 0; col < 6; ++col)
        if (std::find(pivot_col.begin(), pivot_col.end(), col) == pivot_col.end())
            free_cols.push_back(col);

    const int n_free = static_cast<int>(free_cols.size());
    if (n_free > 2)
        throw std::runtime_error("assign_frequencies: more than two internal variables");

    // arrow frequency as FreqForm over (nu, t_1, ..., t_{n_free})
    auto form_of = [&](int col) {
        FreqForm f;
        f.coeff.assign(static_cast<std::size_t>(1 + n_free), 0.0);
        auto free_index = [&](int c) {
            if (c == 6) return 0;  // nu slot
            auto it = std::find(free_cols.begin(), free_cols.end(), c);
            return 1 + static_cast<int>(it - free_cols.begin());
        };
        auto piv = std::find(pivot_col.begin(), pivot_col.end(), col);
        if (piv == pivot_col.end()) {
            if (!(col == 6 && nu_pinned))
                f.coeff[static_cast<std::size_t>(free_index(col))] = 1.0;
            return f;
        }
        int r = static_cast<int>(piv - pivot_col.begin());
        for (int c = 0; c < kCols; ++c) {
            if (c == col) continue;
            const Frac& q = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (q.zero()) continue;
            if (c == 6 && nu_pinned) continue;
            f.coeff[static_cast<std::size_t>(free_index(c))] -=
                static_cast<double>(q.n) / static_cast<double>(q.d);
        }
        return f;
    };

    DiagramTerm term;
    term.type = type;
    term.label = label_of(w, variant);
    term.n_free = n_free;
    term.elastic = nu_pinned;
    for (int slot = 0; slot < 3; ++slot) {
        const BlockVariant& v = variant_at(w, variant, slot);
        const int np = expand_block(w.families[slot]).probe_count;
        FactorSpec& fac = term.factors[static_cast<std::size_t>(slot)];
        fac.is_box = v.is_box;
        for (int j = 0; j < np; ++j) {
            int k = probe_arrow(w, slot, j);
            ProbeForm p;
            p.sign = probe_sign(w.arrows[k]);
            p.freq = form_of(k);
            if (v.is_box)
                fac.box_probes.push_back(p);
            else if ((v.mask >> j) & 1u)
                fac.plus_probes.push_back(p);
            else
                fac.minus_probes.push_back(p);
        }
        if (v.is_box) {
            fac.slot = form_of(plus_out[static_cast<std::size_t>(slot)]);
            ++term.box_count;
        } else {
            fac.slot.coeff.assign(static_cast<std::size_t>(1 + n_free), 0.0);
        }
    }

    // Total-intensity shortcut: when nu enters exactly one factor, that
    // factor is a box, and only through its spectral slot, the nu integral
    // equals the box's closed-form spectral weight over the remaining probes.
    if (!term.elastic) {
        int nu_factors = 0, cand = -1;
        for (int slot = 0; slot < 3; ++slot)
            if (term.factors[static_cast<std::size_t>(slot)].depends_on_nu()) {
                ++nu_factors;
                cand = slot;
            }
        if (nu_factors == 1) {
            const FactorSpec& fac = term.factors[static_cast<std::size_t>(cand)];
            bool probes_clean = true;
            for (const ProbeForm& p : fac.box_probes)
                if (p.freq.depends_on_nu()) probes_clean = false;
            if (fac.is_box && probes_clean && fac.slot.coeff.at(0) != 0.0) {
                term.detector_reducible = true;
                term.reducible_factor = cand;
                term.reducible_scale = 1.0 / std::abs(fac.slot.coeff.at(0));
            }
        }
    }
    return term;
}

int raw_term_count(ContributionType type) {
    const Wiring& w = wiring_for(type);
    int n = 1;
    for (int slot = 0; slot < 3; ++slot)
        n *= static_cast<int>(expand_block(w.families[slot]).terms.size());
    return n;
}

namespace {

template <typename Fn>
void for_each_variant(ContributionType type, Fn&& fn) {
    const Wiring& w = wiring_for(type);
    const auto n0 = static_cast<int>(expand_block(w.families[0]).terms.size());
    const auto n1 = static_cast<int>(expand_block(w.families[1]).terms.size());
    const auto n2 = static_cast<int>(expand_block(w.families[2]).terms.size());
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) fn(std::array<int, 3>{i0, i1, i2});
}

}  // namespace

std::vector<DiagramTerm> enumerate_type(ContributionType type) {
    std::vector<DiagramTerm> out;
    for_each_variant(type, [&](const std::array<int, 3>& v) {
        if (!detect_closed_loop(type, v)) out.push_back(assign_frequencies(type, v));
    });
    return out;
}

std::vector<std::string> forbidden_labels(ContributionType type) {
    std::vector<std::string> out;
    const Wiring& w = wiring_for(type);
    for_each_variant(type, [&](const std::array<int, 3>& v) {
        if (detect_closed_loop(type, v)) out.push_back(label_of(w, v));
    });
    return out;
}

}  // namespace cbs3
