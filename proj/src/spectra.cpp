// spectra.cpp - assembles triple-scattering intensities and spectra from wired
// terms: nested adaptive integration with factor hoisting, elastic/inelastic
// sums with their degeneracy factors, small-drive closed forms, and the
// per-path totals used to cross-check against the exact three-atom solution.
#include "cbs3/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cbs3 {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Shared evaluation state for one parameter set: one spectral decomposition
// and steady state reused by every factor workspace, plus the integration
// geometry (cutoff and bare peak positions).
struct TermContext {
    AtomParams params;
    SpectralDecomposition sd;
    Vec3 steady;
    double cutoff;
    std::vector<double> base_hints;
    QuadratureConfig quad;

    TermContext(const AtomParams& p, const QuadratureConfig& q)
        : params(p),
          sd(spectral_decomposition(p)),
          steady(steady_bloch(p)),
          cutoff(default_cutoff(p)),
          base_hints(mollow_hints(p)),
          quad(q) {}
};

// Outer integrals run looser than inner ones (one decade per level, capped)
// so the subdivision work concentrates where the error actually accumulates.
double cascade_tol(const QuadratureConfig& q, int depth_total, int slot) {
    int loosen = depth_total - 1 - slot;
    if (loosen <= 0) return q.rel_tol;
    double tol = q.rel_tol * std::pow(10.0, std::min(loosen, 2));
    return std::min(tol, 1e-4);
}

cd factor_value(const TermContext& ctx, const FactorSpec& f, double nu,
                const std::vector<double>& t) {
    if (f.is_box) {
        ProbeList pl;
        pl.reserve(f.box_probes.size());
        for (const auto& pf : f.box_probes) pl.push_back({pf.sign, pf.freq.eval(nu, t)});
        ResponseWorkspace ws(ctx.sd, ctx.steady, pl);
        return ws.p_value(f.slot.eval(nu, t));
    }
    ProbeList plus, minus;
    plus.reserve(f.plus_probes.size());
    minus.reserve(f.minus_probes.size());
    for (const auto& pf : f.plus_probes) plus.push_back({pf.sign, pf.freq.eval(nu, t)});
    for (const auto& pf : f.minus_probes) minus.push_back({pf.sign, pf.freq.eval(nu, t)});
    ResponseWorkspace wp(ctx.sd, ctx.steady, plus);
    ResponseWorkspace wm(ctx.sd, ctx.steady, minus);
    unsigned fullp = (1u << plus.size()) - 1u;
    unsigned fullm = (1u << minus.size()) - 1u;
    return wp.resp(fullp)(1) * wm.resp(fullm)(0);
}

// Closed-form nu integral of the detector box, used when the detection
// frequency enters that box's spectral slot and nowhere else.
cd swapped_value(const TermContext& ctx, const DiagramTerm& term,
                 const std::vector<double>& t) {
    const FactorSpec& f = term.factors[static_cast<size_t>(term.reducible_factor)];
    ProbeList pl;
    pl.reserve(f.box_probes.size());
    for (const auto& pf : f.box_probes) pl.push_back({pf.sign, pf.freq.eval(0.0, t)});
    ResponseWorkspace ws(ctx.sd, ctx.steady, pl);
    return ws.nu_integral() * term.reducible_scale;
}

// Largest integral magnitude seen so far at each nesting slot of one term.
// Factor values are produced by chains with internal cancellations that leave
// a relative noise floor on the integrand (measured ~2e-8 for two-probe
// chains, ~8e-8 for four-probe double-box chains), so no integral can be
// trusted below kChainNoise times its slot's magnitude scale.  The scale
// anchors an absolute floor (so negligible samples stop early) and a post-hoc
// acceptance bound (so a noise-limited result is not treated as a failure).
using LevelScales = std::array<double, 4>;
constexpr double kChainNoise = 2e-7;

// Everything one nested evaluation needs besides the running variables.
struct EvalFrame {
    const TermContext* ctx;
    const DiagramTerm* term;
    double nu{0.0};
    int swap_factor{-1};  // factor replaced by its closed-form nu integral
    int depth_total{1};   // tolerance-cascade depth (includes any outer nu integral)
    int shift{0};         // cascade slot of free level 0
    LevelScales* scales{nullptr};
};

// A factor can be multiplied in once no variable from `level` upward enters
// its arguments. The swapped factor only cares about its probe frequencies.
bool factor_ready(const EvalFrame& fr, int s, int level) {
    const FactorSpec& f = fr.term->factors[static_cast<size_t>(s)];
    if (s == fr.swap_factor) {
        for (int k = level; k < fr.term->n_free; ++k)
            for (const auto& pf : f.box_probes)
                if (pf.freq.coeff.at(static_cast<size_t>(1 + k)) != 0.0) return false;
        return true;
    }
    for (int k = level; k < fr.term->n_free; ++k)
        if (f.depends_on_free(k)) return false;
    return true;
}

// All affine frequency arguments whose proximity to a bare peak marks a
// resonance of the factor: signed partial sums of the attached probes and,
// for boxes, the spectral slot minus each partial sum (the output-side
// resolvent arguments, including the energy-conservation partner).
std::vector<FreqForm> argument_forms(const FactorSpec& f, bool swapped) {
    std::vector<FreqForm> out;
    const size_t width = f.slot.coeff.size();
    auto signed_sum = [&](const std::vector<ProbeForm>& probes, unsigned mask) {
        FreqForm g;
        g.coeff.assign(width, 0.0);
        for (size_t j = 0; j < probes.size(); ++j)
            if (mask & (1u << j))
                for (size_t k = 0; k < width; ++k)
                    g.coeff[k] += static_cast<double>(probes[j].sign) * probes[j].freq.coeff.at(k);
        return g;
    };
    if (f.is_box) {
        const unsigned full = 1u << f.box_probes.size();
        for (unsigned m = 1; m < full; ++m) out.push_back(signed_sum(f.box_probes, m));
        if (!swapped) {
            for (unsigned m = 0; m < full; ++m) {
                FreqForm g = signed_sum(f.box_probes, m);
                for (size_t k = 0; k < width; ++k) g.coeff[k] -= f.slot.coeff[k];
                out.push_back(g);
            }
        }
    } else {
        for (const auto* side : {&f.plus_probes, &f.minus_probes}) {
            const unsigned full = 1u << side->size();
            for (unsigned m = 1; m < full; ++m) out.push_back(signed_sum(*side, m));
        }
    }
    return out;
}

// Peaks closer than a fraction of their gamma-scale width are one feature;
// keeping one split point per feature bounds the initial interval count.
void dedup_hints(std::vector<double>& hints, double width) {
    std::sort(hints.begin(), hints.end());
    hints.erase(std::unique(hints.begin(), hints.end(),
                            [width](double a, double b) {
                                double tol = std::max(0.2 * width, 1e-9 * std::abs(a));
                                return std::abs(a - b) < tol;
                            }),
                hints.end());
}

// Peak positions of the level's integration variable: every argument form
// that is fully determined once this variable is set gets solved against the
// bare peak set.
std::vector<double> level_hints(const EvalFrame& fr, const std::vector<double>& t,
                                int level, unsigned pending) {
    const TermContext& ctx = *fr.ctx;
    std::vector<double> hints = ctx.base_hints;
    auto add_form = [&](const FreqForm& g) {
        double c = g.coeff.at(static_cast<size_t>(1 + level));
        if (c == 0.0) return;
        for (int k = level + 1; k < fr.term->n_free; ++k)
            if (g.coeff.at(static_cast<size_t>(1 + k)) != 0.0) return;
        double part = g.coeff.at(0) * fr.nu;
        for (int k = 0; k < level; ++k) part += g.coeff.at(static_cast<size_t>(1 + k)) * t[static_cast<size_t>(k)];
        for (double h : ctx.base_hints) hints.push_back((h - part) / c);
    };
    for (int s = 0; s < 3; ++s) {
        if (!(pending & (1u << s))) continue;
        const FactorSpec& f = fr.term->factors[static_cast<size_t>(s)];
        for (const FreqForm& g : argument_forms(f, s == fr.swap_factor)) add_form(g);
    }
    dedup_hints(hints, ctx.params.gamma);
    return hints;
}

// Interior span that keeps every hinted peak inside the adaptively subdivided
// region instead of buried in a mapped tail.
double covering_cutoff(double base, const std::vector<double>& hints) {
    double cutoff = base;
    for (double h : hints) cutoff = std::max(cutoff, 1.25 * std::abs(h) + base);
    return cutoff;
}

cd eval_level(const EvalFrame& fr, std::vector<double>& t, int level, cd prefix,
              unsigned pending) {
    const TermContext& ctx = *fr.ctx;
    const DiagramTerm& term = *fr.term;
    for (int s = 0; s < 3; ++s) {
        if (!(pending & (1u << s))) continue;
        if (!factor_ready(fr, s, level)) continue;
        pending &= ~(1u << s);
        prefix *= (s == fr.swap_factor) ? swapped_value(ctx, term, t)
                                        : factor_value(ctx, term.factors[static_cast<size_t>(s)], fr.nu, t);
    }
    if (level == term.n_free) return prefix;
    if (prefix == cd(0.0, 0.0)) return prefix;

    std::vector<double> hints = level_hints(fr, t, level, pending);
    const int slot = level + fr.shift;
    QuadratureConfig cfg = ctx.quad;
    cfg.rel_tol = cascade_tol(ctx.quad, fr.depth_total, slot);
    if (fr.scales != nullptr)
        cfg.abs_floor = std::max(cfg.abs_floor,
                                 std::max(kChainNoise, 1e-2 * cfg.rel_tol) *
                                     (*fr.scales)[static_cast<size_t>(slot)]);
    QuadResult r = integrate_line(
        [&](double x) -> cd {
            t[static_cast<size_t>(level)] = x;
            return eval_level(fr, t, level + 1, prefix, pending);
        },
        covering_cutoff(ctx.cutoff, hints), hints, cfg);
    double slot_scale = std::abs(r.value);
    if (fr.scales != nullptr) {
        auto& s = (*fr.scales)[static_cast<size_t>(slot)];
        s = std::max(s, slot_scale);
        slot_scale = s;
    }
    if (!r.converged && r.abs_error > kChainNoise * slot_scale) {
        std::string msg = "diagram integration failed to converge: term " + term.label +
                          ", level " + std::to_string(level) + ", nu=" + fmt_g(fr.nu);
        for (int k = 0; k < level; ++k) msg += ", t" + std::to_string(k) + "=" + fmt_g(t[static_cast<size_t>(k)]);
        msg += ", |I|=" + fmt_g(std::abs(r.value)) + ", err=" + fmt_g(r.abs_error) +
               ", evals=" + std::to_string(r.evals) + ", rel_tol=" + fmt_g(cfg.rel_tol);
        throw std::runtime_error(msg);
    }
    return r.value;
}

// ---- grid-vectorized evaluation ---------------------------------------------
// A spectrum on a dense detection grid shares all of its free-variable
// integration between grid points: the integrand pieces that do not involve
// the detection frequency are built once per node, and the sweep across the
// grid re-evaluates only the detector-dependent pieces (usually one spectral
// slot). One adaptive integration per term replaces one per grid point.

bool grid_factor_ready(const FactorSpec& f, int level, int n_free) {
    for (int k = level; k < n_free; ++k)
        if (f.depends_on_free(k)) return false;
    return true;
}

// Multiply each grid component by the factor's value there. A box whose probe
// frequencies are detection-free keeps one workspace for the whole sweep and
// only moves its spectral slot; anything else re-derives per point (such
// factors carry few probes, so the rebuild is cheap).
void mul_factor_grid(const TermContext& ctx, const FactorSpec& f, const std::vector<double>& nu,
                     const std::vector<double>& t, Eigen::VectorXcd& acc) {
    bool probes_fixed = f.is_box;
    if (f.is_box)
        for (const auto& pf : f.box_probes)
            if (pf.freq.coeff.at(0) != 0.0) probes_fixed = false;
    if (probes_fixed) {
        ProbeList pl;
        pl.reserve(f.box_probes.size());
        for (const auto& pf : f.box_probes) pl.push_back({pf.sign, pf.freq.eval(0.0, t)});
        ResponseWorkspace ws(ctx.sd, ctx.steady, pl);
        for (Eigen::Index i = 0; i < acc.size(); ++i)
            acc(i) *= ws.p_value(f.slot.eval(nu[static_cast<size_t>(i)], t));
        return;
    }
    for (Eigen::Index i = 0; i < acc.size(); ++i)
        acc(i) *= factor_value(ctx, f, nu[static_cast<size_t>(i)], t);
}

struct GridFrame {
    const TermContext* ctx;
    const DiagramTerm* term;
    const std::vector<double>* nu;
    LevelScales* scales{nullptr};
};

// Free-level peak positions must cover every grid point. They slide linearly
// in the detection frequency, so seeding a few representative grid values
// leaves only gamma-wide refinement to the subdivision.
std::vector<double> grid_level_hints(const GridFrame& fr, const std::vector<double>& t,
                                     int level, unsigned pending) {
    const TermContext& ctx = *fr.ctx;
    const std::vector<double>& nu = *fr.nu;
    std::vector<double> reps;
    if (nu.size() <= 5) {
        reps = nu;
    } else {
        for (double q : {0.0, 0.25, 0.5, 0.75, 1.0})
            reps.push_back(nu[static_cast<size_t>(q * static_cast<double>(nu.size() - 1))]);
    }
    std::vector<double> hints = ctx.base_hints;
    auto add_form = [&](const FreqForm& g) {
        double c = g.coeff.at(static_cast<size_t>(1 + level));
        if (c == 0.0) return;
        for (int k = level + 1; k < fr.term->n_free; ++k)
            if (g.coeff.at(static_cast<size_t>(1 + k)) != 0.0) return;
        double base = 0.0;
        for (int k = 0; k < level; ++k)
            base += g.coeff.at(static_cast<size_t>(1 + k)) * t[static_cast<size_t>(k)];
        const std::vector<double> one{0.0};
        for (double nv : (g.coeff.at(0) != 0.0 ? reps : one)) {
            double part = g.coeff.at(0) * nv + base;
            for (double h : ctx.base_hints) hints.push_back((h - part) / c);
        }
    };
    for (int s = 0; s < 3; ++s) {
        if (!(pending & (1u << s))) continue;
        const FactorSpec& f = fr.term->factors[static_cast<size_t>(s)];
        for (const FreqForm& g : argument_forms(f, false)) add_form(g);
    }
    dedup_hints(hints, ctx.params.gamma);
    return hints;
}

Eigen::VectorXcd eval_level_grid(const GridFrame& fr, std::vector<double>& t, int level,
                                 cd prefix, Eigen::VectorXcd vec, unsigned pending) {
    const TermContext& ctx = *fr.ctx;
    const DiagramTerm& term = *fr.term;
    const std::vector<double>& nu = *fr.nu;
    const auto n = static_cast<Eigen::Index>(nu.size());
    for (int s = 0; s < 3; ++s) {
        if (!(pending & (1u << s))) continue;
        const FactorSpec& f = term.factors[static_cast<size_t>(s)];
        if (!grid_factor_ready(f, level, term.n_free)) continue;
        pending &= ~(1u << s);
        if (f.depends_on_nu()) {
            if (vec.size() == 0) vec = Eigen::VectorXcd::Ones(n);
            mul_factor_grid(ctx, f, nu, t, vec);
        } else {
            prefix *= factor_value(ctx, f, 0.0, t);
        }
    }
    if (level == term.n_free)
        return vec.size() != 0 ? Eigen::VectorXcd(prefix * vec)
                               : Eigen::VectorXcd::Constant(n, prefix);
    if (prefix == cd(0.0, 0.0)) return Eigen::VectorXcd::Zero(n);

    std::vector<double> hints = grid_level_hints(fr, t, level, pending);
    QuadratureConfig cfg = ctx.quad;
    cfg.rel_tol = cascade_tol(ctx.quad, term.n_free, level);
    if (fr.scales != nullptr)
        cfg.abs_floor = std::max(cfg.abs_floor,
                                 std::max(kChainNoise, 1e-2 * cfg.rel_tol) *
                                     (*fr.scales)[static_cast<size_t>(level)]);
    QuadResultVec r = integrate_line_vec(
        [&](double x) -> Eigen::VectorXcd {
            t[static_cast<size_t>(level)] = x;
            return eval_level_grid(fr, t, level + 1, prefix, vec, pending);
        },
        covering_cutoff(ctx.cutoff, hints), hints, cfg);
    double slot_scale = r.value.size() > 0 ? r.value.cwiseAbs().maxCoeff() : 0.0;
    if (fr.scales != nullptr) {
        auto& s = (*fr.scales)[static_cast<size_t>(level)];
        s = std::max(s, slot_scale);
        slot_scale = s;
    }
    if (!r.converged && r.abs_error > kChainNoise * slot_scale) {
        std::string msg = "diagram grid integration failed to converge: term " + term.label +
                          ", level " + std::to_string(level);
        for (int k = 0; k < level; ++k)
            msg += ", t" + std::to_string(k) + "=" + fmt_g(t[static_cast<size_t>(k)]);
        msg += ", |I|=" + fmt_g(slot_scale) + ", err=" + fmt_g(r.abs_error) +
               ", evals=" + std::to_string(r.evals) + ", rel_tol=" + fmt_g(cfg.rel_tol);
        throw std::runtime_error(msg);
    }
    return r.value;
}

Eigen::VectorXcd eval_term_grid(const TermContext& ctx, const DiagramTerm& term,
                                const std::vector<double>& nuGrid, LevelScales* scales) {
    GridFrame fr;
    fr.ctx = &ctx;
    fr.term = &term;
    fr.nu = &nuGrid;
    fr.scales = scales;
    std::vector<double> t(static_cast<size_t>(term.n_free), 0.0);
    return eval_level_grid(fr, t, 0, cd(1.0, 0.0), Eigen::VectorXcd(), 0b111u);
}

// Peak positions in the detection frequency for the outermost nu integral.
std::vector<double> nu_level_hints(const TermContext& ctx, const DiagramTerm& term) {
    std::vector<double> hints = ctx.base_hints;
    auto add_form = [&](const FreqForm& g) {
        double c = g.coeff.at(0);
        if (c == 0.0) return;
        for (size_t k = 1; k < g.coeff.size(); ++k)
            if (g.coeff[k] != 0.0) return;
        for (double h : ctx.base_hints) hints.push_back(h / c);
    };
    for (const auto& f : term.factors)
        for (const FreqForm& g : argument_forms(f, false)) add_form(g);
    dedup_hints(hints, ctx.params.gamma);
    return hints;
}

cd eval_term(const TermContext& ctx, const DiagramTerm& term, double nu,
             LevelScales* scales = nullptr) {
    LevelScales local{};
    EvalFrame fr;
    fr.ctx = &ctx;
    fr.term = &term;
    fr.nu = nu;
    fr.depth_total = term.n_free;
    fr.scales = scales != nullptr ? scales : &local;
    std::vector<double> t(static_cast<size_t>(term.n_free), 0.0);
    return eval_level(fr, t, 0, cd(1.0, 0.0), 0b111u);
}

// Total nu-integrated value of one term (no degeneracy, no real part).
cd term_total(const TermContext& ctx, const DiagramTerm& term) {
    LevelScales scales{};
    if (term.elastic) return eval_term(ctx, term, 0.0, &scales);
    if (term.detector_reducible) {
        EvalFrame fr;
        fr.ctx = &ctx;
        fr.term = &term;
        fr.swap_factor = term.reducible_factor;
        fr.depth_total = term.n_free;
        fr.scales = &scales;
        std::vector<double> t(static_cast<size_t>(term.n_free), 0.0);
        return eval_level(fr, t, 0, cd(1.0, 0.0), 0b111u);
    }
    // generic case: numeric detection-frequency integral outermost
    std::vector<double> hints = nu_level_hints(ctx, term);
    double cutoff = covering_cutoff(ctx.cutoff, hints);
    QuadratureConfig cfg = ctx.quad;
    cfg.rel_tol = cascade_tol(ctx.quad, term.n_free + 1, 0);
    QuadResult r = integrate_line(
        [&](double nu) -> cd {
            EvalFrame fr;
            fr.ctx = &ctx;
            fr.term = &term;
            fr.nu = nu;
            fr.depth_total = term.n_free + 1;
            fr.shift = 1;
            fr.scales = &scales;
            std::vector<double> t(static_cast<size_t>(term.n_free), 0.0);
            return eval_level(fr, t, 0, cd(1.0, 0.0), 0b111u);
        },
        cutoff, hints, cfg);
    if (!r.converged && r.abs_error > kChainNoise * std::abs(r.value))
        throw std::runtime_error("detection-frequency integral failed to converge: term " +
                                 term.label + ", |I|=" + fmt_g(std::abs(r.value)) +
                                 ", err=" + fmt_g(r.abs_error) +
                                 ", evals=" + std::to_string(r.evals));
    return r.value;
}

std::vector<DiagramTerm> terms_of(ContributionType type, bool elastic, bool strong_only) {
    std::vector<DiagramTerm> out;
    for (auto& term : enumerate_type(type)) {
        if (term.elastic != elastic) continue;
        if (strong_only && term.box_count != 3) continue;
        out.push_back(std::move(term));
    }
    return out;
}

std::vector<double> spectrum_sum(const TermContext& ctx, ContributionType type,
                                 const std::vector<double>& nuGrid, bool strong_only,
                                 double* imag_residual) {
    if (nuGrid.empty()) {
        if (imag_residual != nullptr) *imag_residual = 0.0;
        return {};
    }
    std::vector<DiagramTerm> terms = terms_of(type, /*elastic=*/false, strong_only);
    const double deg = static_cast<double>(degeneracy_factor(type));
    const bool re_part = takes_real_part(type);
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(nuGrid.size()));
    for (const auto& term : terms) {
        LevelScales scales{};
        sum += eval_term_grid(ctx, term, nuGrid, &scales);
    }
    std::vector<double> out(nuGrid.size(), 0.0);
    double max_im = 0.0, max_re = 0.0;
    for (size_t i = 0; i < nuGrid.size(); ++i) {
        const cd v = sum(static_cast<Eigen::Index>(i));
        out[i] = deg * v.real();
        if (!re_part) {
            max_im = std::max(max_im, std::abs(v.imag()));
            max_re = std::max(max_re, std::abs(v.real()));
        }
    }
    if (imag_residual != nullptr)
        *imag_residual = re_part ? 0.0 : (max_re > 0.0 ? max_im / max_re : max_im);
    return out;
}

double elastic_sum(const TermContext& ctx, ContributionType type) {
    cd sum(0.0, 0.0);
    for (const auto& term : terms_of(type, /*elastic=*/true, false))
        sum += term_total(ctx, term);
    return static_cast<double>(degeneracy_factor(type)) * sum.real();
}

}  // namespace

cd evaluate_diagram(const AtomParams& params, const DiagramTerm& term, double nu,
                    const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    return eval_term(ctx, term, nu);
}

double elastic_intensity(const AtomParams& params, ContributionType type,
                         const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    return elastic_sum(ctx, type);
}

std::vector<double> inelastic_spectrum(const AtomParams& params, ContributionType type,
                                       const std::vector<double>& nuGrid,
                                       const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    return spectrum_sum(ctx, type, nuGrid, /*strong_only=*/false, nullptr);
}

std::vector<double> strong_drive_spectrum(const AtomParams& params, ContributionType type,
                                          const std::vector<double>& nuGrid,
                                          const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    return spectrum_sum(ctx, type, nuGrid, /*strong_only=*/true, nullptr);
}

cd per_path_total(const AtomParams& params, ContributionType type,
                  const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    cd sum(0.0, 0.0);
    for (const auto& term : enumerate_type(type)) sum += term_total(ctx, term);
    return sum;
}

std::vector<double> default_nu_grid(const AtomParams& params, int points) {
    if (points < 2) throw std::invalid_argument("default_nu_grid: need at least 2 points");
    double og = std::sqrt(std::norm(params.rabi) + params.detuning * params.detuning);
    double half = 4.0 * og + 8.0 * params.gamma;
    std::vector<double> grid(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<size_t>(i)] = -half + 2.0 * half * static_cast<double>(i) /
                                                   static_cast<double>(points - 1);
    return grid;
}

SpectrumResult compute_spectrum(const AtomParams& params, const std::vector<double>& nuGrid,
                                const QuadratureConfig& quad) {
    params.validate();
    TermContext ctx(params, quad);
    SpectrumResult res;
    res.nuGrid = nuGrid;
    res.params = params;
    res.quad = quad;
    const std::array<ContributionType, 4> types = {ContributionType::L1, ContributionType::L2,
                                                   ContributionType::C1, ContributionType::C2};
    std::array<std::vector<double>*, 4> dest = {&res.ladder1, &res.ladder2, &res.crossed1,
                                                &res.crossed2};
    for (size_t k = 0; k < 4; ++k) {
        res.term_counts[k] = static_cast<int>(enumerate_type(types[k]).size());
        res.elastic[k] = elastic_sum(ctx, types[k]);
        *dest[k] = spectrum_sum(ctx, types[k], nuGrid, false, &res.imag_residual[k]);
    }
    return res;
}

double perturbative_reference(double delta, double omega, RefKind which) {
    const double x = 1.0 + delta * delta;
    const double x3 = x * x * x, x4 = x3 * x;
    const double o2 = omega * omega, o4 = o2 * o2;
    const double d2 = delta * delta;
    switch (which) {
        case RefKind::ElasticL1:
            return 3.0 * o2 / (32.0 * x3) - 27.0 * o4 / (32.0 * x4);
        case RefKind::ElasticL2:
            return -6.0 * o4 / (32.0 * x4);
        case RefKind::ElasticC1:
            return 3.0 * o2 / (32.0 * x3) - 24.0 * o4 / (32.0 * x4);
        case RefKind::ElasticC2:
            return -24.0 * o4 / (32.0 * x4);
        case RefKind::IntegratedLadder:
            return 3.0 * (154.0 + 25.0 * d2 + 3.0 * d2 * d2) * o4 / (1024.0 * x4);
        case RefKind::IntegratedCrossed:
            return 3.0 * (22.0 + d2) * o4 / (128.0 * x4);
        default:
            throw std::invalid_argument(
                "perturbative_reference: spectral kind needs a detection frequency");
    }
}

double perturbative_reference(double delta, double omega, RefKind which, double nu) {
    const double x = 1.0 + delta * delta;
    const double x3 = x * x * x;
    const double o4 = omega * omega * omega * omega;
    const double dm = 1.0 + (delta - nu) * (delta - nu);
    const double dp = 1.0 + (delta + nu) * (delta + nu);
    switch (which) {
        case RefKind::InelasticL1: {
            double num = 3.0 * x + 4.0 * delta * nu + 2.0 * nu * nu;
            return (6.0 * o4 / (32.0 * x3)) * num * num / (2.0 * kPi * dm * dp * dp * dp);
        }
        case RefKind::InelasticL2:
            return (o4 / (32.0 * x3)) * 12.0 / (2.0 * kPi * dm * dp);
        case RefKind::InelasticC1: {
            double num = 1.0 + delta * (delta + nu);
            return (6.0 * o4 / (4.0 * x3)) * num * num / (2.0 * kPi * dm * dp * dp * dp);
        }
        case RefKind::InelasticC2: {
            double num = 1.0 + delta * (delta + nu);
            return (6.0 * o4 / (4.0 * x3)) * num / (2.0 * kPi * dm * dp * dp);
        }
        default:
            throw std::invalid_argument(
                "perturbative_reference: scalar kind takes no detection frequency");
    }
}

double enhancement_factor(double delta) {
    const double d2 = delta * delta;
    return 1.0 + 8.0 * (22.0 + d2) / (154.0 + 25.0 * d2 + 3.0 * d2 * d2);
}

}  // namespace cbs3
