// acceptance_main.cpp - end-to-end acceptance gate: one criterion per run
// (argument 1..9) or all in sequence (no argument). Each criterion prints a
// single [PASS]/[FAIL] line with its measured figures; the exit status is 0
// only if every requested criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cbs3/diagram.hpp"
#include "cbs3/io.hpp"
#include "cbs3/oracle.hpp"
#include "cbs3/response.hpp"
#include "cbs3/spectra.hpp"

using namespace cbs3;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Line {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

void report(int n, const Line& line, const std::string& what, double seconds) {
    std::printf("[%s] acceptance %d: %s (%s%s%.1f s)\n", line.ok ? "PASS" : "FAIL", n,
                what.c_str(), line.detail.c_str(), line.detail.empty() ? "" : ", ", seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
bool criterion1() {
    const double t0 = now_s();
    const double kTol = 2e-3;  // relative error bar on each elastic intensity
    QuadratureConfig quad;
    quad.rel_tol = 1e-6;

    const std::array<ContributionType, 4> types{ContributionType::L1, ContributionType::L2,
                                                ContributionType::C1, ContributionType::C2};
    const std::array<RefKind, 4> refs{RefKind::ElasticL1, RefKind::ElasticL2, RefKind::ElasticC1,
                                      RefKind::ElasticC2};
    Line line;
    double worst = 0.0;
    for (double delta : {0.0, 0.5, 1.0}) {
        AtomParams p{cd(0.01, 0.0), delta, 1.0};
        for (std::size_t k = 0; k < 4; ++k) {
            double got = elastic_intensity(p, types[k], quad);
            double want = perturbative_reference(delta, 0.01, refs[k]);
            double rel = std::abs(got - want) / std::abs(want);
            worst = std::max(worst, rel);
            if (rel > kTol)
                line.fail(to_string(types[k]) + " at delta=" + fmt("%.1f", delta) +
                          " rel=" + fmt("%.2e", rel));
        }
    }
    line.detail = "max rel " + fmt("%.2e", worst) + (line.detail.empty() ? "" : "; ") + line.detail;
    report(1, line, "small-drive elastic intensities vs closed forms", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 2
bool criterion2() {
    const double t0 = now_s();
    const double kTol = 2e-3;      // relative bar where the reference is visible
    const double kMask = 1e-14;    // reference visibility threshold vs its peak
    QuadratureConfig quad;
    quad.rel_tol = 1e-5;

    std::vector<double> grid(101);
    for (int i = 0; i < 101; ++i) grid[static_cast<std::size_t>(i)] = -4.0 + 8.0 * i / 100.0;

    const std::array<ContributionType, 4> types{ContributionType::L1, ContributionType::L2,
                                                ContributionType::C1, ContributionType::C2};
    const std::array<RefKind, 4> refs{RefKind::InelasticL1, RefKind::InelasticL2,
                                      RefKind::InelasticC1, RefKind::InelasticC2};
    Line line;
    double worst = 0.0;        // over every compared point
    double worst_plain = 0.0;  // excluding neighborhoods of the crossed-reference zeros
    int compared = 0;
    int over = 0;
    int over_plain = 0;
    double over_span = 0.0;
    std::string worst_at;
    for (double delta : {0.0, 0.5, 1.0}) {
        AtomParams p{cd(0.01, 0.0), delta, 1.0};
        for (std::size_t k = 0; k < 4; ++k) {
            std::vector<double> got = inelastic_spectrum(p, types[k], grid, quad);
            double peak = 0.0;
            std::vector<double> want(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                want[i] = perturbative_reference(delta, 0.01, refs[k], grid[i]);
                peak = std::max(peak, std::abs(want[i]));
            }
            // The references are the strictly fourth-order (in the drive)
            // closed forms; the composed spectra keep every drive order, so an
            // O(rabi^6) remainder survives (deviation/rabi^6 is constant under
            // drive halving).  The crossed references vanish at
            // nu0 = -delta - 1/delta (double zero for the reversible crossed
            // type, simple for its detector-reducible partner), and near nu0
            // that remainder dominates the pointwise ratio at any quadrature
            // tolerance.  The bar is applied verbatim; violations are
            // classified by distance to nu0 so an intrinsic-remainder failure
            // is distinguishable from a composition defect.
            const bool crossed =
                types[k] == ContributionType::C1 || types[k] == ContributionType::C2;
            const double nu0 = (crossed && delta > 0.0)
                                   ? -delta - 1.0 / delta
                                   : std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (std::abs(want[i]) <= kMask * peak) continue;
                ++compared;
                double rel = std::abs(got[i] - want[i]) / std::abs(want[i]);
                double dist = std::abs(grid[i] - nu0);
                worst = std::max(worst, rel);
                if (!(dist < 1.0)) worst_plain = std::max(worst_plain, rel);
                if (rel > kTol) {
                    ++over;
                    if (dist < 1.0)
                        over_span = std::max(over_span, dist);
                    else
                        ++over_plain;
                    if (rel == worst)
                        worst_at = to_string(types[k]) + " delta=" + fmt("%.1f", delta) +
                                   " nu=" + fmt("%.2f", grid[i]);
                }
            }
        }
    }
    if (over > 0) {
        std::string msg = std::to_string(over) + " of " + std::to_string(compared) +
                          " points over the bar, worst at " + worst_at;
        if (over_plain == 0)
            msg += "; all within " + fmt("%.2f", over_span) +
                   " of a crossed-reference zero nu0=-delta-1/delta (sixth-order"
                   " remainder of the all-order composition); max rel away from"
                   " the zeros " +
                   fmt("%.2e", worst_plain);
        else
            msg += "; " + std::to_string(over_plain) + " of them away from any reference zero";
        line.fail(msg);
    }
    line.detail = "max rel " + fmt("%.2e", worst) + " over " + std::to_string(compared) +
                  " points" + (line.detail.empty() ? "" : "; ") + line.detail;
    report(2, line, "small-drive inelastic spectra vs closed forms", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 3
bool criterion3() {
    const double t0 = now_s();
    Line line;

    double eta0 = enhancement_factor(0.0);
    if (std::abs(eta0 - 2.143) > 0.005)
        line.fail("eta(0)=" + fmt("%.4f", eta0) + " not within 0.005 of 2.143");
    double eta1 = enhancement_factor(1.042);
    if (std::abs(eta1 - 2.000) > 0.01)
        line.fail("eta(1.042)=" + fmt("%.4f", eta1) + " not within 0.01 of 2.000");

    // fully numeric value: integrated inelastic intensities from the per-path
    // totals (closed-form detection integral) minus the elastic parts
    QuadratureConfig quad;
    quad.rel_tol = 1e-6;
    AtomParams p{cd(0.01, 0.0), 0.0, 1.0};
    auto inel = [&](ContributionType type) {
        double w = degeneracy_factor(type);
        cd pp = per_path_total(p, type, quad);
        return w * std::real(pp) - elastic_intensity(p, type, quad);
    };
    double lad = inel(ContributionType::L1) + inel(ContributionType::L2);
    double cro = inel(ContributionType::C1) + inel(ContributionType::C2);
    double eta_num = 1.0 + cro / lad;
    if (std::abs(eta_num - 2.143) > 0.01)
        line.fail("numeric eta=" + fmt("%.4f", eta_num) + " not within 0.01 of 2.143");

    line.detail = "eta(0)=" + fmt("%.4f", eta0) + ", eta(1.042)=" + fmt("%.4f", eta1) +
                  ", numeric " + fmt("%.4f", eta_num) + (line.detail.empty() ? "" : "; ") +
                  line.detail;
    report(3, line, "enhancement factor closed forms and numeric value", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 4
bool criterion4() {
    const double t0 = now_s();
    Line line;

    const std::array<ContributionType, 4> types{ContributionType::L1, ContributionType::L2,
                                                ContributionType::C1, ContributionType::C2};
    const std::array<int, 4> want_raw{50, 68, 45, 54};
    const std::array<std::size_t, 4> want_allowed{50, 68, 32, 46};
    for (std::size_t k = 0; k < 4; ++k) {
        if (raw_term_count(types[k]) != want_raw[k])
            line.fail(to_string(types[k]) + " raw=" + std::to_string(raw_term_count(types[k])));
        if (enumerate_type(types[k]).size() != want_allowed[k])
            line.fail(to_string(types[k]) +
                      " allowed=" + std::to_string(enumerate_type(types[k]).size()));
    }

    const std::vector<std::string> want_c1 = {
        "(c1)(f1)(d2)", "(c1)(f4)(d2)", "(c2)(f1)(d2)", "(c2)(f2)(d1)", "(c2)(f2)(d2)",
        "(c2)(f2)(d3)", "(c2)(f3)(d2)", "(c2)(f4)(d1)", "(c2)(f4)(d2)", "(c2)(f4)(d3)",
        "(c2)(f5)(d2)", "(c3)(f1)(d2)", "(c3)(f4)(d2)"};
    const std::vector<std::string> want_c2 = {"(a1)(g4)(d2)", "(a1)(g5)(d2)", "(a1)(g6)(d2)",
                                              "(a1)(g8)(d2)", "(a2)(g4)(d2)", "(a2)(g5)(d2)",
                                              "(a2)(g6)(d2)", "(a2)(g8)(d2)"};
    if (forbidden_labels(ContributionType::C1) != want_c1) line.fail("C1 forbidden list mismatch");
    if (forbidden_labels(ContributionType::C2) != want_c2) line.fail("C2 forbidden list mismatch");
    if (!forbidden_labels(ContributionType::L1).empty()) line.fail("L1 has forbidden terms");
    if (!forbidden_labels(ContributionType::L2).empty()) line.fail("L2 has forbidden terms");

    line.detail = "counts 50/68/32/46, forbidden 13+8";
    report(4, line, "diagram combinatorics and loop filter", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 5
bool criterion5() {
    const double t0 = now_s();
    const double kTol = 1e-5;  // quadrature-limited equivalence bar
    QuadratureConfig quad;
    quad.rel_tol = 1e-7;

    // phase-free unit-coupling configuration
    auto unit_config = [](double omega, double delta) {
        ThreeAtomConfig cfg;
        for (auto& a : cfg.atoms) a = AtomParams{cd(omega, 0.0), delta, 1.0};
        cfg.pair_couplings = {cd(1.0, 0.0), cd(1.0, 0.0), cd(1.0, 0.0)};
        return cfg;
    };

    struct Case {
        ContributionType type;
        std::array<InteractionLabel, 4> labels;
        int bg_atom;           // background extraction (1 + <sigmaz>)/2, or
        std::array<int, 2> iv;  // interference pair when bg_atom == 0
    };
    const std::array<Case, 4> cases{
        Case{ContributionType::L1,
             {InteractionLabel{2, 1, true}, InteractionLabel{3, 2, true},
              InteractionLabel{1, 2, false}, InteractionLabel{2, 3, false}},
             3,
             {0, 0}},
        Case{ContributionType::L2,
             {InteractionLabel{2, 1, true}, InteractionLabel{2, 3, true},
              InteractionLabel{1, 2, false}, InteractionLabel{3, 2, false}},
             2,
             {0, 0}},
        Case{ContributionType::C1,
             {InteractionLabel{2, 1, true}, InteractionLabel{3, 2, true},
              InteractionLabel{2, 1, false}, InteractionLabel{3, 2, false}},
             0,
             {1, 3}},
        Case{ContributionType::C2,
             {InteractionLabel{2, 1, true}, InteractionLabel{3, 2, true},
              InteractionLabel{1, 2, false}, InteractionLabel{3, 2, false}},
             0,
             {2, 3}},
    };

    Line line;
    double worst = 0.0;
    for (double omega : {0.5, 2.0}) {
        for (double delta : {0.0, 1.0}) {
            ThreeAtomConfig cfg = unit_config(omega, delta);
            AtomParams p = cfg.atoms[0];
            for (const Case& c : cases) {
                StateVector63 w = path_term(c.labels, cfg);
                cd oracle = c.bg_atom > 0
                                ? w.data(StateVector63::x_index(c.bg_atom, 2)) / 2.0
                                : extract_intensity(w, c.iv[0], c.iv[1]);
                // sixteen = per-arrow coupling normalization of the four probes
                cd engine = 16.0 * per_path_total(p, c.type, quad);
                double rel = std::abs(engine - oracle) / std::abs(oracle);
                worst = std::max(worst, rel);
                if (rel > kTol)
                    line.fail(to_string(c.type) + " O=" + fmt("%.1f", omega) +
                              " d=" + fmt("%.0f", delta) + " rel=" + fmt("%.2e", rel));
            }
        }
    }
    line.detail = "max rel " + fmt("%.2e", worst) + (line.detail.empty() ? "" : "; ") + line.detail;
    report(5, line, "per-path totals vs exact three-atom path terms", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 6
bool criterion6() {
    const double t0 = now_s();
    const double kTolPoint = 1e-8;  // pointwise identity bar
    const double kTolNorm = 1e-6;   // normalization integral bar
    Line line;
    double worst_pt = 0.0, worst_norm = 0.0;

    for (double omega : {0.1, 1.0, 5.0}) {
        for (double delta : {0.0, 1.0}) {
            AtomParams p{cd(omega, 0.0), delta, 1.0};
            std::vector<double> grid = default_nu_grid(p, 41);
            std::vector<double> oracle = single_atom_spectrum_oracle(p, grid);
            double peak = 0.0;
            for (double v : oracle) peak = std::max(peak, std::abs(v));
            for (std::size_t i = 0; i < grid.size(); ++i) {
                cd mine = inelastic_P(p, {}, grid[i]).value;
                double rel = std::abs(mine - oracle[i]) /
                             std::max(std::abs(oracle[i]), 1e-14 * peak);
                worst_pt = std::max(worst_pt, rel);
                if (rel > kTolPoint)
                    line.fail("spectrum O=" + fmt("%.1f", omega) + " d=" + fmt("%.0f", delta) +
                              " nu=" + fmt("%.2f", grid[i]) + " rel=" + fmt("%.2e", rel));
            }

            Vec3 st = steady_bloch(p);
            cd want = (1.0 + st(2)) / 2.0 - st(1) * st(0);
            cd got = box_nu_integral(p, {});
            double rel = std::abs(got - want) / std::abs(want);
            worst_norm = std::max(worst_norm, rel);
            if (rel > kTolNorm)
                line.fail("normalization O=" + fmt("%.1f", omega) + " d=" + fmt("%.0f", delta) +
                          " rel=" + fmt("%.2e", rel));
        }
    }
    line.detail = "max point rel " + fmt("%.2e", worst_pt) + ", max norm rel " +
                  fmt("%.2e", worst_norm) + (line.detail.empty() ? "" : "; ") + line.detail;
    report(6, line, "probe-free box equals the single-atom spectrum oracle", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 7
bool criterion7() {
    const double t0 = now_s();
    const double kTol = 1e-2;    // match bar at epsilon = 1e-3
    const double kFloor = 1e-4;  // residuals below this are at the window floor
    Line line;

    struct Case {
        AtomParams p;
        ProbeList probes;
        const char* name;
    };
    const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
    const std::vector<Case> cases = {
        {AtomParams{cd(1.0, 0.0), 0.0, 1.0}, {{+1, 2.0}}, "n=1 resonant"},
        {AtomParams{cd(1.0, 0.0), 0.3, 1.0}, {{+1, 0.5 * s2}}, "n=1 detuned"},
        {AtomParams{cd(1.0, 0.0), 0.3, 1.0}, {{+1, 0.5 * s2}, {-1, -0.5 * s3}}, "n=2"},
        {AtomParams{cd(0.8, 0.0), 0.5, 1.0}, {{-1, 0.7 * s2}, {+1, 0.4 * s3}}, "n=2 mixed"},
    };

    double worst = 0.0;
    for (const Case& c : cases) {
        Vec3 want = response_vector(c.p, c.probes);
        Vec3 got = polychromatic_obe_oracle(c.p, c.probes, 1e-3);
        double rel = (got - want).norm() / want.norm();
        worst = std::max(worst, rel);
        if (rel > kTol)
            line.fail(std::string(c.name) + " rel=" + fmt("%.2e", rel));

        // first-order error scaling, probed where the O(eps) term is visible
        double r1 = (polychromatic_obe_oracle(c.p, c.probes, 1e-2) - want).norm() / want.norm();
        double r2 = (polychromatic_obe_oracle(c.p, c.probes, 5e-3) - want).norm() / want.norm();
        bool halves = (r2 <= 0.6 * r1) || (std::max(r1, r2) <= kFloor);
        if (!halves)
            line.fail(std::string(c.name) + " residual scaling r(1e-2)=" + fmt("%.2e", r1) +
                      " r(5e-3)=" + fmt("%.2e", r2));
    }
    line.detail = "max rel " + fmt("%.2e", worst) + " at eps=1e-3" +
                  (line.detail.empty() ? "" : "; ") + line.detail;
    report(7, line, "response vectors vs time-domain probe oracle", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 8
bool criterion8() {
    const double t0 = now_s();
    const double kTol = 1e-10;  // entrywise factorization-identity bar
    Line line;

    std::mt19937 rng(20260817u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ThreeAtomConfig cfg;
        for (int a = 0; a < 3; ++a) {
            cfg.atoms[static_cast<std::size_t>(a)].rabi = cd(1.5 * u(rng), 1.5 * u(rng));
            // distinct detunings: disjoint window per atom
            cfg.atoms[static_cast<std::size_t>(a)].detuning = 1.2 * a + 0.5 * u(rng);
            cfg.atoms[static_cast<std::size_t>(a)].gamma = 0.6 + 0.6 * std::abs(u(rng));
        }
        for (auto& tc : cfg.pair_couplings) tc = cd(0.05 * u(rng), 0.05 * u(rng));
        SumRuleReport rep = sum_rule_check(cfg);
        worst = std::max(worst, rep.max_deviation());
        if (rep.max_deviation() > kTol)
            line.fail("trial " + std::to_string(trial) + " dev=" +
                      fmt("%.2e", rep.max_deviation()));
    }
    line.detail = "max deviation " + fmt("%.2e", worst) + " over 20 draws" +
                  (line.detail.empty() ? "" : "; ") + line.detail;
    report(8, line, "steady-state factorization sum rules", now_s() - t0);
    return line.ok;
}

// ---------------------------------------------------------------- criterion 9
bool criterion9() {
    const double t0 = now_s();
    Line line;
    QuadratureConfig quad;
    quad.rel_tol = 1e-6;

    // sign pattern of the two crossed elastic intensities across the drive
    const std::array<double, 3> omegas{0.3, 0.8, 1.5};
    const std::array<int, 3> want_c1{+1, -1, -1};
    const std::array<int, 3> want_c2{-1, -1, +1};
    for (std::size_t k = 0; k < 3; ++k) {
        AtomParams p{cd(omegas[k], 0.0), 0.0, 1.0};
        double c1 = elastic_intensity(p, ContributionType::C1, quad);
        double c2 = elastic_intensity(p, ContributionType::C2, quad);
        if ((c1 > 0 ? +1 : -1) != want_c1[k])
            line.fail("C1 sign at O=" + fmt("%.1f", omegas[k]) + " is " + fmt("%+.2e", c1));
        if ((c2 > 0 ? +1 : -1) != want_c2[k])
            line.fail("C2 sign at O=" + fmt("%.1f", omegas[k]) + " is " + fmt("%+.2e", c2));
    }

    // strong-drive spectra regenerated as plot data; qualitative shape checks
    double worst_ratio = 0.0;
    for (double omega : {3.0, 5.0, 10.0}) {
        AtomParams p{cd(omega, 0.0), 0.0, 1.0};
        std::vector<double> grid = default_nu_grid(p, 81);
        std::vector<double> l1 = strong_drive_spectrum(p, ContributionType::L1, grid, quad);
        std::vector<double> l2 = strong_drive_spectrum(p, ContributionType::L2, grid, quad);
        std::vector<double> c1 = strong_drive_spectrum(p, ContributionType::C1, grid, quad);
        std::vector<double> c2 = strong_drive_spectrum(p, ContributionType::C2, grid, quad);

        TableData table;
        table.columns = {"nu", "L1", "L2", "C1", "C2", "L_tot", "C_tot"};
        double max_l = 0.0, max_c = 0.0, min_c = 1e300;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double lt = l1[i] + l2[i], ct = c1[i] + c2[i];
            table.rows.push_back({grid[i], l1[i], l2[i], c1[i], c2[i], lt, ct});
            max_l = std::max(max_l, std::abs(lt));
            max_c = std::max(max_c, std::abs(ct));
            min_c = std::min(min_c, ct);
        }
        Metadata meta = {{"version", kVersion},
                         {"mode", "strong-drive-spectrum"},
                         {"rabi", fmt("%.1f", omega)},
                         {"detuning", "0"},
                         {"gamma", "1"}};
        char name[64];
        std::snprintf(name, sizeof(name), "strong_drive_omega%g.csv", omega);
        std::ofstream out(name);
        out << csv_text(table, meta);
        if (!out.good()) line.fail(std::string("failed writing ") + name);

        worst_ratio = std::max(worst_ratio, max_c / max_l);
        // crossed stays well below ladder, yet dips negative somewhere
        if (max_c >= 0.5 * max_l)
            line.fail("crossed/ladder ratio " + fmt("%.2f", max_c / max_l) + " at O=" +
                      fmt("%.0f", omega));
        if (!(min_c < 0.0)) line.fail("no negative crossed region at O=" + fmt("%.0f", omega));
    }

    line.detail = "signs ok, max crossed/ladder " + fmt("%.2f", worst_ratio) +
                  (line.detail.empty() ? "" : "; ") + line.detail;
    report(9, line, "elastic sign structure and strong-drive spectra", now_s() - t0);
    return line.ok;
}

}  // namespace

int main(int argc, char** argv) {
    using Criterion = bool (*)();
    const std::array<Criterion, 9> all{criterion1, criterion2, criterion3,
                                       criterion4, criterion5, criterion6,
                                       criterion7, criterion8, criterion9};
    bool ok = true;
    if (argc > 1) {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > 9) {
            std::fprintf(stderr, "usage: %s [1..9]\n", argv[0]);
            return 2;
        }
        ok = all[static_cast<std::size_t>(n - 1)]();
    } else {
        for (const Criterion& c : all) ok = c() && ok;
    }
    return ok ? 0 : 1;
}
