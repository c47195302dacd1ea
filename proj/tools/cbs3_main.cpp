// cbs3_main.cpp - command-line front end for spectra, sweeps, and checks
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cbs3/diagram.hpp"
#include "cbs3/io.hpp"

namespace {

int list_terms(const std::string& type_s) {
    using namespace cbs3;
    ContributionType type;
    try {
        type = contribution_from_string(type_s);
    } catch (const std::exception&) {
        throw ConfigError("--type must be one of L1, L2, C1, C2 (got '" + type_s + "')");
    }
    std::vector<DiagramTerm> terms = enumerate_type(type);
    for (const auto& t : terms)
        std::printf("%-22s %-9s free=%d boxes=%d%s\n", t.label.c_str(),
                    t.elastic ? "elastic" : "inelastic", t.n_free, t.box_count,
                    t.detector_reducible ? " reducible" : "");
    std::printf("%zu terms allowed (%d raw, %zu forbidden)\n", terms.size(), raw_term_count(type),
                forbidden_labels(type).size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ladder and crossed triple-scattering spectra of laser-driven two-level atoms"};

    std::string config_path, mode_s, format_s, type_s, out_dir;
    double rabi = 0, detuning = 0, gamma = 0, nu_min = 0, nu_max = 0, rel_tol = 0;
    double rabi_min = 0, rabi_max = 0, oracle_tol = 0;
    int nu_points = 0, max_intervals = 0, rabi_points = 0;

    auto* o_config = app.add_option("--config", config_path, "JSON run configuration file");
    auto* o_mode = app.add_option(
        "--mode", mode_s, "spectrum | elastic-sweep | perturbative-check | oracle-check | diagrams");
    auto* o_rabi = app.add_option("--rabi", rabi, "drive Rabi frequency (units of gamma)");
    auto* o_detuning = app.add_option("--detuning", detuning, "laser detuning (units of gamma)");
    auto* o_gamma = app.add_option("--gamma", gamma, "half decay rate (sets the frequency unit)");
    auto* o_nu_min = app.add_option("--nu-min", nu_min, "detection grid lower edge (units of gamma)");
    auto* o_nu_max = app.add_option("--nu-max", nu_max, "detection grid upper edge (units of gamma)");
    auto* o_nu_points = app.add_option("--nu-points", nu_points, "detection grid point count");
    auto* o_rel_tol = app.add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    auto* o_max_intervals =
        app.add_option("--max-intervals", max_intervals, "quadrature subdivision budget");
    auto* o_rabi_min = app.add_option("--rabi-min", rabi_min, "elastic-sweep lower Rabi frequency");
    auto* o_rabi_max = app.add_option("--rabi-max", rabi_max, "elastic-sweep upper Rabi frequency");
    auto* o_rabi_points = app.add_option("--rabi-points", rabi_points, "elastic-sweep point count");
    auto* o_type = app.add_option("--type", type_s, "restrict oracle-check to one contribution type");
    auto* o_oracle_tol = app.add_option("--oracle-tol", oracle_tol, "oracle-check relative tolerance");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_format = app.add_option("--format", format_s, "csv | json | both");

    auto* diagrams = app.add_subcommand("diagrams", "diagram catalog utilities");
    diagrams->fallthrough();
    auto* d_list = diagrams->add_subcommand("list", "print the allowed terms of one type");
    d_list->fallthrough();
    std::string list_type;
    d_list->add_option("--type", list_type, "L1 | L2 | C1 | C2")->required();
    auto* d_validate =
        diagrams->add_subcommand("validate", "check catalog counts and forbidden lists");
    d_validate->fallthrough();
    diagrams->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cbs3::RunConfig cfg;
        if (o_config->count()) cfg = cbs3::parse_config(config_path);
        if (o_mode->count()) cfg.mode = cbs3::run_mode_from_string(mode_s);
        if (o_rabi->count()) cfg.rabi = rabi;
        if (o_detuning->count()) cfg.detuning = detuning;
        if (o_gamma->count()) cfg.gamma = gamma;
        if (o_nu_min->count()) cfg.nu_min = nu_min;
        if (o_nu_max->count()) cfg.nu_max = nu_max;
        if (o_nu_points->count()) cfg.nu_points = nu_points;
        if (o_rel_tol->count()) cfg.rel_tol = rel_tol;
        if (o_max_intervals->count()) cfg.max_intervals = max_intervals;
        if (o_rabi_min->count()) cfg.rabi_min = rabi_min;
        if (o_rabi_max->count()) cfg.rabi_max = rabi_max;
        if (o_rabi_points->count()) cfg.rabi_points = rabi_points;
        if (o_type->count()) cfg.oracle_type = type_s;
        if (o_oracle_tol->count()) cfg.oracle_tol = oracle_tol;
        if (o_out->count()) cfg.out_dir = out_dir;
        if (o_format->count()) cfg.format = cbs3::format_from_string(format_s);

        if (*d_list) return list_terms(list_type);
        if (*d_validate) {
            cfg.mode = cbs3::RunMode::Diagrams;
            int rc = cbs3::run(cfg);
            std::printf(rc == 0 ? "diagram catalogs valid\n"
                                : "diagram catalog mismatch (see diagrams.json)\n");
            return rc;
        }
        return cbs3::run(cfg);
    } catch (const cbs3::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
