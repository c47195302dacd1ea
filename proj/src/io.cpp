// io.cpp - configuration parsing, table emission, and run orchestration
#include "cbs3/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cbs3/atom.hpp"
#include "cbs3/diagram.hpp"
#include "cbs3/oracle.hpp"
#include "cbs3/quadrature.hpp"
#include "cbs3/spectra.hpp"

namespace cbs3 {

namespace {

using nlohmann::json;

// The fourth-order closed forms are the reference for perturbative-check;
// they hold to O(rabi^2) corrections, so the bar is meaningful only for
// small drive (rabi ~ 0.01).
constexpr double kPerturbativeTol = 2e-3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
}

AtomParams atom_params(const RunConfig& cfg) {
    AtomParams p;
    p.rabi = cd(cfg.rabi, 0.0);
    p.detuning = cfg.detuning;
    p.gamma = cfg.gamma;
    return p;
}

QuadratureConfig quad_config(const RunConfig& cfg) {
    QuadratureConfig q;
    q.rel_tol = cfg.rel_tol;
    q.max_intervals = cfg.max_intervals;
    return q;
}

Metadata base_metadata(const RunConfig& cfg) {
    return {{"version", kVersion},
            {"mode", to_string(cfg.mode)},
            {"frequency-unit", "gamma"},
            {"rabi", fmt17(cfg.rabi)},
            {"detuning", fmt17(cfg.detuning)},
            {"gamma", fmt17(cfg.gamma)},
            {"rel-tol", fmt17(cfg.rel_tol)},
            {"max-intervals", std::to_string(cfg.max_intervals)}};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + path + "'");
    f << text;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "'");
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_table(const RunConfig& cfg, const std::string& name, const TableData& table,
                 const Metadata& meta) {
    if (cfg.format != OutputFormat::Json) write_file(out_path(cfg, name + ".csv"), csv_text(table, meta));
    if (cfg.format != OutputFormat::Csv) write_file(out_path(cfg, name + ".json"), json_text(table, meta));
}

const std::array<ContributionType, 4> kAllTypes = {ContributionType::L1, ContributionType::L2,
                                                   ContributionType::C1, ContributionType::C2};

// ---------------------------------------------------------------- mode runners

int run_spectrum(const RunConfig& cfg) {
    AtomParams p = atom_params(cfg);
    p.validate();
    std::vector<double> grid = cfg.has_grid_bounds()
                                   ? linspace(cfg.nu_min, cfg.nu_max, cfg.nu_points)
                                   : default_nu_grid(p, cfg.nu_points);
    SpectrumResult s = compute_spectrum(p, grid, quad_config(cfg));

    TableData t;
    t.columns = {"nu", "L1", "L2", "C1", "C2", "L_tot", "C_tot"};
    t.rows.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        double l1 = s.ladder1[i], l2 = s.ladder2[i], c1 = s.crossed1[i], c2 = s.crossed2[i];
        t.rows.push_back({grid[i], l1, l2, c1, c2, l1 + l2, c1 + c2});
    }

    Metadata meta = base_metadata(cfg);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "L1=%d L2=%d C1=%d C2=%d", s.term_counts[0], s.term_counts[1],
                  s.term_counts[2], s.term_counts[3]);
    meta.emplace_back("term-counts", buf);
    meta.emplace_back("elastic-intensities", "L1=" + fmt17(s.elastic[0]) + " L2=" + fmt17(s.elastic[1]) +
                                                 " C1=" + fmt17(s.elastic[2]) + " C2=" + fmt17(s.elastic[3]));
    meta.emplace_back("imag-residuals", "L1=" + fmt17(s.imag_residual[0]) + " L2=" + fmt17(s.imag_residual[1]) +
                                            " C1=" + fmt17(s.imag_residual[2]) + " C2=" + fmt17(s.imag_residual[3]));
    write_table(cfg, "spectrum", t, meta);
    return 0;
}

int run_elastic_sweep(const RunConfig& cfg) {
    QuadratureConfig q = quad_config(cfg);
    std::vector<double> omegas = linspace(cfg.rabi_min, cfg.rabi_max, cfg.rabi_points);

    TableData t;
    t.columns = {"rabi", "L1", "L2", "C1", "C2"};
    t.rows.reserve(omegas.size());
    for (double om : omegas) {
        AtomParams p;
        p.rabi = cd(om, 0.0);
        p.detuning = cfg.detuning;
        p.gamma = cfg.gamma;
        std::vector<double> row = {om};
        for (ContributionType type : kAllTypes) row.push_back(elastic_intensity(p, type, q));
        t.rows.push_back(std::move(row));
    }

    Metadata meta = base_metadata(cfg);
    meta.emplace_back("rabi-min", fmt17(cfg.rabi_min));
    meta.emplace_back("rabi-max", fmt17(cfg.rabi_max));
    meta.emplace_back("rabi-points", std::to_string(cfg.rabi_points));
    write_table(cfg, "elastic_sweep", t, meta);
    return 0;
}

int run_perturbative_check(const RunConfig& cfg) {
    AtomParams p = atom_params(cfg);
    p.validate();
    QuadratureConfig q = quad_config(cfg);
    // Default window matches the closed-form comparison range; an explicit
    // grid in the config overrides it.
    std::vector<double> grid = cfg.has_grid_bounds()
                                   ? linspace(cfg.nu_min, cfg.nu_max, cfg.nu_points)
                                   : linspace(-4.0, 4.0, 101);

    const RefKind elKinds[] = {RefKind::ElasticL1, RefKind::ElasticL2, RefKind::ElasticC1,
                               RefKind::ElasticC2};
    const RefKind inKinds[] = {RefKind::InelasticL1, RefKind::InelasticL2, RefKind::InelasticC1,
                               RefKind::InelasticC2};

    json types = json::object();
    bool pass = true;
    for (int k = 0; k < 4; ++k) {
        ContributionType type = kAllTypes[static_cast<size_t>(k)];
        double got = elastic_intensity(p, type, q);
        double want = perturbative_reference(cfg.detuning, cfg.rabi, elKinds[k]);
        double el_rel = std::abs(got - want) / std::abs(want);

        std::vector<double> engine = inelastic_spectrum(p, type, grid, q);
        std::vector<double> ref(grid.size());
        double peak = 0.0;
        for (size_t i = 0; i < grid.size(); ++i) {
            ref[i] = perturbative_reference(cfg.detuning, cfg.rabi, inKinds[k], grid[i]);
            peak = std::max(peak, std::abs(ref[i]));
        }
        double max_rel = 0.0;
        int checked = 0;
        for (size_t i = 0; i < grid.size(); ++i) {
            if (std::abs(ref[i]) <= 1e-14 * peak) continue;
            max_rel = std::max(max_rel, std::abs(engine[i] - ref[i]) / std::abs(ref[i]));
            ++checked;
        }
        pass = pass && el_rel <= kPerturbativeTol && max_rel <= kPerturbativeTol;
        types[to_string(type)] = {
            {"elastic", {{"engine", got}, {"reference", want}, {"rel", el_rel}}},
            {"inelastic",
             {{"max-rel", max_rel}, {"checked", checked}, {"nu", grid}, {"engine", engine}, {"reference", ref}}}};
    }

    json report = {{"version", kVersion},
                   {"frequency-unit", "gamma"},
                   {"params", {{"rabi", cfg.rabi}, {"detuning", cfg.detuning}, {"gamma", cfg.gamma}}},
                   {"tolerance", kPerturbativeTol},
                   {"types", types},
                   {"pass", pass}};
    write_file(out_path(cfg, "perturbative_check.json"), report.dump(2) + "\n");
    return pass ? 0 : 4;
}

int run_oracle_check(const RunConfig& cfg) {
    AtomParams p = atom_params(cfg);
    p.validate();
    QuadratureConfig q = quad_config(cfg);

    // Phase-free three-atom configuration with unit pair couplings; the
    // factor 16 bridges the per-path composition (one coupling amplitude per
    // arrow) to the oracle's symmetrized fourth-order term.
    ThreeAtomConfig oc;
    for (auto& a : oc.atoms) a = p;
    for (int l = 1; l <= 3; ++l)
        for (int m = l + 1; m <= 3; ++m) oc.set_coupling(l, m, cd(1.0, 0.0));

    struct Case {
        ContributionType type;
        std::array<InteractionLabel, 4> labels;
    };
    const Case cases[] = {
        {ContributionType::L1,
         {InteractionLabel{2, 1, true}, {3, 2, true}, {1, 2, false}, {2, 3, false}}},
        {ContributionType::L2,
         {InteractionLabel{2, 1, true}, {2, 3, true}, {1, 2, false}, {3, 2, false}}},
        {ContributionType::C1,
         {InteractionLabel{2, 1, true}, {3, 2, true}, {2, 1, false}, {3, 2, false}}},
        {ContributionType::C2,
         {InteractionLabel{2, 1, true}, {3, 2, true}, {1, 2, false}, {3, 2, false}}},
    };

    json types = json::object();
    bool pass = true;
    for (const auto& c : cases) {
        if (cfg.oracle_type != "all" && contribution_from_string(cfg.oracle_type) != c.type) continue;
        cd engine = 16.0 * per_path_total(p, c.type, q);
        StateVector63 w = path_term(c.labels, oc);
        cd oracle;
        switch (c.type) {
            case ContributionType::L1: oracle = w.data(StateVector63::x_index(3, 2)) / 2.0; break;
            case ContributionType::L2: oracle = w.data(StateVector63::x_index(2, 2)) / 2.0; break;
            case ContributionType::C1: oracle = extract_intensity(w, 1, 3); break;
            case ContributionType::C2: oracle = extract_intensity(w, 2, 3); break;
        }
        double denom = std::abs(oracle);
        double rel = denom > 0.0 ? std::abs(engine - oracle) / denom : std::abs(engine - oracle);
        pass = pass && rel <= cfg.oracle_tol;
        types[to_string(c.type)] = {{"engine", {engine.real(), engine.imag()}},
                                    {"oracle", {oracle.real(), oracle.imag()}},
                                    {"rel", rel}};
    }

    json report = {{"version", kVersion},
                   {"params", {{"rabi", cfg.rabi}, {"detuning", cfg.detuning}, {"gamma", cfg.gamma}}},
                   {"tolerance", cfg.oracle_tol},
                   {"types", types},
                   {"pass", pass}};
    write_file(out_path(cfg, "oracle_check.json"), report.dump(2) + "\n");
    return pass ? 0 : 4;
}

int run_diagrams(const RunConfig& cfg) {
    const std::array<int, 4> expect_raw = {50, 68, 45, 54};
    const std::array<int, 4> expect_allowed = {50, 68, 32, 46};
    const std::array<size_t, 4> expect_forbidden = {0, 0, 13, 8};

    json types = json::object();
    bool valid = true;
    for (int k = 0; k < 4; ++k) {
        ContributionType type = kAllTypes[static_cast<size_t>(k)];
        std::vector<DiagramTerm> terms = enumerate_type(type);
        std::vector<std::string> forbidden = forbidden_labels(type);
        int elastic = 0, reducible = 0;
        json labels = json::array(), strong = json::array();
        for (const auto& t : terms) {
            labels.push_back(t.label);
            if (t.elastic) ++elastic;
            if (t.detector_reducible) ++reducible;
            if (t.box_count == 3) strong.push_back(t.label);
        }
        bool ok = raw_term_count(type) == expect_raw[static_cast<size_t>(k)] &&
                  static_cast<int>(terms.size()) == expect_allowed[static_cast<size_t>(k)] &&
                  forbidden.size() == expect_forbidden[static_cast<size_t>(k)];
        valid = valid && ok;
        types[to_string(type)] = {{"raw", raw_term_count(type)},
                                  {"allowed", terms.size()},
                                  {"elastic", elastic},
                                  {"reducible", reducible},
                                  {"degeneracy", degeneracy_factor(type)},
                                  {"forbidden", forbidden},
                                  {"strong-drive-subset", strong},
                                  {"labels", labels},
                                  {"counts-ok", ok}};
    }

    json report = {{"version", kVersion}, {"types", types}, {"valid", valid}};
    write_file(out_path(cfg, "diagrams.json"), report.dump(2) + "\n");
    return valid ? 0 : 4;
}

}  // namespace

// -------------------------------------------------------------- enum plumbing

RunMode run_mode_from_string(const std::string& s) {
    if (s == "spectrum") return RunMode::Spectrum;
    if (s == "elastic-sweep") return RunMode::ElasticSweep;
    if (s == "perturbative-check") return RunMode::PerturbativeCheck;
    if (s == "oracle-check") return RunMode::OracleCheck;
    if (s == "diagrams") return RunMode::Diagrams;
    throw ConfigError("config field 'mode' must be one of spectrum, elastic-sweep, "
                      "perturbative-check, oracle-check, diagrams (got '" + s + "')");
}

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Spectrum: return "spectrum";
        case RunMode::ElasticSweep: return "elastic-sweep";
        case RunMode::PerturbativeCheck: return "perturbative-check";
        case RunMode::OracleCheck: return "oracle-check";
        case RunMode::Diagrams: return "diagrams";
    }
    throw std::logic_error("unreachable run mode");
}

OutputFormat format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw ConfigError("config field 'format' must be one of csv, json, both (got '" + s + "')");
}

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Both: return "both";
    }
    throw std::logic_error("unreachable output format");
}

// ---------------------------------------------------------------- RunConfig

void RunConfig::validate() const {
    require(std::isfinite(rabi), "config field 'rabi' must be finite");
    require(gamma > 0.0 && std::isfinite(gamma), "config field 'gamma' must be positive");
    require(std::isfinite(detuning), "config field 'detuning' must be finite");
    require(nu_points >= 2, "config field 'nu_points' must be at least 2");
    bool min_set = nu_min != kUnsetGrid, max_set = nu_max != kUnsetGrid;
    require(min_set == max_set, "config fields 'nu_min' and 'nu_max' must be set together");
    if (min_set) {
        require(std::isfinite(nu_min) && std::isfinite(nu_max),
                "config fields 'nu_min'/'nu_max' must be finite");
        require(nu_min < nu_max, "config field 'nu_min' must be less than 'nu_max'");
    }
    require(rel_tol > 0.0 && rel_tol <= 1e-3, "config field 'rel_tol' must be in (0, 1e-3]");
    require(max_intervals >= 1, "config field 'max_intervals' must be at least 1");
    require(std::isfinite(rabi_min) && rabi_min >= 0.0,
            "config field 'rabi_min' must be non-negative");
    require(std::isfinite(rabi_max) && rabi_max >= rabi_min,
            "config field 'rabi_max' must be at least 'rabi_min'");
    require(rabi_points >= 2, "config field 'rabi_points' must be at least 2");
    require(oracle_tol > 0.0, "config field 'oracle_tol' must be positive");
    if (oracle_type != "all") {
        try {
            contribution_from_string(oracle_type);
        } catch (const std::exception&) {
            throw ConfigError("config field 'oracle_type' must be one of all, L1, L2, C1, C2 "
                              "(got '" + oracle_type + "')");
        }
    }
    require(!out_dir.empty(), "config field 'out_dir' must not be empty");
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.mode == b.mode && a.rabi == b.rabi && a.detuning == b.detuning && a.gamma == b.gamma &&
           a.nu_min == b.nu_min && a.nu_max == b.nu_max && a.nu_points == b.nu_points &&
           a.rel_tol == b.rel_tol && a.max_intervals == b.max_intervals &&
           a.rabi_min == b.rabi_min && a.rabi_max == b.rabi_max && a.rabi_points == b.rabi_points &&
           a.oracle_type == b.oracle_type && a.oracle_tol == b.oracle_tol &&
           a.out_dir == b.out_dir && a.format == b.format;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require(j.is_object(), "config must be a JSON object");

    auto num = [](const json& v, const char* key) -> double {
        if (!v.is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
        return v.get<double>();
    };
    auto integer = [](const json& v, const char* key) -> int {
        if (!v.is_number_integer())
            throw ConfigError(std::string("config field '") + key + "' must be an integer");
        return v.get<int>();
    };
    auto str = [](const json& v, const char* key) -> std::string {
        if (!v.is_string()) throw ConfigError(std::string("config field '") + key + "' must be a string");
        return v.get<std::string>();
    };

    RunConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "mode") c.mode = run_mode_from_string(str(val, "mode"));
        else if (key == "rabi") c.rabi = num(val, "rabi");
        else if (key == "detuning") c.detuning = num(val, "detuning");
        else if (key == "gamma") c.gamma = num(val, "gamma");
        else if (key == "nu_min") c.nu_min = num(val, "nu_min");
        else if (key == "nu_max") c.nu_max = num(val, "nu_max");
        else if (key == "nu_points") c.nu_points = integer(val, "nu_points");
        else if (key == "rel_tol") c.rel_tol = num(val, "rel_tol");
        else if (key == "max_intervals") c.max_intervals = integer(val, "max_intervals");
        else if (key == "rabi_min") c.rabi_min = num(val, "rabi_min");
        else if (key == "rabi_max") c.rabi_max = num(val, "rabi_max");
        else if (key == "rabi_points") c.rabi_points = integer(val, "rabi_points");
        else if (key == "oracle_type") c.oracle_type = str(val, "oracle_type");
        else if (key == "oracle_tol") c.oracle_tol = num(val, "oracle_tol");
        else if (key == "out_dir") c.out_dir = str(val, "out_dir");
        else if (key == "format") c.format = format_from_string(str(val, "format"));
        else throw ConfigError("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
    json j;
    j["mode"] = to_string(cfg.mode);
    j["rabi"] = cfg.rabi;
    j["detuning"] = cfg.detuning;
    j["gamma"] = cfg.gamma;
    if (cfg.nu_min != RunConfig::kUnsetGrid) j["nu_min"] = cfg.nu_min;
    if (cfg.nu_max != RunConfig::kUnsetGrid) j["nu_max"] = cfg.nu_max;
    j["nu_points"] = cfg.nu_points;
    j["rel_tol"] = cfg.rel_tol;
    j["max_intervals"] = cfg.max_intervals;
    j["rabi_min"] = cfg.rabi_min;
    j["rabi_max"] = cfg.rabi_max;
    j["rabi_points"] = cfg.rabi_points;
    j["oracle_type"] = cfg.oracle_type;
    j["oracle_tol"] = cfg.oracle_tol;
    j["out_dir"] = cfg.out_dir;
    j["format"] = to_string(cfg.format);
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------------- writers

std::string csv_text(const TableData& table, const Metadata& meta) {
    std::string out;
    for (const auto& [key, value] : meta) out += "# " + key + ": " + value + "\n";
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ",";
        out += table.columns[c];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += fmt17(row[c]);
        }
        out += "\n";
    }
    return out;
}

std::string json_text(const TableData& table, const Metadata& meta) {
    json m = json::object();
    for (const auto& [key, value] : meta) m[key] = value;
    json j = {{"metadata", m}, {"columns", table.columns}, {"data", table.rows}};
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------------- run()

int run(const RunConfig& cfg) {
    cfg.validate();
    try {
        switch (cfg.mode) {
            case RunMode::Spectrum: return run_spectrum(cfg);
            case RunMode::ElasticSweep: return run_elastic_sweep(cfg);
            case RunMode::PerturbativeCheck: return run_perturbative_check(cfg);
            case RunMode::OracleCheck: return run_oracle_check(cfg);
            case RunMode::Diagrams: return run_diagrams(cfg);
        }
        throw std::logic_error("unreachable run mode");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        json err = {{"error", {{"exit", 3}, {"kind", "numerical"}, {"message", e.what()}}}};
        std::printf("%s\n", err.dump().c_str());
        return 3;
    }
}

}  // namespace cbs3
