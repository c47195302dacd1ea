// io.hpp - run configuration, result emission, and orchestration for the CLI
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cbs3 {

inline constexpr const char* kVersion = "1.0.0";

// Raised for malformed or invalid configuration; the message names the
// offending key or field.  Mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RunMode { Spectrum, ElasticSweep, PerturbativeCheck, OracleCheck, Diagrams };
enum class OutputFormat { Csv, Json, Both };

RunMode run_mode_from_string(const std::string& s);
std::string to_string(RunMode m);
OutputFormat format_from_string(const std::string& s);
std::string to_string(OutputFormat f);

// Flat run description; JSON keys match the member names.  nu_min/nu_max of
// NaN mean "use the drive-dependent default window" so a minimal config stays
// minimal through an emit/parse round trip.
struct RunConfig {
    RunMode mode = RunMode::Spectrum;
    double rabi = 1.0;
    double detuning = 0.0;
    double gamma = 1.0;
    double nu_min = kUnsetGrid;
    double nu_max = kUnsetGrid;
    int nu_points = 801;
    double rel_tol = 1e-8;
    int max_intervals = 2000;
    double rabi_min = 0.0;     // elastic-sweep range
    double rabi_max = 3.0;
    int rabi_points = 61;
    std::string oracle_type = "all";  // oracle-check: all | L1 | L2 | C1 | C2
    double oracle_tol = 1e-5;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::Both;

    static constexpr double kUnsetGrid = -1e308;
    bool has_grid_bounds() const { return nu_min != kUnsetGrid || nu_max != kUnsetGrid; }
    void validate() const;  // throws ConfigError naming the field
};

bool operator==(const RunConfig& a, const RunConfig& b);

RunConfig parse_config(const std::string& path);       // reads a JSON file
RunConfig parse_config_text(const std::string& text);  // parses JSON text
std::string emit_config(const RunConfig& cfg);         // parse(emit(c)) == c

// Numeric table plus ordered metadata, rendered to CSV (data grid) and JSON
// (metadata + grid).  Both renderings are byte-stable for identical inputs:
// no timestamps, fixed %.17g number formatting in the CSV, fixed key order.
struct TableData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string csv_text(const TableData& table, const Metadata& meta);
std::string json_text(const TableData& table, const Metadata& meta);

// Executes the configured mode, writing result files into cfg.out_dir.
// Returns a process exit status: 0 success, 3 numerical failure (with a
// machine-readable error record on stdout), 4 check mismatch (oracle-check
// or perturbative-check outside tolerance).  Configuration errors throw
// ConfigError and are mapped to exit 2 by the caller.
int run(const RunConfig& cfg);

}  // namespace cbs3
