#pragma once

// Experiment runner behind the fluctuon executable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fluctuon::cli {

inline constexpr int schema_version = 1;

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"wick-check", "center-scan", "condensate", "time-invariance",
                                                   "product-chain", "weyl", "scattering", "full-suite"};
    return names;
}

struct ExperimentConfig {
    std::string experiment = "full-suite";
    std::uint64_t seed = 1;

    // fermionic lattice model
    int L = 8;
    int s = 1;
    std::string rho = "random";      // random | kms | pure | <number in [0,1]>
    std::string dispersion = "cos";  // cos | random | quadratic
    std::optional<double> beta;      // KMS inverse temperature; scattering: thermal factor
    double mu = 0.0;
    int degree = 4;
    int samples = 8;
    double t_max = 10.0;
    double t_step = 0.1;

    // product chain
    int n = 3;
    std::vector<double> h_diag;      // default 0, 1, ..., n-1
    std::vector<double> populations; // default proportional to n, n-1, ..., 1

    // ccr
    int dim = 6;

    // scattering
    std::string phase = "p2";
    std::string weight = "gauss";
    double T_max = 1e3;

    double tol = 1e-9;
    double tail_tol = 1e-3;

    std::string report = "-";        // JSON report path, "-" for stdout
    std::string csv;                 // optional CSV plot data path
};

/// Overlays the keys of a JSON object; ConfigError on unknown keys or
/// mistyped values.
void apply_json(ExperimentConfig& config, const nlohmann::json& object);
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
/// ConfigError describing the first invalid field.
void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// CSV with a header row, rows in the given order, values printed with 17
/// significant digits. IoError when the path cannot be written.
void emit_plot_data(const Series& series, const std::string& path);
Series read_plot_data(const std::string& path);

struct RunResult {
    nlohmann::json report;
    /// The first series goes to the csv path, the others to
    /// <stem>-<name><ext> next to it.
    std::vector<Series> plots;
    int exit_code = 0;
};

/// Runs a validated configuration. The report carries schema_version,
/// experiment, config, results, violations and passed.
RunResult run_experiment(const ExperimentConfig& config);

/// Runs and writes the report and plot data; returns the exit code
/// (0 passed, 1 violated, 2 configuration error).
int run(const ExperimentConfig& config);

/// Command-line entry point.
int main_entry(int argc, char** argv);

} // namespace fluctuon::cli
