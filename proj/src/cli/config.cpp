#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fluctuon/cli.hpp"
#include "fluctuon/errors.hpp"
#include "fluctuon/scattering.hpp"

namespace fluctuon::cli {

namespace {

using nlohmann::json;

template <typename T>
T take(const json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type: " + value.dump());
    }
}

int take_int(const json& value, const std::string& key) {
    if (!value.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return take<int>(value, key);
}

double take_double(const json& value, const std::string& key) {
    if (!value.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return take<double>(value, key);
}

std::string take_string(const json& value, const std::string& key) {
    if (!value.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return take<std::string>(value, key);
}

std::vector<double> take_list(const json& value, const std::string& key) {
    if (!value.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& v : value) out.push_back(take_double(v, key));
    return out;
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

void apply_json(ExperimentConfig& c, const json& object) {
    if (!object.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, v] : object.items()) {
        if (key == "experiment") c.experiment = take_string(v, key);
        else if (key == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw ConfigError("config key 'seed' must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        }
        else if (key == "L") c.L = take_int(v, key);
        else if (key == "s") c.s = take_int(v, key);
        else if (key == "rho") c.rho = v.is_number() ? v.dump() : take_string(v, key);
        else if (key == "dispersion") c.dispersion = take_string(v, key);
        else if (key == "beta") c.beta = v.is_null() ? std::optional<double>{} : take_double(v, key);
        else if (key == "mu") c.mu = take_double(v, key);
        else if (key == "degree") c.degree = take_int(v, key);
        else if (key == "samples") c.samples = take_int(v, key);
        else if (key == "t_max") c.t_max = take_double(v, key);
        else if (key == "t_step") c.t_step = take_double(v, key);
        else if (key == "n") c.n = take_int(v, key);
        else if (key == "h_diag") c.h_diag = take_list(v, key);
        else if (key == "populations") c.populations = take_list(v, key);
        else if (key == "dim") c.dim = take_int(v, key);
        else if (key == "phase") c.phase = take_string(v, key);
        else if (key == "weight") c.weight = take_string(v, key);
        else if (key == "T_max") c.T_max = take_double(v, key);
        else if (key == "tol") c.tol = take_double(v, key);
        else if (key == "tail_tol") c.tail_tol = take_double(v, key);
        else if (key == "report") c.report = take_string(v, key);
        else if (key == "csv") c.csv = take_string(v, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json object;
    try {
        in >> object;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    apply_json(base, object);
    return base;
}

void validate(const ExperimentConfig& c) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        throw ConfigError("unknown experiment '" + c.experiment + "'");
    if (c.L < 2 || c.L > 4096) throw ConfigError("L must be in [2, 4096]");
    if (c.s < 1 || c.s > 8) throw ConfigError("s must be in [1, 8]");
    if (c.rho != "random" && c.rho != "kms" && c.rho != "pure") {
        std::size_t used = 0;
        double value = -1.0;
        try {
            value = std::stod(c.rho, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != c.rho.size() || !(value >= 0.0 && value <= 1.0))
            throw ConfigError("rho must be random, kms, pure or a number in [0, 1]");
    }
    if (c.dispersion != "cos" && c.dispersion != "random" && c.dispersion != "quadratic")
        throw ConfigError("dispersion must be cos, random or quadratic");
    if (c.beta && !finite_positive(*c.beta)) throw ConfigError("beta must be > 0");
    if (!std::isfinite(c.mu)) throw ConfigError("mu must be finite");
    if (c.degree < 2 || c.degree > 8 || c.degree % 2 != 0) throw ConfigError("degree must be even, in [2, 8]");
    if (c.samples < 1 || c.samples > 10000) throw ConfigError("samples must be in [1, 10000]");
    if (!(std::isfinite(c.t_max) && c.t_max >= 0.0)) throw ConfigError("t_max must be >= 0");
    if (!finite_positive(c.t_step)) throw ConfigError("t_step must be > 0");
    if (c.t_max / c.t_step > 1e6) throw ConfigError("t_max / t_step exceeds 1e6 grid points");
    if (c.n < 2 || c.n > 16) throw ConfigError("n must be in [2, 16]");
    if (!c.h_diag.empty() && static_cast<int>(c.h_diag.size()) != c.n)
        throw ConfigError("h_diag must have n entries");
    for (const double h : c.h_diag)
        if (!std::isfinite(h)) throw ConfigError("h_diag entries must be finite");
    if (!c.populations.empty()) {
        if (static_cast<int>(c.populations.size()) != c.n) throw ConfigError("populations must have n entries");
        double sum = 0.0;
        for (const double p : c.populations) {
            if (!(std::isfinite(p) && p >= 0.0)) throw ConfigError("populations must be non-negative");
            sum += p;
        }
        if (!(sum > 0.0)) throw ConfigError("populations must not all vanish");
    }
    if (c.dim < 2 || c.dim > 40) throw ConfigError("dim must be in [2, 40]");
    try {
        parse_phase_family(c.phase);
        parse_weight_family(c.weight);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    if (!(std::isfinite(c.T_max) && c.T_max >= 10.0 && c.T_max <= 1e5))
        throw ConfigError("T_max must be in [10, 1e5]");
    if (!finite_positive(c.tol)) throw ConfigError("tol must be > 0");
    if (!finite_positive(c.tail_tol)) throw ConfigError("tail_tol must be > 0");
    if (c.report.empty()) throw ConfigError("report path must not be empty");
    if (c.experiment == "wick-check" && c.L * c.s > 12)
        throw ConfigError("wick-check needs L * s <= 12 (Fock oracle capacity)");
}

json to_json(const ExperimentConfig& c) {
    json out;
    out["experiment"] = c.experiment;
    out["seed"] = c.seed;
    out["L"] = c.L;
    out["s"] = c.s;
    out["rho"] = c.rho;
    out["dispersion"] = c.dispersion;
    out["beta"] = c.beta ? json(*c.beta) : json(nullptr);
    out["mu"] = c.mu;
    out["degree"] = c.degree;
    out["samples"] = c.samples;
    out["t_max"] = c.t_max;
    out["t_step"] = c.t_step;
    out["n"] = c.n;
    out["h_diag"] = c.h_diag;
    out["populations"] = c.populations;
    out["dim"] = c.dim;
    out["phase"] = c.phase;
    out["weight"] = c.weight;
    out["T_max"] = c.T_max;
    out["tol"] = c.tol;
    out["tail_tol"] = c.tail_tol;
    return out;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Fluctuation-algebra experiments for quasifree and product states"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    json flags = json::object();
    std::vector<std::pair<std::string, CLI::Option*>> ints, doubles, strings, lists;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed, "64-bit seed");

    struct Holder {
        int i = 0;
        double d = 0.0;
        std::string s;
        std::vector<double> v;
    };
    std::map<std::string, Holder> holders;
    for (const char* name : {"L", "s", "degree", "samples", "n", "dim"})
        ints.emplace_back(name, app.add_option(std::string("--") + name, holders[name].i));
    for (const char* name : {"beta", "mu", "t_max", "t_step", "T_max", "tol", "tail_tol"})
        doubles.emplace_back(name, app.add_option(std::string("--") + name, holders[name].d));
    for (const char* name : {"rho", "dispersion", "phase", "weight", "report", "csv"})
        strings.emplace_back(name, app.add_option(std::string("--") + name, holders[name].s));
    for (const char* name : {"h_diag", "populations"})
        lists.emplace_back(name, app.add_option(std::string("--") + name, holders[name].v)->delimiter(','));

    std::string chosen;
    for (const auto& name : experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->fallthrough();
        sub->callback([&chosen, name] { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    for (const auto& [name, opt] : ints)
        if (opt->count()) flags[name] = holders[name].i;
    for (const auto& [name, opt] : doubles)
        if (opt->count()) flags[name] = holders[name].d;
    for (const auto& [name, opt] : strings)
        if (opt->count()) flags[name] = holders[name].s;
    for (const auto& [name, opt] : lists)
        if (opt->count()) flags[name] = holders[name].v;
    if (seed_opt->count()) flags["seed"] = seed;
    flags["experiment"] = chosen;

    ExperimentConfig config;
    try {
        if (!config_path.empty()) config = load_config_file(config_path, config);
        apply_json(config, flags);
        validate(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    return run(config);
}

} // namespace fluctuon::cli
