// Batch verification front end.
//
//   finsler run <config.json>   run the configured checks, write a report
//   finsler list                print the family catalogue
//   finsler scan <config.json> --grid "a=0.5:3:6,b=0:3:7"
//
// Exit codes: 0 all verdicts pass, 1 any verdict fails, 2 configuration
// error, 3 domain/sampling error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "finsler/harness.hpp"

using nlohmann::json;

namespace {

finsler::Poly2 poly2_from_json(const json& j, const std::string& where) {
    using finsler::ConfigError;
    if (j.is_number()) return finsler::Poly2::constant(j.get<double>());
    if (!j.is_object()) throw ConfigError(where + ": expected number or monomial table");
    static const std::map<std::string, int> keys{{"1", 0},    {"x1", 1},   {"x2", 2},
                                                 {"x1x1", 3}, {"x1x2", 4}, {"x2x2", 5}};
    finsler::Poly2 p;
    for (const auto& [k, v] : j.items()) {
        auto it = keys.find(k);
        if (it == keys.end()) throw ConfigError(where + ": unknown monomial key '" + k + "'");
        if (!v.is_number()) throw ConfigError(where + ": coefficient must be a number");
        p.c[it->second] = v.get<double>();
    }
    return p;
}

finsler::RunConfig load_config(const std::string& path) {
    using finsler::ConfigError;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    static const std::set<std::string> top{"family", "params",     "samples",
                                           "checks", "tolerances", "output"};
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (!top.count(k)) throw ConfigError("unknown config key '" + k + "'");
    }
    finsler::RunConfig cfg;
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigError("config needs a string 'family'");
    cfg.family = j["family"].get<std::string>();

    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items())
            cfg.params[k] = poly2_from_json(v, "params." + k);

    if (j.contains("samples")) {
        const auto& s = j["samples"];
        static const std::set<std::string> keys{"count_x", "count_dir", "seed", "x_box",
                                                "domain_margin"};
        for (const auto& [k, v] : s.items()) {
            (void)v;
            if (!keys.count(k)) throw ConfigError("unknown samples key '" + k + "'");
        }
        if (s.contains("count_x")) cfg.plan.count_x = s["count_x"].get<int>();
        if (s.contains("count_dir")) cfg.plan.count_dir = s["count_dir"].get<int>();
        if (s.contains("seed")) cfg.plan.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("domain_margin")) cfg.plan.domain_margin = s["domain_margin"].get<double>();
        if (s.contains("x_box")) {
            const auto& b = s["x_box"];
            if (!b.is_array() || b.empty() || b.size() > 3)
                throw ConfigError("samples.x_box: expected up to 3 [lo, hi] pairs");
            for (size_t d = 0; d < b.size(); ++d) {
                cfg.plan.x_box[d][0] = b[d].at(0).get<double>();
                cfg.plan.x_box[d][1] = b[d].at(1).get<double>();
            }
        }
        if (cfg.plan.count_x < 1 || cfg.plan.count_dir < 1)
            throw ConfigError("samples: counts must be positive");
    }

    if (j.contains("checks"))
        for (const auto& c : j["checks"]) cfg.checks.push_back(c.get<std::string>());

    if (j.contains("tolerances"))
        for (const auto& [k, v] : j["tolerances"].items()) cfg.tolerances[k] = v.get<double>();

    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("path")) cfg.output_path = o["path"].get<std::string>();
        if (o.contains("format")) cfg.format = o["format"].get<std::string>();
    }
    return cfg;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw finsler::ConfigError("cannot write output file: " + path);
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical verification workbench for Finsler surface geometry"};
    app.require_subcommand(1);

    std::string config_path, grid_spec, format, output;
    std::vector<std::string> tol_overrides;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "run the configured checks");
    run_cmd->add_option("config", config_path, "JSON run configuration")->required();
    run_cmd->add_option("--tol-override", tol_overrides, "override a tolerance, name=value");
    auto* run_seed = run_cmd->add_option("--seed", seed, "override the sample seed");
    run_cmd->add_option("--format", format, "txt | csv | json-lines");
    run_cmd->add_option("--output", output, "report path (default stdout)");

    auto* list_cmd = app.add_subcommand("list", "print the family catalogue");

    auto* scan_cmd = app.add_subcommand("scan", "sweep constant parameters over a grid");
    scan_cmd->add_option("config", config_path, "JSON run configuration")->required();
    scan_cmd->add_option("--grid", grid_spec, "axes, e.g. a=0.5:3:6,b=0:3:7")->required();
    auto* scan_seed = scan_cmd->add_option("--seed", seed, "override the sample seed");
    scan_cmd->add_option("--output", output, "table path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) {
            std::cout << finsler::list_families_text();
            return 0;
        }
        finsler::RunConfig cfg = load_config(config_path);
        for (const auto& ov : tol_overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw finsler::ConfigError("--tol-override expects name=value");
            cfg.tolerances[ov.substr(0, eq)] = std::stod(ov.substr(eq + 1));
        }
        if (run_seed->count() || scan_seed->count()) cfg.plan.seed = seed;
        if (!format.empty()) cfg.format = format;
        if (!output.empty()) cfg.output_path = output;

        if (scan_cmd->parsed()) {
            emit(finsler::scan(cfg, grid_spec), cfg.output_path);
            return 0;
        }
        finsler::Report rep = finsler::run(cfg);
        emit(finsler::render(rep, cfg.format), cfg.output_path);
        return rep.all_pass ? 0 : 1;
    } catch (const finsler::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const finsler::DomainError& e) {
        std::cerr << "domain/sampling error: " << e.what() << "\n";
        return 3;
    } catch (const finsler::QuadratureError& e) {
        std::cerr << "domain/sampling error: " << e.what() << "\n";
        return 3;
    } catch (const finsler::SingularMetricError& e) {
        std::cerr << "domain/sampling error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
