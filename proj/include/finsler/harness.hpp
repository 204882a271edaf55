#pragma once
// Batch front end: a RunConfig names a family, parameters, a sample plan and
// a list of checks; run() executes them and produces a Report renderable as
// txt, csv or json-lines.  Reports are byte-identical for identical configs;
// wall time lives in a '#' header line excluded from that contract.

#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "finsler/checks.hpp"
#include "finsler/families.hpp"

namespace finsler {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string family;
    ParamMap params;
    SamplePlan plan;
    std::vector<std::string> checks;  // empty = family's applicable set
    TolMap tolerances;
    std::string output_path;   // empty = stdout
    std::string format = "txt";
};

struct Report {
    std::string family_key, family_title, label;
    int dim = 2;
    std::uint64_t seed = 0;
    int count_x = 0, count_dir = 0;
    std::vector<CheckResult> results;
    bool all_pass = true;
    double wall_ms = 0.0;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::vector<std::string> applicable_checks(const Family& fam) {
    std::vector<std::string> out{"t", "sigma_t", "landsberg", "berwald", "conformal",
                                 "cross_oracles"};
    if (fam.dim == 2) out.push_back("pde_residual");
    if (fam.class_branch) out.push_back("class_identities");
    // families with nonvanishing T still run sigma_t (kernel analysis) but a
    // "t" pass would be wrong by construction; keep "t" only where it holds
    if (!fam.expect_t_condition) out.erase(out.begin());
    return out;
}

} // namespace detail

inline std::vector<CheckResult> run_check(const std::string& check, const Family& fam,
                                          const FinslerMetric& F, std::span<const Sample> samples,
                                          const RunConfig& cfg) {
    const bool defaults = cfg.params.empty();
    if (check == "t") return check_t(fam, F, samples, cfg.tolerances);
    if (check == "sigma_t") return check_sigma_t_family(fam, F, samples, cfg.tolerances);
    if (check == "landsberg")
        return check_landsberg_berwald(fam, F, samples, cfg.tolerances, defaults, false);
    if (check == "berwald")
        return check_landsberg_berwald(fam, F, samples, cfg.tolerances, defaults, true);
    if (check == "conformal") return check_conformal(fam, F, samples, cfg.tolerances);
    if (check == "class_identities") {
        if (!fam.class_branch)
            throw ConfigError("check 'class_identities' needs a classified family");
        return check_class_identities(fam, F, samples, cfg.tolerances);
    }
    if (check == "pde_residual") {
        if (fam.dim != 2) throw ConfigError("check 'pde_residual' needs a surface family");
        return check_pde_residual(fam, F, samples, cfg.tolerances);
    }
    if (check == "cross_oracles") return check_cross_oracles(fam, F, samples, cfg.tolerances);
    throw ConfigError("unknown check: " + check);
}

inline Report run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const Family& fam = family(cfg.family);
    FinslerMetric F = [&] {
        try {
            return fam.build(cfg.params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    SamplePlan plan = cfg.plan;
    if (fam.dim == 3 && cfg.plan.x_box == SamplePlan{}.x_box) plan.x_box = fam.x_box;
    auto samples = draw_samples(F, fam.dir_plan, plan);

    Report rep;
    rep.family_key = fam.key;
    rep.family_title = fam.title;
    rep.label = F.label;
    rep.dim = fam.dim;
    rep.seed = plan.seed;
    rep.count_x = plan.count_x;
    rep.count_dir = plan.count_dir;

    auto checks = cfg.checks.empty() ? detail::applicable_checks(fam) : cfg.checks;
    for (const auto& c : checks) {
        auto rs = run_check(c, fam, F, samples, cfg);
        for (auto& r : rs) {
            rep.all_pass = rep.all_pass && r.pass;
            rep.results.push_back(std::move(r));
        }
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

// --------------------------------------------------------------------------
// rendering

inline std::string render_txt(const Report& rep) {
    std::ostringstream os;
    os << "# finsler verification report\n";
    os << "# wall_ms: " << detail::fmt_double(rep.wall_ms) << "\n";
    os << "family: " << rep.family_key << "\n";
    os << "title: " << rep.family_title << "\n";
    os << "label: " << rep.label << "\n";
    os << "dim: " << rep.dim << "\n";
    os << "seed: " << rep.seed << "\n";
    os << "samples: " << rep.count_x << " x " << rep.count_dir << "\n";
    os << "checks:\n";
    for (const auto& r : rep.results) {
        os << "  " << r.name << ":\n";
        os << "    pass: " << (r.pass ? "true" : "false") << "\n";
        os << "    residual_max: " << detail::fmt_double(r.residual) << "\n";
        os << "    residual_mean: " << detail::fmt_double(r.mean) << "\n";
        os << "    tol: " << detail::fmt_double(r.tol) << "\n";
        os << "    argmax_x: [" << detail::fmt_double(r.argmax_x[0]) << ", "
           << detail::fmt_double(r.argmax_x[1])
           << (rep.dim == 3 ? ", " + detail::fmt_double(r.argmax_x[2]) : "") << "]\n";
        os << "    argmax_y: [" << detail::fmt_double(r.argmax_y[0]) << ", "
           << detail::fmt_double(r.argmax_y[1])
           << (rep.dim == 3 ? ", " + detail::fmt_double(r.argmax_y[2]) : "") << "]\n";
        if (!r.note.empty()) os << "    note: " << r.note << "\n";
    }
    os << "verdict: " << (rep.all_pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string render_csv(const Report& rep) {
    std::ostringstream os;
    os << "# family=" << rep.family_key << " seed=" << rep.seed << " samples=" << rep.count_x
       << "x" << rep.count_dir << " wall_ms=" << detail::fmt_double(rep.wall_ms) << "\n";
    os << "check,pass,residual_max,residual_mean,tol,note\n";
    for (const auto& r : rep.results)
        os << csv_escape(r.name) << "," << (r.pass ? "true" : "false") << ","
           << detail::fmt_double(r.residual) << "," << detail::fmt_double(r.mean) << ","
           << detail::fmt_double(r.tol) << "," << csv_escape(r.note) << "\n";
    os << "verdict," << (rep.all_pass ? "true" : "false") << ",,,,\n";
    return os.str();
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

inline std::string render_json_lines(const Report& rep) {
    std::ostringstream os;
    os << "{\"meta\":{\"family\":\"" << json_escape(rep.family_key) << "\",\"dim\":" << rep.dim
       << ",\"seed\":" << rep.seed << ",\"count_x\":" << rep.count_x
       << ",\"count_dir\":" << rep.count_dir << ",\"wall_ms\":" << detail::fmt_double(rep.wall_ms)
       << "}}\n";
    for (const auto& r : rep.results) {
        os << "{\"check\":\"" << json_escape(r.name) << "\",\"pass\":" << (r.pass ? "true" : "false")
           << ",\"residual_max\":" << detail::fmt_double(r.residual)
           << ",\"residual_mean\":" << detail::fmt_double(r.mean)
           << ",\"tol\":" << detail::fmt_double(r.tol) << ",\"note\":\"" << json_escape(r.note)
           << "\"}\n";
    }
    os << "{\"verdict\":\"" << (rep.all_pass ? "PASS" : "FAIL") << "\"}\n";
    return os.str();
}

inline std::string render(const Report& rep, const std::string& format) {
    if (format == "txt") return render_txt(rep);
    if (format == "csv") return render_csv(rep);
    if (format == "json-lines") return render_json_lines(rep);
    throw ConfigError("unknown report format: " + format);
}

inline std::string list_families_text() {
    std::ostringstream os;
    for (const auto& [key, fam] : registry()) {
        os << key << "  (dim " << fam.dim << ")\n";
        os << "    " << fam.title << "\n";
        if (!fam.params.empty()) {
            os << "    params:";
            for (const auto& p : fam.params)
                os << " " << p.name << (p.poly_allowed ? " (poly2)" : " (const)");
            os << "\n";
        }
    }
    return os.str();
}

// --------------------------------------------------------------------------
// parameter-grid scan

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

/// Parses "a=0.5:3:6,b=0:3:7" (start:stop:count, inclusive endpoints).
inline std::vector<GridAxis> parse_grid(const std::string& spec) {
    std::vector<GridAxis> axes;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("grid: expected name=start:stop:count");
        GridAxis ax;
        ax.name = item.substr(0, eq);
        double start, stop;
        int count;
        if (std::sscanf(item.c_str() + eq + 1, "%lf:%lf:%d", &start, &stop, &count) != 3 ||
            count < 1)
            throw ConfigError("grid: bad axis spec '" + item + "'");
        for (int i = 0; i < count; ++i)
            ax.values.push_back(count == 1 ? start
                                           : start + (stop - start) * i / (count - 1.0));
        axes.push_back(std::move(ax));
    }
    if (axes.empty()) throw ConfigError("grid: empty specification");
    return axes;
}

/// Runs the T-residual and conformal Landsberg-invariance columns over a
/// parameter grid.  Grid points whose parameters violate the family's
/// invariants are recorded as skipped rows.
inline std::string scan(const RunConfig& base, const std::string& grid_spec) {
    const Family& fam = family(base.family);
    auto axes = parse_grid(grid_spec);
    for (const auto& ax : axes) {
        bool known = false;
        for (const auto& p : fam.params) known = known || p.name == ax.name;
        if (!known)
            throw ConfigError("grid axis '" + ax.name + "' is not a parameter of family '" +
                              fam.key + "'");
    }

    std::ostringstream os;
    os << "# scan family=" << fam.key << " seed=" << base.plan.seed << "\n";
    for (const auto& ax : axes) os << ax.name << ",";
    os << "t_residual,landsberg_conformal_residual,status,note\n";

    std::vector<size_t> idx(axes.size(), 0);
    auto cf = make_conformal(Poly2::linear(0.0, 1.0, 0.0));
    for (;;) {
        ParamMap pm = base.params;
        for (size_t a = 0; a < axes.size(); ++a)
            pm[axes[a].name] = Poly2::constant(axes[a].values[idx[a]]);
        for (size_t a = 0; a < axes.size(); ++a)
            os << detail::fmt_double(axes[a].values[idx[a]]) << ",";
        try {
            auto F = fam.build(pm);
            SamplePlan plan = base.plan;
            plan.count_x = std::min(plan.count_x, 4);
            plan.count_dir = std::min(plan.count_dir, 6);
            auto samples = draw_samples(F, fam.dir_plan, plan);
            auto trep = check_t_condition(F, samples, tol_or(base.tolerances, "t", 1e-7));
            auto lrep = verify_landsberg_law(F, cf, samples);
            os << detail::fmt_double(trep.max_residual) << ","
               << detail::fmt_double(lrep.max_invariance) << ",ok,\n";
        } catch (const std::exception& e) {
            os << ",,skipped," << csv_escape(e.what()) << "\n";
        }
        size_t a = 0;
        while (a < axes.size() && ++idx[a] == axes[a].values.size()) idx[a++] = 0;
        if (a == axes.size()) break;
    }
    return os.str();
}

} // namespace finsler
