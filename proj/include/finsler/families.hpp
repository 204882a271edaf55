#pragma once
// Registry of built-in metric families.  Each entry knows how to build a
// FinslerMetric from a parameter map (Poly2 values keyed by name), which
// direction window keeps samples inside the conic domain, and any extra
// structure the checks use (classification branch, known sigma-T direction).

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "finsler/alpha_beta.hpp"
#include "finsler/metric.hpp"
#include "finsler/poly2.hpp"
#include "finsler/sampling.hpp"
#include "finsler/surface_class.hpp"

namespace finsler {

using ParamMap = std::map<std::string, Poly2>;

struct ParamSpec {
    std::string name;
    Poly2 def;
    bool poly_allowed = false;  // constants only unless set
};

struct Family {
    std::string key;
    std::string title;  // catalogue line, includes the defining formula
    int dim = 2;
    std::vector<ParamSpec> params;
    std::function<FinslerMetric(const ParamMap&)> build;
    DirectionPlan dir_plan;
    std::array<std::array<double, 2>, 3> x_box{{{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}};
    std::optional<std::array<double, 3>> sigma_dir;  // known sigma-T kernel direction
    std::optional<ClassBranch> class_branch;         // set for class1/class2 families
    std::optional<std::array<double, 2>> u_interval; // 2D working window
    bool expect_t_condition = false;                 // vanishing T over the window
    std::optional<bool> expect_landsberg;            // verdict under default parameters
    std::optional<bool> expect_berwald;
};

namespace detail {

inline double param_const(const ParamMap& pm, const std::string& key, double fallback) {
    auto it = pm.find(key);
    if (it == pm.end()) return fallback;
    if (!it->second.is_constant())
        throw std::invalid_argument("family parameter '" + key + "' must be constant");
    return it->second.c[0];
}

inline Poly2 param_poly(const ParamMap& pm, const std::string& key, const Poly2& fallback) {
    auto it = pm.find(key);
    return it == pm.end() ? fallback : it->second;
}

inline FinslerMetric make_euclidean(int dim) {
    auto eval = [dim](auto xs, auto ys) {
        using T = std::decay_t<decltype(xs[0])>;
        (void)xs;
        T s = ys[0] * ys[0];
        for (int i = 1; i < dim; ++i) s += ys[i] * ys[i];
        return sqrt(s);
    };
    auto domain = [dim](std::span<const double>, std::span<const double> y) {
        double n2 = 0.0;
        for (int i = 0; i < dim; ++i) n2 += y[i] * y[i];
        return n2 > 1e-12;
    };
    return make_metric(dim, dim == 2 ? "euclidean" : "euclidean3", eval, domain);
}

inline FinslerMetric make_riemannian2(Poly2 a11, Poly2 a12, Poly2 a22) {
    auto eval = [a11, a12, a22](auto xs, auto ys) {
        using T = std::decay_t<decltype(xs[0])>;
        T q = a11.eval(xs[0], xs[1]) * ys[0] * ys[0] + a12.eval(xs[0], xs[1]) * ys[0] * ys[1] * 2.0 +
              a22.eval(xs[0], xs[1]) * ys[1] * ys[1];
        return sqrt(q);
    };
    auto domain = [](std::span<const double>, std::span<const double> y) {
        return y[0] * y[0] + y[1] * y[1] > 1e-12;
    };
    return make_metric(2, "riemannian", eval, domain);
}

inline FinslerMetric make_randers(double B, Poly2 sigma, bool scaled) {
    auto eval = [B, sigma, scaled](auto xs, auto ys) {
        using T = std::decay_t<decltype(xs[0])>;
        T F0 = sqrt(ys[0] * ys[0] + ys[1] * ys[1]) + ys[0] * B;
        if (!scaled) return F0;
        return exp(sigma.eval(xs[0], xs[1])) * F0;
    };
    auto domain = [](std::span<const double>, std::span<const double> y) {
        return y[0] * y[0] + y[1] * y[1] > 1e-12;
    };
    return make_metric(2, scaled ? "randers_conformal" : "randers", eval, domain);
}

} // namespace detail

inline const std::map<std::string, Family>& registry() {
    static const std::map<std::string, Family> reg = [] {
        std::map<std::string, Family> r;
        auto add = [&r](Family f) { r.emplace(f.key, std::move(f)); };

        {
            Family f;
            f.key = "euclidean";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Euclidean norm F = |y| (flat Riemannian surface)";
            f.dim = 2;
            f.build = [](const ParamMap&) { return detail::make_euclidean(2); };
            f.dir_plan = {DirKind::UWindow, -2.5, 2.5};
            f.u_interval = {{-2.5, 2.5}};
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "riemannian";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Riemannian surface F = sqrt(a11 y1^2 + 2 a12 y1 y2 + a22 y2^2), a_ij(x)";
            f.dim = 2;
            f.params = {{"a11", Poly2::linear(1.0, 0.2, 0.0), true},
                        {"a12", Poly2::linear(0.0, 0.1, 0.1), true},
                        {"a22", Poly2::linear(1.0, 0.0, 0.2), true}};
            f.build = [](const ParamMap& pm) {
                return detail::make_riemannian2(
                    detail::param_poly(pm, "a11", Poly2::linear(1.0, 0.2, 0.0)),
                    detail::param_poly(pm, "a12", Poly2::linear(0.0, 0.1, 0.1)),
                    detail::param_poly(pm, "a22", Poly2::linear(1.0, 0.0, 0.2)));
            };
            f.dir_plan = {DirKind::UWindow, -2.5, 2.5};
            f.u_interval = {{-2.5, 2.5}};
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "randers";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Randers surface F = |y| + B y1 (locally Minkowski; Berwald, T != 0)";
            f.dim = 2;
            f.params = {{"B", Poly2::constant(0.3), false}};
            f.build = [](const ParamMap& pm) {
                return detail::make_randers(detail::param_const(pm, "B", 0.3), Poly2{}, false);
            };
            f.dir_plan = {DirKind::UWindow, -2.2, 2.2};
            f.u_interval = {{-2.2, 2.2}};
            add(f);
        }
        {
            Family f;
            f.key = "randers_conformal";
            f.expect_landsberg = false;
            f.expect_berwald = false;
            f.title = "Conformally scaled Randers F = e^sigma(x) (|y| + B y1) (non-Berwald)";
            f.dim = 2;
            f.params = {{"B", Poly2::constant(0.3), false},
                        {"sigma", Poly2::linear(0.0, 1.0, 0.0), true}};
            f.build = [](const ParamMap& pm) {
                return detail::make_randers(detail::param_const(pm, "B", 0.3),
                                            detail::param_poly(pm, "sigma", Poly2::linear(0.0, 1.0, 0.0)),
                                            true);
            };
            f.dir_plan = {DirKind::UWindow, -2.2, 2.2};
            f.u_interval = {{-2.2, 2.2}};
            add(f);
        }
        {
            Family f;
            f.key = "class1";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Vanishing-T class, branch with Q = c3 - 4 c1/(u + c2) (rational Q)";
            f.dim = 2;
            f.params = {{"c1", Poly2::constant(1.0), true},
                        {"c2", Poly2::constant(1.0), true},
                        {"c3", Poly2::constant(0.0), true}};
            f.build = [](const ParamMap& pm) {
                ClassParams cp;
                cp.branch = ClassBranch::ONE;
                cp.c1 = detail::param_poly(pm, "c1", Poly2::constant(1.0));
                cp.c2 = detail::param_poly(pm, "c2", Poly2::constant(1.0));
                cp.c3 = detail::param_poly(pm, "c3", Poly2::constant(0.0));
                cp.u_interval = {-0.55, 0.25};
                return build_class(cp);
            };
            f.dir_plan = {DirKind::UWindow, -0.55, 0.25};
            f.u_interval = {{-0.55, 0.25}};
            f.class_branch = ClassBranch::ONE;
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "class1_xvar";
            f.expect_landsberg = false;
            f.expect_berwald = false;
            f.title = "Vanishing-T class branch ONE with degree-2 x-varying c1, c2, c3";
            f.dim = 2;
            f.params = {{"c1", Poly2{{0.25, 0.05, 0.0, 0.0, 0.0, 0.02}}, true},
                        {"c2", Poly2{{1.0, 0.0, 0.1, 0.0, 0.0, 0.0}}, true},
                        {"c3", Poly2{{1.0, 0.0, 0.0, 0.0, 0.1, 0.0}}, true}};
            f.build = [](const ParamMap& pm) {
                ClassParams cp;
                cp.branch = ClassBranch::ONE;
                cp.c1 = detail::param_poly(pm, "c1", Poly2{{0.25, 0.05, 0.0, 0.0, 0.0, 0.02}});
                cp.c2 = detail::param_poly(pm, "c2", Poly2{{1.0, 0.0, 0.1, 0.0, 0.0, 0.0}});
                cp.c3 = detail::param_poly(pm, "c3", Poly2{{1.0, 0.0, 0.0, 0.0, 0.1, 0.0}});
                cp.u_interval = {-0.35, 0.35};
                return build_class(cp);
            };
            f.dir_plan = {DirKind::UWindow, -0.35, 0.35};
            f.u_interval = {{-0.35, 0.35}};
            f.class_branch = ClassBranch::ONE;
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "class2";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Vanishing-T class, branch with Q = a u + b (affine Q)";
            f.dim = 2;
            f.params = {{"a", Poly2::constant(2.0), true}, {"b", Poly2::constant(3.0), true}};
            f.build = [](const ParamMap& pm) {
                ClassParams cp;
                cp.branch = ClassBranch::TWO;
                cp.a = detail::param_poly(pm, "a", Poly2::constant(2.0));
                cp.b = detail::param_poly(pm, "b", Poly2::constant(3.0));
                cp.u_interval = {-0.3, 1.2};
                return build_class(cp);
            };
            f.dir_plan = {DirKind::UWindow, -0.3, 1.2};
            f.u_interval = {{-0.3, 1.2}};
            f.class_branch = ClassBranch::TWO;
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "class2_xvar";
            f.expect_landsberg = false;
            f.expect_berwald = false;
            f.title = "Vanishing-T class branch TWO with degree-2 x-varying a, b";
            f.dim = 2;
            f.params = {{"a", Poly2{{2.0, 0.2, 0.0, 0.0, 0.0, 0.1}}, true},
                        {"b", Poly2{{3.0, 0.0, 0.1, 0.05, 0.0, 0.0}}, true}};
            f.build = [](const ParamMap& pm) {
                ClassParams cp;
                cp.branch = ClassBranch::TWO;
                cp.a = detail::param_poly(pm, "a", Poly2{{2.0, 0.2, 0.0, 0.0, 0.0, 0.1}});
                cp.b = detail::param_poly(pm, "b", Poly2{{3.0, 0.0, 0.1, 0.05, 0.0, 0.0}});
                cp.u_interval = {-0.25, 1.2};
                return build_class(cp);
            };
            f.dir_plan = {DirKind::UWindow, -0.25, 1.2};
            f.u_interval = {{-0.25, 1.2}};
            f.class_branch = ClassBranch::TWO;
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "euclidean3";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "Euclidean norm in dimension 3";
            f.dim = 3;
            f.build = [](const ParamMap&) { return detail::make_euclidean(3); };
            f.dir_plan = {DirKind::Sphere, 0.0, 0.0};
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "example1";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "(alpha,beta)-metric phi(s) = sqrt(s)(1-s^2)^(1/4), alpha = |y|, beta = y1 "
                      "(T-condition holds)";
            f.dim = 3;
            f.build = [](const ParamMap&) {
                return build_alpha_beta(AlphaBetaKind::EXAMPLE_1);
            };
            f.dir_plan = {DirKind::SWindow, 0.15, 0.85};
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "tclass";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "(alpha,beta) T-condition class phi = s^((c b^2-1)/(c b^2)) (b^2-s^2)^(1/(2 c b^2))";
            f.dim = 3;
            f.params = {{"c", Poly2::constant(2.0), false}, {"b", Poly2::constant(1.0), false}};
            f.build = [](const ParamMap& pm) {
                AlphaBetaParams p;
                p.c = detail::param_const(pm, "c", 2.0);
                p.b = detail::param_const(pm, "b", 1.0);
                return build_alpha_beta(AlphaBetaKind::T_CLASS, p);
            };
            f.dir_plan = {DirKind::SWindow, 0.15, 0.85};
            f.expect_t_condition = true;
            add(f);
        }
        {
            Family f;
            f.key = "sigmatclass";
            f.expect_landsberg = true;
            f.expect_berwald = true;
            f.title = "(alpha,beta) sigma-T class phi = c3 exp(int (c1 sqrt(b^2-t^2)+c2 t)/"
                      "(t(...)+1) dt) (sigma-T only)";
            f.dim = 3;
            f.params = {{"c1", Poly2::constant(1.0), false},
                        {"c2", Poly2::constant(0.0), false},
                        {"c3", Poly2::constant(1.0), false},
                        {"b", Poly2::constant(1.0), false}};
            f.build = [](const ParamMap& pm) {
                AlphaBetaParams p;
                p.c1 = detail::param_const(pm, "c1", 1.0);
                p.c2 = detail::param_const(pm, "c2", 0.0);
                p.c3 = detail::param_const(pm, "c3", 1.0);
                p.b = detail::param_const(pm, "b", 1.0);
                return build_alpha_beta(AlphaBetaKind::SIGMA_T_CLASS, p);
            };
            f.dir_plan = {DirKind::SWindow, 0.15, 0.85};
            f.sigma_dir = {{1.0, 0.0, 0.0}};
            add(f);
        }
        {
            Family f;
            f.key = "example2";
            f.expect_landsberg = true;
            f.expect_berwald = false;
            f.title = "Conic metric F = (a beta + sqrt(alpha^2 - beta^2)) exp(a beta/(a beta + "
                      "sqrt(alpha^2-beta^2))), beta = f(x1) y1 (sigma-T only)";
            f.dim = 3;
            f.params = {{"a", Poly2::constant(1.0), false}, {"kappa", Poly2::constant(1.0), false}};
            f.build = [](const ParamMap& pm) {
                AlphaBetaParams p;
                p.a = detail::param_const(pm, "a", 1.0);
                p.kappa = detail::param_const(pm, "kappa", 1.0);
                return build_alpha_beta(AlphaBetaKind::EXAMPLE_2, p);
            };
            f.dir_plan = {DirKind::SWindow, 0.2, 0.9};
            f.sigma_dir = {{1.0, 0.0, 0.0}};
            add(f);
        }
        return r;
    }();
    return reg;
}

inline const Family& family(const std::string& key) {
    const auto& reg = registry();
    auto it = reg.find(key);
    if (it == reg.end()) throw std::invalid_argument("unknown family: " + key);
    return it->second;
}

inline FinslerMetric build_family(const std::string& key, const ParamMap& params = {}) {
    const Family& f = family(key);
    for (const auto& [name, val] : params) {
        bool known = false;
        for (const auto& spec : f.params) {
            if (spec.name == name) {
                known = true;
                if (!spec.poly_allowed && !val.is_constant())
                    throw std::invalid_argument("parameter '" + name + "' of family '" + key +
                                                "' must be constant");
            }
        }
        if (!known)
            throw std::invalid_argument("family '" + key + "' has no parameter '" + name + "'");
    }
    return f.build(params);
}

} // namespace finsler
