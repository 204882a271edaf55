#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "finsler/conformal.hpp"
#include "finsler/families.hpp"
#include "support/b_oracle.hpp"

using namespace finsler;

namespace {

std::vector<Sample> family_samples(const std::string& key, int nx, int nd,
                                   std::uint64_t seed = 11) {
    const Family& fam = family(key);
    auto F = fam.build({});
    SamplePlan plan;
    plan.count_x = nx;
    plan.count_dir = nd;
    plan.seed = seed;
    plan.domain_margin = 0.02;
    return draw_samples(F, fam.dir_plan, plan);
}

} // namespace

TEST_CASE("conformal scaling of the metric and its tensors") {
    auto F = build_family("randers");
    const std::array<double, 2> x{0.3, -0.2};
    const std::array<double, 2> y{1.0, 0.4};

    auto id = conformal_scale(F, make_conformal(Poly2::constant(0.0)));
    CHECK(id.value(x, y) == Catch::Approx(F.value(x, y)).epsilon(1e-15));

    auto doubled = conformal_scale(F, make_conformal(Poly2::constant(std::log(2.0))));
    CHECK(doubled.value(x, y) == Catch::Approx(2.0 * F.value(x, y)).epsilon(1e-14));
    auto g0 = metric_tensor(F, x, y);
    auto g2 = metric_tensor(doubled, x, y);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(g2.g(i, j) == Catch::Approx(4.0 * g0.g(i, j)).margin(1e-12));

    // sigma = x1: l-bar_i = e^sigma l_i and g-bar = e^{2 sigma} g
    auto cf = make_conformal(Poly2::linear(0.0, 1.0, 0.0));
    CHECK_FALSE(cf.is_homothety);
    auto Fb = conformal_scale(F, cf);
    const double es = std::exp(cf.value(x));
    auto E0 = energy(F, x, y, 1, 0);
    auto Eb = energy(Fb, x, y, 1, 0);
    for (int i = 0; i < 2; ++i) {
        const double l0 = E0.derivative(detail::miy(2, {i})) / F.value(x, y);
        const double lb = Eb.derivative(detail::miy(2, {i})) / Fb.value(x, y);
        CHECK(lb == Catch::Approx(es * l0).margin(1e-10));
    }
    auto gb = metric_tensor(Fb, x, y);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(gb.g(i, j) == Catch::Approx(es * es * g0.g(i, j)).margin(1e-10));

    // T transforms by e^{3 sigma}
    auto t0 = t_tensor(F, x, y);
    auto tb = t_tensor(Fb, x, y);
    for (int a = 0; a < 16; ++a)
        CHECK(tb.T.v[a] == Catch::Approx(es * es * es * t0.T.v[a]).margin(1e-9));
}

TEST_CASE("Landsberg transformation law") {
    auto samples2 = family_samples("randers", 2, 4);
    auto F = build_family("randers");

    // homothety: L-bar = e^{2 sigma} L exactly (and both vanish here)
    auto hom = verify_landsberg_law(F, make_conformal(Poly2::constant(0.4)), samples2);
    CHECK(hom.max_residual < 1e-8);

    // non-homothetic sigma on a T != 0 Landsberg surface: law holds but the
    // scaled metric is no longer Landsberg (Theorem on conformal rigidity)
    auto cf = make_conformal(Poly2::linear(0.0, 1.0, 1.0));
    auto law = verify_landsberg_law(F, cf, samples2);
    CHECK(law.max_residual < 1e-7);
    CHECK(law.max_lbar > 1e-3);

    // vanishing-T class: the Landsberg tensor is conformally invariant,
    // L-bar = e^{2 sigma} L (the x-varying class is not Landsberg itself)
    for (const char* key : {"class1", "class2_xvar"}) {
        auto cls = build_family(key);
        auto cls_samples = family_samples(key, 2, 3);
        for (const auto& cfb : sigma_battery()) {
            auto rep = verify_landsberg_law(cls, cfb, cls_samples);
            CHECK(rep.max_residual < 1e-7);
            CHECK(rep.max_invariance < 1e-7);
        }
    }
    {
        auto rep0 = verify_landsberg_law(build_family("class2_xvar"),
                                         make_conformal(Poly2::constant(0.0)),
                                         family_samples("class2_xvar", 2, 3));
        CHECK(rep0.max_lbar > 1e-3);  // vanishing T does not force Landsberg
    }

    // dimension 3 with active S-group
    auto ex2 = build_family("example2");
    auto samples3 = family_samples("example2", 2, 3);
    auto law3 = verify_landsberg_law(ex2, cf, samples3);
    CHECK(law3.max_residual < 1e-7);
}

TEST_CASE("B-tensor: homothety, oracle agreement, mode agreement") {
    auto cf = make_conformal(Poly2::linear(0.0, 1.0, -0.5));
    const std::array<double, 2> x2{0.2, -0.1};

    auto F2 = build_family("randers");
    for (double u : {-0.6, 0.4, 1.3}) {
        const std::array<double, 2> y{0.9, 0.9 * u};
        auto Bo = oracles::b_tensor_direct(F2, cf, x2, y);
        auto Bf = b_tensor(F2, cf, x2, y, BTensorMode::FiniteDifference);
        auto Bj = b_tensor(F2, cf, x2, y, BTensorMode::JetOrder5);
        for (int a = 0; a < 16; ++a) {
            CHECK(std::abs(Bf.v[a] - Bo.v[a]) < 1e-7);
            CHECK(std::abs(Bj.v[a] - Bo.v[a]) < 1e-12);
        }
        // on surfaces the v-curvature group is identically zero
        auto parts = detail::b_tensor_parts(F2, cf, x2, y, BTensorMode::JetOrder5);
        CHECK(max_abs(detail::b_group_vcurv(parts)) < 1e-15);
        // homothety: every term carries sigma_r
        auto Bh = b_tensor(F2, make_conformal(Poly2::constant(0.9)), x2, y);
        CHECK(max_abs(Bh) < 1e-12);
    }

    auto F3 = build_family("example2");
    const std::array<double, 3> x3{0.2, -0.1, 0.3};
    const std::array<double, 3> y3{0.7, 0.6, -0.4};
    auto Bo3 = oracles::b_tensor_direct(F3, cf, x3, y3);
    auto Bf3 = b_tensor(F3, cf, x3, y3, BTensorMode::FiniteDifference);
    auto Bj3 = b_tensor(F3, cf, x3, y3, BTensorMode::JetOrder5);
    CHECK(max_abs(Bo3) > 1.0);
    for (int a = 0; a < 81; ++a) {
        CHECK(std::abs(Bf3.v[a] - Bo3.v[a]) < 1e-7);
        CHECK(std::abs(Bj3.v[a] - Bo3.v[a]) < 1e-12);
    }
}

TEST_CASE("Berwald curvature difference equals the B-tensor") {
    auto cf = make_conformal(Poly2::linear(0.0, 1.0, 0.0));
    for (const char* key : {"randers", "class2"}) {
        auto F = build_family(key);
        auto Fb = conformal_scale(F, cf);
        for (const auto& s : family_samples(key, 2, 3, 43)) {
            auto B = b_tensor(F, cf, s.xs(2), s.ys(2));
            auto sb = spray(Fb, s.xs(2), s.ys(2));
            auto s0 = spray(F, s.xs(2), s.ys(2));
            for (int a = 0; a < 16; ++a)
                CHECK(std::abs(sb.G_h_ijk.v[a] - s0.G_h_ijk.v[a] - B.v[a]) < 1e-6);
        }
    }
    auto F3 = build_family("example2");
    auto Fb3 = conformal_scale(F3, cf);
    for (const auto& s : family_samples("example2", 1, 3, 7)) {
        auto B = b_tensor(F3, cf, s.xs(3), s.ys(3));
        auto sb = spray(Fb3, s.xs(3), s.ys(3));
        auto s0 = spray(F3, s.xs(3), s.ys(3));
        for (int a = 0; a < 81; ++a)
            CHECK(std::abs(sb.G_h_ijk.v[a] - s0.G_h_ijk.v[a] - B.v[a]) < 1e-6);
    }
}

TEST_CASE("conformal change of the surface spray factors") {
    const std::array<double, 2> x{0.25, -0.1};

    // constant sigma leaves f1, f2 unchanged
    auto F = build_family("randers");
    auto ff = f_form(F);
    auto cf0 = make_conformal(Poly2::constant(0.8));
    auto r0 = surface_conformal_f12(ff, cf0, x, 0.4);
    auto ev0 = fform_eval(ff, x, 0.4);
    CHECK(r0.f1_bar == Catch::Approx(ev0.f1).margin(1e-12));
    CHECK(r0.f2_bar == Catch::Approx(ev0.f2).margin(1e-12));

    // f = sqrt(1+u^2): Q = u, Q' = 1
    ParamMap pm;
    pm["B"] = Poly2::constant(0.0);
    auto eu = build_family("randers", pm);
    auto ffe = f_form(eu);
    auto cf = make_conformal(Poly2::linear(0.0, 0.6, -0.3));
    for (double u : {-0.7, 0.2, 1.1}) {
        auto r = surface_conformal_f12(ffe, cf, x, u);
        const double s1 = 0.6, s2 = -0.3;
        CHECK(r.f1_bar ==
              Catch::Approx(0.5 * (s1 + u * s2) + 0.5 * s2 * u - 0.5 * s1 * u * u).margin(1e-10));
        // cross-check against the f-form of the scaled metric
        auto ffbar = f_form(conformal_scale(eu, cf));
        auto evb = fform_eval(ffbar, x, u);
        CHECK(r.f1_bar == Catch::Approx(evb.f1).margin(1e-9));
        CHECK(r.f2_bar == Catch::Approx(evb.f2).margin(1e-9));
    }

    // the same cross-check on a curved family
    auto cls = build_family("class1_xvar");
    auto ffc = f_form(cls);
    for (double u : {-0.2, 0.1, 0.3}) {
        auto r = surface_conformal_f12(ffc, cf, x, u);
        auto evb = fform_eval(f_form(conformal_scale(cls, cf)), x, u);
        CHECK(r.f1_bar == Catch::Approx(evb.f1).margin(1e-9));
        CHECK(r.f2_bar == Catch::Approx(evb.f2).margin(1e-9));
    }
}

TEST_CASE("third-derivative identity for f1 + Q f2 under conformal change") {
    const std::array<double, 2> x{0.2, 0.15};
    for (const char* key : {"randers", "class2", "class1"}) {
        auto F = build_family(key);
        const auto iv = *family(key).u_interval;
        for (const auto& cf : sigma_battery())
            for (double t : {0.25, 0.6, 0.85}) {
                const double u = iv[0] + t * (iv[1] - iv[0]);
                auto qp = q_from_f(f_form(F), x, u);
                if (std::abs(qp.Q1) <= 1e-6) continue;
                auto r = conformal_f12_identity(F, cf, x, u);
                CHECK(r.residual < 1e-8);
            }
    }
}
