#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>

#include "finsler/conditions.hpp"
#include "finsler/families.hpp"
#include "finsler/scalar_field.hpp"

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

std::vector<std::array<double, 3>> family_dirs(const std::string& key, std::span<const double> x,
                                               int nd) {
    const Family& fam = family(key);
    auto F = fam.build({});
    SamplePlan plan;
    plan.count_dir = nd;
    plan.domain_margin = 0.02;
    return draw_directions(F, x, fam.dir_plan, plan);
}

} // namespace

TEST_CASE("T-tensor vanishes for Riemannian metrics") {
    const std::array<double, 2> x2{0.2, -0.1};
    auto riem = build_family("riemannian");
    CHECK(max_abs(t_tensor(riem, x2, std::array<double, 2>{0.8, 0.5}).T) < 1e-12);
    const std::array<double, 3> x3{0.0, 0.1, 0.2};
    auto eu3 = build_family("euclidean3");
    CHECK(max_abs(t_tensor(eu3, x3, std::array<double, 3>{0.4, 0.7, -0.5}).T) < 1e-12);
}

TEST_CASE("T-tensor symmetry and indicatory property") {
    auto F = build_family("example2");
    const std::array<double, 3> x{0.1, -0.3, 0.2};
    const std::array<double, 3> y{0.5, 0.6, -0.4};
    auto tt = t_tensor(F, x, y);
    const int idx[4] = {0, 1, 2, 1};
    int perm[4] = {0, 1, 2, 3};
    std::sort(perm, perm + 4);
    const double base = tt.T(idx[0], idx[1], idx[2], idx[3]);
    do {
        CHECK(tt.T(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]) ==
              Catch::Approx(base).margin(1e-10 * std::max(1.0, std::abs(base))));
    } while (std::next_permutation(perm, perm + 4));

    // contraction with y vanishes on every slot
    for (int slot = 0; slot < 4; ++slot)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double s = 0.0;
                    for (int r = 0; r < 3; ++r) {
                        int id[4] = {i, j, k, 0};
                        id[3] = id[slot];
                        id[slot] = r;
                        s += tt.T(id[0], id[1], id[2], id[3]) * y[r];
                    }
                    CHECK(std::abs(s) < 1e-8);
                }
}

TEST_CASE("surface T-tensor decomposes through the main scalar") {
    auto F = build_family("randers_conformal");
    ScalarField I = main_scalar_field(F);
    for (const auto& s : family_samples("randers_conformal", 2, 3, 19)) {
        auto xs = s.xs(2);
        auto ys = s.ys(2);
        auto tt = t_tensor(F, xs, ys);
        auto fr = berwald_frame(F, xs, ys);
        auto hd = horizontal_scalar_derivatives(F, I, xs, ys);
        for (int h = 0; h < 2; ++h)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) {
                        const double want = hd.v2 / fr.F * fr.m_up[h] * fr.m_low[i] *
                                            fr.m_low[j] * fr.m_low[k];
                        CHECK(std::abs(tt.T_up1(h, i, j, k) - want) < 1e-7);
                    }
    }
}

TEST_CASE("v-curvature: surfaces flat, antisymmetry, Riemannian nullity") {
    auto F2 = build_family("randers_conformal");
    const std::array<double, 2> x2{0.3, 0.1};
    CHECK(max_abs(v_curvature(F2, x2, std::array<double, 2>{1.0, 0.4})) < 1e-10);

    auto F3 = build_family("example2");
    const std::array<double, 3> x3{0.1, 0.0, -0.2};
    const std::array<double, 3> y3{0.6, 0.5, -0.3};
    auto S = v_curvature(F3, x3, y3);
    CHECK(max_abs(S) > 1e-4);  // the S-group is active on this family
    for (int i = 0; i < 3; ++i)
        for (int h = 0; h < 3; ++h)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    CHECK(S(i, h, j, k) == -S(i, h, k, j));

    auto eu3 = build_family("euclidean3");
    CHECK(max_abs(v_curvature(eu3, x3, y3)) < 1e-14);
}

TEST_CASE("check_t_condition verdicts") {
    auto eu = build_family("euclidean");
    auto rep_eu = check_t_condition(eu, family_samples("euclidean", 2, 6));
    CHECK(rep_eu.verdict);
    CHECK(rep_eu.max_residual < 1e-12);

    auto cls = build_family("class2");
    auto rep_c = check_t_condition(cls, family_samples("class2", 3, 6));
    CHECK(rep_c.verdict);
    CHECK(rep_c.max_residual < 1e-7);

    auto randers = build_family("randers");
    auto rep_r = check_t_condition(randers, family_samples("randers", 2, 6));
    CHECK_FALSE(rep_r.verdict);
    CHECK(rep_r.max_residual > 1e-3);

    CHECK_THROWS_AS(check_t_condition(eu, std::span<const Sample>{}), std::invalid_argument);
}

TEST_CASE("sigma-T kernel analysis in dimension 3") {
    const std::array<double, 3> x{0.15, -0.2, 0.3};
    const double e1[3] = {1.0, 0.0, 0.0};

    auto ex1 = build_family("example1");
    auto rep1 = check_sigma_t(ex1, x, family_dirs("example1", x, 8), e1);
    CHECK(rep1.verdict == SigmaTVerdict::T_CONDITION);
    CHECK(rep1.kernel_dim == 3);
    CHECK(rep1.max_t_residual < 1e-7);

    auto ex2 = build_family("example2");
    auto rep2 = check_sigma_t(ex2, x, family_dirs("example2", x, 8), e1);
    CHECK(rep2.verdict == SigmaTVerdict::SIGMA_T_ONLY);
    CHECK(rep2.kernel_dim == 1);
    CHECK(rep2.max_t_residual > 1e-3);  // some components T^mu are order one
    CHECK(rep2.sigma_residual < 1e-7);  // but sigma_r T^r = 0 for sigma_r ~ e_1
    REQUIRE(rep2.witness.size() == 1);
    CHECK(std::abs(std::abs(rep2.witness[0][0]) - 1.0) < 1e-6);
    CHECK(std::abs(rep2.witness[0][1]) < 1e-6);
    CHECK(std::abs(rep2.witness[0][2]) < 1e-6);

    auto stc = build_family("sigmatclass");
    auto rep3 = check_sigma_t(stc, x, family_dirs("sigmatclass", x, 8), e1);
    CHECK(rep3.kernel_dim >= 1);
    CHECK(rep3.max_t_residual > 1e-3);
    CHECK(rep3.sigma_residual < 1e-7);

    CHECK_THROWS_AS(check_sigma_t(ex2, x, std::span<const std::array<double, 3>>{}, e1),
                    std::invalid_argument);
}

TEST_CASE("two-dimensional dichotomy: kernel dimension is 0 or 2, never 1") {
    for (const char* key : {"randers", "randers_conformal", "class1", "class2"}) {
        const Family& fam = family(key);
        auto F = fam.build({});
        SamplePlan plan;
        plan.count_x = 3;
        plan.count_dir = 5;
        plan.seed = 31;
        plan.domain_margin = 0.02;
        for (const auto& x : draw_base_points(2, plan)) {
            auto dirs =
                draw_directions(F, std::span<const double>(x.data(), 2), fam.dir_plan, plan);
            auto rep = check_sigma_t(F, std::span<const double>(x.data(), 2), dirs);
            CHECK(rep.kernel_dim != 1);
            if (fam.expect_t_condition)
                CHECK(rep.verdict == SigmaTVerdict::T_CONDITION);
            else
                CHECK(rep.verdict == SigmaTVerdict::NEITHER);
        }
    }
}
