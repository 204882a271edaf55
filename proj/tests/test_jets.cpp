#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "finsler/jet.hpp"
#include "finsler/quadrature.hpp"
#include "support/oracles.hpp"

using namespace finsler;

namespace {

Jet uvar(std::shared_ptr<const JetConfig> cfg, double v) { return Jet::variable(cfg, 0, v); }

MultiIndex mi(std::initializer_list<int> slots) {
    MultiIndex e{};
    for (int s : slots) e[s] += 1;
    return e;
}

} // namespace

TEST_CASE("jet ring arithmetic on polynomials") {
    auto cfg = JetConfig::make(0, 1, 0, 2);
    Jet u = uvar(cfg, 0.0);
    Jet p = (1.0 + u) * (1.0 - u);  // 1 - u^2
    CHECK(p.value() == Catch::Approx(1.0));
    CHECK(p.coeff(mi({0})) == Catch::Approx(0.0).margin(1e-15));
    CHECK(p.derivative(mi({0, 0})) == Catch::Approx(-2.0));

    Jet c1 = Jet::constant(cfg, 1.0), c2 = Jet::constant(cfg, 2.0);
    CHECK((c1 / c2).value() == Catch::Approx(0.5));

    Jet f = 3.0 + uvar(JetConfig::make(0, 1, 0, 4), 0.0);
    Jet prod = f * (Jet::constant(f.config(), 1.0) / f);
    CHECK(prod.value() == Catch::Approx(1.0));
    for (int k = 1; k <= 4; ++k) {
        MultiIndex e{};
        e[0] = static_cast<std::uint8_t>(k);
        CHECK(std::abs(prod.coeff(e)) < 1e-14);
    }
}

TEST_CASE("jet division requires nonzero constant term and matching configs") {
    auto cfg = JetConfig::make(0, 1, 0, 2);
    Jet u = uvar(cfg, 0.0);
    CHECK_THROWS_AS(u / u, std::domain_error);
    auto cfg2 = JetConfig::make(0, 2, 0, 2);
    Jet v = Jet::variable(cfg2, 0, 1.0);
    CHECK_THROWS_AS(u + v, std::invalid_argument);
}

TEST_CASE("elementary functions compose as truncated Taylor series") {
    auto cfg = JetConfig::make(0, 1, 0, 3);

    SECTION("sqrt at 4 with unit slope") {
        Jet a = uvar(cfg, 4.0);
        Jet r = sqrt(a);
        CHECK(r.value() == Catch::Approx(2.0));
        CHECK(r.coeff(mi({0})) == Catch::Approx(0.25));
    }

    SECTION("exp(log(a)) is the identity") {
        Jet a = 2.7 + uvar(cfg, 0.0) * 1.3;
        Jet b = exp(log(a));
        for (int p = 0; p < a.config()->size(); ++p)
            CHECK(b.coeff_at(p) == Catch::Approx(a.coeff_at(p)).margin(1e-14));
    }

    SECTION("atanh against series oracle") {
        Jet a = uvar(cfg, 0.5);
        Jet r = atanh(a);
        CHECK(std::abs(r.value() - oracles::atanh_series(0.5)) < 1e-12);
        CHECK(r.value() == Catch::Approx(0.549306).margin(5e-7));
        CHECK(r.derivative(mi({0})) == Catch::Approx(1.0 / 0.75));
        CHECK(r.derivative(mi({0})) == Catch::Approx(1.333333).margin(5e-7));
    }

    SECTION("domain violations are hard errors") {
        CHECK_THROWS_AS(sqrt(uvar(cfg, -1.0)), std::domain_error);
        CHECK_THROWS_AS(log(uvar(cfg, 0.0)), std::domain_error);
        CHECK_THROWS_AS(atanh(uvar(cfg, 1.0)), std::domain_error);
    }
}

TEST_CASE("extract_derivative returns true partials") {
    auto cfg = JetConfig::make(0, 2, 0, 2);
    Jet y1 = Jet::variable(cfg, 0, 3.0);
    Jet y2 = Jet::variable(cfg, 1, 4.0);
    Jet F = sqrt(y1 * y1 + y2 * y2);
    CHECK(F.derivative(mi({0})) == Catch::Approx(0.6));
    CHECK(F.value() == Catch::Approx(5.0));  // zero multi-index is the value

    Jet E = (y1 * y1 + y2 * y2) * 0.5;
    CHECK(E.derivative(mi({0, 0})) == Catch::Approx(1.0));

    MultiIndex bad{};
    bad[0] = 3;
    CHECK_THROWS_AS(F.derivative(bad), std::out_of_range);
}

TEST_CASE("Leibniz property at first order") {
    auto cfg = JetConfig::make(0, 2, 0, 3);
    std::mt19937_64 rng(7);
    auto rnd = [&] { return 0.5 + (rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 20; ++trial) {
        Jet u = Jet::variable(cfg, 0, rnd());
        Jet v = Jet::variable(cfg, 1, rnd());
        Jet a = exp(u * 0.3) + v * v;
        Jet b = sqrt(u + v * 2.0);
        Jet ab = a * b;
        for (int slot = 0; slot < 2; ++slot) {
            const double lhs = ab.derivative(mi({slot}));
            const double rhs =
                a.value() * b.derivative(mi({slot})) + b.value() * a.derivative(mi({slot}));
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("composition associativity: exp(u+v) = exp(u)exp(v)") {
    auto cfg = JetConfig::make(0, 2, 0, 5);
    Jet u = Jet::variable(cfg, 0, 0.3);
    Jet v = Jet::variable(cfg, 1, -0.2);
    Jet lhs = exp(u + v);
    Jet rhs = exp(u) * exp(v);
    for (int p = 0; p < cfg->size(); ++p)
        CHECK(lhs.coeff_at(p) ==
              Catch::Approx(rhs.coeff_at(p)).epsilon(1e-12).margin(1e-12));
}

TEST_CASE("jet partials of order <= 3 match central finite differences") {
    // mixed x/y lattice as used by the spray computation
    auto cfg = JetConfig::make(2, 2, 1, 3);
    auto eval = [](std::span<const double> x, std::span<const double> y) {
        return std::sqrt(y[0] * y[0] + 1.3 * y[1] * y[1] + 0.2 * x[0] * y[0] * y[1]) *
               std::exp(0.1 * x[0] + 0.05 * x[1] * x[1]);
    };
    const std::array<double, 2> x{0.4, -0.3}, y{1.1, 0.7};
    Jet fx = [&] {
        std::vector<Jet> xs{Jet::variable(cfg, 0, x[0]), Jet::variable(cfg, 1, x[1])};
        std::vector<Jet> ys{Jet::variable(cfg, 2, y[0]), Jet::variable(cfg, 3, y[1])};
        return sqrt(ys[0] * ys[0] + ys[1] * ys[1] * 1.3 + xs[0] * ys[0] * ys[1] * 0.2) *
               exp(xs[0] * 0.1 + xs[1] * xs[1] * 0.05);
    }();

    using oracles::Shift;
    struct Case {
        MultiIndex e;
        std::vector<Shift> shifts;
    };
    std::vector<Case> cases = {
        {mi({2}), {{true, 0}}},
        {mi({3}), {{true, 1}}},
        {mi({2, 3}), {{true, 0}, {true, 1}}},
        {mi({2, 2}), {{true, 0}, {true, 0}}},
        {mi({2, 2, 3}), {{true, 0}, {true, 0}, {true, 1}}},
        {mi({0}), {{false, 0}}},
        {mi({1, 3}), {{false, 1}, {true, 1}}},
        {mi({0, 2, 3}), {{false, 0}, {true, 0}, {true, 1}}},
    };
    for (const auto& c : cases) {
        const double jet_val = fx.derivative(c.e);
        const double fd_val = oracles::fd_partial(eval, x, y, c.shifts);
        CHECK(oracles::rel_err(jet_val, fd_val) < 1e-5);
    }
}

TEST_CASE("adaptive quadrature hits closed forms") {
    auto one_over_1pt2 = [](double t) { return 1.0 / (1.0 + t * t); };
    const double v = integrate_adaptive<double>(one_over_1pt2, 0.0, 1.0, 1e-12);
    CHECK(v == Catch::Approx(std::atan(1.0)).epsilon(1e-12));

    // degree-13 polynomial is exact for a single K15 panel
    auto poly = [](double t) { return 14.0 * std::pow(t, 13); };
    double err = 0.0;
    const double p = gauss_kronrod_15<double>(poly, 0.0, 1.0, err);
    CHECK(p == Catch::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(integrate_adaptive<double>([](double t) { return 1.0 / t; }, -1.0, 1.0, 1e-10),
                    QuadratureError);
}

TEST_CASE("quadrature with jet-valued upper limit") {
    // A(u) = \int_0^u t/(1+t^2) dt = log(1+u^2)/2, lifted over a fiber jet
    auto cfg = JetConfig::make(0, 1, 0, 4);
    Jet u = uvar(cfg, 0.7);
    auto q = [](const Jet& t) { return t / (1.0 + t * t); };
    Jet A = integral_to_limit(q, 0.0, u, 1e-12);
    Jet want = log(1.0 + u * u) * 0.5;
    for (int p = 0; p < cfg->size(); ++p)
        CHECK(A.coeff_at(p) == Catch::Approx(want.coeff_at(p)).margin(1e-10));
}
