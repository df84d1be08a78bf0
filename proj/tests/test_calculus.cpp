#include <doctest.h>

#include <cmath>
#include <complex>

#include <graphwave/calculus.hpp>
#include <graphwave/graphs.hpp>
#include <graphwave/soliton.hpp>

#include "oracles.hpp"

using namespace graphwave;

namespace {

RealGraphFunction sech_on_line(const LayoutPtr& layout, double scale = 1.0)
{
    // Both half-lines run outward from the shared vertex, so |x| is the
    // physical coordinate on either one.
    return sample_real(layout, [scale](int, double x) { return scale / std::cosh(x); });
}

struct Lcg {
    uint64_t s = 88172645463325252ull;
    double next()
    {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
    }
};

} // namespace

TEST_CASE("norms of simple functions")
{
    auto layout = GridLayout::make(make_line(), 0.05, 40.0);
    RealGraphFunction zero(layout);
    CHECK(norm_l2(zero) == 0.0);
    CHECK(norm_linf(zero) == 0.0);
    CHECK(norm_h1(zero) == 0.0);

    // mass of sech on the line = 2 (trapezoid on smooth decaying data)
    auto f = sech_on_line(layout);
    CHECK(mass(f) == doctest::Approx(2.0).epsilon(1e-10));

    // constant c on a compact graph of total length L has Lp norm c L^{1/p}
    auto loop_layout = GridLayout::make(make_loop(3.0), 0.02);
    auto c = sample_real(loop_layout, [](int, double) { return 1.7; });
    for (double q : {1.0, 2.0, 5.0})
        CHECK(norm_lp(c, q) == doctest::Approx(1.7 * std::pow(3.0, 1.0 / q)).epsilon(1e-12));
    CHECK(norm_linf(c) == doctest::Approx(1.7));
    CHECK_THROWS_AS(norm_lp(c, 0.5), std::invalid_argument);
}

TEST_CASE("norm homogeneity and triangle inequality on random pairs")
{
    auto layout = GridLayout::make(make_tadpole(), 0.1, 20.0);
    Lcg rng;
    for (int trial = 0; trial < 5; ++trial) {
        RealGraphFunction f(layout), g(layout);
        for (auto& v : f.values()) v = rng.next();
        for (auto& v : g.values()) v = rng.next();
        for (auto kind : {NormKind::L2, NormKind::H1, NormKind::Linf}) {
            const double nf = norm(f, kind);
            auto sf = f;
            sf *= -2.5;
            CHECK(norm(sf, kind) == doctest::Approx(2.5 * nf).epsilon(1e-10));
            CHECK(norm(f + g, kind) <= norm(f, kind) + norm(g, kind) + 1e-10);
        }
    }
}

TEST_CASE("mass and energy are phase-rotation invariant")
{
    auto layout = GridLayout::make(make_tadpole(), 0.05, 30.0);
    auto base = sample<std::complex<double>>(
        layout, [](int e, double x) { return std::complex<double>(std::exp(-x) * (e + 1), 0.3 * x); });
    const double m0 = mass(base);
    const double e0 = energy(base, 1.0);
    for (double theta : {0.4, 1.9, 3.3}) {
        auto rotated = base;
        const std::complex<double> phase = std::polar(1.0, theta);
        for (auto& v : rotated.values()) v *= phase;
        CHECK(std::abs(mass(rotated) - m0) <= 1e-12 * std::max(1.0, m0));
        CHECK(std::abs(energy(rotated, 1.0) - e0) <= 1e-12 * std::max(1.0, std::abs(e0)));
    }
}

TEST_CASE("soliton energy against quadrature oracle")
{
    // E(phi) = int phi'^2 - int phi^4 = -2/3 for p = 1, omega = -1.
    auto layout = GridLayout::make(make_line(), 0.02, 40.0);
    auto f = sech_on_line(layout);
    const double expected = oracles::simpson(
        [](double x) {
            const double s = 1.0 / std::cosh(x), t = std::tanh(x);
            return 2.0 * (s * s * t * t - s * s * s * s); // doubled half-line
        },
        0.0, 40.0);
    CHECK(expected == doctest::Approx(-2.0 / 3.0).epsilon(1e-10));
    CHECK(energy(f, 1.0) == doctest::Approx(expected).epsilon(2e-4));
}

TEST_CASE("p = 2 soliton mass by grid quadrature")
{
    auto layout = GridLayout::make(make_line(), 0.01, 40.0);
    const SolitonParams sp(-1.0, 2.0);
    auto f = sample_real(layout, [&](int, double x) { return nls_soliton(sp, x); });
    CHECK(mass(f) == doctest::Approx(M_PI / 2).epsilon(1e-8));
}

TEST_CASE("grid refinement changes mass and energy at second order")
{
    // (x-1)^2 on [0,3] has nonzero boundary derivatives of the integrand,
    // so the trapezoid error term h^2/12 [g'] is genuinely present.
    const double exact_mass = oracles::simpson([](double x) { return std::pow(x - 1.0, 4.0); }, 0.0, 3.0);
    double err[3];
    const double targets[3] = {3.0 / 120, 3.0 / 240, 3.0 / 480};
    for (int i = 0; i < 3; ++i) {
        auto layout = GridLayout::make(make_interval(3.0), targets[i]);
        auto f = sample_real(layout, [](int, double x) { return (x - 1.0) * (x - 1.0); });
        err[i] = std::abs(mass(f) - exact_mass);
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);

    // kinetic part of the energy on a soliton profile
    double eerr[3];
    for (int i = 0; i < 3; ++i) {
        auto layout = GridLayout::make(make_line(), 0.1 / (1 << i), 40.0);
        auto f = sech_on_line(layout);
        eerr[i] = std::abs(energy(f, 1.0) + 2.0 / 3.0);
    }
    CHECK(std::log2(eerr[0] / eerr[1]) >= 1.9);
    CHECK(std::log2(eerr[1] / eerr[2]) >= 1.9);
}

TEST_CASE("Gagliardo-Nirenberg quotients")
{
    // the non-compact form is rejected on a compact graph
    auto loop_layout = GridLayout::make(make_loop(2.0), 0.02);
    auto c = sample_real(loop_layout, [](int, double) { return 1.0; });
    CHECK_THROWS_AS(gn_check(c, 4.0, false), std::invalid_argument);
    CHECK(gn_check(c, 4.0, true) > 0.0); // compact form fine

    auto layout = GridLayout::make(make_line(), 0.05, 40.0);
    auto f = sech_on_line(layout);
    const double r1 = gn_check(f, 4.0, false);
    CHECK(r1 > 0.0);
    CHECK(std::isfinite(r1));

    // amplitude invariance
    auto g = sech_on_line(layout, 3.7);
    CHECK(std::abs(gn_check(g, 4.0, false) - r1) < 1e-12 * r1);

    // dilation family on the line keeps the quotient bounded
    for (double lam : {0.5, 1.0, 2.0, 4.0}) {
        auto fl = sample_real(layout,
                              [lam](int, double x) { return std::sqrt(lam) / std::cosh(lam * x); });
        const double r = gn_check(fl, 4.0, false);
        CHECK(r > 0.05);
        CHECK(r < 2.0);
    }

    RealGraphFunction zero(layout);
    CHECK_THROWS_AS(gn_check(zero, 4.0, false), std::invalid_argument);
    CHECK_THROWS_AS(gn_check(f, 1.5, false), std::invalid_argument);
}

TEST_CASE("continuity defect and vertex values")
{
    auto layout = GridLayout::make(make_line(), 0.05, 20.0);
    auto f = sech_on_line(layout);
    CHECK(continuity_defect(f) < 1e-14);
    CHECK(vertex_value(f, 0) == doctest::Approx(1.0));

    auto g = f;
    g.at(0, 0) += 0.01; // break continuity on one end
    CHECK(continuity_defect(g) == doctest::Approx(0.01));
}

TEST_CASE("nonlinearity mask localizes the focusing term")
{
    // same samples, focusing active only on the loop: the energies differ
    // by exactly the tail contribution
    MetricGraph full = make_tadpole();
    MetricGraph masked;
    masked.add_vertex("o");
    masked.add_edge("loop", "o", "o", 2 * M_PI);
    masked.add_half_line("tail", "o", false);
    auto lf = GridLayout::make(full, 0.05, 20.0);
    auto lm = GridLayout::make(masked, 0.05, 20.0);
    auto f_full = sample_real(lf, [](int, double x) { return std::exp(-0.5 * x); });
    auto f_mask = sample_real(lm, [](int, double x) { return std::exp(-0.5 * x); });
    const double tail_focus = oracles::simpson(
        [](double x) { return std::pow(std::exp(-0.5 * x), 4.0); }, 0.0, 20.0);
    CHECK(energy(f_mask, 1.0) - energy(f_full, 1.0) ==
          doctest::Approx(tail_focus).epsilon(2e-3));
}

TEST_CASE("energy rejects invalid powers and delta-prime strength")
{
    auto layout = GridLayout::make(make_line(), 0.1, 10.0);
    auto f = sech_on_line(layout);
    CHECK_THROWS_AS(energy(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(energy(f, 2.5), std::invalid_argument);

    MetricGraph g;
    g.add_vertex("o", VertexCondition::delta_prime(0.0));
    g.add_half_line("e", "o");
    auto bad_layout = GridLayout::make(g, 0.1, 10.0);
    auto h = sample_real(bad_layout, [](int, double x) { return std::exp(-x); });
    CHECK_THROWS_AS(energy(h, 1.0), std::invalid_argument);
}
