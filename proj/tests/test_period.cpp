#include <doctest.h>

#include <cmath>

#include <graphwave/elliptic.hpp>
#include <graphwave/period.hpp>

#include "oracles.hpp"

using namespace graphwave;

TEST_CASE("period agrees with the ODE shooting oracle")
{
    // independent route: integrate the stationary equation from the turning
    // point and measure z at the first crossing of u = p
    const PeriodQuery q{0.5, 0.2, 1.0};
    const double T = period_T(q);
    const double p_plus = turning_point(LevelCurve(q.beta(), 1.0));
    const double T_oracle = oracles::shoot_z_at_level(p_plus, 0.5, 1.0);
    CHECK(std::abs(T - T_oracle) < 1e-8);
}

TEST_CASE("period oracle agreement for non-cubic powers")
{
    for (double p : {0.6, 1.5}) {
        const PeriodQuery q{0.4, 0.15, p};
        const double p_plus = turning_point(LevelCurve(q.beta(), p));
        CHECK(std::abs(period_T(q) - oracles::shoot_z_at_level(p_plus, 0.4, p)) < 1e-8);
    }
}

TEST_CASE("logarithmic divergence as p, q -> 0")
{
    // T ~ -ln(p + q) with an O(1) offset, so the ratio approaches 1 from
    // above like 1/ln along p = q -> 0
    double prev_excess = 1e300;
    for (double p : {1e-3, 1e-6, 1e-9, 1e-12}) {
        const double T = period_T({p, p, 1.0});
        const double excess = T / (-std::log(p + p)) - 1.0;
        CHECK(excess > 0.0);
        CHECK(excess < 0.8 * prev_excess);
        prev_excess = excess;
    }
    CHECK(prev_excess < 0.06);
}

TEST_CASE("monotone decrease in q below the constant state")
{
    for (double p : {0.2, 0.5, 0.65}) {
        double prev = 1e300;
        for (int i = 1; i <= 24; ++i) {
            const double q = 0.08 * i;
            const double T = period_T({p, q, 1.0});
            CHECK(T < prev);
            prev = T;
        }
    }
}

TEST_CASE("interior maximum of T in q exists only below the crossing value")
{
    auto q1 = qmax(0.75);
    REQUIRE(q1.has_value());
    const double A = level_A(0.75, 1.0);
    CHECK(*q1 > 0.0);
    CHECK(*q1 < std::sqrt(A));
    // verify it is a genuine interior maximum
    const double Tm = period_T({0.75, *q1, 1.0});
    CHECK(Tm > period_T({0.75, *q1 * 0.9, 1.0}));
    CHECK(Tm > period_T({0.75, *q1 * 1.1, 1.0}));

    CHECK_FALSE(qmax(0.9).has_value());
    CHECK_THROWS_AS(qmax(0.5), std::invalid_argument);
}

TEST_CASE("T vanishes at both scan ends above the constant state")
{
    const double p = 0.85;
    const double qh = std::sqrt(level_A(p, 1.0));
    // q -> 0: the endpoint collides with its own turning point
    CHECK(period_T({p, 1e-6, 1.0}) < 1e-4);
    // q -> infinity: decay like q^{-1/2}
    double prev = period_T({p, 10.0, 1.0});
    for (double q : {40.0, 160.0, 640.0}) {
        const double T = period_T({p, q, 1.0});
        CHECK(T < 0.62 * prev);
        prev = T;
    }
    CHECK(prev < 0.08);
    CHECK(period_T({p, 0.5 * qh, 1.0}) > period_T({p, 1e-6, 1.0}));
}

TEST_CASE("small-endpoint partial derivatives are negative")
{
    const double d = 1e-3;
    for (double p : {0.01, 0.03, 0.049}) {
        for (double q : {0.01, 0.03, 0.049}) {
            const double dp =
                period_T({p + d, q, 1.0}) - period_T({p - d, q, 1.0});
            const double dq =
                period_T({p, q + d, 1.0}) - period_T({p, q - d, 1.0});
            CHECK(dp < 0.0);
            CHECK(dq < 0.0);
        }
    }
}

TEST_CASE("tadpole root scan is strictly decreasing and matches limits")
{
    // strict decrease of p -> T(p, sqrt(A(p))/2)
    double prev = 1e300;
    for (int i = 1; i <= 30; ++i) {
        const double p = i / 31.0;
        const double T = period_T({p, 0.5 * std::sqrt(level_A(p, 1.0)), 1.0});
        CHECK(T < prev);
        prev = T;
    }

    // small eps pushes the root toward 1
    double prev_root = 0.0;
    for (double eps : {0.2, 0.1, 0.05, 0.01}) {
        const double r = tadpole_root(eps);
        CHECK(r > prev_root);
        prev_root = r;
    }
    CHECK(prev_root > 0.99);

    // large eps approaches the explicit leading-order value (8/3) e^{-eps pi}
    for (double eps : {6.0, 8.0}) {
        const double root = tadpole_root(eps);
        const double guess = (8.0 / 3.0) * std::exp(-eps * M_PI);
        CHECK(std::abs(root - guess) / guess < 0.01);
    }
    // agreement improves with eps
    const double r1 = std::abs(tadpole_root(4.0) / ((8.0 / 3.0) * std::exp(-4.0 * M_PI)) - 1.0);
    const double r2 = std::abs(tadpole_root(6.0) / ((8.0 / 3.0) * std::exp(-6.0 * M_PI)) - 1.0);
    CHECK(r2 < r1);

    // root-equation residual
    for (double eps : {0.5, 2.0}) {
        const double p = tadpole_root(eps);
        CHECK(std::abs(period_T({p, 0.5 * std::sqrt(level_A(p, 1.0)), 1.0}) - eps * M_PI) < 1e-10);
    }
}

TEST_CASE("reconstructed pulse honors the endpoint contract")
{
    const PeriodQuery q{0.5, 0.2, 1.0};
    const double L = period_T(q);
    auto pulse = reconstruct_pulse(q, L);

    CHECK(pulse.value(0.0) == doctest::Approx(pulse.top()).epsilon(1e-12));
    CHECK(std::abs(pulse.derivative(0.0)) < 1e-10);
    CHECK(pulse.value(L) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pulse.derivative(L) == doctest::Approx(-0.2).epsilon(1e-8));

    // monotone decreasing
    double prev = pulse.value(0.0) + 1e-14;
    for (int i = 0; i <= 50; ++i) {
        const double u = pulse.value(L * i / 50.0);
        CHECK(u <= prev + 1e-12);
        prev = u;
    }

    // level-curve drift
    const double beta = q.beta();
    for (int i = 1; i < 20; ++i) {
        const double z = L * i / 20.0;
        const double u = pulse.value(z), v = pulse.derivative(z);
        CHECK(std::abs(v * v - u * u + std::pow(u, 4.0) - beta) < 1e-10);
    }

    // ODE residual via the high-order stencil
    for (double z : {0.3 * L, 0.5 * L, 0.8 * L}) {
        const double r = oracles::normalized_ode_residual(
            [&](double x) { return pulse.value(x); }, z, 1.0, 1e-3);
        CHECK(std::abs(r) < 1e-8);
    }

    CHECK_THROWS_AS(reconstruct_pulse(q, L * 1.01), std::invalid_argument);
}

TEST_CASE("reconstructed pulse matches the dnoidal oracle for p = 1")
{
    // pick a dnoidal solution, read off its endpoint data at some z_end,
    // and compare profiles
    const double k = 0.8;
    const double beta = dnoidal_beta(k);
    const double z_end = 1.3;
    const double p_end = dnoidal(k, z_end);
    const double q_end = std::sqrt(beta + level_A(p_end, 1.0));
    const PeriodQuery q{p_end, q_end, 1.0};
    const double L = period_T(q);
    auto pulse = reconstruct_pulse(q, L);
    // the dnoidal maximum sits at z = 0; the pulse starts at its own top
    for (int i = 0; i <= 20; ++i) {
        const double z = L * i / 20.0;
        const double shift = z_end - L; // align endpoints
        CHECK(std::abs(pulse.value(z) - dnoidal(k, z + shift)) < 1e-8);
    }
}

TEST_CASE("glued tadpole wave: flux residual and shape")
{
    for (double eps : {0.5, 2.0}) {
        CHECK(tadpole_flux_residual(eps) < 1e-8);
    }

    auto wave = assemble_tadpole_wave(2.0);
    CHECK(wave.omega == doctest::Approx(-4.0));
    CHECK(wave.origin == WaveOrigin::PeriodFunction);
    // positive everywhere
    for (double v : wave.profile.values()) CHECK(v > 0.0);
    // loop maximum at the midpoint
    const auto& eg = wave.profile.layout()->edge_grid(0);
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i <= eg.intervals; ++i)
        if (wave.profile.at(0, i) > best) {
            best = wave.profile.at(0, i);
            arg = i;
        }
    CHECK(std::abs(eg.h * arg - M_PI) < 2 * eg.h);
    // vertex continuity of the glued construction
    CHECK(continuity_defect(wave.profile) < 1e-9);
}

TEST_CASE("tadpole mass is increasing in eps for the subcritical power")
{
    double prev = 0.0;
    for (double eps : {0.5, 1.0, 2.0, 3.0}) {
        auto w = assemble_tadpole_wave(eps);
        CHECK(w.mass > prev);
        prev = w.mass;
    }
}

TEST_CASE("scaling round trip")
{
    // phi(x) = eps^{1/p} u(eps x): mapping a wave to the normalized frame
    // and back reproduces it to machine precision
    const double eps = 1.7;
    for (double p : {0.7, 1.0, 1.6}) {
        const ScalingFrame frame(eps);
        CHECK(frame.omega() == doctest::Approx(-eps * eps));
        CHECK(ScalingFrame::from_omega(frame.omega()).eps == doctest::Approx(eps));
        for (double phi : {0.03, 0.8, 2.4}) {
            const double u = frame.to_normalized(phi, p);
            CHECK(std::abs(frame.to_physical(u, p) - phi) <= 1e-12 * phi);
        }
        for (double x : {0.2, 3.7}) {
            CHECK(frame.physical_coordinate(frame.normalized_coordinate(x)) ==
                  doctest::Approx(x).epsilon(1e-15));
        }
    }

    // the glued tadpole wave is the scaled image of its normalized pulse
    auto wave = assemble_tadpole_wave(eps);
    const ScalingFrame frame(eps);
    const double p_root = tadpole_root(eps);
    PulseProfile pulse({p_root, 0.5 * std::sqrt(level_A(p_root, 1.0)), 1.0}, eps * M_PI);
    const auto& eg = wave.profile.layout()->edge_grid(0);
    for (int i = 0; i <= eg.intervals; i += 9) {
        const double x = eg.h * i;
        const double u = pulse.value(frame.normalized_coordinate(x - M_PI));
        CHECK(std::abs(frame.to_physical(u, 1.0) - wave.profile.at(0, i)) < 1e-11);
    }
}

TEST_CASE("invalid period queries throw")
{
    CHECK_THROWS_AS(period_T({-0.1, 0.2, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(period_T({0.5, -0.2, 1.0}), std::invalid_argument);
    // endpoint at/above the turning point
    CHECK_THROWS_AS(period_T({1.2, 0.0, 1.0}), std::invalid_argument);
}
