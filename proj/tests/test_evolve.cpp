#include <doctest.h>

#include <cmath>
#include <complex>

#include <graphwave/evolve.hpp>
#include <graphwave/graphs.hpp>
#include <graphwave/period.hpp>
#include <graphwave/soliton.hpp>
#include <graphwave/solver.hpp>

using namespace graphwave;

namespace {

StandingWave line_soliton_wave(double h, double trunc, double omega = -1.0, double power = 1.0)
{
    auto layout = GridLayout::make(make_line(), h, trunc);
    const SolitonParams sp(omega, power);
    auto guess = sample_real(layout, [&](int, double x) { return nls_soliton(sp, x); });
    auto res = newton_solve(layout, power, omega, guess);
    REQUIRE(res.converged);
    return res.wave;
}

} // namespace

TEST_CASE("orbital distance basics")
{
    auto wave = line_soliton_wave(0.05, 20.0);
    auto phi = to_complex(wave.profile);

    // a pure phase rotation has zero orbital distance
    auto psi = phi;
    const std::complex<double> rot = std::polar(1.0, 1.234);
    for (auto& v : psi.values()) v *= rot;
    CHECK(orbital_distance(psi, phi) <= 1e-12);

    // a small real multiple moves by eps * ||phi||_{H1} to first order
    const double eps = 1e-4;
    auto psi2 = phi;
    for (auto& v : psi2.values()) v *= (1.0 + eps);
    const double h1 = std::sqrt(h1_inner(phi, phi).real());
    CHECK(orbital_distance(psi2, phi) == doctest::Approx(eps * h1).epsilon(1e-3));
}

TEST_CASE("linear flow is unitary")
{
    // tadpole with the nonlinearity mask off on every edge
    MetricGraph lin;
    lin.add_vertex("o");
    lin.add_edge("loop", "o", "o", 2 * M_PI, false);
    lin.add_half_line("tail", "o", false);
    auto layout = GridLayout::make(lin, 0.1, 15.0);
    auto psi0 = sample<std::complex<double>>(layout, [](int e, double x) {
        return std::complex<double>(std::exp(-0.5 * x * x), 0.3 * std::exp(-x) * (e + 1));
    });
    auto traj = evolve(psi0, 1.0, 1e-3, 1.0);
    const double m0 = traj.samples.front().mass;
    for (const auto& pt : traj.samples) CHECK(std::abs(pt.mass - m0) <= 1e-12 * m0);
}

TEST_CASE("standing wave evolves stationarily modulo phase")
{
    auto wave = line_soliton_wave(0.05, 20.0);
    auto phi = to_complex(wave.profile);
    EvolveOptions opts;
    opts.reference = &phi;
    auto traj = evolve(phi, 1.0, 1e-3, 10.0, opts);
    double worst = 0.0;
    for (const auto& pt : traj.samples) worst = std::max(worst, pt.orbital_distance);
    CHECK(worst <= 1e-6);
}

TEST_CASE("mass and energy drift rates")
{
    auto wave = line_soliton_wave(0.05, 20.0);
    auto phi = to_complex(wave.profile);
    // mild continuous phase perturbation to keep the dynamics nontrivial
    // (both half-lines run outward from the vertex, so a function of x
    // alone stays continuous there)
    const auto& lay = phi.layout();
    for (size_t e = 0; e < lay->graph().edges().size(); ++e)
        for (int i = 0; i <= lay->edge_grid(e).intervals; ++i)
            phi.at(static_cast<int>(e), i) *=
                std::polar(1.0, 0.02 * std::sin(0.4 * lay->edge_grid(e).h * i));

    double mass_scale = 1.0;
    auto drift = [&](double dt) {
        auto traj = evolve(phi, 1.0, dt, 2.0);
        mass_scale = traj.samples[0].mass;
        double dm = 0.0, de = 0.0;
        for (const auto& pt : traj.samples) {
            dm = std::max(dm, std::abs(pt.mass - traj.samples[0].mass));
            de = std::max(de, std::abs(pt.energy - traj.samples[0].energy));
        }
        return std::make_pair(dm / 2.0, de / 2.0); // per unit time
    };
    auto [dm1, de1] = drift(1e-3);
    CHECK(dm1 <= 1e-10 * mass_scale);
    CHECK(de1 <= 1e-8);
    auto [dm2, de2] = drift(5e-4);
    CHECK(de2 <= de1 / 3.5);
    CHECK(dm2 <= 1e-10 * mass_scale);
}

TEST_CASE("phase covariance of the flow")
{
    auto wave = line_soliton_wave(0.1, 12.0);
    auto phi = to_complex(wave.profile);
    {
        const auto& lay = phi.layout();
        for (size_t e = 0; e < lay->graph().edges().size(); ++e)
            for (int i = 0; i <= lay->edge_grid(e).intervals; ++i)
                phi.at(static_cast<int>(e), i) *=
                    std::polar(1.0, 0.03 * std::cos(0.5 * lay->edge_grid(e).h * i) - 0.03);
    }
    auto a = evolve(phi, 1.0, 1e-3, 0.2);
    auto rotated = phi;
    const std::complex<double> rot = std::polar(1.0, 0.77);
    for (auto& v : rotated.values()) v *= rot;
    auto b = evolve(rotated, 1.0, 1e-3, 0.2);
    double dev = 0.0;
    for (int i = 0; i < a.state.size(); ++i)
        dev = std::max(dev, std::abs(b.state.values()[i] - rot * a.state.values()[i]));
    CHECK(dev <= 1e-10);
}

TEST_CASE("time reversibility")
{
    auto wave = line_soliton_wave(0.1, 12.0);
    auto psi0 = to_complex(wave.profile);
    {
        const auto& lay = psi0.layout();
        for (size_t e = 0; e < lay->graph().edges().size(); ++e)
            for (int i = 0; i <= lay->edge_grid(e).intervals; ++i)
                psi0.at(static_cast<int>(e), i) *=
                    std::polar(1.0, 0.05 * std::sin(0.3 * lay->edge_grid(e).h * i));
    }
    auto fwd = evolve(psi0, 1.0, 1e-3, 0.5);
    // conjugation reverses time for the NLS flow
    auto back = fwd.state;
    for (auto& v : back.values()) v = std::conj(v);
    auto rev = evolve(back, 1.0, 1e-3, 0.5);
    double dev = 0.0;
    for (int i = 0; i < psi0.size(); ++i)
        dev = std::max(dev, std::abs(std::conj(rev.state.values()[i]) - psi0.values()[i]));
    CHECK(dev <= 1e-9);
}

TEST_CASE("critical-mass guard")
{
    auto layout = GridLayout::make(make_line(), 0.05, 20.0);
    const SolitonParams sp(-1.0, 2.0);
    auto big = sample<std::complex<double>>(
        layout, [&](int, double x) { return 1.3 * nls_soliton(sp, x); });
    CHECK_THROWS_AS(evolve(big, 2.0, 1e-3, 0.1), std::invalid_argument);
    EvolveOptions opts;
    opts.allow_supercritical_mass = true;
    CHECK_NOTHROW(evolve(big, 2.0, 1e-3, 0.01, opts));
}

TEST_CASE("evolve rejects invalid parameters")
{
    auto layout = GridLayout::make(make_line(), 0.1, 10.0);
    GraphFunction psi(layout);
    CHECK_THROWS_AS(evolve(psi, 2.5, 1e-3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve(psi, 1.0, -1e-3, 1.0), std::invalid_argument);
}
