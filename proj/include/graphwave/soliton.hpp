// NLS solitons on the line, the mass law mu = C_p |omega|^{1/p - 1/2},
// and the phase-plane level-curve algebra of the normalized stationary
// equation -u'' + u - (p+1) u^{2p+1} = 0.
#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "graphwave/quadrature.hpp"
#include "graphwave/rootfind.hpp"

namespace graphwave {

struct SolitonParams {
    double omega; // < 0
    double power; // p in (0, 2]

    SolitonParams(double omega_, double power_) : omega(omega_), power(power_)
    {
        if (!(omega < 0.0)) throw std::invalid_argument("SolitonParams: omega must be negative");
        if (!(power > 0.0)) throw std::invalid_argument("SolitonParams: power must be positive");
    }
};

/// phi_omega(x) = |omega|^{1/(2p)} sech^{1/p}(p sqrt(|omega|) x).
inline double nls_soliton(const SolitonParams& sp, double x)
{
    const double p = sp.power;
    const double s = std::sqrt(-sp.omega);
    return std::pow(-sp.omega, 1.0 / (2.0 * p)) * std::pow(1.0 / std::cosh(p * s * x), 1.0 / p);
}

/// d/dx of the soliton profile, closed form.
inline double nls_soliton_derivative(const SolitonParams& sp, double x)
{
    const double s = std::sqrt(-sp.omega);
    return -s * std::tanh(sp.power * s * x) * nls_soliton(sp, x);
}

/// d^2/dx^2 of the soliton profile, closed form.
inline double nls_soliton_second_derivative(const SolitonParams& sp, double x)
{
    const double p = sp.power;
    const double s = std::sqrt(-sp.omega);
    const double t = std::tanh(p * s * x);
    // From phi'/phi = -s tanh(p s x): phi'' = |omega| phi ((p+1) t^2 - p).
    return (-sp.omega) * nls_soliton(sp, x) * ((p + 1.0) * t * t - p);
}

/// C_p = integral over R of sech^{2/p}(p x) dx, cached per power.
inline double soliton_norm_constant(double p)
{
    if (!(p > 0.0)) throw std::invalid_argument("soliton_norm_constant: power must be positive");
    static std::map<double, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(p);
        if (it != cache.end()) return it->second;
    }
    const double value = 2.0 * integrate(
        [p](double x) { return std::pow(1.0 / std::cosh(p * x), 2.0 / p); },
        0.0, 50.0 / p, 1e-14, 1e-16);
    std::lock_guard<std::mutex> lock(mtx);
    cache[p] = value;
    return value;
}

/// Mass of the soliton on the line: mu = C_p |omega|^{1/p - 1/2}.
inline double soliton_mass(const SolitonParams& sp)
{
    return soliton_norm_constant(sp.power) * std::pow(-sp.omega, 1.0 / sp.power - 0.5);
}

/// Mass of the half-soliton on the half-line (half of the line value).
inline double soliton_mass_halfline(const SolitonParams& sp)
{
    return 0.5 * soliton_mass(sp);
}

/// Frequency with soliton mass mu on the line; requires p in (0, 2).
inline double soliton_omega_for_mass(double p, double mu)
{
    if (!(p > 0.0 && p < 2.0)) throw std::invalid_argument("soliton_omega_for_mass: power outside (0,2)");
    if (!(mu > 0.0)) throw std::invalid_argument("soliton_omega_for_mass: mass must be positive");
    const double cp = soliton_norm_constant(p);
    return -std::pow(mu / cp, 2.0 * p / (2.0 - p));
}

/// Energy |phi'|^2 - |phi|^{2p+2} of the line soliton, by quadrature.
inline double soliton_energy_line(double p, double omega)
{
    const SolitonParams sp(omega, p);
    const double lim = 50.0 / (p * std::sqrt(-omega));
    const double kinetic = 2.0 * integrate(
        [&](double x) { const double d = nls_soliton_derivative(sp, x); return d * d; },
        0.0, lim, 1e-13, 1e-15);
    const double focusing = 2.0 * integrate(
        [&](double x) { return std::pow(nls_soliton(sp, x), 2.0 * p + 2.0); },
        0.0, lim, 1e-13, 1e-15);
    return kinetic - focusing;
}

/// Energy of the line ground state at mass mu (p < 2).
inline double soliton_energy_for_mass(double p, double mu)
{
    return soliton_energy_line(p, soliton_omega_for_mass(p, mu));
}

// ---------------------------------------------------------------------------
// Level curves v^2 - u^2 + u^{2p+2} = beta of the normalized equation.
// ---------------------------------------------------------------------------

/// A(u) = u^2 - u^{2p+2}.
inline double level_A(double u, double p)
{
    return u * u - std::pow(u, 2.0 * p + 2.0);
}

inline double level_A_derivative(double u, double p)
{
    return 2.0 * u - (2.0 * p + 2.0) * std::pow(u, 2.0 * p + 1.0);
}

/// beta_p = -p / (p+1)^{(p+1)/p}, the minimum admissible level.
inline double beta_min(double p)
{
    return -p / std::pow(p + 1.0, (p + 1.0) / p);
}

/// The constant solution u_p = (p+1)^{-1/(2p)} sitting at the level beta_p.
inline double constant_state(double p)
{
    return std::pow(p + 1.0, -1.0 / (2.0 * p));
}

struct LevelCurve {
    double beta;
    double power;

    LevelCurve(double beta_, double power_) : beta(beta_), power(power_)
    {
        if (!(power > 0.0)) throw std::invalid_argument("LevelCurve: power must be positive");
        if (beta < beta_min(power)) throw std::invalid_argument("LevelCurve: beta below beta_p");
    }
};

/// Largest positive root of beta + A(u) = 0: the turning point of the orbit.
inline double turning_point(const LevelCurve& curve)
{
    const double p = curve.power;
    const double beta = curve.beta;
    const double up = constant_state(p);
    if (beta == beta_min(p)) return up;
    const auto g = [&](double u) { return beta + level_A(u, p); };
    double lo, hi;
    if (beta < 0.0) {
        // Root in (u_p, 1): A decreases from A(u_p) = -beta_p to A(1) = 0.
        lo = up;
        hi = 1.0;
    } else {
        // Unique root at or beyond 1.
        lo = 1.0 - 1e-15;
        hi = std::pow(1.0 + beta, 1.0 / (2.0 * p + 2.0)) + 1.0;
        while (g(hi) > 0.0) hi *= 1.5;
    }
    double root = bisect(g, lo, hi, 1e-13 * hi);
    for (int it = 0; it < 3; ++it) {
        const double der = level_A_derivative(root, p);
        if (std::abs(der) < 1e-14) break;
        root -= g(root) / der;
    }
    return root;
}

} // namespace graphwave
