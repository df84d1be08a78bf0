// The period function T+(p, q) of the normalized stationary equation,
// its root solvers, and pulse reconstruction along level curves.
//
// A boundary point (p, -q) with p, q > 0 fixes the level
// beta = q^2 - A(p); the orbit segment from the turning point (p_+, 0)
// down to (p, -q) has z-length
//     T+(p, q) = integral_p^{p_+} du / sqrt(beta + A(u)).
// The square-root singularity at p_+ is removed by u = p_+ - (p_+ - p) s^2.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graphwave/graphs.hpp"
#include "graphwave/quadrature.hpp"
#include "graphwave/rootfind.hpp"
#include "graphwave/soliton.hpp"
#include "graphwave/wave.hpp"

namespace graphwave {

struct PeriodQuery {
    double endpoint_value; // p: 0 < p < p_+
    double endpoint_slope; // q: -u' at the endpoint, >= 0
    double power = 1.0;

    double beta() const
    {
        return endpoint_slope * endpoint_slope - level_A(endpoint_value, power);
    }
};

/// The omega = -eps^2 frame relating physical and normalized profiles:
/// phi(x) = eps^{1/p} u(eps x).
struct ScalingFrame {
    double eps;

    explicit ScalingFrame(double eps_) : eps(eps_)
    {
        if (!(eps > 0.0)) throw std::invalid_argument("ScalingFrame: eps must be positive");
    }
    static ScalingFrame from_omega(double omega)
    {
        if (!(omega < 0.0)) throw std::invalid_argument("ScalingFrame: omega must be negative");
        return ScalingFrame(std::sqrt(-omega));
    }

    double omega() const { return -eps * eps; }
    double amplitude(double power) const { return std::pow(eps, 1.0 / power); }
    double to_physical(double u, double power) const { return amplitude(power) * u; }
    double to_normalized(double phi, double power) const { return phi / amplitude(power); }
    double normalized_coordinate(double x) const { return eps * x; }
    double physical_coordinate(double z) const { return z / eps; }
};

namespace detail {

inline void check_query(const PeriodQuery& q, double& beta, double& p_plus)
{
    if (!(q.endpoint_value > 0.0)) throw std::invalid_argument("period: endpoint value must be positive");
    if (!(q.endpoint_slope >= 0.0)) throw std::invalid_argument("period: endpoint slope must be >= 0");
    beta = q.beta();
    if (!(beta > beta_min(q.power))) throw std::invalid_argument("period: level below beta_p");
    p_plus = turning_point(LevelCurve(beta, q.power));
    if (!(q.endpoint_value < p_plus))
        throw std::invalid_argument("period: endpoint value not below the turning point");
}

// A(anchor + du) - A(anchor), evaluated without cancellation. Near the
// turning point beta + A(u) is a difference of nearly equal O(1) numbers;
// the naive form goes negative at roundoff scale and derails the adaptive
// quadrature.
inline double level_A_diff(double anchor, double du, double power)
{
    const double u = anchor + du;
    const double quad = du * (u + anchor); // u^2 - anchor^2
    const double e = 2.0 * power + 2.0;
    double pw; // u^e - anchor^e
    if (std::abs(du) > 0.125 * anchor) {
        pw = std::pow(u, e) - std::pow(anchor, e); // well separated, direct
    } else {
        pw = std::pow(anchor, e) * std::expm1(e * std::log1p(du / anchor));
    }
    return quad - pw;
}

// Segment of the period integral over [u_lo, u_hi]. The integrand
// 1/sqrt(beta + A(u)) is evaluated anchored at an endpoint where the value
// of beta + A is known exactly: 0 at the upper turning point (sing_hi) and
// q^2 = base_lo at the orbit endpoint. The square-root turning points are
// removed by quadratic substitutions.
inline double quad_segment(double u_lo, double u_hi, double base_lo, double power, bool sing_hi,
                           bool sing_lo)
{
    const double d = u_hi - u_lo;
    if (d <= 0.0) return 0.0;
    if (sing_hi) {
        // anchor at u_hi: g = A(u) - A(u_hi) >= 0 on the segment
        return integrate(
            [=](double s) {
                const double g = level_A_diff(u_hi, -d * s * s, power);
                return 2.0 * d * s / std::sqrt(std::max(g, 1e-300));
            },
            0.0, 1.0, 1e-12, 1e-15);
    }
    if (sing_lo) {
        return integrate(
            [=](double s) {
                const double g = base_lo + level_A_diff(u_lo, d * s * s, power);
                return 2.0 * d * s / std::sqrt(std::max(g, 1e-300));
            },
            0.0, 1.0, 1e-12, 1e-15);
    }
    return integrate(
        [=](double u) {
            const double g = base_lo + level_A_diff(u_lo, u - u_lo, power);
            return 1.0 / std::sqrt(std::max(g, 1e-300));
        },
        u_lo, u_hi, 1e-12, 1e-15);
}

} // namespace detail

/// T+(p, q): z-length of the level-curve segment from the turning point to
/// the endpoint data (p, -q). Relative accuracy ~1e-10.
inline double period_T(const PeriodQuery& q)
{
    double beta, p_plus;
    detail::check_query(q, beta, p_plus);
    const double mid = 0.5 * (q.endpoint_value + p_plus);
    const double base = q.endpoint_slope * q.endpoint_slope; // beta + A(p), exactly
    // the endpoint is itself a turning point when q == 0
    const bool lo_singular = base < 1e-12 * std::max(1.0, level_A(q.endpoint_value, q.power));
    return detail::quad_segment(q.endpoint_value, mid, base, q.power, false, lo_singular) +
           detail::quad_segment(mid, p_plus, 0.0, q.power, true, false);
}

/// Location of the interior maximum of q -> T+(p, q) on (0, sqrt(A(p)))
/// for cubic nonlinearity; std::nullopt when T+ is monotone increasing
/// there (p above the crossing value ~0.782).
inline std::optional<double> qmax(double endpoint_value, double power = 1.0)
{
    if (power != 1.0) throw std::invalid_argument("qmax: only the cubic case is covered");
    const double ps = constant_state(1.0);
    if (!(endpoint_value > ps && endpoint_value < 1.0))
        throw std::invalid_argument("qmax: endpoint value outside (1/sqrt(2), 1)");
    const double q_hi = std::sqrt(level_A(endpoint_value, 1.0));
    const auto T = [&](double q) { return period_T({endpoint_value, q, 1.0}); };

    // coarse scan to bracket an interior maximum
    const int m = 96;
    int best = 0;
    double best_T = -1.0;
    std::vector<double> values(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double q = q_hi * (i + 0.5) / (m + 1);
        values[i] = T(q);
        if (values[i] > best_T) {
            best_T = values[i];
            best = i;
        }
    }
    if (best == m) return std::nullopt; // increasing all the way to the homoclinic
    const double qa = q_hi * (std::max(0, best - 1) + 0.5) / (m + 1);
    const double qb = q_hi * (std::min(m, best + 1) + 0.5) / (m + 1);
    return golden_max(T, qa, qb, 1e-10);
}

/// Unique root p of T+(p, sqrt(A(p))/2) = eps * loop_half_length for the
/// tadpole loop; the map is strictly decreasing in p.
inline double tadpole_root(double eps, double loop_half_length = M_PI, double power = 1.0)
{
    if (!(eps > 0.0)) throw std::invalid_argument("tadpole_root: eps must be positive");
    const double target = eps * loop_half_length;
    const auto F = [power](double p) {
        const double q = 0.5 * std::sqrt(level_A(p, power));
        return period_T({p, q, power});
    };
    // T ~ -ln p as p -> 0, so bisect in log(p). Expand the lower bracket
    // downward as needed; strongly scaled problems have p ~ e^{-eps l}
    // far below any fixed small bracket.
    double lhi = std::log(1.0 - 1e-9);
    if (F(std::exp(lhi)) > target) return std::exp(lhi);
    double llo = std::log(0.01);
    while (F(std::exp(llo)) <= target) {
        llo *= 1.6;
        if (llo < std::log(1e-200))
            throw std::runtime_error("tadpole_root: bracket expansion failed");
    }
    for (int it = 0; it < 200 && lhi - llo > 1e-14; ++it) {
        const double lm = 0.5 * (llo + lhi);
        if (F(std::exp(lm)) > target)
            llo = lm;
        else
            lhi = lm;
    }
    return std::exp(0.5 * (llo + lhi));
}

/// Decreasing pulse profile u(z) on [0, L] along one level curve:
/// u(0) = p_+, u'(0) = 0, u(L) = p, u'(L) = -q, built by inverting
/// z(u) on a dense table with Hermite interpolation.
class PulseProfile {
public:
    PulseProfile(const PeriodQuery& q, double length, int table_size = 2048)
        : query_(q), length_(length)
    {
        double beta, p_plus;
        detail::check_query(q, beta, p_plus);
        beta_ = beta;
        p_plus_ = p_plus;
        const double total = period_T(q);
        if (std::abs(total - length) > 1e-8 * std::max(1.0, length))
            throw std::invalid_argument("PulseProfile: period does not match the requested length");

        // cumulative z over an s-grid of u = p_+ - (p_+ - p) s^2,
        // anchored at the turning point where beta + A vanishes exactly
        const double d = p_plus_ - q.endpoint_value;
        z_.resize(table_size + 1);
        u_.resize(table_size + 1);
        z_[0] = 0.0;
        u_[0] = p_plus_;
        for (int i = 1; i <= table_size; ++i) {
            const double s0 = static_cast<double>(i - 1) / table_size;
            const double s1 = static_cast<double>(i) / table_size;
            const double panel = integrate(
                [&](double s) {
                    const double g = detail::level_A_diff(p_plus_, -d * s * s, query_.power);
                    return 2.0 * d * s / std::sqrt(std::max(g, 1e-300));
                },
                s0, s1, 1e-11, 1e-14);
            z_[i] = z_[i - 1] + panel;
            u_[i] = p_plus_ - d * s1 * s1;
        }
    }

    double length() const { return length_; }
    double top() const { return p_plus_; }
    double beta() const { return beta_; }

    /// u(z) for z in [0, L]; symmetric extension for z < 0.
    double value(double z) const
    {
        z = std::abs(z);
        if (z >= z_.back()) return u_.back();
        // binary search for the bracketing panel
        size_t lo = 0, hi = z_.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            if (z_[mid] <= z)
                lo = mid;
            else
                hi = mid;
        }
        // cubic Hermite with exact slopes u'(z) = -sqrt(beta + A(u))
        const double h = z_[hi] - z_[lo];
        if (h <= 0.0) return u_[lo];
        const double t = (z - z_[lo]) / h;
        const double m0 = slope_at(u_[lo]);
        const double m1 = slope_at(u_[hi]);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * u_[lo] + (t3 - 2 * t2 + t) * h * m0 +
               (-2 * t3 + 3 * t2) * u_[hi] + (t3 - t2) * h * m1;
    }

    /// u'(z), from the level curve (negative branch; odd extension below 0).
    double derivative(double z) const
    {
        const double s = (z < 0) ? -1.0 : 1.0;
        return s * slope_at(value(z));
    }

private:
    double slope_at(double u) const
    {
        const double g = detail::level_A_diff(p_plus_, u - p_plus_, query_.power);
        return -std::sqrt(std::max(g, 0.0));
    }

    PeriodQuery query_;
    double length_;
    double beta_ = 0.0;
    double p_plus_ = 0.0;
    std::vector<double> z_, u_;
};

/// reconstruct_pulse: profile on [0, L] with the endpoint contract of the
/// period function; L must equal T+(p, q) to 1e-8.
inline PulseProfile reconstruct_pulse(const PeriodQuery& q, double length)
{
    return PulseProfile(q, length);
}

/// Tadpole standing wave at omega = -eps^2 from the period-function
/// construction: symmetric loop pulse glued to a sech tail.
inline StandingWave assemble_tadpole_wave(double eps, double loop_half_length = M_PI,
                                          double h_target = 0.05, double power = 1.0)
{
    if (!(eps > 0.0)) throw std::invalid_argument("assemble_tadpole_wave: eps must be positive");
    const double p = tadpole_root(eps, loop_half_length, power);
    const double q = 0.5 * std::sqrt(level_A(p, power));
    PulseProfile pulse({p, q, power}, eps * loop_half_length);

    // tail u0(z) = sech-profile through (p, -sqrt(A(p))): the homoclinic
    // orbit of the normalized equation, shifted so u0(0) = p
    const double inv_p = 1.0 / power;
    const double a_shift = [&] {
        // solve sech^{1/p}(power * t) = p for t >= 0
        const double c = std::pow(p, power); // sech(power t) = p^power
        return std::acosh(1.0 / c) / power;
    }();

    MetricGraph g = make_tadpole(loop_half_length);
    auto layout = GridLayout::make(std::move(g), h_target, truncation_for(-eps * eps));

    StandingWave wave;
    wave.omega = -eps * eps;
    wave.power = power;
    wave.origin = WaveOrigin::PeriodFunction;
    const double amp = std::pow(eps, inv_p);
    wave.profile = sample_real(layout, [&](int e, double x) {
        if (e == 0) {
            // loop edge [0, 2l], symmetric about the midpoint l
            const double z = eps * (x - loop_half_length);
            return amp * pulse.value(z);
        }
        const double z = eps * x + a_shift;
        return amp * std::pow(1.0 / std::cosh(power * z), inv_p);
    });
    wave.refresh_functionals();
    return wave;
}

/// Flux defect of the glued tadpole wave at the vertex, evaluated from the
/// reconstructed loop profile and the tail formula at their actual endpoint
/// values (not from the root-equation algebra).
inline double tadpole_flux_residual(double eps, double loop_half_length = M_PI, double power = 1.0)
{
    const double p = tadpole_root(eps, loop_half_length, power);
    const double q = 0.5 * std::sqrt(level_A(p, power));
    const double L = eps * loop_half_length;
    PulseProfile pulse({p, q, power}, L);
    // continuity: the tail starts at the reconstructed loop endpoint value
    const double p_end = pulse.value(L);
    const double loop_flux = 2.0 * pulse.derivative(L); // u1'(+L) - u1'(-L)
    const double tail_flux = -std::sqrt(std::max(level_A(p_end, power), 0.0)); // homoclinic u0'(0)
    return std::abs(loop_flux - tail_flux) + std::abs(p_end - p);
}

} // namespace graphwave
