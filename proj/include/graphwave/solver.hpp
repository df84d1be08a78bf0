// Damped Newton solver for the discretized stationary NLS on a graph and
// pseudo-arclength continuation in omega with fold detection.
//
// In mass-scaled DOF variables w = M^{1/2} u the residual reads
//   F(w; omega) = A0 w - (p+1) G |w|^{2p} w - omega w,
// where A0 is the scaled linear operator and G the per-DOF focusing gain;
// the Jacobian coincides with the scaled L+ at the current iterate.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "graphwave/operators.hpp"
#include "graphwave/spectra.hpp"
#include "graphwave/wave.hpp"

namespace graphwave {

struct NewtonOptions {
    int max_iterations = 50;
    double tolerance = 1e-12;       // on the scaled residual, relative to scale
    bool check_linear_spectrum = true;
};

struct NewtonResult {
    StandingWave wave;
    bool converged = false;
    int iterations = 0;
    bool singular_jacobian = false;
    double final_residual = 0.0;
};

namespace detail {

struct ScaledSystem {
    SymmetricOperator op;       // linear part, no omega shift
    std::vector<double> gain;   // focusing gain per DOF
    double power;

    void residual(const std::vector<double>& w, double omega, std::vector<double>& f) const
    {
        op.matrix.multiply(w, f);
        const int n = op.dofs();
        for (int i = 0; i < n; ++i) {
            const double a = std::pow(w[i] * w[i], power);
            f[i] -= (power + 1.0) * gain[i] * a * w[i] + omega * w[i];
        }
    }

    /// Jacobian = linear matrix with the diagonal replaced in a scratch copy.
    void jacobian_diag(const std::vector<double>& w, double omega,
                       std::vector<double>& diag) const
    {
        const int n = op.dofs();
        diag.resize(n);
        for (int i = 0; i < n; ++i) {
            const double a = std::pow(w[i] * w[i], power);
            const double shift = -(power + 1.0) * (2.0 * power + 1.0) * gain[i] * a - omega;
            diag[i] = (i < op.matrix.n_chain ? op.matrix.diag[i]
                                             : op.matrix.border_at(i - op.matrix.n_chain,
                                                                   i - op.matrix.n_chain)) +
                      shift;
        }
    }
};

inline ScaledSystem make_system(const LayoutPtr& layout, double power, double omega)
{
    if (!(omega < 0.0)) throw std::invalid_argument("newton: omega must be negative");
    ScaledSystem sys{assemble_operator(layout, UnboundedClosure::Robin, std::sqrt(-omega)), {},
                     power};
    sys.gain = sys.op.nonlinear_gain(power);
    return sys;
}

inline void apply_diag(BorderedMatrix<double>& m, const std::vector<double>& diag)
{
    const int nc = m.n_chain;
    for (int i = 0; i < nc; ++i) m.diag[i] = diag[i];
    for (int j = 0; j < m.n_border; ++j) m.border_at(j, j) = diag[nc + j];
}

inline double inf_norm(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double two_norm2(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace detail

/// Damped Newton iteration for the stationary profile at fixed omega.
inline NewtonResult newton_solve(const LayoutPtr& layout, double power, double omega,
                                 const RealGraphFunction& guess, NewtonOptions opts = {})
{
    auto sys = detail::make_system(layout, power, omega);
    const int n = sys.op.dofs();
    const double scale = std::max(1.0, sys.op.inf_norm());

    if (opts.check_linear_spectrum) {
        BorderedFactor<double> probe(sys.op.matrix, omega);
        if (probe.kernel_hit())
            throw std::invalid_argument("newton: omega coincides with a linear eigenvalue");
    }

    NewtonResult result;
    std::vector<double> w = sys.op.from_function(guess);
    std::vector<double> f(n), diag(n), step(n), trial(n), ftrial(n);
    BorderedMatrix<double> jac = sys.op.matrix;

    sys.residual(w, omega, f);
    double fn2 = detail::two_norm2(f);
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (std::sqrt(fn2) <= opts.tolerance * scale) {
            result.converged = true;
            result.iterations = it;
            break;
        }
        sys.jacobian_diag(w, omega, diag);
        detail::apply_diag(jac, diag);
        BorderedFactor<double> factor(jac, 0.0);
        if (factor.kernel_hit()) result.singular_jacobian = true;
        step = f;
        factor.solve_inplace(step);
        // one refinement round keeps the step accurate near folds
        {
            std::vector<double> r(n);
            jac.multiply(step, r);
            for (int i = 0; i < n; ++i) r[i] = f[i] - r[i];
            factor.solve_inplace(r);
            for (int i = 0; i < n; ++i) step[i] += r[i];
        }
        double t = 1.0;
        bool accepted = false;
        for (int back = 0; back < 30; ++back) {
            for (int i = 0; i < n; ++i) trial[i] = w[i] - t * step[i];
            sys.residual(trial, omega, ftrial);
            const double tn2 = detail::two_norm2(ftrial);
            if (tn2 <= (1.0 - 1e-4 * t) * fn2) {
                w.swap(trial);
                f.swap(ftrial);
                fn2 = tn2;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            result.iterations = it + 1;
            break;
        }
        result.iterations = it + 1;
    }
    if (!result.converged && std::sqrt(fn2) <= opts.tolerance * scale) result.converged = true;

    result.final_residual = std::sqrt(fn2);
    StandingWave wave;
    wave.omega = omega;
    wave.power = power;
    wave.origin = WaveOrigin::Newton;
    wave.profile = sys.op.to_function<double>(w);
    // strong-form residual sup-norm in function space
    double rsup = 0.0;
    for (int i = 0; i < n; ++i) rsup = std::max(rsup, std::abs(f[i]) / sys.op.sqrt_mass[i]);
    wave.residual = rsup;
    wave.refresh_functionals();
    result.wave = std::move(wave);
    return result;
}

// ---------------------------------------------------------------------------
// Pseudo-arclength continuation.
// ---------------------------------------------------------------------------

struct ContinuationOptions {
    double initial_step = 0.2;
    double min_step = 1e-7;
    double max_step = 1.5;
    int max_points = 600;
    int corrector_iterations = 9;
    double tolerance = 1e-11;
    double jump_guard = 5.0;
    int direction = 0; // +1 toward omega_max, -1 toward omega_min, 0 = auto
};

struct BranchPoint {
    StandingWave wave;
    double slope = std::numeric_limits<double>::quiet_NaN(); // d mass / d omega
    bool fold = false;
    double min_pivot = 0.0;
};

struct Branch {
    std::vector<BranchPoint> points;
    bool truncated = false; // step underflow near a singular Jacobian

    const BranchPoint& nearest(double omega) const
    {
        size_t best = 0;
        double dist = 1e300;
        for (size_t i = 0; i < points.size(); ++i) {
            const double d = std::abs(points[i].wave.omega - omega);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return points[best];
    }
};

struct SlopeEstimate {
    double value = 0.0;
    double error = 0.0;
    bool one_sided = false;
};

/// d mass / d omega at the branch point nearest to omega, by centered
/// differences with a step-halving error estimate.
inline SlopeEstimate slope_at(const Branch& branch, double omega)
{
    const auto& pts = branch.points;
    if (pts.size() < 3) throw std::invalid_argument("slope_at: need at least 3 branch points");
    size_t c = 0;
    double dist = 1e300;
    for (size_t i = 0; i < pts.size(); ++i) {
        const double d = std::abs(pts[i].wave.omega - omega);
        if (d < dist) {
            dist = d;
            c = i;
        }
    }
    SlopeEstimate est;
    auto diff = [&](size_t a, size_t b) {
        return (pts[b].wave.mass - pts[a].wave.mass) / (pts[b].wave.omega - pts[a].wave.omega);
    };
    if (c == 0 || c + 1 >= pts.size()) {
        est.one_sided = true;
        const size_t a = (c == 0) ? 0 : c - 1;
        const size_t b = (c == 0) ? 1 : c;
        est.value = diff(a, b);
        est.error = std::abs(est.value) * 0.1;
        return est;
    }
    const double wide = diff(c - 1, c + 1);
    const double left = diff(c - 1, c);
    const double right = diff(c, c + 1);
    est.value = wide;
    est.error = std::abs(0.5 * (left + right) - wide) + 1e-14 * std::abs(wide);
    return est;
}

namespace detail {

inline Branch continue_one_direction(const StandingWave& seed, double omega_min,
                                     double omega_max, int direction,
                                     ContinuationOptions opts)
{
    const auto layout = seed.profile.layout();
    const double power = seed.power;

    Branch branch;
    auto push_point = [&](const NewtonResult& nr, double min_pivot) {
        BranchPoint bp;
        bp.wave = nr.wave;
        bp.min_pivot = min_pivot;
        branch.points.push_back(std::move(bp));
    };

    // first two points by plain Newton with a small omega step
    NewtonResult first = newton_solve(layout, power, seed.omega, seed.profile);
    if (!first.converged) throw std::runtime_error("continue_branch: seed did not converge");
    push_point(first, 0.0);

    const double domega0 = 1e-2 * std::max(1.0, std::abs(seed.omega)) * direction;
    NewtonResult second =
        newton_solve(layout, power, seed.omega + domega0, first.wave.profile);
    if (!second.converged) throw std::runtime_error("continue_branch: second point failed");
    push_point(second, 0.0);

    auto sys = detail::make_system(layout, power, seed.omega);
    // the Robin closure rate is frozen at the seed omega for the whole
    // branch so that the matrix assembly stays layout-static; the rate only
    // controls the truncation boundary and its effect is exponentially small
    const int n = sys.op.dofs();
    const double theta = 1.0 / n;

    std::vector<double> w_prev = sys.op.from_function(branch.points[branch.points.size() - 2]
                                                          .wave.profile);
    std::vector<double> w_cur = sys.op.from_function(branch.points.back().wave.profile);
    double om_prev = branch.points[branch.points.size() - 2].wave.omega;
    double om_cur = branch.points.back().wave.omega;

    double step = opts.initial_step;
    double prev_tomega = 0.0;
    BorderedMatrix<double> jac = sys.op.matrix;
    std::vector<double> tw(n), f(n), diag(n), a(n), b(n), w(n);

    for (int point = 0; point < opts.max_points; ++point) {
        // secant tangent, normalized in the scaled arclength metric
        double tomega = om_cur - om_prev;
        for (int i = 0; i < n; ++i) tw[i] = w_cur[i] - w_prev[i];
        const double tn = std::sqrt(theta * detail::two_norm2(tw) + tomega * tomega);
        if (tn == 0.0) break;
        for (auto& x : tw) x /= tn;
        tomega /= tn;

        if (prev_tomega != 0.0 && tomega * prev_tomega < 0.0 && !branch.points.empty())
            branch.points.back().fold = true;
        prev_tomega = tomega;

        bool accepted = false;
        while (!accepted) {
            // predictor
            double om = om_cur + step * tomega;
            for (int i = 0; i < n; ++i) w[i] = w_cur[i] + step * tw[i];
            const double pred_sup = step * detail::inf_norm(tw) + 1e-14;

            double min_pivot = 0.0;
            bool ok = false;
            for (int it = 0; it < opts.corrector_iterations; ++it) {
                sys.residual(w, om, f);
                double gcon = -step;
                for (int i = 0; i < n; ++i) gcon += theta * tw[i] * (w[i] - w_cur[i]);
                gcon += tomega * (om - om_cur);
                const double fn = detail::inf_norm(f);
                if (fn <= opts.tolerance * std::max(1.0, sys.op.inf_norm()) &&
                    std::abs(gcon) <= 1e-10) {
                    ok = true;
                    break;
                }
                sys.jacobian_diag(w, om, diag);
                detail::apply_diag(jac, diag);
                BorderedFactor<double> factor(jac, 0.0);
                min_pivot = factor.min_pivot();
                a = f;
                factor.solve_inplace(a);
                for (int i = 0; i < n; ++i) b[i] = -w[i]; // F_omega
                factor.solve_inplace(b);
                double ta = 0.0, tb = 0.0;
                for (int i = 0; i < n; ++i) {
                    ta += theta * tw[i] * a[i];
                    tb += theta * tw[i] * b[i];
                }
                const double denom = tomega - tb;
                if (denom == 0.0) break;
                const double domega = (ta - gcon) / denom;
                for (int i = 0; i < n; ++i) w[i] += -a[i] - b[i] * domega;
                om += domega;
            }

            // guard against branch jumping
            double dev = 0.0;
            for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(w[i] - w_cur[i]));
            if (ok && dev <= opts.jump_guard * std::max(pred_sup, 0.05 * detail::inf_norm(w_cur))) {
                accepted = true;
                w_prev.swap(w_cur);
                om_prev = om_cur;
                w_cur = w;
                om_cur = om;

                StandingWave wave;
                wave.omega = om;
                wave.power = power;
                wave.origin = seed.origin;
                wave.profile = sys.op.to_function<double>(w);
                sys.residual(w, om, f);
                double rsup = 0.0;
                for (int i = 0; i < n; ++i)
                    rsup = std::max(rsup, std::abs(f[i]) / sys.op.sqrt_mass[i]);
                wave.residual = rsup;
                wave.refresh_functionals();
                BranchPoint bp;
                bp.wave = std::move(wave);
                bp.min_pivot = min_pivot;
                branch.points.push_back(std::move(bp));
                step = std::min(step * 1.4, opts.max_step);
            } else {
                step *= 0.5;
                if (step < opts.min_step) {
                    branch.truncated = true;
                    break;
                }
            }
        }
        if (branch.truncated) break;
        if (om_cur < omega_min || om_cur > omega_max) break;
    }

    return branch;
}

} // namespace detail

/// Continue the branch through [omega_min, omega_max] starting from a
/// converged seed; records mass, energy, folds, and slope estimates. A seed
/// interior to the range is continued in both directions and spliced.
inline Branch continue_branch(const StandingWave& seed, double omega_min, double omega_max,
                              ContinuationOptions opts = {})
{
    if (!(omega_min < omega_max && omega_max < 0.0))
        throw std::invalid_argument("continue_branch: need omega_min < omega_max < 0");

    Branch branch;
    const bool interior = seed.omega - omega_min > 1e-9 * std::abs(omega_min) &&
                          omega_max - seed.omega > 1e-9 * std::abs(omega_min);
    if (opts.direction == 0 && interior) {
        Branch down = detail::continue_one_direction(seed, omega_min, omega_max, -1, opts);
        Branch up = detail::continue_one_direction(seed, omega_min, omega_max, +1, opts);
        branch.truncated = down.truncated || up.truncated;
        branch.points.reserve(down.points.size() + up.points.size());
        for (auto it = down.points.rbegin(); it != down.points.rend(); ++it)
            branch.points.push_back(std::move(*it));
        for (size_t i = 1; i < up.points.size(); ++i) // skip the duplicated seed
            branch.points.push_back(std::move(up.points[i]));
    } else {
        int direction = opts.direction;
        if (direction == 0)
            direction = (omega_max - seed.omega >= seed.omega - omega_min) ? +1 : -1;
        branch = detail::continue_one_direction(seed, omega_min, omega_max, direction, opts);
    }

    // slope per interior point by centered differences
    auto& pts = branch.points;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const double dw = pts[i + 1].wave.omega - pts[i - 1].wave.omega;
        if (dw != 0.0)
            pts[i].slope = (pts[i + 1].wave.mass - pts[i - 1].wave.mass) / dw;
    }
    return branch;
}

} // namespace graphwave
