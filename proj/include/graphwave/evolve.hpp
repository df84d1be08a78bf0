// Conservative time integration of the NLS flow on a graph: implicit
// midpoint steps with a fixed-point inner iteration on the nonlinearity.
// The update is a Cayley transform of the symmetric midpoint Hamiltonian,
// so the discrete mass is conserved to the inner-iteration tolerance.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "graphwave/calculus.hpp"
#include "graphwave/operators.hpp"
#include "graphwave/rootfind.hpp"
#include "graphwave/soliton.hpp"

namespace graphwave {

struct EvolveOptions {
    double inner_tolerance = 1e-12;
    int max_inner = 25;
    int snapshot_stride = 0;                 // 0: keep no intermediate snapshots
    const GraphFunction* reference = nullptr; // orbital-distance target
    bool allow_supercritical_mass = false;    // overrides the p = 2 collapse guard
};

struct TrajectoryPoint {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double orbital_distance = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<TrajectoryPoint> samples; // one per accepted step (plus t = 0)
    std::vector<std::pair<double, GraphFunction>> snapshots;
    GraphFunction state;
    int halved_steps = 0; // inner-iteration rescues, logged
};

/// inf over theta of ||psi - e^{-i theta} phi||_{H1}, scanned on a theta
/// grid and polished by Brent. The theta dependence reduces to a single
/// complex H1 cross-inner product, so the scan is cheap.
inline double orbital_distance(const GraphFunction& psi, const GraphFunction& phi)
{
    if (!psi.same_layout(phi))
        throw std::invalid_argument("orbital_distance: functions on mismatched grids");
    const double npsi = h1_inner(psi, psi).real();
    const double nphi = h1_inner(phi, phi).real();
    const std::complex<double> cross = h1_inner(phi, psi);
    auto dist2 = [&](double theta) {
        return npsi + nphi - 2.0 * (std::polar(1.0, theta) * cross).real();
    };
    const int grid = 256;
    double best_theta = 0.0, best = dist2(0.0);
    for (int i = 1; i < grid; ++i) {
        const double th = 2.0 * M_PI * i / grid;
        const double d = dist2(th);
        if (d < best) {
            best = d;
            best_theta = th;
        }
    }
    const double span = 2.0 * M_PI / grid;
    const double polished = brent_min(dist2, best_theta - span, best_theta + span, 1e-14);
    return std::sqrt(std::max(0.0, std::min(best, dist2(polished))));
}

namespace detail {

struct EvolveSystem {
    SymmetricOperator op;
    std::vector<double> gain;
    double power;
    BorderedMatrix<std::complex<double>> apply_mat; // L_W, diag updated per sweep
    BorderedMatrix<std::complex<double>> solve_mat; // (i/dt) I - L_W / 2

    explicit EvolveSystem(const LayoutPtr& layout, double p)
        : op(assemble_operator(layout, UnboundedClosure::Robin, 0.0)),
          gain(op.nonlinear_gain(p)),
          power(p)
    {
        complexify(apply_mat, 1.0);
        complexify(solve_mat, -0.5);
    }

    void complexify(BorderedMatrix<std::complex<double>>& dst, double factor) const
    {
        const auto& src = op.matrix;
        dst.resize(src.n_chain, src.n_border);
        for (int i = 0; i < src.n_chain; ++i) {
            dst.diag[i] = factor * src.diag[i];
            if (i + 1 < src.n_chain) dst.off[i] = factor * src.off[i];
        }
        for (int j = 0; j < src.n_border; ++j) {
            for (const auto& [row, v] : src.border_cols[j])
                dst.border_cols[j].emplace_back(row, factor * v);
            for (int k = 0; k < src.n_border; ++k)
                dst.border_at(j, k) = factor * src.border_at(j, k);
        }
    }

    double diag_entry(int i) const
    {
        return i < op.matrix.n_chain
                   ? op.matrix.diag[i]
                   : op.matrix.border_at(i - op.matrix.n_chain, i - op.matrix.n_chain);
    }

    /// focusing coefficient per DOF at the midpoint state
    void midpoint_diag(const std::vector<std::complex<double>>& mid, double inv_dt)
    {
        const int n = op.dofs();
        for (int i = 0; i < n; ++i) {
            const double amp2 = std::norm(mid[i]);
            const double nl = -(power + 1.0) * gain[i] * std::pow(amp2, power);
            const double d = diag_entry(i) + nl;
            if (i < op.matrix.n_chain) {
                apply_mat.diag[i] = d;
                solve_mat.diag[i] = std::complex<double>(-0.5 * d, inv_dt);
            } else {
                const int j = i - op.matrix.n_chain;
                apply_mat.border_at(j, j) = d;
                solve_mat.border_at(j, j) = std::complex<double>(-0.5 * d, inv_dt);
            }
        }
    }

    double dof_energy(const std::vector<std::complex<double>>& w) const
    {
        // quadratic part through the real structure
        const int n = op.dofs();
        std::vector<double> re(n), im(n), are(n), aim(n);
        for (int i = 0; i < n; ++i) {
            re[i] = w[i].real();
            im[i] = w[i].imag();
        }
        op.matrix.multiply(re, are);
        op.matrix.multiply(im, aim);
        double quad = 0.0, foc = 0.0;
        for (int i = 0; i < n; ++i) {
            quad += re[i] * are[i] + im[i] * aim[i];
            foc += gain[i] * std::pow(std::norm(w[i]), power + 1.0);
        }
        return quad - foc;
    }
};

} // namespace detail

/// Implicit-midpoint evolution of psi0 up to time T with step dt.
inline Trajectory evolve(const GraphFunction& psi0, double power, double dt, double T,
                         EvolveOptions opts = {})
{
    if (!(power > 0.0 && power <= 2.0))
        throw std::invalid_argument("evolve: power outside (0, 2]");
    if (!(dt > 0.0 && T > 0.0)) throw std::invalid_argument("evolve: dt and T must be positive");

    const auto layout = psi0.layout();
    detail::EvolveSystem sys(layout, power);
    const int n = sys.op.dofs();

    std::vector<std::complex<double>> w = sys.op.from_function(psi0);

    if (power == 2.0 && !opts.allow_supercritical_mass) {
        double m = 0.0;
        for (const auto& x : w) m += std::norm(x);
        if (m > M_PI / 2 * (1.0 + 1e-12))
            throw std::invalid_argument(
                "evolve: initial mass above the critical line value; override to proceed");
    }

    Trajectory traj;
    std::vector<std::complex<double>> mid(n), mid_prev(n), mid_prev2(n), rhs(n), wn(n);

    auto record = [&](double t) {
        TrajectoryPoint pt;
        pt.t = t;
        double m = 0.0;
        for (const auto& x : w) m += std::norm(x);
        pt.mass = m;
        pt.energy = sys.dof_energy(w);
        if (opts.reference) {
            auto f = sys.op.to_function<std::complex<double>>(w);
            pt.orbital_distance = orbital_distance(f, *opts.reference);
        }
        traj.samples.push_back(pt);
    };
    record(0.0);

    // one midpoint step of size h; returns false if the inner iteration
    // fails to contract
    auto try_step = [&](double h) -> bool {
        const double inv_dt = 1.0 / h;
        mid = w;
        double delta = 1e300;
        for (int it = 0; it < opts.max_inner; ++it) {
            sys.midpoint_diag(mid, inv_dt);
            sys.apply_mat.multiply(w, rhs);
            for (int i = 0; i < n; ++i)
                rhs[i] = std::complex<double>(0.0, inv_dt) * w[i] + 0.5 * rhs[i];
            wn = rhs;
            BorderedFactor<std::complex<double>> factor(sys.solve_mat, 0.0);
            factor.solve_inplace(wn);
            delta = 0.0;
            double scale = 0.0;
            for (int i = 0; i < n; ++i) {
                const std::complex<double> m2 = 0.5 * (w[i] + wn[i]);
                delta = std::max(delta, std::abs(m2 - mid[i]));
                scale = std::max(scale, std::abs(m2));
                mid_prev2[i] = mid_prev[i];
                mid_prev[i] = mid[i];
                mid[i] = m2;
            }
            if (it >= 2 && (it - 2) % 3 == 0) {
                // Aitken acceleration on the midpoint sequence
                for (int i = 0; i < n; ++i) {
                    const std::complex<double> d1 = mid_prev[i] - mid_prev2[i];
                    const std::complex<double> d2 = mid[i] - mid_prev[i];
                    const std::complex<double> dd = d2 - d1;
                    if (std::abs(dd) > 1e-14 * std::max(1.0, std::abs(mid[i])))
                        mid[i] = mid[i] - d2 * d2 / dd;
                }
            }
            if (delta <= opts.inner_tolerance * std::max(1.0, scale)) {
                w = wn;
                return true;
            }
        }
        return false;
    };

    const long steps = static_cast<long>(std::llround(T / dt));
    double t = 0.0;
    for (long s = 0; s < steps; ++s) {
        if (!try_step(dt)) {
            // halve the step once, integrate two half steps, keep going
            ++traj.halved_steps;
            if (!try_step(0.5 * dt) || !try_step(0.5 * dt))
                throw std::runtime_error("evolve: inner iteration failed to converge");
        }
        t += dt;
        record(t);
        if (opts.snapshot_stride > 0 && (s + 1) % opts.snapshot_stride == 0)
            traj.snapshots.emplace_back(t, sys.op.to_function<std::complex<double>>(w));
    }

    traj.state = sys.op.to_function<std::complex<double>>(w);
    return traj;
}

} // namespace graphwave
