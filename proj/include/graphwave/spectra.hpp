// Low-lying spectra of assembled operators: eigenvalue counts by Sylvester
// inertia and eigenpairs by bisection plus shifted inverse iteration.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "graphwave/operators.hpp"

namespace graphwave {

struct SpectrumSlice {
    std::vector<double> eigenvalues;             // ascending
    std::vector<RealGraphFunction> eigenvectors; // matching order
    std::vector<double> residuals;               // ||A v - lambda v|| / ||v||
    int negative_count = 0;                      // lambda < -tol
    int zero_count = 0;                          // |lambda| <= tol
    double tol = 0.0;
};

namespace detail {

// Deterministic xorshift generator for inverse-iteration starting vectors.
struct Xorshift {
    uint64_t state;
    explicit Xorshift(uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}
    double uniform()
    {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0) - 0.5;
    }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace detail

/// Number of eigenvalues strictly below sigma.
inline int count_below(const SymmetricOperator& op, double sigma)
{
    const double scale = std::max(1.0, op.inf_norm());
    double s = sigma;
    for (int attempt = 0; attempt < 8; ++attempt) {
        BorderedFactor<double> f(op.matrix, s);
        if (!f.kernel_hit()) return f.negative_count();
        s += scale * 1e-13 * (attempt + 1); // nudge off an exact eigenvalue
    }
    BorderedFactor<double> f(op.matrix, s);
    return f.negative_count();
}

inline double default_classification_tol(const SymmetricOperator& op)
{
    return 1e-6 * op.inf_norm();
}

/// Morse index: number of eigenvalues below -tol.
inline int morse_index(const SymmetricOperator& op, double tol = -1.0)
{
    if (tol < 0.0) tol = default_classification_tol(op);
    return count_below(op, -tol);
}

/// Kernel dimension: number of eigenvalues in [-tol, tol].
inline int kernel_dim(const SymmetricOperator& op, double tol = -1.0)
{
    if (tol < 0.0) tol = default_classification_tol(op);
    return count_below(op, tol) - count_below(op, -tol);
}

/// k lowest eigenpairs. tol controls the negative/zero classification (the
/// operator-scaled default when negative).
inline SpectrumSlice lowest_eigenvalues(const SymmetricOperator& op, int k, double tol = -1.0)
{
    if (k < 1) throw std::invalid_argument("lowest_eigenvalues: k must be >= 1");
    k = std::min(k, op.dofs());
    if (tol < 0.0) tol = default_classification_tol(op);

    auto [glo, ghi] = op.matrix.gershgorin();
    const double span = std::max(ghi - glo, 1.0);

    // Upper edge of the slice: smallest sigma with count >= k.
    double lo = glo - 1e-8 * span, hi = ghi + 1e-8 * span;
    {
        double a = lo, b = hi;
        for (int it = 0; it < 80 && (b - a) > 1e-12 * span; ++it) {
            const double m = 0.5 * (a + b);
            if (count_below(op, m) >= k)
                b = m;
            else
                a = m;
        }
        hi = b + 1e-10 * span;
    }

    // Separate the k lowest eigenvalues into tight intervals.
    struct Interval {
        double a, b;
        int ca, cb;
    };
    std::vector<Interval> done;
    std::deque<Interval> work;
    work.push_back({lo, hi, count_below(op, lo), count_below(op, hi)});
    const double width_tol = std::max(1e-12 * span, 1e-11);
    while (!work.empty()) {
        Interval iv = work.front();
        work.pop_front();
        if (iv.cb - iv.ca <= 0 || iv.ca >= k) continue;
        if (iv.b - iv.a <= width_tol) {
            done.push_back(iv);
            continue;
        }
        const double m = 0.5 * (iv.a + iv.b);
        const int cm = count_below(op, m);
        work.push_back({iv.a, m, iv.ca, cm});
        work.push_back({m, iv.b, cm, iv.cb});
    }
    std::sort(done.begin(), done.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });

    // Merge near-degenerate intervals into clusters handled by one shift.
    std::vector<Interval> clusters;
    for (const auto& iv : done) {
        if (!clusters.empty() && iv.a - clusters.back().b < 1e-7 * span) {
            clusters.back().b = iv.b;
            clusters.back().cb = iv.cb;
        } else {
            clusters.push_back(iv);
        }
    }

    SpectrumSlice slice;
    slice.tol = tol;
    detail::Xorshift rng(12345);
    const int n = op.dofs();
    std::vector<std::vector<double>> vectors;

    for (size_t ci = 0; ci < clusters.size(); ++ci) {
        const auto& iv = clusters[ci];
        const int multiplicity = std::min(iv.cb, k) - iv.ca;
        if (multiplicity <= 0) continue;
        // Back the shift off below the cluster: an unpivoted factorization
        // too close to an eigenvalue loses accuracy through element growth.
        const double gap_below =
            (ci == 0) ? 1e300 : iv.a - clusters[ci - 1].b;
        const double shift_dist =
            std::max(1e-8, std::min(1e-4 * std::max(1.0, std::abs(iv.a)), 0.4 * gap_below));
        const double shift = iv.a - shift_dist;
        BorderedFactor<double> f(op.matrix, shift);
        std::vector<std::vector<double>> cluster;
        std::vector<double> av(n);
        auto refined_solve = [&](std::vector<double>& x) {
            const std::vector<double> rhs = x;
            f.solve_inplace(x);
            for (int round = 0; round < 3; ++round) {
                std::vector<double> r(n);
                op.matrix.multiply(x, r);
                for (int i = 0; i < n; ++i) r[i] = rhs[i] - (r[i] - shift * x[i]);
                f.solve_inplace(r);
                for (int i = 0; i < n; ++i) x[i] += r[i];
            }
        };
        for (int m = 0; m < multiplicity; ++m) {
            std::vector<double> v(n);
            for (auto& x : v) x = rng.uniform();
            double rayleigh = 0.5 * (iv.a + iv.b);
            double resid = 1e300;
            std::vector<double> best = v;
            double best_resid = 1e300, best_rayleigh = rayleigh;
            for (int sweep = 0; sweep < 6 && best_resid > 1e-10; ++sweep) {
                refined_solve(v);
                for (const auto& u : vectors) {
                    const double c = detail::dot(v, u);
                    for (int i = 0; i < n; ++i) v[i] -= c * u[i];
                }
                for (const auto& u : cluster) {
                    const double c = detail::dot(v, u);
                    for (int i = 0; i < n; ++i) v[i] -= c * u[i];
                }
                const double nv = detail::nrm2(v);
                if (nv == 0.0) {
                    for (auto& x : v) x = rng.uniform();
                    continue;
                }
                for (auto& x : v) x /= nv;
                op.matrix.multiply(v, av);
                rayleigh = detail::dot(v, av);
                double r2 = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double d = av[i] - rayleigh * v[i];
                    r2 += d * d;
                }
                resid = std::sqrt(r2);
                if (resid < best_resid) {
                    best_resid = resid;
                    best = v;
                    best_rayleigh = rayleigh;
                }
            }
            cluster.push_back(best);
            slice.eigenvalues.push_back(best_rayleigh);
            slice.residuals.push_back(best_resid);
        }
        for (auto& v : cluster) vectors.push_back(std::move(v));
    }

    // Sort ascending by eigenvalue (clusters were appended in interval order;
    // Rayleigh polish may reorder inside a cluster).
    std::vector<int> order(slice.eigenvalues.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return slice.eigenvalues[a] < slice.eigenvalues[b]; });
    SpectrumSlice sorted;
    sorted.tol = tol;
    for (int idx : order) {
        sorted.eigenvalues.push_back(slice.eigenvalues[idx]);
        sorted.residuals.push_back(slice.residuals[idx]);
        sorted.eigenvectors.push_back(op.to_function<double>(vectors[idx]));
    }
    // Counts come from inertia so they see the whole spectrum, not just
    // the k computed pairs.
    sorted.negative_count = count_below(op, -tol);
    sorted.zero_count = count_below(op, tol) - sorted.negative_count;
    return sorted;
}

} // namespace graphwave
