// Orbital-stability verdicts from Morse index, kernel dimension, and the
// mass-frequency slope, plus the closed-form star-graph reference cases.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphwave/solver.hpp"
#include "graphwave/spectra.hpp"

namespace graphwave {

enum class StabilityVerdict { Stable, Unstable, Inconclusive };

inline const char* to_string(StabilityVerdict v)
{
    switch (v) {
    case StabilityVerdict::Stable: return "stable";
    case StabilityVerdict::Unstable: return "unstable";
    case StabilityVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

struct StabilityReport {
    int n_plus = 0;
    int z_plus = 0;
    int n_minus = 0;
    int z_minus = 0;
    double slope = 0.0;
    int slope_sign = 0; // -1, 0 (inside the band), +1
    double slope_band = 0.0;
    StabilityVerdict verdict = StabilityVerdict::Inconclusive;
    std::vector<std::string> notes;
    std::vector<double> eigenvalue_head; // lowest eigenvalues of L+
};

/// Assemble L+/L- at the wave, count spectrum, apply the slope criterion:
/// n(L+)=1 with clean kernels and negative slope is orbitally stable;
/// n(L+)>=2 or positive slope is unstable; everything else inconclusive.
inline StabilityReport stability_report(const StandingWave& wave, double slope,
                                        int eigenvalue_head = 4)
{
    for (double v : wave.profile.values())
        if (v < 0.0)
            throw std::invalid_argument("stability_report: wave profile must be positive");
    if (!(wave.omega < 0.0))
        throw std::invalid_argument("stability_report: omega must be negative");

    StabilityReport report;
    report.slope = slope;

    // omega must avoid the linear spectrum
    {
        auto linear = assemble_operator(wave.profile.layout(), UnboundedClosure::Robin,
                                        std::sqrt(-wave.omega));
        BorderedFactor<double> probe(linear.matrix, wave.omega);
        if (probe.kernel_hit()) {
            report.notes.push_back("omega sits on the linear spectrum");
            return report;
        }
    }

    auto [lp, lm] = assemble_linearization(wave.profile, wave.power, wave.omega);
    // Converged waves pin the discrete L- kernel at the solver tolerance, so
    // a band far tighter than the generic 1e-6 ||A|| default is reliable here
    // and resolves the exponentially small positive modes of loop pulses.
    const double band = 1e-9 * std::max(lp.inf_norm(), lm.inf_norm());
    report.n_plus = morse_index(lp, band);
    report.z_plus = kernel_dim(lp, band);
    report.n_minus = morse_index(lm, band);
    report.z_minus = kernel_dim(lm, band);
    if (eigenvalue_head > 0) {
        auto slice = lowest_eigenvalues(lp, eigenvalue_head);
        report.eigenvalue_head = slice.eigenvalues;
    }

    report.slope_band = 1e-3 * wave.mass / std::abs(wave.omega);
    report.slope_sign = (std::abs(slope) < report.slope_band) ? 0 : (slope < 0 ? -1 : +1);

    const bool clean_kernels =
        report.z_plus == 0 && report.z_minus == 1 && report.n_minus == 0;
    if (!clean_kernels) {
        if (report.z_plus != 0)
            report.notes.push_back("unexpected kernel of L+ (dimension " +
                                   std::to_string(report.z_plus) + ")");
        if (report.z_minus != 1)
            report.notes.push_back("L- kernel dimension " + std::to_string(report.z_minus) +
                                   " instead of the phase mode alone");
        if (report.n_minus != 0)
            report.notes.push_back("L- has negative directions");
        report.verdict = StabilityVerdict::Inconclusive;
        return report;
    }

    if (report.n_plus >= 2) {
        report.verdict = StabilityVerdict::Unstable;
    } else if (report.n_plus == 1) {
        if (report.slope_sign < 0)
            report.verdict = StabilityVerdict::Stable;
        else if (report.slope_sign > 0)
            report.verdict = StabilityVerdict::Unstable;
        else {
            report.verdict = StabilityVerdict::Inconclusive;
            report.notes.push_back("slope inside the zero band");
        }
    } else {
        report.verdict = StabilityVerdict::Inconclusive;
        report.notes.push_back("L+ without negative directions");
    }
    return report;
}

inline StabilityReport stability_report(const StandingWave& wave, const Branch& branch,
                                        int eigenvalue_head = 4)
{
    auto est = slope_at(branch, wave.omega);
    auto report = stability_report(wave, est.value, eigenvalue_head);
    if (est.one_sided) report.notes.push_back("slope estimated one-sided at a branch end");
    return report;
}

// ---------------------------------------------------------------------------
// Star graphs with a delta vertex: closed-form reference states.
// ---------------------------------------------------------------------------

struct StarReference {
    int n_plus = 0;
    int z_plus = 0;
    int n_minus = 0;
    int z_minus = 1;
    bool stable = false;
};

/// Spectral counts of the j-bump state on the N-star with delta strength
/// alpha: n(L+) = j+1 for alpha < 0 and N-j for alpha > 0; the tail state
/// j = 0 with alpha < 0 is the stable one.
inline StarReference star_reference(int n_edges, double alpha, int bumps, double omega)
{
    if (alpha == 0.0) throw std::invalid_argument("star_reference: alpha must be nonzero");
    if (bumps < 0 || 2 * bumps > n_edges - 1)
        throw std::invalid_argument("star_reference: bumps outside 0..(N-1)/2");
    const double thr = alpha * alpha / ((n_edges - 2 * bumps) * (n_edges - 2 * bumps));
    if (!(omega < -thr))
        throw std::invalid_argument("star_reference: omega above the existence threshold");
    StarReference ref;
    ref.n_plus = (alpha < 0) ? bumps + 1 : n_edges - bumps;
    ref.stable = (alpha < 0) && bumps == 0 && omega < -alpha * alpha / (n_edges * n_edges);
    return ref;
}

/// The j-bump bound state on the N-star assembled from soliton pieces:
/// bump edges carry phi(x - a), tails phi(x + a), with
/// tanh(p sqrt(|omega|) a) = |alpha| / ((N-2j) sqrt(|omega|)).
inline RealGraphFunction star_state(const LayoutPtr& layout, double alpha, int bumps,
                                    double omega, double power = 1.0)
{
    const MetricGraph& g = layout->graph();
    const int n_edges = static_cast<int>(g.edges().size());
    if (alpha == 0.0) throw std::invalid_argument("star_state: alpha must be nonzero");
    const double s = std::sqrt(-omega);
    const double t = std::abs(alpha) / ((n_edges - 2 * bumps) * s);
    if (!(t < 1.0)) throw std::invalid_argument("star_state: omega above the existence threshold");
    const double a = std::atanh(t) / (power * s);
    const SolitonParams sp(omega, power);
    const int bump_count = (alpha < 0) ? bumps : n_edges - bumps;
    return sample_real(layout, [&](int e, double x) {
        const double shift = (e < bump_count) ? -a : +a;
        return nls_soliton(sp, x + shift);
    });
}

} // namespace graphwave
