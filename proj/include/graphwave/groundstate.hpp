// Constrained energy minimization at fixed mass by a normalized gradient
// flow with Barzilai-Borwein steps, the half-/full-soliton energy bracket,
// and the topological non-existence screen (two disjoint trails to
// infinity, with the bubble-tower exception).
#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <vector>

#include "graphwave/operators.hpp"
#include "graphwave/soliton.hpp"

namespace graphwave {

enum class MinimizeTermination { Converged, Runaway, MaxIterations };

struct MinimizeSample {
    int iteration = 0;
    double energy = 0.0;
    double omega_estimate = 0.0;
    double gradient_norm = 0.0;
    std::vector<double> centroids; // per unbounded edge, mass centroid
};

struct MinimizeOptions {
    int max_iterations = 400000;
    double gradient_tolerance = 1e-8;
    double step_min = 1e-4;
    double step_max = 1e-1;
    double runaway_margin = 0.8; // fraction of the truncation length
    int runaway_steps = 200;
    int history_stride = 100;
};

struct MinimizationRun {
    MinimizeTermination termination = MinimizeTermination::MaxIterations;
    double target_mass = 0.0;
    RealGraphFunction profile;
    double energy = 0.0;
    double omega_estimate = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    std::vector<MinimizeSample> history;
};

/// Minimize E at fixed mass by projected gradient descent; declares runaway
/// when the mass centroid on an unbounded edge sits beyond the truncation
/// safety margin for a run of consecutive steps.
inline MinimizationRun minimize_at_mass(const LayoutPtr& layout, double mass_target, double power,
                                        const RealGraphFunction& seed, MinimizeOptions opts = {})
{
    if (!(power > 0.0 && power <= 2.0))
        throw std::invalid_argument("minimize_at_mass: power outside (0, 2]");
    if (!(mass_target > 0.0))
        throw std::invalid_argument("minimize_at_mass: mass must be positive");
    if (power == 2.0 && mass_target > M_PI / 2 * (1.0 + 1e-12))
        throw std::invalid_argument("minimize_at_mass: mass above the critical line value");

    auto op = assemble_operator(layout, UnboundedClosure::Robin, 0.0);
    const auto gain = op.nonlinear_gain(power);
    const int n = op.dofs();

    std::vector<double> w = op.from_function(seed);
    auto project = [&] {
        double m = 0.0;
        for (double x : w) m += x * x;
        if (m == 0.0) throw std::invalid_argument("minimize_at_mass: zero seed");
        const double s = std::sqrt(mass_target / m);
        for (double& x : w) x *= s;
    };
    project();

    auto energy_of = [&](const std::vector<double>& v) {
        std::vector<double> av;
        op.matrix.multiply(v, av);
        double quad = 0.0, foc = 0.0;
        for (int i = 0; i < n; ++i) {
            quad += v[i] * av[i];
            foc += gain[i] * std::pow(v[i] * v[i], power + 1.0);
        }
        return quad - foc;
    };

    // centroid bookkeeping for unbounded edges, mapped onto DOFs once
    const auto& g = layout->graph();
    struct CentroidTerm {
        int dof;
        double coeff; // trapezoid weight * scale^2 / mass
        double x;
    };
    std::vector<std::vector<CentroidTerm>> edge_terms;
    std::vector<int> unbounded_edges;
    for (size_t e = 0; e < g.edges().size(); ++e) {
        if (!g.edge(static_cast<int>(e)).unbounded) continue;
        unbounded_edges.push_back(static_cast<int>(e));
        std::vector<CentroidTerm> terms;
        const auto& eg = layout->edge_grid(static_cast<int>(e));
        for (int i = 0; i <= eg.intervals; ++i) {
            const auto [d, c] = op.node_dof[layout->node_index(static_cast<int>(e), i)];
            if (d < 0) continue;
            const double m = op.sqrt_mass[d] * op.sqrt_mass[d];
            terms.push_back({d, trapezoid_weight(eg, i) * c * c / m, eg.h * i});
        }
        edge_terms.push_back(std::move(terms));
    }
    auto centroids_of = [&](const std::vector<double>& v, double& max_fraction_centroid) {
        std::vector<double> cs;
        max_fraction_centroid = 0.0;
        for (const auto& terms : edge_terms) {
            double m = 0.0, mx = 0.0;
            for (const auto& t : terms) {
                const double c = t.coeff * v[t.dof] * v[t.dof];
                m += c;
                mx += c * t.x;
            }
            const double centroid = (m > 0.0) ? mx / m : 0.0;
            cs.push_back(centroid);
            if (m >= 0.5 * mass_target)
                max_fraction_centroid = std::max(max_fraction_centroid, centroid);
        }
        return cs;
    };

    MinimizationRun run;
    run.target_mass = mass_target;

    std::vector<double> grad(n), grad_prev(n), w_prev(n), av(n);
    auto projected_gradient = [&](const std::vector<double>& v, std::vector<double>& out) {
        op.matrix.multiply(v, out);
        for (int i = 0; i < n; ++i) {
            const double a = std::pow(v[i] * v[i], power);
            out[i] = 2.0 * (out[i] - (power + 1.0) * gain[i] * a * v[i]);
        }
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += out[i] * v[i];
        const double lambda = dot / mass_target;
        for (int i = 0; i < n; ++i) out[i] -= lambda * v[i];
        return lambda; // 2 * omega estimate
    };

    double energy = energy_of(w);
    double step = opts.step_min;
    int beyond_margin = 0;
    const double margin = opts.runaway_margin * layout->truncation();

    for (int it = 0; it < opts.max_iterations; ++it) {
        const double two_omega = projected_gradient(w, grad);
        double gn = 0.0;
        for (double x : grad) gn += x * x;
        gn = std::sqrt(gn);
        run.iterations = it;
        run.omega_estimate = 0.5 * two_omega;
        run.gradient_norm = gn;
        run.energy = energy;

        const bool sampling = (it % opts.history_stride == 0);
        double runaway_centroid = 0.0;
        std::vector<double> cs;
        if (sampling || !unbounded_edges.empty()) cs = centroids_of(w, runaway_centroid);
        if (sampling)
            run.history.push_back({it, energy, 0.5 * two_omega, gn, cs});

        if (!unbounded_edges.empty() && runaway_centroid > margin) {
            if (++beyond_margin >= opts.runaway_steps) {
                run.termination = MinimizeTermination::Runaway;
                break;
            }
        } else {
            beyond_margin = 0;
        }

        if (gn < opts.gradient_tolerance) {
            run.termination = MinimizeTermination::Converged;
            break;
        }

        // Barzilai-Borwein step, clipped; fall back to backtracking whenever
        // the energy would increase (the flow stays monotone)
        if (it > 0) {
            double ss = 0.0, sy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double si = w[i] - w_prev[i];
                const double yi = grad[i] - grad_prev[i];
                ss += si * si;
                sy += si * yi;
            }
            step = (sy > 0.0) ? ss / sy : opts.step_max;
            step = std::min(opts.step_max, std::max(opts.step_min, step));
        }
        w_prev = w;
        grad_prev = grad;

        double trial_step = step;
        bool stalled = true;
        for (int back = 0; back < 40; ++back) {
            for (int i = 0; i < n; ++i) w[i] = w_prev[i] - trial_step * grad[i];
            project();
            const double e_new = energy_of(w);
            if (e_new <= energy + 1e-12 * std::max(1.0, std::abs(energy))) {
                energy = e_new;
                stalled = false;
                break;
            }
            trial_step *= 0.5;
        }
        if (stalled) {
            // numerical stationarity: no descent direction at roundoff scale
            w = w_prev;
            run.termination = MinimizeTermination::Converged;
            break;
        }
    }

    run.profile = op.to_function<double>(w);
    // global sign normalization: minimizers are positive up to sign
    double mean = 0.0;
    for (double v : run.profile.values()) mean += v;
    if (mean < 0.0) {
        for (auto& v : run.profile.values()) v = -v;
    }
    return run;
}

/// Rearrangement bracket at fixed mass: the half-line ground state below,
/// the line soliton above.
inline std::pair<double, double> energy_bracket(double mass, double power)
{
    if (!(power > 0.0 && power < 2.0))
        throw std::invalid_argument("energy_bracket: power outside (0, 2)");
    const double upper = soliton_energy_for_mass(power, mass);
    const double lower = 0.5 * soliton_energy_for_mass(power, 2.0 * mass);
    return {lower, upper};
}

// ---------------------------------------------------------------------------
// Topological non-existence screen.
// ---------------------------------------------------------------------------

enum class EscapeClass { Escapes, TrappedCandidate };

namespace detail {

// unit-capacity undirected max flow by BFS augmentation, capped at `need`
class UnitFlow {
public:
    explicit UnitFlow(int nodes) : head_(nodes, -1) {}

    void add_undirected(int u, int v)
    {
        add_arc(u, v, 1);
        add_arc(v, u, 1);
        // the two arcs are residuals of each other
        arcs_[arcs_.size() - 2].rev = static_cast<int>(arcs_.size()) - 1;
        arcs_[arcs_.size() - 1].rev = static_cast<int>(arcs_.size()) - 2;
    }

    void add_directed(int u, int v, int cap)
    {
        add_arc(u, v, cap);
        add_arc(v, u, 0);
        arcs_[arcs_.size() - 2].rev = static_cast<int>(arcs_.size()) - 1;
        arcs_[arcs_.size() - 1].rev = static_cast<int>(arcs_.size()) - 2;
    }

    int max_flow(int s, int t, int need)
    {
        int total = 0;
        while (total < need) {
            std::vector<int> via(head_.size(), -1);
            std::deque<int> queue = {s};
            while (!queue.empty() && via[t] < 0) {
                const int u = queue.front();
                queue.pop_front();
                for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
                    if (arcs_[a].cap <= 0) continue;
                    const int v = arcs_[a].to;
                    if (v != s && via[v] < 0) {
                        via[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if (via[t] < 0) break;
            for (int v = t; v != s;) {
                const int a = via[v];
                arcs_[a].cap -= 1;
                arcs_[arcs_[a].rev].cap += 1;
                v = arc_from(a);
            }
            ++total;
        }
        return total;
    }

private:
    struct Arc {
        int to;
        int cap;
        int next;
        int rev;
    };

    void add_arc(int u, int v, int cap)
    {
        arcs_.push_back({v, cap, head_[u], -1});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        from_.push_back(u);
    }

    int arc_from(int a) const { return from_[a]; }

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<int> from_;
};

inline bool is_bubble_tower(const MetricGraph& g)
{
    // exactly two half-lines at a common base vertex, with the finite edges
    // forming a chain of parallel equal-length pairs
    std::vector<int> ray_bases;
    std::map<std::pair<int, int>, std::vector<double>> pairs;
    for (const auto& e : g.edges()) {
        if (e.unbounded) {
            ray_bases.push_back(e.from);
            continue;
        }
        if (e.is_loop()) return false;
        const auto key = std::minmax(e.from, e.to);
        pairs[{key.first, key.second}].push_back(e.length);
    }
    if (ray_bases.size() != 2 || ray_bases[0] != ray_bases[1]) return false;
    for (const auto& [key, lengths] : pairs) {
        if (lengths.size() != 2) return false;
        if (std::abs(lengths[0] - lengths[1]) > 1e-12 * std::max(lengths[0], lengths[1]))
            return false;
    }
    // walk the chain of bubbles upward from the base
    int current = ray_bases[0];
    while (!pairs.empty()) {
        int next = -2;
        for (const auto& [key, lengths] : pairs) {
            const int other = (key.first == current)    ? key.second
                              : (key.second == current) ? key.first
                                                        : -2;
            if (other == -2) continue;
            if (next != -2) return false; // branching: not a chain
            next = other;
        }
        if (next == -2) return false; // disconnected leftovers
        pairs.erase({std::min(current, next), std::max(current, next)});
        current = next;
    }
    return true;
}

} // namespace detail

/// Does every point of the graph lie on a trail through two distinct
/// half-lines? Checked with unit-capacity max flows per point class; graphs
/// isometric to a bubble tower are excepted and reported trapped.
inline EscapeClass nonexistence_screen(const MetricGraph& g)
{
    for (const auto& v : g.vertices()) {
        const auto& c = v.condition;
        const bool nk_like = c.kind == ConditionKind::NeumannKirchhoff ||
                             (c.kind == ConditionKind::Delta && c.strength == 0.0);
        if (!nk_like)
            throw std::invalid_argument("nonexistence_screen: requires Neumann-Kirchhoff vertices");
    }
    for (const auto& e : g.edges())
        if (e.potential)
            throw std::invalid_argument("nonexistence_screen: requires zero potential");

    if (g.half_line_count() < 2) return EscapeClass::TrappedCandidate;
    if (detail::is_bubble_tower(g)) return EscapeClass::TrappedCandidate;

    const int nv = static_cast<int>(g.vertices().size());
    const int sink = nv;
    const int source = nv + 1;

    auto build = [&](int skip_edge) {
        detail::UnitFlow flow(nv + 2);
        for (size_t e = 0; e < g.edges().size(); ++e) {
            if (static_cast<int>(e) == skip_edge) continue;
            const auto& edge = g.edge(static_cast<int>(e));
            if (edge.unbounded)
                flow.add_directed(edge.from, sink, 1);
            else
                flow.add_undirected(edge.from, edge.to);
        }
        return flow;
    };

    // vertices: two edge-disjoint trails to distinct half-lines
    for (int v = 0; v < nv; ++v) {
        auto flow = build(-1);
        flow.add_directed(source, v, 2);
        if (flow.max_flow(source, sink, 2) < 2) return EscapeClass::TrappedCandidate;
    }
    // interior points of finite edges: one trail out of each endpoint,
    // avoiding the edge itself
    for (size_t e = 0; e < g.edges().size(); ++e) {
        const auto& edge = g.edge(static_cast<int>(e));
        if (edge.unbounded) continue;
        auto flow = build(static_cast<int>(e));
        if (edge.is_loop()) {
            flow.add_directed(source, edge.from, 2);
        } else {
            flow.add_directed(source, edge.from, 1);
            flow.add_directed(source, edge.to, 1);
        }
        if (flow.max_flow(source, sink, 2) < 2) return EscapeClass::TrappedCandidate;
    }
    // points on half-lines: the ray covers one direction; the base needs a
    // trail to some other half-line
    for (size_t e = 0; e < g.edges().size(); ++e) {
        const auto& edge = g.edge(static_cast<int>(e));
        if (!edge.unbounded) continue;
        auto flow = build(static_cast<int>(e));
        flow.add_directed(source, edge.from, 1);
        if (flow.max_flow(source, sink, 1) < 1) return EscapeClass::TrappedCandidate;
    }
    return EscapeClass::Escapes;
}

} // namespace graphwave
