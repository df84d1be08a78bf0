// Assembly of -Delta + V with vertex conditions as a symmetric matrix over
// the grid DOFs. The quadratic form is discretized with linear elements and
// a lumped (trapezoid) mass; the generalized problem K u = lambda M u is
// symmetrized by the diagonal similarity w = M^{1/2} u, so the assembled
// matrix equals its transpose exactly.
//
// DOF layout: interior nodes of every edge form tridiagonal chains; one
// shared unknown per NK/delta/generalized-Kirchhoff vertex and one unknown
// per edge end at delta' vertices sit in the border block.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "graphwave/calculus.hpp"
#include "graphwave/grid.hpp"
#include "graphwave/linalg.hpp"

namespace graphwave {

enum class UnboundedClosure {
    Dirichlet, // u = 0 at the truncation point
    Robin,     // u' = -rate * u at the truncation point (matched decay)
};

struct DofSample {
    int edge;
    int node;
    double weight; // trapezoid weight
    double scale;  // function value at the sample = scale * u_dof
};

class SymmetricOperator {
public:
    BorderedMatrix<double> matrix;       // scaled matrix M^{-1/2} K M^{-1/2}
    std::vector<double> sqrt_mass;       // per DOF
    std::vector<std::vector<DofSample>> samples; // per DOF
    std::vector<std::pair<int, double>> node_dof; // node -> (dof, scale); dof -1 = fixed zero
    LayoutPtr layout;

    int dofs() const { return matrix.size(); }

    double inf_norm() const
    {
        if (inf_norm_ < 0.0) inf_norm_ = matrix.inf_norm();
        return inf_norm_;
    }

    /// Pointwise gain of the focusing term per DOF for nonlinearity power p:
    /// G_dof such that the scaled residual carries -(p+1) G |w|^{2p} w.
    std::vector<double> nonlinear_gain(double power) const
    {
        std::vector<double> gain(dofs(), 0.0);
        const auto& g = layout->graph();
        for (int d = 0; d < dofs(); ++d) {
            double s = 0.0;
            for (const auto& smp : samples[d])
                if (g.edge(smp.edge).nonlinear)
                    s += smp.weight * std::pow(smp.scale * smp.scale, power + 1.0);
            const double m = sqrt_mass[d] * sqrt_mass[d];
            gain[d] = s * std::pow(m, -(power + 1.0));
        }
        return gain;
    }

    template <class T>
    BasicGraphFunction<T> to_function(const std::vector<T>& w) const
    {
        BasicGraphFunction<T> f(layout);
        for (size_t node = 0; node < node_dof.size(); ++node) {
            const auto [d, c] = node_dof[node];
            f.values()[node] = (d >= 0) ? T(c / sqrt_mass[d]) * w[d] : T{};
        }
        return f;
    }

    template <class T>
    std::vector<T> from_function(const BasicGraphFunction<T>& f) const
    {
        std::vector<T> w(dofs(), T{});
        for (int d = 0; d < dofs(); ++d) {
            T sum{};
            for (const auto& smp : samples[d])
                sum += f.at(smp.edge, smp.node) * (1.0 / smp.scale);
            w[d] = sum * (sqrt_mass[d] / static_cast<double>(samples[d].size()));
        }
        return w;
    }

    RealGraphFunction to_real_function(const std::vector<double>& w) const
    {
        return to_function<double>(w);
    }

private:
    mutable double inf_norm_ = -1.0;
};

/// Assemble the scaled operator. extra_node_coeff, when given, adds a
/// pointwise multiplicative potential-like term per grid node (used for the
/// linearization coefficients); constant_shift adds c*I to the scaled
/// matrix (used for the -omega term).
inline SymmetricOperator assemble_operator(const LayoutPtr& layout,
                                           UnboundedClosure closure = UnboundedClosure::Dirichlet,
                                           double robin_rate = 0.0,
                                           const std::vector<double>* extra_node_coeff = nullptr,
                                           double constant_shift = 0.0)
{
    const MetricGraph& g = layout->graph();
    const auto& grids = layout->edge_grids();
    const int n_edges = static_cast<int>(g.edges().size());
    const int n_vertices = static_cast<int>(g.vertices().size());

    SymmetricOperator op;
    op.layout = layout;
    op.node_dof.assign(layout->total_nodes(), {-1, 1.0});

    // Chain DOFs: interior nodes, plus the truncation node under Robin closure.
    int n_chain = 0;
    for (int e = 0; e < n_edges; ++e) {
        const int n = grids[e].intervals;
        const int last = g.edge(e).unbounded && closure == UnboundedClosure::Robin ? n : n - 1;
        for (int i = 1; i <= last; ++i)
            op.node_dof[layout->node_index(e, i)] = {n_chain++, 1.0};
    }

    // Border DOFs per vertex.
    int n_border = 0;
    std::vector<int> vertex_dof(n_vertices, -1); // first border DOF of the vertex
    for (int v = 0; v < n_vertices; ++v) {
        const auto& cond = g.vertex(v).condition;
        const auto& ends = g.incident(v);
        if (ends.empty()) continue;
        vertex_dof[v] = n_chain + n_border;
        if (cond.kind == ConditionKind::DeltaPrime) {
            if (cond.strength == 0.0)
                throw std::invalid_argument("assemble_operator: delta-prime vertex needs beta != 0");
            for (size_t k = 0; k < ends.size(); ++k) {
                op.node_dof[layout->node_index(ends[k].edge, layout->end_node(ends[k]))] = {
                    n_chain + n_border, 1.0};
                ++n_border;
            }
        } else {
            const int dof = n_chain + n_border;
            for (size_t k = 0; k < ends.size(); ++k) {
                double scale = 1.0;
                if (cond.kind == ConditionKind::GeneralizedKirchhoff) {
                    if (cond.weights.size() != ends.size())
                        throw std::invalid_argument(
                            "assemble_operator: generalized-Kirchhoff weights mismatch");
                    if (!(cond.weights[k] > 0.0))
                        throw std::invalid_argument(
                            "assemble_operator: non-positive generalized-Kirchhoff weight");
                    scale = 1.0 / cond.weights[k];
                }
                op.node_dof[layout->node_index(ends[k].edge, layout->end_node(ends[k]))] = {dof,
                                                                                            scale};
            }
            ++n_border;
        }
    }

    op.matrix.resize(n_chain, n_border);
    auto& mat = op.matrix;

    // Samples and lumped mass per DOF.
    op.samples.assign(n_chain + n_border, {});
    for (int e = 0; e < n_edges; ++e)
        for (int i = 0; i <= grids[e].intervals; ++i) {
            const auto [d, c] = op.node_dof[layout->node_index(e, i)];
            if (d >= 0) op.samples[d].push_back({e, i, trapezoid_weight(grids[e], i), c});
        }
    op.sqrt_mass.assign(n_chain + n_border, 0.0);
    for (int d = 0; d < n_chain + n_border; ++d) {
        double m = 0.0;
        for (const auto& smp : op.samples[d]) m += smp.weight * smp.scale * smp.scale;
        op.sqrt_mass[d] = std::sqrt(m);
    }

    // Stiffness entries, pre-scaling. Chain adjacency goes into diag/off,
    // everything touching the border into border_cols / border_block.
    std::vector<double> diag(n_chain + n_border, 0.0);
    auto add_pair = [&](int da, double ca, int db, double cb, double inv_h) {
        if (da >= 0) diag[da] += ca * ca * inv_h;
        if (db >= 0) diag[db] += cb * cb * inv_h;
        if (da < 0 || db < 0) return;
        const double coupling = -ca * cb * inv_h;
        if (da < n_chain && db < n_chain) {
            // adjacent chain nodes of the same edge
            mat.off[std::min(da, db)] += coupling;
        } else if (da < n_chain) {
            mat.add_border_coupling(db - n_chain, da, coupling);
        } else if (db < n_chain) {
            mat.add_border_coupling(da - n_chain, db, coupling);
        } else {
            mat.border_at(da - n_chain, db - n_chain) += coupling;
            mat.border_at(db - n_chain, da - n_chain) += coupling;
        }
    };

    for (int e = 0; e < n_edges; ++e) {
        const double inv_h = 1.0 / grids[e].h;
        for (int i = 0; i < grids[e].intervals; ++i) {
            const auto [da, ca] = op.node_dof[layout->node_index(e, i)];
            const auto [db, cb] = op.node_dof[layout->node_index(e, i + 1)];
            add_pair(da, ca, db, cb, inv_h);
        }
        if (g.edge(e).unbounded && closure == UnboundedClosure::Robin) {
            const auto [d, c] = op.node_dof[layout->node_index(e, grids[e].intervals)];
            if (d >= 0) diag[d] += robin_rate * c * c;
        }
    }

    // Vertex condition terms.
    for (int v = 0; v < n_vertices; ++v) {
        const auto& cond = g.vertex(v).condition;
        const auto& ends = g.incident(v);
        if (ends.empty()) continue;
        if (cond.kind == ConditionKind::Delta && cond.strength != 0.0) {
            diag[vertex_dof[v]] += cond.strength;
        } else if (cond.kind == ConditionKind::DeltaPrime) {
            const double inv_beta = 1.0 / cond.strength;
            for (size_t a = 0; a < ends.size(); ++a)
                for (size_t b = 0; b < ends.size(); ++b) {
                    const int da = vertex_dof[v] + static_cast<int>(a);
                    const int db = vertex_dof[v] + static_cast<int>(b);
                    if (da == db)
                        diag[da] += inv_beta;
                    else
                        mat.border_at(da - n_chain, db - n_chain) += inv_beta;
                }
        }
    }

    // Potential and extra pointwise coefficients.
    for (int d = 0; d < n_chain + n_border; ++d) {
        double s = 0.0;
        for (const auto& smp : op.samples[d]) {
            double q = 0.0;
            const auto& edge = g.edge(smp.edge);
            if (edge.potential) q += edge.potential(grids[smp.edge].h * smp.node);
            if (extra_node_coeff)
                q += (*extra_node_coeff)[layout->node_index(smp.edge, smp.node)];
            s += smp.weight * smp.scale * smp.scale * q;
        }
        diag[d] += s;
    }

    // Diagonal similarity: A~ = M^{-1/2} K M^{-1/2} + constant_shift * I.
    for (int i = 0; i < n_chain; ++i) {
        mat.diag[i] = diag[i] / (op.sqrt_mass[i] * op.sqrt_mass[i]) + constant_shift;
        if (i + 1 < n_chain && mat.off[i] != 0.0)
            mat.off[i] /= op.sqrt_mass[i] * op.sqrt_mass[i + 1];
    }
    for (int j = 0; j < n_border; ++j) {
        const int dj = n_chain + j;
        for (auto& [row, val] : mat.border_cols[j]) val /= op.sqrt_mass[row] * op.sqrt_mass[dj];
        for (int k = j + 1; k < n_border; ++k) {
            mat.border_at(j, k) /= op.sqrt_mass[dj] * op.sqrt_mass[n_chain + k];
            mat.border_at(k, j) = mat.border_at(j, k);
        }
        mat.border_at(j, j) =
            diag[dj] / (op.sqrt_mass[dj] * op.sqrt_mass[dj]) + constant_shift;
    }

    return op;
}

/// The discretized -Delta + V with the graph's vertex conditions.
inline SymmetricOperator assemble_laplacian(const LayoutPtr& layout,
                                            UnboundedClosure closure = UnboundedClosure::Dirichlet,
                                            double robin_rate = 0.0)
{
    return assemble_operator(layout, closure, robin_rate);
}

/// Linearization operators at a real standing-wave profile:
///   L+ = -Delta + V - (p+1)(2p+1)|Phi|^{2p} - omega
///   L- = -Delta + V - (p+1)|Phi|^{2p} - omega
/// with the focusing coefficient restricted to nonlinearity-active edges.
inline std::pair<SymmetricOperator, SymmetricOperator>
assemble_linearization(const RealGraphFunction& profile, double power, double omega)
{
    if (!(omega < 0.0)) throw std::invalid_argument("assemble_linearization: omega must be negative");
    const auto& layout = profile.layout();
    const auto& g = layout->graph();
    std::vector<double> cplus(layout->total_nodes(), 0.0), cminus(layout->total_nodes(), 0.0);
    for (size_t e = 0; e < g.edges().size(); ++e) {
        if (!g.edge(static_cast<int>(e)).nonlinear) continue;
        const auto& eg = layout->edge_grid(static_cast<int>(e));
        for (int i = 0; i <= eg.intervals; ++i) {
            const double a = std::pow(profile.at(static_cast<int>(e), i) *
                                          profile.at(static_cast<int>(e), i),
                                      power);
            cplus[layout->node_index(static_cast<int>(e), i)] =
                -(power + 1.0) * (2.0 * power + 1.0) * a;
            cminus[layout->node_index(static_cast<int>(e), i)] = -(power + 1.0) * a;
        }
    }
    const double rate = std::sqrt(-omega);
    auto lp = assemble_operator(layout, UnboundedClosure::Robin, rate, &cplus, -omega);
    auto lm = assemble_operator(layout, UnboundedClosure::Robin, rate, &cminus, -omega);
    return {std::move(lp), std::move(lm)};
}

} // namespace graphwave
