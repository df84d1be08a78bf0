// Norms, quadrature, mass and energy functionals on graph functions.
// Integrals use the composite trapezoid rule on the per-edge grids;
// derivatives use second-order stencils (one-sided at edge endpoints).
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "graphwave/grid.hpp"

namespace graphwave {

namespace detail {

inline double abs2(double v) { return v * v; }
inline double abs2(const std::complex<double>& v) { return std::norm(v); }
inline double abs1(double v) { return std::abs(v); }
inline double abs1(const std::complex<double>& v) { return std::abs(v); }

} // namespace detail

/// Trapezoid weight of node i on an edge with n intervals.
inline double trapezoid_weight(const EdgeGrid& eg, int i)
{
    return (i == 0 || i == eg.intervals) ? 0.5 * eg.h : eg.h;
}

/// Integrate a per-node functional g(edge, node, value) over the graph.
template <class T, class G>
double integrate_nodes(const BasicGraphFunction<T>& f, const G& g)
{
    double total = 0.0;
    const auto& grids = f.layout()->edge_grids();
    for (size_t e = 0; e < grids.size(); ++e) {
        double edge_sum = 0.0;
        for (int i = 0; i <= grids[e].intervals; ++i)
            edge_sum += trapezoid_weight(grids[e], i) *
                        g(static_cast<int>(e), i, f.at(static_cast<int>(e), i));
        total += edge_sum;
    }
    return total;
}

enum class NormKind { L2, Linf, H1 };

/// Edge-wise derivative: centered differences inside, one-sided
/// second-order stencils at the edge endpoints.
template <class T>
BasicGraphFunction<T> derivative(const BasicGraphFunction<T>& f)
{
    BasicGraphFunction<T> out(f.layout());
    const auto& grids = f.layout()->edge_grids();
    for (size_t e = 0; e < grids.size(); ++e) {
        const int n = grids[e].intervals;
        const double h = grids[e].h;
        const int ei = static_cast<int>(e);
        out.at(ei, 0) = (-3.0 * f.at(ei, 0) + 4.0 * f.at(ei, 1) - f.at(ei, 2)) / (2.0 * h);
        for (int i = 1; i < n; ++i)
            out.at(ei, i) = (f.at(ei, i + 1) - f.at(ei, i - 1)) / (2.0 * h);
        out.at(ei, n) = (3.0 * f.at(ei, n) - 4.0 * f.at(ei, n - 1) + f.at(ei, n - 2)) / (2.0 * h);
    }
    return out;
}

template <class T>
double norm_lp(const BasicGraphFunction<T>& f, double q)
{
    if (!(q >= 1.0)) throw std::invalid_argument("norm_lp: q must be >= 1");
    const double s = integrate_nodes(
        f, [q](int, int, const T& v) { return std::pow(detail::abs1(v), q); });
    return std::pow(s, 1.0 / q);
}

template <class T>
double norm_linf(const BasicGraphFunction<T>& f)
{
    double m = 0.0;
    for (const auto& v : f.values()) m = std::max(m, detail::abs1(v));
    return m;
}

template <class T>
double norm_l2(const BasicGraphFunction<T>& f)
{
    return norm_lp(f, 2.0);
}

template <class T>
double norm_h1(const BasicGraphFunction<T>& f)
{
    const auto df = derivative(f);
    const double a = integrate_nodes(f, [](int, int, const T& v) { return detail::abs2(v); });
    const double b = integrate_nodes(df, [](int, int, const T& v) { return detail::abs2(v); });
    return std::sqrt(a + b);
}

template <class T>
double norm(const BasicGraphFunction<T>& f, NormKind kind)
{
    switch (kind) {
    case NormKind::L2: return norm_l2(f);
    case NormKind::Linf: return norm_linf(f);
    case NormKind::H1: return norm_h1(f);
    }
    return 0.0;
}

/// Mass M = ||f||_{L2}^2.
template <class T>
double mass(const BasicGraphFunction<T>& f)
{
    return integrate_nodes(f, [](int, int, const T& v) { return detail::abs2(v); });
}

/// H1 inner product <f, g> + <f', g'> (conjugate-linear in f).
inline std::complex<double> h1_inner(const GraphFunction& f, const GraphFunction& g)
{
    const auto df = derivative(f);
    const auto dg = derivative(g);
    std::complex<double> total = 0.0;
    const auto& grids = f.layout()->edge_grids();
    for (size_t e = 0; e < grids.size(); ++e)
        for (int i = 0; i <= grids[e].intervals; ++i) {
            const double w = trapezoid_weight(grids[e], i);
            const int ei = static_cast<int>(e);
            total += w * (std::conj(f.at(ei, i)) * g.at(ei, i) +
                          std::conj(df.at(ei, i)) * dg.at(ei, i));
        }
    return total;
}

/// Value of f at a vertex (averaged over incident edge ends).
template <class T>
T vertex_value(const BasicGraphFunction<T>& f, int vertex)
{
    const auto& ends = f.layout()->graph().incident(vertex);
    if (ends.empty()) return T{};
    T sum{};
    for (const auto& end : ends) sum += f.end_value(end);
    return sum * (1.0 / static_cast<double>(ends.size()));
}

/// Largest jump of f across vertices whose condition requires continuity.
template <class T>
double continuity_defect(const BasicGraphFunction<T>& f)
{
    double worst = 0.0;
    const auto& g = f.layout()->graph();
    for (size_t v = 0; v < g.vertices().size(); ++v) {
        const auto kind = g.vertex(static_cast<int>(v)).condition.kind;
        if (kind != ConditionKind::NeumannKirchhoff && kind != ConditionKind::Delta) continue;
        const auto& ends = g.incident(static_cast<int>(v));
        for (size_t a = 1; a < ends.size(); ++a)
            worst = std::max(worst, detail::abs1(f.end_value(ends[a]) - f.end_value(ends[0])));
    }
    return worst;
}

/// Energy E = ||f'||^2 + <f,Vf> + sum_v alpha_v |f(v)|^2
///            + sum_{delta'} (1/beta_v) |sum_ends f|^2
///            - ||f||^{2p+2}_{L^{2p+2}} over nonlinearity-active edges.
/// The kinetic term uses the first-difference form consistent with the
/// discrete flow, so time integration conserves this exact quantity.
template <class T>
double energy(const BasicGraphFunction<T>& f, double power)
{
    if (!(power > 0.0 && power <= 2.0))
        throw std::invalid_argument("energy: power outside (0,2]");
    const auto& layout = *f.layout();
    const auto& g = layout.graph();
    double kinetic = 0.0, potential = 0.0, focusing = 0.0, vertex_terms = 0.0;
    for (size_t e = 0; e < g.edges().size(); ++e) {
        const auto& eg = layout.edge_grid(static_cast<int>(e));
        const auto& edge = g.edge(static_cast<int>(e));
        const int ei = static_cast<int>(e);
        for (int i = 0; i < eg.intervals; ++i)
            kinetic += detail::abs2(f.at(ei, i + 1) - f.at(ei, i)) / eg.h;
        if (edge.potential)
            for (int i = 0; i <= eg.intervals; ++i)
                potential += trapezoid_weight(eg, i) * edge.potential(eg.h * i) *
                             detail::abs2(f.at(ei, i));
        if (edge.nonlinear)
            for (int i = 0; i <= eg.intervals; ++i)
                focusing += trapezoid_weight(eg, i) *
                            std::pow(detail::abs2(f.at(ei, i)), power + 1.0);
    }
    for (size_t v = 0; v < g.vertices().size(); ++v) {
        const auto& cond = g.vertex(static_cast<int>(v)).condition;
        if (cond.kind == ConditionKind::Delta && cond.strength != 0.0) {
            vertex_terms += cond.strength * detail::abs2(vertex_value(f, static_cast<int>(v)));
        } else if (cond.kind == ConditionKind::DeltaPrime) {
            if (cond.strength == 0.0)
                throw std::invalid_argument("energy: delta-prime vertex with zero strength");
            T s{};
            for (const auto& end : g.incident(static_cast<int>(v))) s += f.end_value(end);
            vertex_terms += detail::abs2(s) / cond.strength;
        }
    }
    return kinetic + potential + vertex_terms - focusing;
}

/// Gagliardo-Nirenberg quotient ||f||_q / (||f||_2^{1/2+1/q} D^{1/2-1/q})
/// with D = ||f'||_2 on non-compact graphs and D = ||f||_{H1} when the
/// compact form is requested.
template <class T>
double gn_check(const BasicGraphFunction<T>& f, double q, bool compact_form)
{
    if (!(q >= 2.0)) throw std::invalid_argument("gn_check: q must be >= 2");
    if (!compact_form && f.layout()->graph().compact())
        throw std::invalid_argument("gn_check: the non-compact form cannot hold on a compact graph");
    const double num = norm_lp(f, q);
    const double l2 = norm_l2(f);
    if (l2 == 0.0) throw std::invalid_argument("gn_check: zero function");
    const double d = compact_form ? norm_h1(f) : norm_l2(derivative(f));
    return num / (std::pow(l2, 0.5 + 1.0 / q) * std::pow(d, 0.5 - 1.0 / q));
}

} // namespace graphwave
