// Ready-made graphs used across tests, examples, and case studies.
#pragma once

#include <cmath>
#include <string>

#include "graphwave/graph.hpp"

namespace graphwave {

/// The real line as two half-lines glued at a Neumann-Kirchhoff vertex.
inline MetricGraph make_line()
{
    MetricGraph g;
    g.add_vertex("o");
    g.add_half_line("right", "o");
    g.add_half_line("left", "o");
    return g;
}

/// A single half-line with the given condition at its endpoint.
inline MetricGraph make_half_line(VertexCondition cond = VertexCondition::nk())
{
    MetricGraph g;
    g.add_vertex("o", std::move(cond));
    g.add_half_line("ray", "o");
    return g;
}

/// Star graph with n half-lines and a delta coupling of strength alpha
/// (alpha = 0 reduces to Neumann-Kirchhoff).
inline MetricGraph make_star(int n, double alpha = 0.0)
{
    MetricGraph g;
    g.add_vertex("o", VertexCondition::delta(alpha));
    for (int i = 0; i < n; ++i) g.add_half_line("e" + std::to_string(i + 1), "o");
    return g;
}

/// Single bounded edge [0, L] with the given end conditions.
inline MetricGraph make_interval(double length,
                                 VertexCondition left = VertexCondition::nk(),
                                 VertexCondition right = VertexCondition::nk())
{
    MetricGraph g;
    g.add_vertex("a", std::move(left));
    g.add_vertex("b", std::move(right));
    g.add_edge("seg", "a", "b", length);
    return g;
}

/// Single loop of the given total length at one NK vertex (compact).
inline MetricGraph make_loop(double length)
{
    MetricGraph g;
    g.add_vertex("o");
    g.add_edge("loop", "o", "o", length);
    return g;
}

/// Tadpole: one loop of length 2*half_length plus one half-line.
inline MetricGraph make_tadpole(double half_length = M_PI)
{
    MetricGraph g;
    g.add_vertex("o");
    g.add_edge("loop", "o", "o", 2.0 * half_length);
    g.add_half_line("tail", "o");
    return g;
}

/// Flower: n loops of length 2*half_length each plus one half-line,
/// all at a single vertex.
inline MetricGraph make_flower(int n_loops, double half_length = M_PI, bool with_tail = true)
{
    MetricGraph g;
    g.add_vertex("o");
    for (int i = 0; i < n_loops; ++i)
        g.add_edge("loop" + std::to_string(i + 1), "o", "o", 2.0 * half_length);
    if (with_tail) g.add_half_line("tail", "o");
    return g;
}

/// Dumbbell: loops of lengths 2*l_minus and 2*l_plus joined by an internal
/// edge of length 2*l_zero (compact).
inline MetricGraph make_dumbbell(double l_minus = M_PI, double l_plus = M_PI, double l_zero = 2.0)
{
    MetricGraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge("loopA", "a", "a", 2.0 * l_minus);
    g.add_edge("bridge", "a", "b", 2.0 * l_zero);
    g.add_edge("loopB", "b", "b", 2.0 * l_plus);
    return g;
}

/// Double bridge: a circle made of two arcs with a half-line at each of the
/// two junction vertices.
inline MetricGraph make_double_bridge(double arc1 = M_PI, double arc2 = M_PI)
{
    MetricGraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_edge("arc1", "a", "b", arc1);
    g.add_edge("arc2", "a", "b", arc2);
    g.add_half_line("rayA", "a");
    g.add_half_line("rayB", "b");
    return g;
}

/// Bubble tower: a chain of parallel equal-length edge pairs with two
/// half-lines at the base vertex.
inline MetricGraph make_bubble_tower(int bubbles = 2, double arc = 1.0)
{
    MetricGraph g;
    g.add_vertex("v0");
    g.add_half_line("ray1", "v0");
    g.add_half_line("ray2", "v0");
    for (int i = 0; i < bubbles; ++i) {
        const std::string lo = "v" + std::to_string(i);
        const std::string hi = "v" + std::to_string(i + 1);
        g.add_vertex(hi);
        g.add_edge("b" + std::to_string(i + 1) + "l", lo, hi, arc);
        g.add_edge("b" + std::to_string(i + 1) + "r", lo, hi, arc);
    }
    return g;
}

} // namespace graphwave
