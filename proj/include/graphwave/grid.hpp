// Per-edge uniform grids and functions sampled on them. Unbounded edges are
// truncated; the truncation length is part of the layout.
#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <vector>

#include "graphwave/graph.hpp"

namespace graphwave {

/// Truncation length for unbounded edges: max(40, 12/sqrt(|omega|));
/// 40 when no frequency is in play.
inline double truncation_for(double omega = -1.0)
{
    const double a = std::abs(omega);
    return a > 0.0 ? std::max(40.0, 12.0 / std::sqrt(a)) : 40.0;
}

struct EdgeGrid {
    int intervals = 0;   // >= 64
    double h = 0.0;
    double span = 0.0;   // grid length: edge length, or truncation for unbounded
    int offset = 0;      // index of node 0 in the global sample vector
    int nodes() const { return intervals + 1; }
};

class GridLayout {
public:
    static std::shared_ptr<const GridLayout> make(MetricGraph graph, double h_target = 0.05,
                                                  double truncation = 40.0)
    {
        auto layout = std::make_shared<GridLayout>();
        layout->graph_ = std::move(graph);
        layout->h_target_ = h_target;
        layout->truncation_ = truncation;
        int offset = 0;
        for (const auto& e : layout->graph_.edges()) {
            EdgeGrid eg;
            eg.span = e.unbounded ? truncation : e.length;
            eg.intervals = std::max(64, static_cast<int>(std::ceil(eg.span / h_target)));
            eg.h = eg.span / eg.intervals;
            eg.offset = offset;
            offset += eg.nodes();
            layout->edge_grids_.push_back(eg);
        }
        layout->total_nodes_ = offset;
        return layout;
    }

    const MetricGraph& graph() const { return graph_; }
    const std::vector<EdgeGrid>& edge_grids() const { return edge_grids_; }
    const EdgeGrid& edge_grid(int e) const { return edge_grids_.at(e); }
    int total_nodes() const { return total_nodes_; }
    double h_target() const { return h_target_; }
    double truncation() const { return truncation_; }

    int node_index(int edge, int node) const { return edge_grids_[edge].offset + node; }
    double coordinate(int edge, int node) const { return edge_grids_[edge].h * node; }

    /// Node index of the given edge end (0-end or span-end).
    int end_node(const EdgeEnd& end) const
    {
        return end.at_to ? edge_grids_[end.edge].intervals : 0;
    }

private:
    MetricGraph graph_;
    std::vector<EdgeGrid> edge_grids_;
    int total_nodes_ = 0;
    double h_target_ = 0.05;
    double truncation_ = 40.0;
};

using LayoutPtr = std::shared_ptr<const GridLayout>;

template <class T>
class BasicGraphFunction {
public:
    BasicGraphFunction() = default;
    explicit BasicGraphFunction(LayoutPtr layout)
        : layout_(std::move(layout)), values_(layout_->total_nodes(), T{})
    {
    }

    const LayoutPtr& layout() const { return layout_; }
    std::vector<T>& values() { return values_; }
    const std::vector<T>& values() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }

    T& at(int edge, int node) { return values_[layout_->node_index(edge, node)]; }
    const T& at(int edge, int node) const { return values_[layout_->node_index(edge, node)]; }

    T end_value(const EdgeEnd& end) const { return at(end.edge, layout_->end_node(end)); }

    bool same_layout(const BasicGraphFunction& other) const
    {
        return layout_ == other.layout_ ||
               (layout_ && other.layout_ && layout_->total_nodes() == other.layout_->total_nodes());
    }

    BasicGraphFunction& operator+=(const BasicGraphFunction& other)
    {
        check(other);
        for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
        return *this;
    }

    BasicGraphFunction& operator-=(const BasicGraphFunction& other)
    {
        check(other);
        for (size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
        return *this;
    }

    BasicGraphFunction& operator*=(T s)
    {
        for (auto& v : values_) v *= s;
        return *this;
    }

    friend BasicGraphFunction operator+(BasicGraphFunction a, const BasicGraphFunction& b)
    {
        a += b;
        return a;
    }
    friend BasicGraphFunction operator-(BasicGraphFunction a, const BasicGraphFunction& b)
    {
        a -= b;
        return a;
    }
    friend BasicGraphFunction operator*(T s, BasicGraphFunction a)
    {
        a *= s;
        return a;
    }

private:
    void check(const BasicGraphFunction& other) const
    {
        if (!same_layout(other)) throw std::invalid_argument("graph functions on mismatched grids");
    }

    LayoutPtr layout_;
    std::vector<T> values_;
};

using RealGraphFunction = BasicGraphFunction<double>;
using GraphFunction = BasicGraphFunction<std::complex<double>>;

/// Sample f(edge, x) on every grid node.
template <class T, class F>
BasicGraphFunction<T> sample(const LayoutPtr& layout, const F& f)
{
    BasicGraphFunction<T> out(layout);
    const auto& grids = layout->edge_grids();
    for (size_t e = 0; e < grids.size(); ++e)
        for (int i = 0; i <= grids[e].intervals; ++i)
            out.at(static_cast<int>(e), i) = f(static_cast<int>(e), grids[e].h * i);
    return out;
}

template <class F>
RealGraphFunction sample_real(const LayoutPtr& layout, const F& f)
{
    return sample<double>(layout, f);
}

inline GraphFunction to_complex(const RealGraphFunction& f)
{
    GraphFunction out(f.layout());
    for (int i = 0; i < f.size(); ++i) out.values()[i] = f.values()[i];
    return out;
}

inline RealGraphFunction real_part(const GraphFunction& f)
{
    RealGraphFunction out(f.layout());
    for (int i = 0; i < f.size(); ++i) out.values()[i] = f.values()[i].real();
    return out;
}

} // namespace graphwave
