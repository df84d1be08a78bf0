// Metric-graph data model: edges with finite or infinite length, vertices
// with coupling conditions, structural validation.
#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace graphwave {

enum class ConditionKind {
    NeumannKirchhoff,
    Delta,
    DeltaPrime,
    GeneralizedKirchhoff,
};

struct VertexCondition {
    ConditionKind kind = ConditionKind::NeumannKirchhoff;
    double strength = 0.0;        // alpha_v for Delta, beta_v for DeltaPrime
    std::vector<double> weights;  // GeneralizedKirchhoff: one per incident edge end

    static VertexCondition nk() { return {}; }
    static VertexCondition delta(double alpha)
    {
        return {ConditionKind::Delta, alpha, {}};
    }
    static VertexCondition delta_prime(double beta)
    {
        return {ConditionKind::DeltaPrime, beta, {}};
    }
    static VertexCondition generalized(std::vector<double> w)
    {
        return {ConditionKind::GeneralizedKirchhoff, 0.0, std::move(w)};
    }
};

struct Vertex {
    std::string id;
    VertexCondition condition;
};

struct Edge {
    std::string id;
    int from = -1;
    int to = -1;          // -1 marks an unbounded edge parameterized [0, inf) from `from`
    double length = 0.0;  // ignored for unbounded edges
    bool unbounded = false;
    bool nonlinear = true;
    std::function<double(double)> potential; // optional; empty means V = 0

    bool is_loop() const { return !unbounded && from == to; }
};

/// One endpoint of an edge as seen from a vertex; loops contribute two ends.
struct EdgeEnd {
    int edge;
    bool at_to; // false: the x = 0 end, true: the x = length end
};

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

class MetricGraph {
public:
    int add_vertex(const std::string& id, VertexCondition cond = VertexCondition::nk())
    {
        if (vertex_ids_.count(id)) throw std::invalid_argument("duplicate vertex id: " + id);
        vertex_ids_[id] = static_cast<int>(vertices_.size());
        vertices_.push_back({id, std::move(cond)});
        incidence_.emplace_back();
        return static_cast<int>(vertices_.size()) - 1;
    }

    int add_edge(const std::string& id, const std::string& from, const std::string& to,
                 double length, bool nonlinear = true)
    {
        Edge e;
        e.id = id;
        e.from = vertex_index(from);
        e.to = vertex_index(to);
        e.length = length;
        e.nonlinear = nonlinear;
        return push_edge(std::move(e));
    }

    int add_half_line(const std::string& id, const std::string& from, bool nonlinear = true)
    {
        Edge e;
        e.id = id;
        e.from = vertex_index(from);
        e.to = -1;
        e.unbounded = true;
        e.nonlinear = nonlinear;
        return push_edge(std::move(e));
    }

    void set_potential(const std::string& edge_id, std::function<double(double)> v)
    {
        edges_[edge_index(edge_id)].potential = std::move(v);
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    Vertex& vertex(int i) { return vertices_.at(i); }
    const Vertex& vertex(int i) const { return vertices_.at(i); }
    const Edge& edge(int i) const { return edges_.at(i); }

    int vertex_index(const std::string& id) const
    {
        auto it = vertex_ids_.find(id);
        if (it == vertex_ids_.end()) throw std::invalid_argument("unknown vertex id: " + id);
        return it->second;
    }

    int edge_index(const std::string& id) const
    {
        auto it = edge_ids_.find(id);
        if (it == edge_ids_.end()) throw std::invalid_argument("unknown edge id: " + id);
        return it->second;
    }

    /// Incident edge ends in deterministic order (edge declaration order,
    /// from-end before to-end).
    const std::vector<EdgeEnd>& incident(int vertex) const { return incidence_.at(vertex); }

    int degree(int vertex) const { return static_cast<int>(incidence_.at(vertex).size()); }

    int half_line_count() const
    {
        int n = 0;
        for (const auto& e : edges_) n += e.unbounded ? 1 : 0;
        return n;
    }

    bool compact() const { return half_line_count() == 0; }

    double total_finite_length() const
    {
        double total = 0.0;
        for (const auto& e : edges_)
            if (!e.unbounded) total += e.length;
        return total;
    }

    ValidationReport validate() const
    {
        ValidationReport report;
        for (const auto& e : edges_) {
            if (e.from < 0 || e.from >= static_cast<int>(vertices_.size()) ||
                (!e.unbounded && (e.to < 0 || e.to >= static_cast<int>(vertices_.size()))))
                report.issues.push_back("edge " + e.id + ": dangling vertex reference");
            if (!e.unbounded && !(e.length > 0.0))
                report.issues.push_back("edge " + e.id + ": non-positive length");
        }
        if (!connected()) report.issues.push_back("graph is disconnected");
        for (size_t v = 0; v < vertices_.size(); ++v) {
            const auto& cond = vertices_[v].condition;
            if (cond.kind == ConditionKind::GeneralizedKirchhoff) {
                if (static_cast<int>(cond.weights.size()) != degree(static_cast<int>(v)))
                    report.issues.push_back("vertex " + vertices_[v].id +
                                            ": generalized-Kirchhoff weight count mismatch");
                for (double w : cond.weights)
                    if (!(w > 0.0))
                        report.issues.push_back("vertex " + vertices_[v].id +
                                                ": non-positive generalized-Kirchhoff weight");
            }
        }
        return report;
    }

private:
    int push_edge(Edge e)
    {
        if (edge_ids_.count(e.id)) throw std::invalid_argument("duplicate edge id: " + e.id);
        const int idx = static_cast<int>(edges_.size());
        edge_ids_[e.id] = idx;
        incidence_.resize(vertices_.size());
        incidence_.at(e.from).push_back({idx, false});
        if (!e.unbounded) incidence_.at(e.to).push_back({idx, true});
        edges_.push_back(std::move(e));
        return idx;
    }

    bool connected() const
    {
        if (vertices_.empty()) return true;
        std::vector<char> seen(vertices_.size(), 0);
        std::vector<int> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& end : incidence_.at(v)) {
                const Edge& e = edges_[end.edge];
                if (e.unbounded) continue;
                const int w = end.at_to ? e.from : e.to;
                if (w >= 0 && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (char s : seen)
            if (!s) return false;
        return true;
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeEnd>> incidence_;
    std::map<std::string, int> vertex_ids_;
    std::map<std::string, int> edge_ids_;
};

/// validate_graph per the module contract; thin wrapper kept for symmetry.
inline ValidationReport validate_graph(const MetricGraph& g) { return g.validate(); }

} // namespace graphwave
