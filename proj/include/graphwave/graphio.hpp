// Text graph-spec ingestion, deterministic emission, and the CSV/JSON
// writers shared by the command-line front end.
//
// Graph files are line oriented:
//   vertex <id> <nk | delta A | deltaprime B | gk w1 w2 ...>
//   edge <id> <from> <to|inf> <length|inf> [nonlinear=0|1]
// with '#' comments. Parse errors carry the line number.
#pragma once

#include <array>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphwave/evolve.hpp"
#include "graphwave/groundstate.hpp"
#include "graphwave/solver.hpp"
#include "graphwave/spectra.hpp"
#include "graphwave/stability.hpp"

namespace graphwave {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_)
    {
    }
};

namespace detail {

inline double parse_number(const std::string& token, int line, const char* what)
{
    try {
        size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, std::string("malformed ") + what + " token '" + token + "'");
    }
}

} // namespace detail

inline MetricGraph parse_graph_stream(std::istream& in)
{
    MetricGraph g;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ss(raw);
        std::string kind;
        if (!(ss >> kind)) continue;
        try {
            if (kind == "vertex") {
                std::string id, cond;
                if (!(ss >> id >> cond)) throw ParseError(line, "vertex needs an id and a condition");
                if (cond == "nk") {
                    g.add_vertex(id);
                } else if (cond == "delta") {
                    std::string a;
                    if (!(ss >> a)) throw ParseError(line, "delta needs a strength");
                    g.add_vertex(id, VertexCondition::delta(
                                         detail::parse_number(a, line, "strength")));
                } else if (cond == "deltaprime") {
                    std::string b;
                    if (!(ss >> b)) throw ParseError(line, "deltaprime needs a strength");
                    g.add_vertex(id, VertexCondition::delta_prime(
                                         detail::parse_number(b, line, "strength")));
                } else if (cond == "gk") {
                    std::vector<double> w;
                    std::string t;
                    while (ss >> t) w.push_back(detail::parse_number(t, line, "weight"));
                    if (w.empty()) throw ParseError(line, "gk needs at least one weight");
                    g.add_vertex(id, VertexCondition::generalized(std::move(w)));
                } else {
                    throw ParseError(line, "unknown condition keyword '" + cond + "'");
                }
            } else if (kind == "edge") {
                std::string id, from, to, len, flag;
                if (!(ss >> id >> from >> to >> len))
                    throw ParseError(line, "edge needs id, endpoints, and a length");
                bool nonlinear = true;
                if (ss >> flag) {
                    if (flag == "nonlinear=0")
                        nonlinear = false;
                    else if (flag != "nonlinear=1")
                        throw ParseError(line, "unknown edge flag '" + flag + "'");
                }
                if (to == "inf") {
                    if (len != "inf") throw ParseError(line, "unbounded edge must have length inf");
                    g.add_half_line(id, from, nonlinear);
                } else {
                    g.add_edge(id, from, to,
                               detail::parse_number(len, line, "length"), nonlinear);
                }
            } else {
                throw ParseError(line, "unknown directive '" + kind + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line, e.what());
        }
    }
    return g;
}

inline MetricGraph parse_graph_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    return parse_graph_stream(in);
}

namespace detail {

inline std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void emit_graph(std::ostream& out, const MetricGraph& g)
{
    for (const auto& v : g.vertices()) {
        out << "vertex " << v.id;
        switch (v.condition.kind) {
        case ConditionKind::NeumannKirchhoff: out << " nk"; break;
        case ConditionKind::Delta: out << " delta " << detail::fmt(v.condition.strength); break;
        case ConditionKind::DeltaPrime:
            out << " deltaprime " << detail::fmt(v.condition.strength);
            break;
        case ConditionKind::GeneralizedKirchhoff:
            out << " gk";
            for (double w : v.condition.weights) out << ' ' << detail::fmt(w);
            break;
        }
        out << '\n';
    }
    for (const auto& e : g.edges()) {
        out << "edge " << e.id << ' ' << g.vertex(e.from).id << ' ';
        if (e.unbounded)
            out << "inf inf";
        else
            out << g.vertex(e.to).id << ' ' << detail::fmt(e.length);
        if (!e.nonlinear) out << " nonlinear=0";
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// CSV emitters. All writers print a header row and fixed column order with
// full-precision numbers, so identical inputs give byte-identical files.
// ---------------------------------------------------------------------------

template <class T>
void write_function_csv(std::ostream& out, const BasicGraphFunction<T>& f)
{
    out << "edge,x,re,im\n";
    const auto& layout = *f.layout();
    const auto& g = layout.graph();
    for (size_t e = 0; e < g.edges().size(); ++e) {
        const auto& eg = layout.edge_grid(static_cast<int>(e));
        for (int i = 0; i <= eg.intervals; ++i) {
            const std::complex<double> v(f.at(static_cast<int>(e), i));
            out << g.edge(static_cast<int>(e)).id << ',' << detail::fmt(eg.h * i) << ','
                << detail::fmt(v.real()) << ',' << detail::fmt(v.imag()) << '\n';
        }
    }
}

inline void write_spectrum_csv(std::ostream& out, const SpectrumSlice& slice)
{
    out << "index,eigenvalue,residual\n";
    for (size_t i = 0; i < slice.eigenvalues.size(); ++i)
        out << i << ',' << detail::fmt(slice.eigenvalues[i]) << ','
            << detail::fmt(slice.residuals[i]) << '\n';
}

inline void write_branch_csv(std::ostream& out, const Branch& branch)
{
    out << "omega,mass,energy,residual,fold\n";
    for (const auto& bp : branch.points)
        out << detail::fmt(bp.wave.omega) << ',' << detail::fmt(bp.wave.mass) << ','
            << detail::fmt(bp.wave.energy) << ',' << detail::fmt(bp.wave.residual) << ','
            << (bp.fold ? 1 : 0) << '\n';
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << "t,mass,energy,orbital_distance\n";
    for (const auto& pt : traj.samples)
        out << detail::fmt(pt.t) << ',' << detail::fmt(pt.mass) << ',' << detail::fmt(pt.energy)
            << ',' << detail::fmt(pt.orbital_distance) << '\n';
}

inline void write_minimization_csv(std::ostream& out, const MinimizationRun& run,
                                   const MetricGraph& g)
{
    out << "iter,energy,omega,gradient_norm";
    for (const auto& e : g.edges())
        if (e.unbounded) out << ",centroid_" << e.id;
    out << '\n';
    for (const auto& s : run.history) {
        out << s.iteration << ',' << detail::fmt(s.energy) << ',' << detail::fmt(s.omega_estimate)
            << ',' << detail::fmt(s.gradient_norm);
        for (double c : s.centroids) out << ',' << detail::fmt(c);
        out << '\n';
    }
}

inline void write_period_scan_csv(std::ostream& out,
                                  const std::vector<std::array<double, 3>>& rows)
{
    out << "p,q,T\n";
    for (const auto& r : rows)
        out << detail::fmt(r[0]) << ',' << detail::fmt(r[1]) << ',' << detail::fmt(r[2]) << '\n';
}

inline void write_tadpole_branch_csv(std::ostream& out,
                                     const std::vector<std::array<double, 4>>& rows)
{
    out << "eps,p,mass,energy\n";
    for (const auto& r : rows)
        out << detail::fmt(r[0]) << ',' << detail::fmt(r[1]) << ',' << detail::fmt(r[2]) << ','
            << detail::fmt(r[3]) << '\n';
}

inline std::string stability_report_json(const StabilityReport& report)
{
    std::ostringstream out;
    out << "{\n";
    out << "  \"n_plus\": " << report.n_plus << ",\n";
    out << "  \"z_plus\": " << report.z_plus << ",\n";
    out << "  \"n_minus\": " << report.n_minus << ",\n";
    out << "  \"z_minus\": " << report.z_minus << ",\n";
    out << "  \"slope\": " << detail::fmt(report.slope) << ",\n";
    out << "  \"slope_sign\": " << report.slope_sign << ",\n";
    out << "  \"verdict\": \"" << to_string(report.verdict) << "\",\n";
    out << "  \"eigenvalues\": [";
    for (size_t i = 0; i < report.eigenvalue_head.size(); ++i)
        out << (i ? ", " : "") << detail::fmt(report.eigenvalue_head[i]);
    out << "],\n";
    out << "  \"notes\": [";
    for (size_t i = 0; i < report.notes.size(); ++i)
        out << (i ? ", " : "") << '"' << report.notes[i] << '"';
    out << "]\n}\n";
    return out.str();
}

} // namespace graphwave
