// graphwave: standing waves of the focusing NLS on metric graphs.
//
// Subcommands: validate, spectrum, solve, branch, stability, dtn, evolve,
// groundstate, period-scan. Outputs are CSV/JSON files in --out (or the
// GRAPHWAVE_OUT environment variable, or the working directory).

#include <CLI11.hpp>

#include <array>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <graphwave/dtn.hpp>
#include <graphwave/evolve.hpp>
#include <graphwave/graphio.hpp>
#include <graphwave/graphs.hpp>
#include <graphwave/groundstate.hpp>
#include <graphwave/period.hpp>
#include <graphwave/solver.hpp>
#include <graphwave/stability.hpp>

namespace gw = graphwave;
namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::string out_dir;
    double grid_h = 0.05;
    double trunc = 0.0; // 0: pick from omega
    double tol = 1e-12;
    int jobs = 1;
};

fs::path output_path(const GlobalOptions& g, const std::string& name)
{
    std::string dir = g.out_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("GRAPHWAVE_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return fs::path(dir) / name;
}

double pick_trunc(const GlobalOptions& g, double omega)
{
    return g.trunc > 0.0 ? g.trunc : gw::truncation_for(omega);
}

// Shortest distance from the point (edge, x) to every vertex, along the graph.
std::vector<double> distances_from_point(const gw::MetricGraph& g, int edge, double x)
{
    const double inf = 1e300;
    std::vector<double> dist(g.vertices().size(), inf);
    const auto& e = g.edge(edge);
    dist[e.from] = std::min(dist[e.from], x);
    if (!e.unbounded) dist[e.to] = std::min(dist[e.to], e.length - x);
    for (size_t sweep = 0; sweep < g.vertices().size(); ++sweep) {
        bool changed = false;
        for (const auto& edge2 : g.edges()) {
            if (edge2.unbounded) continue;
            if (dist[edge2.from] + edge2.length < dist[edge2.to]) {
                dist[edge2.to] = dist[edge2.from] + edge2.length;
                changed = true;
            }
            if (dist[edge2.to] + edge2.length < dist[edge2.from]) {
                dist[edge2.from] = dist[edge2.to] + edge2.length;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist;
}

// Build a Newton seed from a CLI seed spec:
//   soliton:<edge-id>:<position>  bump at (edge, position), decaying elsewhere
//   dtn:<edge-id>[,<edge-id>...]  pulse placement on the listed edges
//   constant:<value>
gw::RealGraphFunction build_seed(const gw::LayoutPtr& layout, const std::string& spec,
                                 double power, double omega)
{
    const auto& g = layout->graph();
    if (spec.rfind("constant:", 0) == 0) {
        const double value = std::stod(spec.substr(9));
        return gw::sample_real(layout, [value](int, double) { return value; });
    }
    if (spec.rfind("dtn:", 0) == 0) {
        gw::PulsePlacement placement;
        std::istringstream list(spec.substr(4));
        std::string token;
        while (std::getline(list, token, ','))
            placement.edges.push_back(g.edge_index(token));
        return gw::dtn_seed(layout, placement, std::sqrt(-omega), power);
    }
    if (spec.rfind("soliton:", 0) == 0) {
        std::istringstream ss(spec.substr(8));
        std::string edge_id, pos_token;
        std::getline(ss, edge_id, ':');
        std::getline(ss, pos_token, ':');
        const int edge = g.edge_index(edge_id);
        const double pos = std::stod(pos_token);
        const gw::SolitonParams sp(omega, power);
        const auto dist = distances_from_point(g, edge, pos);
        return gw::sample_real(layout, [&g, sp, dist, edge, pos](int e, double x) {
            if (e == edge) return gw::nls_soliton(sp, x - pos);
            const auto& ed = g.edge(e);
            double d = dist[ed.from] + x;
            if (!ed.unbounded) d = std::min(d, dist[ed.to] + ed.length - x);
            return gw::nls_soliton(sp, d);
        });
    }
    throw std::invalid_argument("unknown seed spec '" + spec + "'");
}

template <class F>
int guarded(F&& body)
{
    try {
        return body();
    } catch (const gw::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path);
    out << content;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"standing waves of the focusing NLS on metric graphs"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--out", global.out_dir, "output directory (default: $GRAPHWAVE_OUT or .)");
    app.add_option("--grid-h", global.grid_h, "target grid spacing");
    app.add_option("--trunc", global.trunc, "truncation length for unbounded edges");
    app.add_option("--tol", global.tol, "solver tolerance");
    app.add_option("--jobs", global.jobs, "parallel workers for sweeps");

    std::string graph_path, seed_spec = "constant:1.0", edges_list;
    double power = 1.0, omega = -1.0, omega_from = -9.0, omega_to = -1.0;
    double eps = 4.0, mass_target = 2.0, dt = 1e-3, horizon = 10.0, perturb = 0.0;
    int k_eigen = 6, n_vectors = 0, snapshot_stride = 0;
    double scan_lo = 0.05, scan_hi = 0.9, scan_qlo = 0.05, scan_qhi = 0.9;
    int scan_n = 10;
    std::string tadpole_eps_list;
    bool dtn_solve = false;

    auto* validate = app.add_subcommand("validate", "check a graph file");
    validate->add_option("graph", graph_path)->required();

    auto* spectrum = app.add_subcommand("spectrum", "low Laplacian eigenvalues");
    spectrum->add_option("graph", graph_path)->required();
    spectrum->add_option("--k", k_eigen, "eigenvalue count");
    spectrum->add_option("--vectors", n_vectors, "also write the first n eigenvectors");

    auto* solve = app.add_subcommand("solve", "Newton solve at fixed omega");
    solve->add_option("graph", graph_path)->required();
    solve->add_option("--p", power);
    solve->add_option("--omega", omega);
    solve->add_option("--seed", seed_spec);

    auto* branch = app.add_subcommand("branch", "continuation over an omega range");
    branch->add_option("graph", graph_path)->required();
    branch->add_option("--p", power);
    branch->add_option("--omega-from", omega_from);
    branch->add_option("--omega-to", omega_to);
    branch->add_option("--seed", seed_spec);

    auto* stability = app.add_subcommand("stability", "Morse/slope verdict at omega");
    stability->add_option("graph", graph_path)->required();
    stability->add_option("--p", power);
    stability->add_option("--omega", omega);
    stability->add_option("--seed", seed_spec);

    auto* dtn = app.add_subcommand("dtn", "Dirichlet guesses for a pulse placement");
    dtn->add_option("graph", graph_path)->required();
    dtn->add_option("--p", power);
    dtn->add_option("--eps", eps);
    dtn->add_option("--edges", edges_list, "comma-separated pulse edge ids")->required();
    dtn->add_flag("--solve", dtn_solve, "Newton-polish the seeded state");

    auto* evolve_cmd = app.add_subcommand("evolve", "conservative time evolution");
    evolve_cmd->add_option("graph", graph_path)->required();
    evolve_cmd->add_option("--p", power);
    evolve_cmd->add_option("--omega", omega);
    evolve_cmd->add_option("--seed", seed_spec);
    evolve_cmd->add_option("--dt", dt);
    evolve_cmd->add_option("--T", horizon);
    evolve_cmd->add_option("--perturb", perturb, "relative amplitude perturbation");
    evolve_cmd->add_option("--snapshot-stride", snapshot_stride,
                           "dump a state snapshot every n steps");

    auto* groundstate = app.add_subcommand("groundstate", "normalized gradient flow");
    groundstate->add_option("graph", graph_path)->required();
    groundstate->add_option("--p", power);
    groundstate->add_option("--mass", mass_target);
    groundstate->add_option("--seed", seed_spec);

    auto* period_scan = app.add_subcommand("period-scan", "period function table");
    period_scan->add_option("--p", power);
    period_scan->add_option("--endpoint-min", scan_lo);
    period_scan->add_option("--endpoint-max", scan_hi);
    period_scan->add_option("--slope-min", scan_qlo);
    period_scan->add_option("--slope-max", scan_qhi);
    period_scan->add_option("--n", scan_n, "grid points per axis");
    period_scan->add_option("--tadpole-eps", tadpole_eps_list,
                            "also emit the tadpole branch table for these eps values");

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        if (validate->parsed()) {
            auto g = gw::parse_graph_file(graph_path);
            auto report = gw::validate_graph(g);
            if (report.ok()) {
                std::cout << "ok: " << g.vertices().size() << " vertices, "
                          << g.edges().size() << " edges\n";
                return 0;
            }
            for (const auto& issue : report.issues) std::cout << "issue: " << issue << "\n";
            return 1;
        }

        if (period_scan->parsed()) {
            std::vector<std::array<double, 3>> rows(
                static_cast<size_t>(scan_n) * static_cast<size_t>(scan_n));
            const int jobs = std::max(1, global.jobs);
            std::vector<std::thread> workers;
            std::atomic<int> next{0};
            for (int t = 0; t < jobs; ++t)
                workers.emplace_back([&] {
                    int idx;
                    while ((idx = next.fetch_add(1)) < scan_n * scan_n) {
                        const int i = idx / scan_n, j = idx % scan_n;
                        const double p = scan_lo + (scan_hi - scan_lo) * i / (scan_n - 1.0);
                        const double q = scan_qlo + (scan_qhi - scan_qlo) * j / (scan_n - 1.0);
                        double T = std::numeric_limits<double>::quiet_NaN();
                        try {
                            T = gw::period_T({p, q, power});
                        } catch (const std::invalid_argument&) {
                        }
                        rows[idx] = {p, q, T};
                    }
                });
            for (auto& w : workers) w.join();
            std::ofstream out(output_path(global, "period_scan.csv"));
            gw::write_period_scan_csv(out, rows);
            if (!tadpole_eps_list.empty()) {
                std::vector<std::array<double, 4>> table;
                std::istringstream list(tadpole_eps_list);
                std::string token;
                while (std::getline(list, token, ',')) {
                    const double ev = std::stod(token);
                    auto wave = gw::assemble_tadpole_wave(ev, M_PI, global.grid_h, power);
                    table.push_back(
                        {ev, gw::tadpole_root(ev, M_PI, power), wave.mass, wave.energy});
                }
                std::ofstream tout(output_path(global, "tadpole_branch.csv"));
                gw::write_tadpole_branch_csv(tout, table);
            }
            return 0;
        }

        // everything below needs a validated graph
        auto g = gw::parse_graph_file(graph_path);
        auto report = gw::validate_graph(g);
        if (!report.ok()) {
            for (const auto& issue : report.issues) std::cerr << "issue: " << issue << "\n";
            return 1;
        }

        if (spectrum->parsed()) {
            auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, 0));
            auto op = gw::assemble_laplacian(layout);
            auto slice = gw::lowest_eigenvalues(op, k_eigen);
            std::ofstream out(output_path(global, "spectrum.csv"));
            gw::write_spectrum_csv(out, slice);
            for (int v = 0; v < n_vectors && v < static_cast<int>(slice.eigenvectors.size());
                 ++v) {
                std::ofstream vout(
                    output_path(global, "eigenvector_" + std::to_string(v) + ".csv"));
                gw::write_function_csv(vout, slice.eigenvectors[v]);
            }
            std::cout << "negative: " << slice.negative_count
                      << "  zero: " << slice.zero_count << "\n";
            return 0;
        }

        if (solve->parsed()) {
            auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, omega));
            auto seed = build_seed(layout, seed_spec, power, omega);
            gw::NewtonOptions nopts;
            nopts.tolerance = global.tol;
            auto res = gw::newton_solve(layout, power, omega, seed, nopts);
            if (!res.converged) {
                std::cerr << "newton did not converge after " << res.iterations
                          << " iterations\n";
                return 2;
            }
            std::ofstream out(output_path(global, "wave.csv"));
            gw::write_function_csv(out, res.wave.profile);
            std::cout << "mass " << res.wave.mass << "  energy " << res.wave.energy
                      << "  residual " << res.wave.residual << "\n";
            return 0;
        }

        if (branch->parsed()) {
            const double om0 = (omega_from + omega_to) / 2.0;
            auto layout = gw::GridLayout::make(
                g, global.grid_h,
                pick_trunc(global, std::max(omega_from, omega_to)));
            auto seed = build_seed(layout, seed_spec, power, om0);
            auto res = gw::newton_solve(layout, power, om0, seed);
            if (!res.converged) {
                std::cerr << "seed solve did not converge\n";
                return 2;
            }
            auto br = gw::continue_branch(res.wave, std::min(omega_from, omega_to),
                                          std::max(omega_from, omega_to));
            std::ofstream out(output_path(global, "branch.csv"));
            gw::write_branch_csv(out, br);
            std::cout << br.points.size() << " branch points"
                      << (br.truncated ? " (truncated)" : "") << "\n";
            return 0;
        }

        if (stability->parsed()) {
            auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, omega));
            auto seed = build_seed(layout, seed_spec, power, omega);
            auto res = gw::newton_solve(layout, power, omega, seed);
            if (!res.converged) {
                std::cerr << "newton did not converge\n";
                return 2;
            }
            auto br = gw::continue_branch(res.wave, omega * 1.15, omega * 0.85);
            auto rep = gw::stability_report(res.wave, br);
            write_file(output_path(global, "stability.json"), gw::stability_report_json(rep));
            std::cout << "verdict: " << gw::to_string(rep.verdict) << "  n(L+)=" << rep.n_plus
                      << "  z(L-)=" << rep.z_minus << "  slope=" << rep.slope << "\n";
            return rep.verdict == gw::StabilityVerdict::Inconclusive ? 2 : 0;
        }

        if (dtn->parsed()) {
            gw::PulsePlacement placement;
            std::istringstream list(edges_list);
            std::string token;
            while (std::getline(list, token, ','))
                placement.edges.push_back(g.edge_index(token));
            auto consistency = gw::consistency_check(g, placement);
            for (const auto& v : consistency.violations)
                std::cout << "consistency: " << v << "\n";
            auto info = gw::analyze_placement(g, placement);
            auto guess = gw::dirichlet_guess(g, placement, eps);
            std::ofstream out(output_path(global, "dtn.csv"));
            out << "vertex,total_degree,remainder_degree,guess\n";
            for (size_t j = 0; j < info.boundary.size(); ++j)
                out << g.vertex(info.boundary[j].vertex).id << ','
                    << info.boundary[j].total_degree << ','
                    << info.boundary[j].remainder_degree << ','
                    << gw::detail::fmt(guess[j]) << '\n';
            if (dtn_solve) {
                const double om = -eps * eps;
                auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, om));
                auto seed = gw::dtn_seed(layout, placement, eps, power);
                auto res = gw::newton_solve(layout, power, om, seed);
                if (!res.converged) {
                    std::cerr << "newton did not converge from the dtn seed\n";
                    return 2;
                }
                std::ofstream wave_out(output_path(global, "wave.csv"));
                gw::write_function_csv(wave_out, res.wave.profile);
                std::cout << "concentration "
                          << gw::concentration_ratio(res.wave.profile, placement.edges) << "\n";
            }
            return consistency.ok() ? 0 : 1;
        }

        if (evolve_cmd->parsed()) {
            auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, omega));
            auto seed = build_seed(layout, seed_spec, power, omega);
            auto res = gw::newton_solve(layout, power, omega, seed);
            if (!res.converged) {
                std::cerr << "newton did not converge\n";
                return 2;
            }
            auto phi = gw::to_complex(res.wave.profile);
            auto psi0 = phi;
            if (perturb != 0.0) {
                for (auto& v : psi0.values()) v *= 1.0 + perturb;
                const double scale = std::sqrt(gw::mass(phi) / gw::mass(psi0));
                for (auto& v : psi0.values()) v *= scale;
            }
            gw::EvolveOptions opts;
            opts.reference = &phi;
            opts.snapshot_stride = snapshot_stride;
            auto traj = gw::evolve(psi0, power, dt, horizon, opts);
            std::ofstream out(output_path(global, "trajectory.csv"));
            gw::write_trajectory_csv(out, traj);
            for (size_t k = 0; k < traj.snapshots.size(); ++k) {
                std::ofstream sout(
                    output_path(global, "snapshot_" + std::to_string(k) + ".csv"));
                gw::write_function_csv(sout, traj.snapshots[k].second);
            }
            std::cout << traj.samples.size() << " samples, final distance "
                      << traj.samples.back().orbital_distance << "\n";
            return 0;
        }

        if (groundstate->parsed()) {
            auto layout = gw::GridLayout::make(g, global.grid_h, pick_trunc(global, -1.0));
            auto seed = build_seed(layout, seed_spec, power,
                                   -std::max(1.0, mass_target * mass_target / 4.0));
            auto run = gw::minimize_at_mass(layout, mass_target, power, seed);
            std::ofstream out(output_path(global, "groundstate_run.csv"));
            gw::write_minimization_csv(out, run, g);
            std::ofstream wave_out(output_path(global, "minimizer.csv"));
            gw::write_function_csv(wave_out, run.profile);
            const char* term = run.termination == gw::MinimizeTermination::Converged
                                   ? "converged"
                                   : run.termination == gw::MinimizeTermination::Runaway
                                         ? "runaway"
                                         : "max-iterations";
            std::cout << term << "  energy " << run.energy << "  omega "
                      << run.omega_estimate << "\n";
            return run.termination == gw::MinimizeTermination::MaxIterations ? 2 : 0;
        }

        return 1;
    });
}
