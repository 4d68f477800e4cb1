#include "collarspec/runner.hpp"

#include "collarspec/asymptotics.hpp"
#include "collarspec/continuity_tracker.hpp"
#include "collarspec/csv.hpp"
#include "collarspec/cusp_analysis.hpp"
#include "collarspec/errors.hpp"
#include "collarspec/liouville_transform.hpp"
#include "collarspec/parallel.hpp"
#include "collarspec/spectrum_assembly.hpp"
#include "collarspec/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace collarspec {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

FiberMode mode_by_index(const FiberSpectrum& fiber, int k) {
    double bound = 100.0;
    for (int grow = 0; grow < 24; ++grow) {
        auto modes = fiber.modes_up_to(bound);
        if (static_cast<int>(modes.size()) > k) return modes[k];
        bound *= 4.0;
    }
    throw validation_error("fiber mode index out of range");
}

struct ArtifactWriter {
    fs::path dir;
    std::vector<fs::path> written;

    void csv(const std::string& name, const csv::Table& table) {
        const fs::path p = dir / name;
        table.write(p);
        written.push_back(p);
    }
    void text(const std::string& name, const std::string& body) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw validation_error("cannot open " + p.string());
        out << body;
        written.push_back(p);
    }
};

void cmd_spectrum(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    auto spec = collar_spectrum(collar, cfg.spectrum_eps, cfg.lambda_max,
                                cfg.boundary(), cfg.solve_options());
    csv::Table t({"lambda", "mode_k", "mu", "channel_index", "bc"});
    for (const auto& e : spec.merged)
        t.begin_row()
            .col(e.lambda)
            .col(e.mode_index)
            .col(e.mu)
            .col(e.channel_index)
            .col(to_string(spec.bc));
    w.csv("spectrum.csv", t);
}

void cmd_count(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    auto rep = count_sweep(collar, cfg.lambda_max, cfg.epsilons,
                           cfg.solve_options());
    csv::Table t({"eps", "ln_inv_eps", "N_D", "N_N", "predicted"});
    for (std::size_t i = 0; i < rep.eps.size(); ++i)
        t.begin_row()
            .col(rep.eps[i])
            .col(rep.ln_inv_eps[i])
            .col(rep.dirichlet[i])
            .col(rep.neumann[i])
            .col(rep.predicted[i]);
    w.csv("counts.csv", t);

    json j;
    j["lambda"] = rep.lambda_max;
    j["epsilons"] = rep.eps;
    j["ln_inv_eps"] = rep.ln_inv_eps;
    j["dirichlet_counts"] = rep.dirichlet;
    j["neumann_counts"] = rep.neumann;
    j["predicted"] = rep.predicted;
    j["predicted_slope"] = rep.predicted_slope;
    j["dirichlet_fit"] = {{"slope", rep.dirichlet_fit.slope},
                          {"intercept", rep.dirichlet_fit.intercept},
                          {"slope_stderr", rep.dirichlet_fit.slope_stderr}};
    j["neumann_fit"] = {{"slope", rep.neumann_fit.slope},
                        {"intercept", rep.neumann_fit.intercept},
                        {"slope_stderr", rep.neumann_fit.slope_stderr}};
    j["residuals"] = rep.residuals;
    w.text("count_report.json", j.dump(2) + "\n");
}

void cmd_branch(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    BranchOptions opt;
    opt.bc = cfg.boundary();
    opt.limit_t_cuts = cfg.branch_t_cuts;
    opt.solve = cfg.solve_options();
    std::vector<int> indices;
    for (double v : cfg.branch_indices) indices.push_back(static_cast<int>(v));
    auto branches = branch_track_many(collar, indices, cfg.epsilons, opt);
    for (const auto& b : branches) {
        csv::Table t({"eps", "lambda", "gap"});
        for (std::size_t i = 0; i < b.eps.size(); ++i)
            t.begin_row().col(b.eps[i]).col(b.lambda[i]).col(b.gaps[i]);
        w.csv("branch_" + std::to_string(b.index) + ".csv", t);
    }
}

void cmd_converge(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    ConvergenceOptions opt;
    opt.fd_points = cfg.fd_points;
    opt.limit_t_cut = cfg.limit_t_cut;
    opt.bc = cfg.boundary();
    auto rep = eigenfunction_convergence(collar, cfg.converge_branch,
                                         cfg.epsilons, cfg.window_lo,
                                         cfg.window_hi, opt);
    csv::Table t({"eps", "L2_dist", "H1_dist"});
    for (std::size_t i = 0; i < rep.eps.size(); ++i)
        t.begin_row().col(rep.eps[i]).col(rep.l2_dist[i]).col(rep.h1_dist[i]);
    w.csv("converge.csv", t);
}

void cmd_cusp(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    CuspProblem prob;
    prob.config = collar;
    prob.side = side_from_string(cfg.cusp_side);
    prob.mu = mode_by_index(collar.fiber, cfg.cusp_mode_index).mu;
    prob.t_cut = cfg.cusp_t_cuts.front();
    prob.outer_bc = bc_from_string(cfg.cusp_outer_bc);
    prob.cut_bc = bc_from_string(cfg.cusp_cut_bc);

    auto table = cusp_eigenvalues(prob, cfg.lambda_max, cfg.cusp_t_cuts, 0.9,
                                  cfg.solve_options());
    csv::Table t({"t_cut", "index", "lambda"});
    for (std::size_t i = 0; i < table.t_cuts.size(); ++i)
        for (std::size_t j = 0; j < table.eigen[i].size(); ++j)
            t.begin_row()
                .col(table.t_cuts[i])
                .col(static_cast<long long>(j + 1))
                .col(table.eigen[i][j]);
    w.csv("cusp_eigenvalues.csv", t);

    csv::Table ex({"index", "extrapolated", "converged"});
    for (std::size_t j = 0; j < table.extrapolated.size(); ++j)
        ex.begin_row()
            .col(static_cast<long long>(j + 1))
            .col(table.extrapolated[j])
            .col(std::string(table.index_converged[j] ? "yes" : "no"));
    w.csv("cusp_extrapolated.csv", ex);

    if (!table.extrapolated.empty()) {
        // decay and convexity diagnostics for the ground channel state at
        // the finest truncation
        CuspProblem fine = prob;
        fine.t_cut = cfg.cusp_t_cuts.back();
        SLProblem sp = cusp_channel_problem(fine, cfg.solve_options());
        const double lambda1 =
            kth_eigenvalue(sp, 1, cfg.bisect_tol, cfg.solve_options().prufer);
        auto fn = cusp_eigenfunction(fine, lambda1, 4001, cfg.solve_options());
        auto decay = decay_check(fn, cfg.decay_orders);
        csv::Table dv({"j", "monotone", "drop_log", "pass"});
        for (const auto& v : decay.per_j)
            dv.begin_row()
                .col(v.j)
                .col(std::string(v.monotone ? "yes" : "no"))
                .col(v.drop_log)
                .col(std::string(v.pass ? "yes" : "no"));
        dv.begin_row()
            .col(std::string("convexity"))
            .col(std::string(decay.convexity_pass ? "yes" : "no"))
            .col(static_cast<long long>(decay.convexity_violations))
            .col(std::string(decay.convexity_pass ? "yes" : "no"));
        dv.begin_row()
            .col(std::string("surrogate"))
            .col(std::string(decay.surrogate_pass ? "yes" : "no"))
            .col(static_cast<long long>(decay.surrogate_violations))
            .col(std::string(decay.surrogate_pass ? "yes" : "no"));
        w.csv("cusp_decay.csv", dv);

        auto grad = gradient_integrability(prob, 1, cfg.cusp_t_cuts, 0.01,
                                           cfg.solve_options());
        csv::Table gt({"t_cut", "gradient_energy", "rel_change"});
        for (std::size_t i = 0; i < grad.t_cuts.size(); ++i)
            gt.begin_row()
                .col(grad.t_cuts[i])
                .col(grad.values[i])
                .col(grad.rel_change[i]);
        w.csv("cusp_gradient.csv", gt);
    }
}

void cmd_transform_check(const ExperimentConfig& cfg, ArtifactWriter& w) {
    const CollarConfig collar = cfg.collar();
    csv::Table t({"side", "s", "V"});
    const double eps = cfg.transform_eps;
    auto emit = [&](const std::string& side, double t_lo, double t_hi) {
        TransformData td(collar, eps, t_lo, t_hi);
        const int n = cfg.transform_samples;
        for (int i = 0; i < n; ++i) {
            const double s = td.s_lo() + (td.s_hi() - td.s_lo()) * i / (n - 1);
            t.begin_row().col(side).col(s).col(td.potential(s));
        }
    };
    if (eps > 0.0) {
        emit("full", collar.t_min, collar.t_max);
    } else {
        // ε = 0: one table per cusp side, avoiding the singular point
        emit("minus", collar.t_min, -1e-6 * (-collar.t_min));
        emit("plus", 1e-6 * collar.t_max, collar.t_max);
    }
    w.csv("transform_check.csv", t);
}

void cmd_oscillation(const ExperimentConfig& cfg, ArtifactWriter& w) {
    DecayingPotential kind;
    if (cfg.oscillation_kind == "lorentzian")
        kind = DecayingPotential::lorentzian;
    else if (cfg.oscillation_kind == "exponential")
        kind = DecayingPotential::exponential;
    else
        throw validation_error("oscillation.kind must be lorentzian or exponential");
    auto rows = classical_count_check(kind, cfg.oscillation_amplitude,
                                      cfg.oscillation_m, cfg.oscillation_a_grid,
                                      cfg.solve_options());
    csv::Table t({"a", "N_D", "N_N", "predicted", "dev_D", "dev_N"});
    for (const auto& r : rows)
        t.begin_row()
            .col(r.a)
            .col(r.dirichlet)
            .col(r.neumann)
            .col(r.predicted)
            .col(r.deviation_dirichlet)
            .col(r.deviation_neumann);
    w.csv("oscillation.csv", t);
}

void cmd_validate(const ExperimentConfig& cfg, ArtifactWriter&) {
    const CollarConfig collar = cfg.collar();
    (void)collar;
    if (cfg.lambda_max <= 0.0)
        throw validation_error("run.lambda_max must be positive");
    for (double e : cfg.epsilons)
        if (!(e > 0.0)) throw validation_error("run.epsilons must be positive");
    bc_from_string(cfg.bc);
}

} // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {
        "spectrum", "count",           "branch",      "converge",
        "cusp",     "transform-check", "oscillation", "validate"};
    return names;
}

RunResult run_subcommand(const std::string& name, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir) {
    RunResult result;
    const auto& names = subcommand_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        result.exit_code = kExitValidation;
        result.message = "unknown subcommand '" + name + "'";
        return result;
    }

    par::set_threads(config.threads);
    const auto start = std::chrono::steady_clock::now();
    ArtifactWriter writer;
    writer.dir = out_dir;
    try {
        fs::create_directories(out_dir);
        if (name == "spectrum") cmd_spectrum(config, writer);
        else if (name == "count") cmd_count(config, writer);
        else if (name == "branch") cmd_branch(config, writer);
        else if (name == "converge") cmd_converge(config, writer);
        else if (name == "cusp") cmd_cusp(config, writer);
        else if (name == "transform-check") cmd_transform_check(config, writer);
        else if (name == "oscillation") cmd_oscillation(config, writer);
        else if (name == "validate") cmd_validate(config, writer);
    } catch (const validation_error& e) {
        result.exit_code = kExitValidation;
        result.message = e.what();
        return result;
    } catch (const solver_error& e) {
        result.exit_code = kExitSolver;
        result.message = e.what();
        return result;
    }
    const auto stop = std::chrono::steady_clock::now();

    // run manifest; timings are the only non-deterministic content
    json manifest;
    manifest["subcommand"] = name;
    manifest["tool_version"] = kVersion;
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof(hashbuf), "%016llx",
                  static_cast<unsigned long long>(config.hash()));
    manifest["config_hash"] = hashbuf;
    manifest["seed"] = config.seed;
    manifest["threads"] = config.threads;
    manifest["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
            .count();
    std::vector<std::string> artifact_names;
    for (const auto& p : writer.written)
        artifact_names.push_back(p.filename().string());
    manifest["artifacts"] = artifact_names;
    {
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }

    result.artifacts = writer.written;
    result.message = "ok";
    return result;
}

} // namespace collarspec
