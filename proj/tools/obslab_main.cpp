#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "obslab/accept/criteria.hpp"
#include "obslab/geom/free_boundary.hpp"
#include "obslab/io/config.hpp"
#include "obslab/io/field_io.hpp"
#include "obslab/io/reports.hpp"
#include "obslab/ops/stencil.hpp"
#include "obslab/oracle/radial.hpp"
#include "obslab/renorm/scaling.hpp"
#include "obslab/solver/solver.hpp"

namespace {

using nlohmann::json;
using namespace obslab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitEmptyFreeBoundary = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int threads{1};
    uint64_t seed{1};
};

ExperimentConfig load(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.seed != 1) cfg.seed = args.seed;
    std::filesystem::create_directories(cfg.output_dir);
    return cfg;
}

json solver_summary(const SolverReport& rep) {
    return {{"converged", rep.converged},
            {"epsilon_used", rep.epsilon_used},
            {"wall_iterations", rep.wall_iterations},
            {"kernel", rep.kernel_isa},
            {"final_residual",
             rep.residual_history.empty() ? 0.0 : rep.residual_history.back()},
            {"final_outer_gap", rep.outer_gaps.empty() ? 0.0 : rep.outer_gaps.back()}};
}

int run_solve(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    validate_problem(cfg.problem,
                     build_domain(cfg.grid.dim, cfg.grid.h, cfg.grid.radius));

    SolverReport rep = solve_cascade(cfg.problem, cfg.grid.dim, cfg.grid.h,
                                     cfg.grid.radius, cfg.solver, cfg.grid.levels);

    const std::string dir = cfg.output_dir + "/";
    write_field(dir + "solution.bin", rep.solution, cfg.problem.gamma);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < rep.residual_history.size(); ++i)
        rows.push_back({static_cast<double>(i), rep.residual_history[i],
                        i < rep.outer_gaps.size() ? rep.outer_gaps[i] : 0.0});
    write_csv(dir + "residuals.csv", {"outer_step", "inner_residual", "outer_gap"}, rows);
    write_json(dir + "summary.json", solver_summary(rep));
    write_manifest(dir + "manifest.json", cfg.raw,
                   {dir + "solution.bin", dir + "residuals.csv", dir + "summary.json"},
                   {});
    if (!rep.converged) {
        std::cerr << "solver did not converge; see " << dir << "summary.json\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

int run_geometry(const CommonArgs& args, const std::string& field_path) {
    ExperimentConfig cfg = load(args);
    LoadedField loaded = read_field(field_path);
    auto dom = loaded.field.domain_ptr();
    if (dom->dim() != cfg.grid.dim || dom->spacing() != cfg.grid.h ||
        dom->radius() != cfg.grid.radius)
        throw std::invalid_argument("solution file lattice disagrees with config grid");

    const GridField phi = sample(cfg.problem.obstacle, dom);
    const double h = dom->spacing();
    const double tol_contact = std::max(cfg.solver.tol_inner, h * h);
    FreeBoundaryReport fb = extract_free_boundary(loaded.field, phi, tol_contact);

    const std::string dir = cfg.output_dir + "/";
    if (fb.fb_nodes.empty()) {
        write_json(dir + "geometry.json",
                   {{"free_boundary_empty", true},
                    {"contact_nodes", fb.contact_nodes.size()}});
        std::cerr << "free boundary is empty\n";
        return kExitEmptyFreeBoundary;
    }

    // Up to 8 evenly spaced free boundary sample points.
    std::vector<int64_t> samples;
    const size_t stride = std::max<size_t>(1, fb.fb_nodes.size() / 8);
    for (size_t i = 0; i < fb.fb_nodes.size() && samples.size() < 8; i += stride)
        samples.push_back(fb.fb_nodes[i]);

    const FitWindow window = cfg.measure.window;
    const double exp_nondeg = 1.0 + 1.0 / (cfg.problem.gamma + 1.0);

    std::vector<std::vector<double>> rows;
    json slopes = json::array();
    for (int64_t x0 : samples) {
        const std::vector<double> radii = window.radii(h);
        const std::vector<double> nd =
            nondegeneracy_profile(loaded.field, phi, x0, radii, exp_nondeg);
        AffineRef ref{loaded.field[x0], discrete_gradient(phi, x0), dom->point(x0)};
        const Vec g0 = discrete_gradient(loaded.field, x0);
        for (size_t i = 0; i < radii.size(); ++i) {
            const double r = radii[i];
            const double sg =
                sup_over_ball(loaded.field, ref.center, r, ref).value;
            double sd = 0.0, sgr = 0.0;
            for (int64_t lin : dom->interior_list()) {
                if ((dom->point(lin) - ref.center).norm2() > r * r) continue;
                sd = std::max(sd, loaded.field[lin] - phi[lin]);
                sgr = std::max(sgr, (discrete_gradient(loaded.field, lin) - g0).norm());
            }
            rows.push_back({static_cast<double>(x0), r, sg, sd, sgr, nd[i]});
        }
        try {
            const LogLogFit gfit = growth_exponent_at(loaded.field, phi, x0, window);
            const LogLogFit dfit = detach_rate_at(loaded.field, phi, x0, window);
            const LogLogFit grfit = gradient_growth_at(loaded.field, x0, window,
                                                       GradientSource::Solution);
            slopes.push_back({{"x0_index", x0},
                              {"growth", gfit.slope},
                              {"growth_halfwidth", gfit.halfwidth},
                              {"detach", dfit.slope},
                              {"detach_halfwidth", dfit.halfwidth},
                              {"gradient", grfit.slope},
                              {"gradient_halfwidth", grfit.halfwidth}});
        } catch (const std::invalid_argument& e) {
            slopes.push_back({{"x0_index", x0}, {"skipped", e.what()}});
        }
    }
    write_csv(dir + "geometry.csv",
              {"x0_index", "r", "S_growth", "S_detach", "S_grad", "nondeg_ratio"}, rows);

    json summary;
    summary["slopes"] = slopes;
    summary["targets"] = {{"growth", 1.0 + cfg.problem.beta()},
                          {"gradient", cfg.problem.beta()},
                          {"nondegeneracy", exp_nondeg}};
    summary["fb_nodes"] = fb.fb_nodes.size();
    summary["contact_nodes"] = fb.contact_nodes.size();
    if (!cfg.measure.porosity_radii.empty()) {
        const PorosityEstimate por =
            porosity_estimate(fb.fb_nodes, dom, cfg.measure.porosity_radii);
        summary["porosity_hat"] = por.sigma_hat;
        summary["non_porous"] = por.non_porous;
    }
    if (!cfg.measure.box_scales.empty()) {
        const LogLogFit bd = box_dimension(fb.fb_nodes, dom, cfg.measure.box_scales);
        summary["boxdim_hat"] = bd.slope;
    }
    write_json(dir + "geometry.json", summary);
    write_manifest(dir + "manifest.json", cfg.raw,
                   {dir + "geometry.csv", dir + "geometry.json"}, {});
    return kExitOk;
}

int run_oracle(const CommonArgs& args, double gamma, double r_contact, int dim,
               double h, double collar_multiple) {
    std::filesystem::create_directories(args.out_dir.empty() ? "out" : args.out_dir);
    const std::string dir = (args.out_dir.empty() ? "out" : args.out_dir) + "/";

    RadialSharpness oracle{gamma, r_contact, dim};
    auto dom = std::make_shared<GridDomain>(build_domain(dim, h, 1.0));
    const double resid =
        verify_radial_is_solution(oracle, dom, h, collar_multiple * h);

    const GridField v = sample([&](const Vec& x) { return oracle.value(x); }, dom);
    const GridField zero(dom);
    FitWindow window;
    window.r_max = r_contact / 2.0;
    Vec probe(dim, r_contact);
    const LogLogFit fit = growth_exponent_at(v, zero, dom->nearest(probe), window);

    write_field(dir + "oracle.bin", v, gamma);
    write_json(dir + "oracle.json",
               {{"gamma", gamma},
                {"r_contact", r_contact},
                {"dim", dim},
                {"h", h},
                {"residual_off_collar", resid},
                {"growth_slope", fit.slope},
                {"growth_target", 1.0 + 1.0 / (gamma + 1.0)}});
    std::cout << "residual off collar: " << resid << ", growth slope: " << fit.slope
              << "\n";
    return kExitOk;
}

int run_convergence(const CommonArgs& args) {
    ExperimentConfig cfg = load(args);
    if (cfg.grid.levels < 3)
        throw std::invalid_argument("convergence study needs at least 3 levels");

    // Oracle comparison is available when the config declares the radial
    // fixture; otherwise the study reports Cauchy differences between levels.
    const bool has_oracle = cfg.raw.contains("oracle");
    RadialSharpness oracle;
    if (has_oracle) {
        const json& o = cfg.raw.at("oracle");
        oracle.gamma = o.at("gamma").get<double>();
        oracle.r_contact = o.at("r").get<double>();
        oracle.dim = cfg.grid.dim;
    }

    std::vector<std::vector<double>> rows;
    std::optional<GridField> prev;
    double prev_err = 0.0;
    bool all_converged = true;
    for (int level = cfg.grid.levels - 1; level >= 0; --level) {
        const double h = cfg.grid.h * static_cast<double>(int64_t{1} << level);
        auto dom = std::make_shared<GridDomain>(
            build_domain(cfg.grid.dim, h, cfg.grid.radius));
        std::optional<GridField> init;
        if (prev) init = prolong(*prev, dom);
        const SolverReport rep =
            solve(cfg.problem, dom, cfg.solver, init ? &*init : nullptr);
        all_converged = all_converged && rep.converged;

        double err = 0.0;
        if (has_oracle) {
            for (int64_t lin : dom->interior_list())
                err = std::max(err,
                               std::abs(rep.solution[lin] - oracle.value(dom->point(lin))));
        } else if (init) {
            err = init->sup_diff(rep.solution);
        }
        const double ratio = (prev && prev_err > 0.0 && err > 0.0)
                                 ? prev_err / err
                                 : 0.0;
        rows.push_back({h, err, ratio, rep.converged ? 1.0 : 0.0});
        prev = rep.solution;
        prev_err = err;
    }

    const std::string dir = cfg.output_dir + "/";
    write_csv(dir + "convergence.csv", {"h", "error", "ratio", "converged"}, rows);
    write_manifest(dir + "manifest.json", cfg.raw, {dir + "convergence.csv"}, {});
    return all_converged ? kExitOk : kExitNonConvergence;
}

int run_renorm(const CommonArgs& args, const std::string& field_path) {
    ExperimentConfig cfg = load(args);
    LoadedField loaded = read_field(field_path);
    auto dom = loaded.field.domain_ptr();

    const double beta = cfg.problem.beta();
    const Vec origin(dom->dim(), 0.0);
    const Vec grad0 = discrete_gradient(loaded.field, dom->nearest(origin));
    const DyadicSequence seq =
        dyadic_sequence(loaded.field, cfg.measure.rho, beta, cfg.measure.k_max, grad0);

    const GridField phi = sample(cfg.problem.obstacle, dom);
    const FlatnessMeasurement flat = flatness_measure(loaded.field, phi, 0.1);

    const std::string dir = cfg.output_dir + "/";
    std::vector<std::vector<double>> rows;
    for (size_t k = 0; k < seq.sup_norms.size(); ++k)
        rows.push_back({static_cast<double>(k + 1), seq.sup_norms[k]});
    write_csv(dir + "renorm.csv", {"k", "sup_norm"}, rows);
    write_json(dir + "renorm.json",
               {{"rho", cfg.measure.rho},
                {"beta", beta},
                {"M", dyadic_M(cfg.measure.rho, beta)},
                {"sup_gap", flat.sup_gap},
                {"sup_grad_gap", flat.sup_grad_gap}});
    return kExitOk;
}

int run_verify(const std::string& id, uint64_t seed) {
    const CriterionResult res = run_criterion(id, seed);
    std::cout << res.id << ": " << (res.passed ? "PASS" : "FAIL") << " — " << res.detail
              << "\n";
    return res.passed ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for degenerate obstacle problems"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string field_path;
    std::string criterion;
    double oracle_gamma = 1.0, oracle_r = 0.5, oracle_h = 1.0 / 128.0;
    int oracle_dim = 2;
    double oracle_collar = 4.0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", args.config_path, "experiment file");
        if (needs_config) opt->required();
        sub->add_option("--out", args.out_dir, "output directory override");
        sub->add_option("--threads", args.threads, "worker threads (sweeps are single-threaded; accepted for interface stability)");
        sub->add_option("--seed", args.seed, "seed for randomized property sampling");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "run the solver");
    add_common(solve_cmd, true);
    CLI::App* geom_cmd = app.add_subcommand("geometry", "measure a solved field");
    add_common(geom_cmd, true);
    geom_cmd->add_option("--field", field_path, "solution dump")->required();
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact radial fixture checks");
    // --h would collide with the default -h help short name
    oracle_cmd->set_help_flag("--help", "print help");
    add_common(oracle_cmd, false);
    oracle_cmd->add_option("--gamma", oracle_gamma, "degeneracy exponent");
    oracle_cmd->add_option("--r", oracle_r, "contact radius");
    oracle_cmd->add_option("--dim", oracle_dim, "dimension");
    oracle_cmd->add_option("--h", oracle_h, "grid spacing");
    oracle_cmd->add_option("--collar", oracle_collar, "collar width in grid spacings");
    CLI::App* conv_cmd = app.add_subcommand("convergence", "multi-level error study");
    add_common(conv_cmd, true);
    CLI::App* renorm_cmd = app.add_subcommand("renorm", "dyadic rescaling measurements");
    add_common(renorm_cmd, true);
    renorm_cmd->add_option("--field", field_path, "solution dump")->required();
    CLI::App* verify_cmd = app.add_subcommand("verify", "run one acceptance criterion");
    verify_cmd->add_option("criterion", criterion, "A1..A8")->required();
    verify_cmd->add_option("--seed", args.seed, "seed for randomized property sampling");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(args);
        if (geom_cmd->parsed()) return run_geometry(args, field_path);
        if (oracle_cmd->parsed())
            return run_oracle(args, oracle_gamma, oracle_r, oracle_dim, oracle_h,
                              oracle_collar);
        if (conv_cmd->parsed()) return run_convergence(args);
        if (renorm_cmd->parsed()) return run_renorm(args, field_path);
        if (verify_cmd->parsed()) return run_verify(criterion, args.seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitValidation;
}
