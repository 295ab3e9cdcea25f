#include "obslab/io/config.hpp"

#include <fstream>
#include <stdexcept>

#include "obslab/io/expr.hpp"
#include "obslab/oracle/radial.hpp"

namespace obslab {

using nlohmann::json;

namespace {

SymMat parse_symmat(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("coefficient table must be an array");
    int n = 0;
    if (j.size() == 1) n = 1;
    else if (j.size() == 4) n = 2;
    else if (j.size() == 9) n = 3;
    else throw std::invalid_argument("coefficient table must hold n*n entries, n <= 3");
    SymMat m(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double v = j.at(static_cast<size_t>(i * n + k)).get<double>();
            const double vt = j.at(static_cast<size_t>(k * n + i)).get<double>();
            if (v != vt)
                throw std::invalid_argument("coefficient table must be symmetric");
            m.set(i, k, v);
        }
    return m;
}

}  // namespace

std::shared_ptr<const EllipticOperator> parse_operator(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("operator descriptor needs a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    auto make = [](EllipticOperator op) {
        return std::make_shared<const EllipticOperator>(std::move(op));
    };
    if (kind == "trace") return make(EllipticOperator::trace());
    if (kind == "trace_modulated")
        return make(EllipticOperator::trace_modulated(j.at("c").get<double>()));
    if (kind == "pucci_minus")
        return make(EllipticOperator::pucci_minus_op(j.at("lambda").get<double>(),
                                                     j.at("Lambda").get<double>()));
    if (kind == "pucci_plus")
        return make(EllipticOperator::pucci_plus_op(j.at("lambda").get<double>(),
                                                    j.at("Lambda").get<double>()));
    if (kind == "bellman") {
        std::vector<SymMat> tables;
        for (const json& t : j.at("tables")) tables.push_back(parse_symmat(t));
        return make(EllipticOperator::bellman(std::move(tables)));
    }
    if (kind == "isaacs") {
        std::vector<std::vector<SymMat>> groups;
        for (const json& g : j.at("groups")) {
            std::vector<SymMat> tables;
            for (const json& t : g) tables.push_back(parse_symmat(t));
            groups.push_back(std::move(tables));
        }
        return make(EllipticOperator::isaacs(std::move(groups)));
    }
    if (kind == "p_laplacian")
        return make(EllipticOperator::p_laplacian(j.at("p").get<double>()));
    if (kind == "m_momentum")
        return make(EllipticOperator::m_momentum(
            j.at("m").get<int>(), j.at("sigma").get<std::vector<double>>()));
    if (kind == "special_lagrangian")
        return make(
            EllipticOperator::special_lagrangian(j.at("h").get<std::vector<double>>()));
    if (kind == "recession")
        return make(EllipticOperator::recession_of(*parse_operator(j.at("inner"))));
    throw std::invalid_argument("unknown operator kind: " + kind);
}

ScalarFn parse_scalar_fn(const json& j) {
    if (j.is_string()) return parse_expression(j.get<std::string>());
    if (j.is_number()) {
        const double v = j.get<double>();
        return [v](const Vec&) { return v; };
    }
    if (j.is_object() && j.contains("catalog")) {
        const std::string name = j.at("catalog").get<std::string>();
        if (name == "const") {
            const double v = j.at("value").get<double>();
            return [v](const Vec&) { return v; };
        }
        if (name == "radial_v" || name == "radial_source") {
            RadialSharpness oracle;
            oracle.gamma = j.at("gamma").get<double>();
            oracle.r_contact = j.at("r").get<double>();
            oracle.dim = j.at("dim").get<int>();
            if (name == "radial_v")
                return [oracle](const Vec& x) { return oracle.value(x); };
            return [oracle](const Vec& x) { return oracle.source(x); };
        }
        throw std::invalid_argument("unknown catalog entry: " + name);
    }
    throw std::invalid_argument(
        "scalar function must be an expression string, a number, or a catalog object");
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;

    const json& p = j.at("problem");
    cfg.problem.gamma = p.value("gamma", 0.0);
    cfg.problem.alpha = p.value("alpha", 1.0);
    cfg.problem.op = parse_operator(p.at("operator"));
    cfg.problem.obstacle = parse_scalar_fn(p.at("obstacle"));
    cfg.problem.source = parse_scalar_fn(p.at("source"));
    cfg.problem.boundary = parse_scalar_fn(p.at("boundary"));

    if (j.contains("grid")) {
        const json& g = j.at("grid");
        cfg.grid.dim = g.value("dim", 2);
        cfg.grid.h = g.value("h", 1.0 / 32.0);
        cfg.grid.radius = g.value("radius", 1.0);
        cfg.grid.levels = g.value("levels", 1);
    }
    if (cfg.grid.levels < 1)
        throw std::invalid_argument("grid.levels must be at least 1");
    if (cfg.grid.dim < 1 || cfg.grid.dim > 3)
        throw std::invalid_argument("grid.dim must be 1, 2, or 3");
    if (!(cfg.grid.h > 0.0) || !(cfg.grid.radius > 0.0))
        throw std::invalid_argument("grid.h and grid.radius must be positive");

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("epsilon_schedule"))
            cfg.solver.epsilon_schedule = s.at("epsilon_schedule").get<std::vector<double>>();
        cfg.solver.grad_floor = s.value("grad_floor", cfg.solver.grad_floor);
        cfg.solver.dt_safety = s.value("dt_safety", cfg.solver.dt_safety);
        cfg.solver.tol_inner = s.value("tol_inner", cfg.solver.tol_inner);
        cfg.solver.tol_outer = s.value("tol_outer", cfg.solver.tol_outer);
        cfg.solver.max_inner = s.value("max_inner", cfg.solver.max_inner);
        cfg.solver.max_outer = s.value("max_outer", cfg.solver.max_outer);
        const std::string backend = s.value("backend", std::string("penalized"));
        if (backend == "penalized")
            cfg.solver.backend = SolverBackend::Penalized;
        else if (backend == "projection")
            cfg.solver.backend = SolverBackend::Projection;
        else
            throw std::invalid_argument("solver.backend must be penalized or projection");
    }
    cfg.solver.validate();

    if (j.contains("measurements")) {
        const json& m = j.at("measurements");
        cfg.measure.window.r_min = m.value("r_min", 0.0);
        cfg.measure.window.r_max = m.value("r_max", cfg.grid.radius / 4.0);
        cfg.measure.window.floor_multiple = m.value("floor_multiple", 10.0);
        if (m.contains("porosity_radii"))
            cfg.measure.porosity_radii = m.at("porosity_radii").get<std::vector<double>>();
        if (m.contains("box_scales"))
            cfg.measure.box_scales = m.at("box_scales").get<std::vector<double>>();
        cfg.measure.rho = m.value("rho", 0.5);
        cfg.measure.k_max = m.value("k_max", 4);
    } else {
        cfg.measure.window.r_max = cfg.grid.radius / 4.0;
    }

    cfg.seed = j.value("seed", uint64_t{1});
    cfg.output_dir = j.value("output_dir", std::string("out"));

    // Fails fast on bad ranges; the g > phi check needs a lattice and runs
    // again when one is built.
    if (!(cfg.problem.gamma >= 0.0))
        throw std::invalid_argument("problem.gamma must be >= 0");
    if (!(cfg.problem.alpha > 0.0 && cfg.problem.alpha <= 1.0))
        throw std::invalid_argument("problem.alpha must lie in (0, 1]");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config is missing a field: ") + e.what());
    }
}

}  // namespace obslab
