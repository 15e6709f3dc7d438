#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "resiqm/core.hpp"
#include "resiqm/potential.hpp"
#include "resiqm/quantum.hpp"

namespace resiqm {

enum class Method { schroedinger, residual, residual_general, gwpt };

struct TrajectorySpec {
    double q0 = 0.0;
    double p0 = 0.0;
    /// Constant frame c(t) = (q0, p0); only meaningful for residual_general.
    bool frozen = false;
};

/// Initial wave function, always described in the lab (position) frame.
struct InitialSpec {
    enum class Kind { gaussian, plane_wave, ground_state_harmonic_fit };
    Kind kind = Kind::gaussian;
    double center = 0.0;
    /// Gaussian standard width w in exp(-(x-center)^2 / (2 w^2)); defaults to sqrt(hbar).
    std::optional<double> width_parameter;
    double momentum = 0.0;
};

struct SplitPlan {
    std::size_t freeze_at_step = 0;
    std::size_t split_at_step = 0;
    double split_position = 0.0;
    /// Lab grid used while the frame is frozen and for the summed branch output.
    GridSpec lab_grid{-1.2, 1.2, 8001};
    /// Half width of each branch's residual grid.
    double branch_half_width = 0.5;
};

struct ScenarioConfig {
    SimulationParams params;
    Potential potential;
    GridSpec grid{-1.0, 1.0, 101};
    Method method = Method::residual;
    BoundaryCondition boundary = BoundaryCondition::dirichlet_zero;
    BoundaryCondition kappa_boundary = BoundaryCondition::neumann;
    double dt_quantum = 1e-3;
    std::size_t substeps_classical = 1;
    std::size_t n_steps = 0;
    std::size_t snapshot_every = 0;
    TrajectorySpec trajectory;
    InitialSpec initial;
    std::string output_dir;
    std::optional<SplitPlan> split_plan;

    double dt_classical() const { return dt_quantum / static_cast<double>(substeps_classical); }
    double width() const { return initial.width_parameter.value_or(std::sqrt(params.hbar)); }

    void validate() const
    {
        params.validate();
        if (!(dt_quantum > 0.0) || !std::isfinite(dt_quantum)) throw ValidationError("dt_quantum", "must be > 0");
        if (substeps_classical < 1) throw ValidationError("substeps_classical", "must be >= 1");
        if (!std::isfinite(trajectory.q0) || !std::isfinite(trajectory.p0)) {
            throw ValidationError("trajectory", "q0 and p0 must be finite");
        }
        if (method == Method::residual_general && !trajectory.frozen) {
            throw ValidationError("trajectory.frozen",
                                  "residual_general supports only frozen (constant) trajectories");
        }
        if (method != Method::residual_general && trajectory.frozen) {
            throw ValidationError("trajectory.frozen", "only valid with method residual_general");
        }
        if (initial.width_parameter && !(*initial.width_parameter > 0.0)) {
            throw ValidationError("initial.width_parameter", "must be > 0");
        }
        if (initial.kind == InitialSpec::Kind::ground_state_harmonic_fit &&
            !(evaluate(potential, trajectory.q0, 2) > 0.0)) {
            throw ValidationError("initial", "ground_state_harmonic_fit needs V''(q0) > 0");
        }
        if (method == Method::gwpt) {
            const double tol = 1e-12;
            if (initial.kind == InitialSpec::Kind::plane_wave) {
                throw ValidationError("initial", "gwpt needs a Gaussian initial state");
            }
            if (initial.kind == InitialSpec::Kind::gaussian &&
                (std::abs(initial.center - trajectory.q0) > tol * (1.0 + std::abs(trajectory.q0)) ||
                 std::abs(initial.momentum - trajectory.p0) > tol * (1.0 + std::abs(trajectory.p0)))) {
                throw ValidationError("initial", "gwpt needs the Gaussian centered on the trajectory start");
            }
        }
        if (split_plan) {
            const auto& s = *split_plan;
            if (method != Method::residual) throw ValidationError("split_plan", "requires method residual");
            if (!(s.freeze_at_step < s.split_at_step)) {
                throw ValidationError("split_plan", "freeze_at_step must precede split_at_step");
            }
            if (s.split_at_step > n_steps) throw ValidationError("split_plan.split_at_step", "exceeds n_steps");
            if (!(s.branch_half_width > 0.0)) throw ValidationError("split_plan.branch_half_width", "must be > 0");
        }
    }
};

namespace detail {

// Walks one JSON object, remembering which keys were read so that leftovers
// can be rejected with their full path.
class ObjectReader {
public:
    ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ValidationError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const nlohmann::json& raw(const std::string& key)
    {
        if (!j_.contains(key)) throw ValidationError(child(key), "missing required field");
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_number()) throw ValidationError(child(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(child(key), "must be finite");
        return d;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::size_t count(const std::string& key)
    {
        const auto& v = raw(key);
        if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::size_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d)) return static_cast<std::size_t>(d);
        }
        throw ValidationError(child(key), "expected a non-negative integer");
    }

    std::size_t count(const std::string& key, std::size_t fallback) { return has(key) ? count(key) : fallback; }

    std::string text(const std::string& key)
    {
        const auto& v = raw(key);
        if (!v.is_string()) throw ValidationError(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::string text(const std::string& key, std::string fallback)
    {
        return has(key) ? text(key) : std::move(fallback);
    }

    bool flag(const std::string& key, bool fallback)
    {
        if (!has(key)) return fallback;
        const auto& v = raw(key);
        if (!v.is_boolean()) throw ValidationError(child(key), "expected a boolean");
        return v.get<bool>();
    }

    ObjectReader object(const std::string& key) { return ObjectReader(raw(key), child(key)); }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    const std::string& path() const noexcept { return path_; }

    void finish() const
    {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.contains(key)) throw ValidationError(child(key), "unknown key '" + key + "'");
        }
    }

private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline GridSpec parse_grid(ObjectReader r)
{
    const double lo = r.number("x_min");
    const double hi = r.number("x_max");
    const std::size_t n = r.count("n_points");
    r.finish();
    if (!(hi > lo)) throw ValidationError(r.child("x_max"), "must be greater than x_min");
    if (n < 3) throw ValidationError(r.child("n_points"), "must be at least 3");
    return GridSpec(lo, hi, n);
}

inline Potential parse_potential(ObjectReader r)
{
    using namespace potentials;
    const std::string type = r.text("type");
    Potential pot;
    if (type == "free") {
        pot = Free{};
    } else if (type == "harmonic") {
        pot = Harmonic{r.number("m", 1.0), r.number("omega", 1.0)};
    } else if (type == "quartic") {
        pot = Quartic{};
    } else if (type == "morse") {
        pot = Morse{r.number("D"), r.number("a")};
    } else if (type == "barrier_harmonic") {
        pot = BarrierHarmonic{r.number("a"), r.number("b")};
    } else if (type == "compact_bump") {
        pot = CompactBump{};
    } else {
        throw ValidationError(r.child("type"), "unknown potential tag '" + type + "'");
    }
    r.finish();
    return pot;
}

inline BoundaryCondition parse_boundary(const std::string& s, const std::string& path)
{
    if (s == "dirichlet_zero") return BoundaryCondition::dirichlet_zero;
    if (s == "neumann") return BoundaryCondition::neumann;
    throw ValidationError(path, "unknown boundary condition '" + s + "'");
}

inline Method parse_method(const std::string& s)
{
    if (s == "schroedinger") return Method::schroedinger;
    if (s == "residual") return Method::residual;
    if (s == "residual_general") return Method::residual_general;
    if (s == "gwpt") return Method::gwpt;
    throw ValidationError("method", "unknown method '" + s + "'");
}

inline InitialSpec parse_initial(ObjectReader r)
{
    InitialSpec init;
    const std::string type = r.text("type");
    if (type == "gaussian") {
        init.kind = InitialSpec::Kind::gaussian;
        init.center = r.number("center", 0.0);
        if (r.has("width_parameter")) init.width_parameter = r.number("width_parameter");
        init.momentum = r.number("momentum", 0.0);
    } else if (type == "plane_wave") {
        init.kind = InitialSpec::Kind::plane_wave;
        init.momentum = r.number("p");
    } else if (type == "ground_state_harmonic_fit") {
        init.kind = InitialSpec::Kind::ground_state_harmonic_fit;
    } else {
        throw ValidationError(r.child("type"), "unknown initial condition '" + type + "'");
    }
    r.finish();
    return init;
}

}  // namespace detail

inline std::string_view to_string(Method m)
{
    switch (m) {
        case Method::schroedinger: return "schroedinger";
        case Method::residual: return "residual";
        case Method::residual_general: return "residual_general";
        case Method::gwpt: return "gwpt";
    }
    return "";
}

inline std::string_view to_string(BoundaryCondition bc)
{
    return bc == BoundaryCondition::neumann ? "neumann" : "dirichlet_zero";
}

/**
 * Parse and validate a scenario document. Unknown keys are rejected at every
 * level; errors name the offending field path.
 *
 * The classical step is given either by substeps_classical (an integer z) or
 * by dt_classical, in which case dt_quantum / dt_classical must be an integer.
 */
inline ScenarioConfig load_config(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", std::string("parse error: ") + e.what());
    }

    detail::ObjectReader root(doc, "");
    ScenarioConfig cfg;

    {
        auto r = root.object("params");
        cfg.params.hbar = r.number("hbar");
        cfg.params.mass = r.number("mass", 1.0);
        r.finish();
    }
    cfg.potential = detail::parse_potential(root.object("potential"));
    cfg.grid = detail::parse_grid(root.object("grid"));
    cfg.method = detail::parse_method(root.text("method"));
    cfg.boundary = detail::parse_boundary(root.text("boundary", "dirichlet_zero"), "boundary");
    cfg.kappa_boundary = detail::parse_boundary(root.text("kappa_boundary", "neumann"), "kappa_boundary");
    cfg.dt_quantum = root.number("dt_quantum");

    const bool has_z = root.has("substeps_classical");
    if (has_z) {
        const auto& raw = root.raw("substeps_classical");
        if (!raw.is_number() || raw.get<double>() < 1.0 || raw.get<double>() != std::floor(raw.get<double>())) {
            throw ValidationError("substeps_classical", "must be an integer >= 1");
        }
        cfg.substeps_classical = static_cast<std::size_t>(raw.get<double>());
    }
    if (root.has("dt_classical")) {
        const double dt_c = root.number("dt_classical");
        if (!(dt_c > 0.0)) throw ValidationError("dt_classical", "must be > 0");
        const double ratio = cfg.dt_quantum / dt_c;
        const double z = std::round(ratio);
        if (z < 1.0 || std::abs(ratio - z) > 1e-9 * z) {
            throw ValidationError("dt_classical", "dt_quantum must be an integer multiple of dt_classical");
        }
        if (has_z && static_cast<std::size_t>(z) != cfg.substeps_classical) {
            throw ValidationError("dt_classical", "inconsistent with substeps_classical");
        }
        cfg.substeps_classical = static_cast<std::size_t>(z);
    }

    cfg.n_steps = root.count("n_steps");
    cfg.snapshot_every = root.count("snapshot_every", 0);

    if (root.has("trajectory")) {
        auto r = root.object("trajectory");
        cfg.trajectory.q0 = r.number("q0", 0.0);
        cfg.trajectory.p0 = r.number("p0", 0.0);
        cfg.trajectory.frozen = r.flag("frozen", false);
        r.finish();
    }
    cfg.initial = detail::parse_initial(root.object("initial"));
    cfg.output_dir = root.text("output_dir", "");

    if (root.has("split_plan")) {
        auto r = root.object("split_plan");
        SplitPlan plan;
        plan.freeze_at_step = r.count("freeze_at_step");
        plan.split_at_step = r.count("split_at_step");
        plan.split_position = r.number("split_position", 0.0);
        if (r.has("lab_grid")) plan.lab_grid = detail::parse_grid(r.object("lab_grid"));
        plan.branch_half_width = r.number("branch_half_width", plan.branch_half_width);
        r.finish();
        cfg.split_plan = plan;
    }
    root.finish();

    cfg.validate();
    return cfg;
}

inline nlohmann::json to_json(const GridSpec& g)
{
    return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n_points", g.size()}};
}

inline nlohmann::json to_json(const Potential& pot)
{
    using namespace potentials;
    nlohmann::json j{{"type", std::string(pot.tag())}};
    if (auto* h = std::get_if<Harmonic>(&pot.variant())) {
        j["m"] = h->m;
        j["omega"] = h->omega;
    } else if (auto* m = std::get_if<Morse>(&pot.variant())) {
        j["D"] = m->D;
        j["a"] = m->a;
    } else if (auto* b = std::get_if<BarrierHarmonic>(&pot.variant())) {
        j["a"] = b->a;
        j["b"] = b->b;
    }
    return j;
}

/// Full config echo with defaults filled in; load_config(to_json(c).dump()) reproduces c.
inline nlohmann::json to_json(const ScenarioConfig& c)
{
    nlohmann::json j;
    j["params"] = {{"hbar", c.params.hbar}, {"mass", c.params.mass}};
    j["potential"] = to_json(c.potential);
    j["grid"] = to_json(c.grid);
    j["method"] = std::string(to_string(c.method));
    j["boundary"] = std::string(to_string(c.boundary));
    j["kappa_boundary"] = std::string(to_string(c.kappa_boundary));
    j["dt_quantum"] = c.dt_quantum;
    j["substeps_classical"] = c.substeps_classical;
    j["n_steps"] = c.n_steps;
    j["snapshot_every"] = c.snapshot_every;
    j["trajectory"] = {{"q0", c.trajectory.q0}, {"p0", c.trajectory.p0}, {"frozen", c.trajectory.frozen}};
    nlohmann::json init;
    switch (c.initial.kind) {
        case InitialSpec::Kind::gaussian:
            init = {{"type", "gaussian"}, {"center", c.initial.center}, {"momentum", c.initial.momentum}};
            if (c.initial.width_parameter) init["width_parameter"] = *c.initial.width_parameter;
            break;
        case InitialSpec::Kind::plane_wave: init = {{"type", "plane_wave"}, {"p", c.initial.momentum}}; break;
        case InitialSpec::Kind::ground_state_harmonic_fit: init = {{"type", "ground_state_harmonic_fit"}}; break;
    }
    j["initial"] = init;
    j["output_dir"] = c.output_dir;
    if (c.split_plan) {
        const auto& s = *c.split_plan;
        j["split_plan"] = {{"freeze_at_step", s.freeze_at_step},
                           {"split_at_step", s.split_at_step},
                           {"split_position", s.split_position},
                           {"lab_grid", to_json(s.lab_grid)},
                           {"branch_half_width", s.branch_half_width}};
    }
    return j;
}

}  // namespace resiqm
