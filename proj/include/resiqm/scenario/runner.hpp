#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resiqm/classical.hpp"
#include "resiqm/core.hpp"
#include "resiqm/gwpt.hpp"
#include "resiqm/potential.hpp"
#include "resiqm/quantum.hpp"
#include "resiqm/scenario/config.hpp"
#include "resiqm/scenario/output.hpp"
#include "resiqm/scenario/record.hpp"
#include "resiqm/transform.hpp"

namespace resiqm {

/**
 * Analytic harmonic coherent state (m = omega = 1) whose center follows
 * (cos t q0 + sin t p0, cos t p0 - sin t q0), including the exact phase.
 */
inline WaveFunction coherent_state_reference(double t, double q0, double p0, const SimulationParams& params,
                                             const GridSpec& grid)
{
    const double hbar = params.hbar;
    const double s = std::sin(t);
    const double c = std::cos(t);
    const double qt = c * q0 + s * p0;
    const double pt = c * p0 - s * q0;
    const double constant = -0.5 * (t + q0 * p0 / hbar) +
                            (s * s * q0 * p0 - 0.5 * s * c * (p0 * p0 - q0 * q0)) / hbar;
    return WaveFunction::sample(grid, [&](double x) {
        const double d = x - qt;
        return std::exp(cplx{-d * d / (2.0 * hbar), constant + x * pt / hbar});
    });
}

namespace detail {

inline cplx initial_lab_value(const ScenarioConfig& cfg, double y)
{
    const double hbar = cfg.params.hbar;
    const auto& init = cfg.initial;
    switch (init.kind) {
        case InitialSpec::Kind::gaussian: {
            const double w = cfg.width();
            const double d = y - init.center;
            return std::exp(cplx{-d * d / (2.0 * w * w), init.momentum * y / hbar});
        }
        case InitialSpec::Kind::plane_wave: return unit_phase(init.momentum * y / hbar);
        case InitialSpec::Kind::ground_state_harmonic_fit: {
            const auto [q0, p0] = PhaseSpacePoint{cfg.trajectory.q0, cfg.trajectory.p0};
            const double stiffness = std::sqrt(cfg.params.mass * evaluate(cfg.potential, q0, 2));
            const double d = y - q0;
            return std::exp(cplx{-stiffness * d * d / (2.0 * hbar), p0 * (y - 0.5 * q0) / hbar});
        }
    }
    return {};
}

// Initial residual wave function, evaluated analytically (no interpolation).
inline WaveFunction initial_residual(const ScenarioConfig& cfg, const ResidualFrame& frame, const GridSpec& grid)
{
    const auto [q, p] = frame.c;
    return WaveFunction::sample(grid, [&](double x) {
        return unit_phase(frame.theta - p * (x + 0.5 * q) / cfg.params.hbar) * initial_lab_value(cfg, x + q);
    });
}

struct ClassicalAdvance {
    TrajectoryState end;
    /// Position at the middle of the quantum step.
    double q_mid;
};

inline ClassicalAdvance advance_classical(const TrajectoryState& s, const ScenarioConfig& cfg)
{
    const std::size_t z = cfg.substeps_classical;
    const double dt = cfg.dt_classical();
    std::vector<double> qs{s.point.q};
    TrajectoryState cur = s;
    for (std::size_t k = 0; k < z; ++k) {
        cur = symplectic_euler_step(cur, dt, cfg.potential, cfg.params);
        qs.push_back(cur.point.q);
    }
    const double q_mid = z % 2 == 0 ? qs[z / 2] : 0.5 * (qs[z / 2] + qs[z / 2 + 1]);
    return {cur, q_mid};
}

inline bool snapshot_due(const ScenarioConfig& cfg, std::size_t step)
{
    return cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0;
}

inline double residual_energy(const WaveFunction& phi, const PhaseSpacePoint& c, const ScenarioConfig& cfg,
                              const GridSpec& grid)
{
    return classical_energy(cfg.potential, c, cfg.params) +
           expectation_operator(phi, residual_operator(grid, cfg.potential, c.q, cfg.params, cfg.boundary));
}

inline RunSample residual_sample(const WaveFunction& phi, const TrajectoryState& s, const ScenarioConfig& cfg)
{
    const auto obs = residual_observables(phi, s.point, cfg.params);
    return {s.time, s.point.q, s.point.p, obs.q, obs.p, norm(phi), residual_energy(phi, s.point, cfg, phi.grid())};
}

inline RunSample lab_sample(const WaveFunction& psi, double t, const PhaseSpacePoint& c,
                            const TridiagonalOperator& h, const ScenarioConfig& cfg)
{
    return {t,
            c.q,
            c.p,
            expectation_position(psi),
            expectation_momentum(psi, cfg.params),
            norm(psi),
            expectation_operator(psi, h)};
}

// Runs body(step) for step = 1..n, tagging any numerical failure with the step index.
template <class F>
void for_each_step(std::size_t first, std::size_t last, F&& body)
{
    for (std::size_t step = first; step <= last; ++step) {
        try {
            body(step);
        } catch (const StepFailure&) {
            throw;
        } catch (const NumericalError& e) {
            throw StepFailure(step, e.what());
        }
    }
}

inline RunRecord run_schroedinger(const ScenarioConfig& cfg)
{
    RunRecord rec;
    TrajectoryState s{{cfg.trajectory.q0, cfg.trajectory.p0}, 0.0, 0.0};
    auto psi = WaveFunction::sample(cfg.grid, [&](double y) { return initial_lab_value(cfg, y); });
    const auto h = schroedinger_operator(cfg.grid, cfg.potential, cfg.params, cfg.boundary);
    const double scale = cfg.dt_quantum / (2.0 * cfg.params.hbar);

    auto record = [&](std::size_t step) {
        rec.series.push_back(lab_sample(psi, static_cast<double>(step) * cfg.dt_quantum, s.point, h, cfg));
        if (snapshot_due(cfg, step)) rec.snapshots.push_back({step, psi, std::nullopt});
    };
    record(0);
    for_each_step(1, cfg.n_steps, [&](std::size_t step) {
        s = advance_classical(s, cfg).end;
        psi = WaveFunction(cfg.grid, crank_nicolson(psi.values(), h, h, scale, cfg.boundary));
        record(step);
    });
    return rec;
}

inline RunRecord run_residual(const ScenarioConfig& cfg)
{
    RunRecord rec;
    TrajectoryState s{{cfg.trajectory.q0, cfg.trajectory.p0}, 0.0, 0.0};
    auto phi = initial_residual(cfg, ResidualFrame::from(s, cfg.params), cfg.grid);

    auto record = [&](std::size_t step) {
        rec.series.push_back(residual_sample(phi, s, cfg));
        if (snapshot_due(cfg, step)) {
            rec.snapshots.push_back({step, phi, inverse_weyl(phi, ResidualFrame::from(s, cfg.params))});
        }
    };
    record(0);
    for_each_step(1, cfg.n_steps, [&](std::size_t step) {
        const auto next = advance_classical(s, cfg).end;
        phi = cn_step_residual(phi, s.point, next.point, cfg.potential, cfg.dt_quantum, cfg.params, cfg.boundary);
        s = next;
        record(step);
    });
    return rec;
}

inline RunRecord run_residual_general(const ScenarioConfig& cfg)
{
    RunRecord rec;
    const PhaseSpacePoint c{cfg.trajectory.q0, cfg.trajectory.p0};
    const double frame_energy = c.p * c.p / (2.0 * cfg.params.mass);
    const PhaseSpaceVelocity still{};
    const auto h = general_residual_operator(cfg.grid, {c, still}, cfg.potential, cfg.params, cfg.boundary,
                                             frame_energy);
    const double scale = cfg.dt_quantum / (2.0 * cfg.params.hbar);
    auto frame_at = [&](double t) { return ResidualFrame{c, scattering_phase(c.p, t, cfg.params), cfg.params}; };

    auto phi = initial_residual(cfg, frame_at(0.0), cfg.grid);
    auto record = [&](std::size_t step) {
        const double t = static_cast<double>(step) * cfg.dt_quantum;
        const auto obs = residual_observables(phi, c, cfg.params);
        rec.series.push_back({t, c.q, c.p, obs.q, obs.p, norm(phi), frame_energy + expectation_operator(phi, h)});
        if (snapshot_due(cfg, step)) rec.snapshots.push_back({step, phi, inverse_weyl(phi, frame_at(t))});
    };
    record(0);
    for_each_step(1, cfg.n_steps, [&](std::size_t step) {
        phi = WaveFunction(cfg.grid, crank_nicolson(phi.values(), h, h, scale, cfg.boundary));
        record(step);
    });
    return rec;
}

inline RunRecord run_gwpt(const ScenarioConfig& cfg)
{
    RunRecord rec;
    const double root = std::sqrt(cfg.params.hbar);
    const GridSpec xi_grid(cfg.grid.x_min() / root, cfg.grid.x_max() / root, cfg.grid.size());
    TrajectoryState s{{cfg.trajectory.q0, cfg.trajectory.p0}, 0.0, 0.0};

    BeamState beam;
    if (cfg.initial.kind == InitialSpec::Kind::ground_state_harmonic_fit) {
        beam.M = {0.0, std::sqrt(cfg.params.mass * evaluate(cfg.potential, s.point.q, 2))};
    } else {
        const double w = cfg.width();
        beam.M = {0.0, cfg.params.hbar / (w * w)};
    }
    beam.A = initial_residual(cfg, ResidualFrame::from(s, cfg.params), GridSpec(-1.0, 1.0, 3))[1];
    beam.check();
    auto kappa = KappaField::constant(xi_grid);

    auto record = [&](std::size_t step) {
        const auto assembled = assemble_gwpt(beam, kappa, cfg.params);
        const WaveFunction phi(cfg.grid, {assembled.values().begin(), assembled.values().end()});
        rec.series.push_back(residual_sample(phi, s, cfg));
        if (snapshot_due(cfg, step)) {
            rec.snapshots.push_back({step, phi, inverse_weyl(phi, ResidualFrame::from(s, cfg.params))});
        }
    };
    record(0);
    for_each_step(1, cfg.n_steps, [&](std::size_t step) {
        const auto adv = advance_classical(s, cfg);
        kappa = kappa_step(kappa, beam, adv.q_mid, cfg.dt_quantum, cfg.potential, cfg.params, cfg.kappa_boundary);
        beam = beam_step(beam, adv.q_mid, cfg.dt_quantum, cfg.potential, cfg.params);
        s = adv.end;
        record(step);
    });
    return rec;
}

struct Branch {
    TrajectoryState s;
    WaveFunction phi;
};

}  // namespace detail

/**
 * Freeze-and-split procedure for trajectories that stall on a barrier top.
 *
 * Steps up to freeze_at_step use the residual method. The state is then
 * transformed to the lab grid and evolved with the standard solver in a frame
 * frozen at (0, 0). At split_at_step psi is cut at split_position and each
 * half restarts the residual method with a frame seeded at its own <q>, <p>
 * (q snapped to the lab grid so that the transform is interpolation free).
 * After the split the recorded observables combine both branches.
 */
inline RunRecord run_split_scenario(const ScenarioConfig& cfg)
{
    if (!cfg.split_plan) throw ValidationError("split_plan", "missing");
    const auto& plan = *cfg.split_plan;
    const auto& lab = plan.lab_grid;
    const auto& pot = cfg.potential;
    const auto& params = cfg.params;
    const double dt = cfg.dt_quantum;
    RunRecord rec;

    // Phase 1: residual evolution along the classical trajectory.
    TrajectoryState s{{cfg.trajectory.q0, cfg.trajectory.p0}, 0.0, 0.0};
    auto phi = detail::initial_residual(cfg, ResidualFrame::from(s, params), cfg.grid);
    auto record_residual = [&](std::size_t step) {
        rec.series.push_back(detail::residual_sample(phi, s, cfg));
        if (detail::snapshot_due(cfg, step)) {
            rec.snapshots.push_back({step, phi, inverse_weyl(phi, ResidualFrame::from(s, params))});
        }
    };
    record_residual(0);
    detail::for_each_step(1, plan.freeze_at_step, [&](std::size_t step) {
        const auto next = detail::advance_classical(s, cfg).end;
        phi = cn_step_residual(phi, s.point, next.point, pot, dt, params, cfg.boundary);
        s = next;
        record_residual(step);
    });

    // Phase 2: standard solver on the lab grid.
    const double t_freeze = s.time;
    auto psi = inverse_weyl(phi, ResidualFrame::from(s, params), lab, OutOfRange::zero_fill);
    const auto h_lab = schroedinger_operator(lab, pot, params, cfg.boundary);
    const double scale = dt / (2.0 * params.hbar);
    const PhaseSpacePoint frozen{0.0, 0.0};
    detail::for_each_step(plan.freeze_at_step + 1, plan.split_at_step, [&](std::size_t step) {
        psi = WaveFunction(lab, detail::crank_nicolson(psi.values(), h_lab, h_lab, scale, cfg.boundary));
        if (step == plan.split_at_step) return;
        const double t = t_freeze + static_cast<double>(step - plan.freeze_at_step) * dt;
        rec.series.push_back(detail::lab_sample(psi, t, frozen, h_lab, cfg));
        if (detail::snapshot_due(cfg, step)) rec.snapshots.push_back({step, psi, std::nullopt});
    });

    // Phase 3: partition and restart one residual run per branch.
    const double t_split = t_freeze + static_cast<double>(plan.split_at_step - plan.freeze_at_step) * dt;
    SplitSummary summary;
    summary.step = plan.split_at_step;
    summary.norm_before = norm(psi);
    const double total2 = summary.norm_before * summary.norm_before;
    const double dx = lab.dx();
    const auto half = static_cast<std::size_t>(std::llround(plan.branch_half_width / dx));
    if (half < 1) throw ValidationError("split_plan.branch_half_width", "smaller than the lab grid spacing");

    std::vector<detail::Branch> branches;
    for (int side = 0; side < 2; ++side) {
        std::vector<cplx> part(psi.values().begin(), psi.values().end());
        for (std::size_t i = 0; i < part.size(); ++i) {
            const bool left = lab.x(i) < plan.split_position;
            if (left != (side == 0)) part[i] = 0.0;
        }
        const WaveFunction piece(lab, std::move(part));
        const double n2 = norm(piece) * norm(piece);
        if (!(n2 >= 1e-6 * total2)) throw StepFailure(plan.split_at_step, "degenerate split");

        const double q_mean = expectation_position(piece);
        const double p_mean = expectation_momentum(piece, params);
        const double node = std::round((q_mean - lab.x_min()) / dx);
        const double q_snap = lab.x_min() + node * dx;
        const GridSpec branch_grid(-static_cast<double>(half) * dx, static_cast<double>(half) * dx, 2 * half + 1);
        const TrajectoryState seed{{q_snap, p_mean}, t_split, 0.0};
        branches.push_back(
            {seed, forward_weyl(piece, ResidualFrame::from(seed, params), branch_grid, OutOfRange::zero_fill)});
    }

    auto record_branches = [&](std::size_t step) {
        double n2_sum = 0.0;
        RunSample combined{branches[0].s.time};
        for (std::size_t b = 0; b < branches.size(); ++b) {
            const auto sample = detail::residual_sample(branches[b].phi, branches[b].s, cfg);
            summary.branches[b].push_back(sample);
            const double w = sample.norm * sample.norm;
            n2_sum += w;
            combined.q_cl += w * sample.q_cl;
            combined.p_cl += w * sample.p_cl;
            combined.q_exp += w * sample.q_exp;
            combined.p_exp += w * sample.p_exp;
            combined.energy += w * sample.energy;
        }
        combined.q_cl /= n2_sum;
        combined.p_cl /= n2_sum;
        combined.q_exp /= n2_sum;
        combined.p_exp /= n2_sum;
        combined.energy /= n2_sum;
        combined.norm = std::sqrt(n2_sum);
        rec.series.push_back(combined);
        if (detail::snapshot_due(cfg, step)) {
            std::vector<cplx> sum(lab.size());
            for (const auto& br : branches) {
                const auto part = inverse_weyl(br.phi, ResidualFrame::from(br.s, params), lab, OutOfRange::zero_fill);
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
            }
            rec.snapshots.push_back({step, WaveFunction(lab, std::move(sum)), std::nullopt});
        }
        return combined.norm;
    };
    summary.norm_after = record_branches(plan.split_at_step);
    detail::for_each_step(plan.split_at_step + 1, cfg.n_steps, [&](std::size_t step) {
        for (auto& br : branches) {
            const auto next = detail::advance_classical(br.s, cfg).end;
            br.phi = cn_step_residual(br.phi, br.s.point, next.point, pot, dt, params, cfg.boundary);
            br.s = next;
        }
        record_branches(step);
    });
    rec.split = std::move(summary);
    return rec;
}

/**
 * Run the configured method; scenarios with a split_plan go through
 * run_split_scenario. The record is written to cfg.output_dir when set.
 */
inline RunRecord run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    RunRecord rec = [&] {
        if (cfg.split_plan) return run_split_scenario(cfg);
        switch (cfg.method) {
            case Method::schroedinger: return detail::run_schroedinger(cfg);
            case Method::residual: return detail::run_residual(cfg);
            case Method::residual_general: return detail::run_residual_general(cfg);
            case Method::gwpt: return detail::run_gwpt(cfg);
        }
        throw ValidationError("method", "unsupported");
    }();
    if (!cfg.output_dir.empty()) write_outputs(rec, cfg);
    return rec;
}

}  // namespace resiqm
