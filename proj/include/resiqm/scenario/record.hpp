#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "resiqm/core.hpp"

namespace resiqm {

/// One row of series.csv.
struct RunSample {
    double t = 0.0;
    double q_cl = 0.0;
    double p_cl = 0.0;
    double q_exp = 0.0;
    double p_exp = 0.0;
    double norm = 0.0;
    double energy = 0.0;
};

/// Stored state at a snapshot step. psi is set when phi lives in a residual frame.
struct Snapshot {
    std::size_t step;
    WaveFunction phi;
    std::optional<WaveFunction> psi;
};

/// Bookkeeping of the split in run_split_scenario.
struct SplitSummary {
    std::size_t step = 0;
    /// |psi| on the lab grid just before partitioning.
    double norm_before = 0.0;
    /// Quadrature sum of the branch norms right after partitioning.
    double norm_after = 0.0;
    /// One series per branch (left, right), starting at the split step.
    std::array<std::vector<RunSample>, 2> branches;
};

struct RunRecord {
    std::vector<RunSample> series;
    std::vector<Snapshot> snapshots;
    std::optional<SplitSummary> split;
};

}  // namespace resiqm
