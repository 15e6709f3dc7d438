#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "resiqm/resiqm.hpp"

using namespace resiqm;
namespace fs = std::filesystem;

namespace {

const char* harmonic_json = R"({
  "params": {"hbar": 0.001},
  "potential": {"type": "harmonic"},
  "grid": {"x_min": -0.2, "x_max": 0.2, "n_points": 257},
  "method": "residual",
  "dt_quantum": 0.006283185307179587,
  "substeps_classical": 10,
  "n_steps": 10,
  "snapshot_every": 5,
  "trajectory": {"q0": 0.6, "p0": 0.0},
  "initial": {"type": "gaussian", "center": 0.6}
})";

nlohmann::json harmonic_doc() { return nlohmann::json::parse(harmonic_json); }

ScenarioConfig load(const nlohmann::json& j) { return load_config(j.dump()); }

std::string error_of(const nlohmann::json& j)
{
    try {
        load(j);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("resiqm_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST(Config, DefaultsAreFilledIn)
{
    const auto cfg = load_config(harmonic_json);
    EXPECT_EQ(cfg.params.mass, 1.0);
    EXPECT_EQ(cfg.boundary, BoundaryCondition::dirichlet_zero);
    EXPECT_EQ(cfg.kappa_boundary, BoundaryCondition::neumann);
    EXPECT_EQ(cfg.output_dir, "");
    EXPECT_FALSE(cfg.trajectory.frozen);
    EXPECT_FALSE(cfg.split_plan.has_value());
    EXPECT_DOUBLE_EQ(cfg.dt_classical(), 0.006283185307179587 / 10.0);
}

TEST(Config, DtClassicalMustDivideDtQuantum)
{
    auto j = harmonic_doc();
    j.erase("substeps_classical");
    j["dt_classical"] = 0.006283185307179587 / 2.5;
    EXPECT_NE(error_of(j).find("dt_classical"), std::string::npos);
    j["dt_classical"] = 0.006283185307179587 / 4.0;
    EXPECT_EQ(load(j).substeps_classical, 4u);
}

TEST(Config, FractionalSubstepsRejected)
{
    auto j = harmonic_doc();
    j["substeps_classical"] = 2.5;
    EXPECT_NE(error_of(j).find("substeps_classical"), std::string::npos);
}

TEST(Config, UnknownPotentialTagIsNamed)
{
    auto j = harmonic_doc();
    j["potential"] = {{"type", "sextic"}};
    EXPECT_NE(error_of(j).find("'sextic'"), std::string::npos);
}

TEST(Config, UnknownKeyReportsPath)
{
    auto j = harmonic_doc();
    j["grid"]["spacing"] = 0.1;
    const auto msg = error_of(j);
    EXPECT_NE(msg.find("grid.spacing"), std::string::npos) << msg;
}

TEST(Config, FrozenOnlyWithGeneralResidual)
{
    auto j = harmonic_doc();
    j["trajectory"]["frozen"] = true;
    EXPECT_NE(error_of(j), "");
    j["method"] = "residual_general";
    EXPECT_NO_THROW(load(j));
    j["trajectory"]["frozen"] = false;
    EXPECT_NE(error_of(j), "");
}

TEST(Config, GridValidated)
{
    auto j = harmonic_doc();
    j["grid"]["n_points"] = 2;
    EXPECT_NE(error_of(j).find("grid.n_points"), std::string::npos);
    j = harmonic_doc();
    j["grid"]["x_max"] = -0.3;
    EXPECT_NE(error_of(j).find("grid.x_max"), std::string::npos);
}

TEST(Config, MalformedJson) { EXPECT_THROW(load_config("{\"params\": "), ValidationError); }

TEST(Config, JsonEchoRoundTrips)
{
    auto j = harmonic_doc();
    j["potential"] = {{"type", "barrier_harmonic"}, {"a", 0.3}, {"b", 0.002}};
    j["n_steps"] = 20;
    j["split_plan"] = {{"freeze_at_step", 5}, {"split_at_step", 10}, {"split_position", 0.1}};
    const auto a = load(j);
    const auto echo = to_json(a);
    const auto b = load(echo);
    EXPECT_EQ(to_json(b), echo);
    EXPECT_EQ(b.potential.tag(), "barrier_harmonic");
    ASSERT_TRUE(b.split_plan.has_value());
    EXPECT_EQ(b.split_plan->split_position, 0.1);
}

TEST(Run, ZeroStepsRecordsInitialState)
{
    auto j = harmonic_doc();
    j["n_steps"] = 0;
    const auto rec = run_scenario(load(j));
    ASSERT_EQ(rec.series.size(), 1u);
    EXPECT_EQ(rec.series[0].t, 0.0);
    EXPECT_NEAR(rec.series[0].q_exp, 0.6, 1e-9);
    ASSERT_EQ(rec.snapshots.size(), 1u);
    EXPECT_EQ(rec.snapshots[0].step, 0u);
}

TEST(Run, WritesExpectedFiles)
{
    const auto dir = scratch("files");
    auto cfg = load_config(harmonic_json);
    cfg.output_dir = dir.string();
    const auto rec = run_scenario(cfg);
    ASSERT_EQ(rec.series.size(), cfg.n_steps + 1);

    for (const char* name : {"00000.csv", "00005.csv", "00010.csv"}) {
        EXPECT_TRUE(fs::exists(dir / "snapshots" / name)) << name;
    }
    EXPECT_FALSE(fs::exists(dir / "snapshots" / "00003.csv"));
    EXPECT_TRUE(fs::exists(dir / "snapshots_psi" / "00010.csv"));

    std::ifstream series(dir / "series.csv");
    std::string line;
    std::getline(series, line);
    EXPECT_EQ(line, series_header);
    std::size_t rows = 0;
    while (std::getline(series, line)) ++rows;
    EXPECT_EQ(rows, cfg.n_steps + 1);

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["version"], version_string);
    EXPECT_EQ(manifest["config"], to_json(cfg));
    EXPECT_EQ(manifest["snapshot_steps"], nlohmann::json::array({0, 5, 10}));
    fs::remove_all(dir);
}

TEST(Run, SnapshotRoundTripIsBitExact)
{
    const auto dir = scratch("snap");
    auto cfg = load_config(harmonic_json);
    cfg.output_dir = dir.string();
    const auto rec = run_scenario(cfg);
    const auto& last = rec.snapshots.back().phi;
    const auto back = read_snapshot(dir / "snapshots" / "00010.csv");
    ASSERT_EQ(back.size(), last.size());
    EXPECT_EQ(back.grid().x_min(), last.grid().x_min());
    EXPECT_EQ(back.grid().x_max(), last.grid().x_max());
    for (std::size_t i = 0; i < last.size(); ++i) EXPECT_EQ(back[i], last[i]);
    fs::remove_all(dir);
}

TEST(Run, SeriesIsDeterministic)
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto cfg = load_config(harmonic_json);
    cfg.output_dir = a.string();
    run_scenario(cfg);
    cfg.output_dir = b.string();
    run_scenario(cfg);
    EXPECT_EQ(slurp(a / "series.csv"), slurp(b / "series.csv"));
    EXPECT_EQ(slurp(a / "snapshots" / "00005.csv"), slurp(b / "snapshots" / "00005.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Run, NumbersUseSeventeenDigits)
{
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(snapshot_name(42), "00042.csv");
}

TEST(Run, DegenerateSplitIsReported)
{
    auto j = harmonic_doc();
    j["potential"] = {{"type", "barrier_harmonic"}, {"a", 0.25}, {"b", 0.001}};
    j["trajectory"] = {{"q0", -0.7}, {"p0", 0.0}};
    j["initial"] = {{"type", "gaussian"}, {"center", -0.7}};
    j["n_steps"] = 4;
    j["snapshot_every"] = 0;
    j["split_plan"] = {{"freeze_at_step", 1},
                       {"split_at_step", 2},
                       {"split_position", -1.1},
                       {"lab_grid", {{"x_min", -1.2}, {"x_max", 1.2}, {"n_points", 801}}}};
    try {
        run_scenario(load(j));
        FAIL() << "expected StepFailure";
    } catch (const StepFailure& e) {
        EXPECT_EQ(e.step(), 2u);
        EXPECT_NE(std::string(e.what()).find("degenerate split"), std::string::npos);
    }
}

TEST(Reference, CoherentStateQuarterPeriod)
{
    const SimulationParams params{0.001, 1.0};
    const GridSpec g(-0.3, 0.3, 60001);
    const auto psi = coherent_state_reference(pi / 2.0, 0.6, 0.0, params, g);
    EXPECT_NEAR(expectation_position(psi), 0.0, 1e-9);
    EXPECT_NEAR(expectation_momentum(psi, params), -0.6, 1e-5);
}

TEST(Reference, CoherentStateFullPeriodModulus)
{
    const SimulationParams params{0.001, 1.0};
    const GridSpec g(0.3, 0.9, 601);
    const auto a = coherent_state_reference(0.0, 0.6, 0.0, params, g);
    const auto b = coherent_state_reference(2.0 * pi, 0.6, 0.0, params, g);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(b[i]), std::abs(a[i]), 1e-12);
    // a full period contributes only the zero-point phase e^{-i pi}
    EXPECT_NEAR(std::abs(b[300] + a[300]), 0.0, 1e-9);
}

TEST(Run, EnergyVariationIsSmall)
{
    for (const char* pot : {"harmonic", "quartic"}) {
        auto j = harmonic_doc();
        j["potential"] = {{"type", pot}};
        j["trajectory"] = {{"q0", 0.0}, {"p0", 0.6}};
        j["initial"] = {{"type", "gaussian"}, {"center", 0.0}, {"momentum", 0.6}};
        j["n_steps"] = 200;
        j["substeps_classical"] = 100;
        j["snapshot_every"] = 0;
        const auto rec = run_scenario(load(j));
        double lo = rec.series[0].energy, hi = lo;
        for (const auto& s : rec.series) {
            lo = std::min(lo, s.energy);
            hi = std::max(hi, s.energy);
        }
        EXPECT_LE((hi - lo) / std::abs(rec.series[0].energy), 0.01) << pot;
    }
}
