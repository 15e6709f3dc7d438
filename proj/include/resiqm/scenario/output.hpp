#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resiqm/core.hpp"
#include "resiqm/scenario/config.hpp"
#include "resiqm/scenario/record.hpp"

#ifndef RESIQM_VERSION
#define RESIQM_VERSION "unknown"
#endif

namespace resiqm {

inline constexpr const char* version_string = RESIQM_VERSION;

inline const char* series_header = "t,q_cl,p_cl,q_exp,p_exp,norm,energy";
inline const char* snapshot_header = "x,re,im";

/// %.17g formatting; enough digits for an exact double round trip.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Zero-padded five-digit step index used for snapshot file names.
inline std::string snapshot_name(std::size_t step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05zu.csv", step);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

inline void close_output(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out) throw Error("write failed for " + path.string());
}

inline void make_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace detail

inline void write_snapshot(const WaveFunction& f, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    out << snapshot_header << '\n';
    const auto& g = f.grid();
    for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_number(g.x(i)) << ',' << format_number(f[i].real()) << ',' << format_number(f[i].imag())
            << '\n';
    }
    detail::close_output(out, path);
}

inline void write_series(const std::vector<RunSample>& series, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    out << series_header << '\n';
    for (const auto& r : series) {
        out << format_number(r.t) << ',' << format_number(r.q_cl) << ',' << format_number(r.p_cl) << ','
            << format_number(r.q_exp) << ',' << format_number(r.p_exp) << ',' << format_number(r.norm) << ','
            << format_number(r.energy) << '\n';
    }
    detail::close_output(out, path);
}

/// Read a snapshot CSV back; the grid is rebuilt from the first and last x.
inline WaveFunction read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != snapshot_header) throw Error(path.string() + ": bad header");
    std::vector<double> xs;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) {
            throw Error(path.string() + ": malformed row " + std::to_string(xs.size() + 2));
        }
        try {
            xs.push_back(std::stod(a));
            values.emplace_back(std::stod(b), std::stod(c));
        } catch (const std::exception&) {
            throw Error(path.string() + ": malformed row " + std::to_string(xs.size() + 2));
        }
    }
    if (xs.size() < 3) throw Error(path.string() + ": fewer than 3 rows");
    return WaveFunction(GridSpec(xs.front(), xs.back(), xs.size()), std::move(values));
}

/**
 * Write manifest.json, series.csv, snapshots/NNNNN.csv and, for residual
 * frames, snapshots_psi/NNNNN.csv into cfg.output_dir. Split runs also get
 * branch_left.csv and branch_right.csv (same columns, from the split step on).
 */
inline void write_outputs(const RunRecord& rec, const ScenarioConfig& cfg)
{
    const std::filesystem::path dir(cfg.output_dir);
    detail::make_directory(dir);

    nlohmann::json manifest;
    manifest["version"] = version_string;
    manifest["config"] = to_json(cfg);
    manifest["steps_recorded"] = rec.series.size();
    auto steps = nlohmann::json::array();
    for (const auto& s : rec.snapshots) steps.push_back(s.step);
    manifest["snapshot_steps"] = steps;
    if (rec.split) manifest["split"] = {{"step", rec.split->step},
                                        {"norm_before", rec.split->norm_before},
                                        {"norm_after", rec.split->norm_after}};
    {
        const auto path = dir / "manifest.json";
        auto out = detail::open_output(path);
        out << manifest.dump(2) << '\n';
        detail::close_output(out, path);
    }
    write_series(rec.series, dir / "series.csv");
    if (rec.split) {
        write_series(rec.split->branches[0], dir / "branch_left.csv");
        write_series(rec.split->branches[1], dir / "branch_right.csv");
    }
    if (rec.snapshots.empty()) return;
    detail::make_directory(dir / "snapshots");
    for (const auto& s : rec.snapshots) {
        write_snapshot(s.phi, dir / "snapshots" / snapshot_name(s.step));
        if (s.psi) {
            detail::make_directory(dir / "snapshots_psi");
            write_snapshot(*s.psi, dir / "snapshots_psi" / snapshot_name(s.step));
        }
    }
}

}  // namespace resiqm
