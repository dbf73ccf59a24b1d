#pragma once

#include <string>

#include "cascade/propagate.hpp"
#include "cascade/sweep.hpp"
#include "cascade/wigner.hpp"

namespace cascade {

// 17 significant digits: round-trips every double exactly, so emitted series
// can be hash-compared across runs.
std::string format_double(double v);

// Header `t_s,<labels>`, one row per sample.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Same series plus step statistics as JSON.
void write_trajectory_json(const Trajectory& traj, const std::string& path);

void write_table_csv(const SweepTable& table, const std::string& path);

// Columns re_beta,im_beta,w.
void write_wigner_csv(const WignerResult& w, const std::string& path);

void write_text_file(const std::string& content, const std::string& path);

} // namespace cascade
