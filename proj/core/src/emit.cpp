#include "cascade/emit.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace cascade {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

void close_or_throw(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    out << "t_s";
    for (const auto& label : traj.labels) out << ',' << label;
    out << '\n';
    for (size_t i = 0; i < traj.times.size(); ++i) {
        out << format_double(traj.times[i]);
        for (double v : traj.rows[i]) out << ',' << format_double(v);
        out << '\n';
    }
    close_or_throw(out, path);
}

void write_trajectory_json(const Trajectory& traj, const std::string& path) {
    nlohmann::json j;
    j["times_s"] = traj.times;
    nlohmann::json series;
    for (size_t k = 0; k < traj.labels.size(); ++k) {
        std::vector<double> column;
        column.reserve(traj.rows.size());
        for (const auto& row : traj.rows) column.push_back(row[k]);
        series[traj.labels[k]] = column;
    }
    j["series"] = series;
    j["steps"] = {{"accepted", traj.n_accepted},
                  {"rejected", traj.n_rejected},
                  {"rhs_evaluations", traj.n_rhs}};
    j["stopped_early"] = traj.stopped_early;
    std::ofstream out = open_or_throw(path);
    out << j.dump(2) << '\n';
    close_or_throw(out, path);
}

void write_table_csv(const SweepTable& table, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    for (size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
    close_or_throw(out, path);
}

void write_wigner_csv(const WignerResult& w, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    out << "re_beta,im_beta,w\n";
    for (size_t i = 0; i < w.beta.size(); ++i) {
        out << format_double(w.beta[i].real()) << ',' << format_double(w.beta[i].imag()) << ','
            << format_double(w.w[i]) << '\n';
    }
    close_or_throw(out, path);
}

void write_text_file(const std::string& content, const std::string& path) {
    std::ofstream out = open_or_throw(path);
    out << content;
    close_or_throw(out, path);
}

} // namespace cascade
