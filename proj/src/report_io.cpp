// SPDX-License-Identifier: Apache-2.0
#include "uavopt/report_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace uavopt {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string report_to_json_text(const SolveReport& rep, const Scenario& s,
                                const std::string& command) {
    json admm = json::array();
    for (const auto& tr : rep.admm_traces) {
        admm.push_back({{"iters", tr.iters},
                        {"converged", tr.converged},
                        {"final_primal", tr.primal.empty() ? 0.0 : tr.primal.back()},
                        {"final_dual", tr.dual.empty() ? 0.0 : tr.dual.back()}});
    }
    json traj = json::array();
    for (int n = 0; n < rep.final_trajectory.num_points(); ++n) {
        traj.push_back({rep.final_trajectory.pts(0, n), rep.final_trajectory.pts(1, n)});
    }
    json doc = {
        {"schema", "uavopt-report-v1"},
        {"command", command},
        {"config", json::parse(scenario_to_json_text(s))},
        {"termination", to_string(rep.termination)},
        {"outer_iterations", rep.outer_iterations},
        {"tau_bps", rep.final_tau},
        {"tau_trace_bps", rep.tau_trace},
        {"power_trace_w", rep.power_trace},
        {"admm", std::move(admm)},
        {"wall_clock_s",
         {{"subp1", rep.wall_clock.subp1_s},
          {"subp2", rep.wall_clock.subp2_s},
          {"total", rep.wall_clock.total_s}}},
        {"trajectory_m", std::move(traj)},
        {"beta", matrix_to_json(rep.final_beta)},
        {"power_w", matrix_to_json(rep.final_power)},
    };
    // Residual history only for the last outer iteration, downsampled to a
    // plot-friendly size; the rest is summarized above and in convergence.csv.
    if (!rep.admm_traces.empty() && !rep.admm_traces.back().primal.empty()) {
        const auto& last = rep.admm_traces.back();
        const std::size_t count = last.primal.size();
        const std::size_t stride = std::max<std::size_t>(1, count / 512);
        json primal = json::array(), dual = json::array(), iter = json::array();
        for (std::size_t i = 0; i < count; i += stride) {
            iter.push_back(i + 1);
            primal.push_back(last.primal[i]);
            dual.push_back(last.dual[i]);
        }
        if ((count - 1) % stride != 0) {
            iter.push_back(count);
            primal.push_back(last.primal.back());
            dual.push_back(last.dual.back());
        }
        doc["admm_last_trace"] = {
            {"iter", std::move(iter)}, {"primal", std::move(primal)}, {"dual", std::move(dual)}};
    }
    if (!rep.error_message.empty()) doc["error"] = rep.error_message;
    return doc.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& q) {
    std::ostringstream os;
    os << "# columns: slot (1-based), x_m (meters), y_m (meters); row order is flight order\n";
    os << "slot,x_m,y_m\n";
    for (int n = 0; n < q.num_points(); ++n) {
        os << (n + 1) << ',' << format_double(q.pts(0, n)) << ',' << format_double(q.pts(1, n))
           << '\n';
    }
    return os.str();
}

std::string rates_csv(const Scenario& s, const SolveReport& rep) {
    std::ostringstream os;
    os << "# columns: slot (1-based), user (1-based), rate_bps (bits/s), power_w (Watts)\n";
    os << "slot,user,rate_bps,power_w\n";
    RateMatrix r = rates(s, rep.final_beta);
    for (int n = 0; n < static_cast<int>(r.cols()); ++n) {
        for (int k = 0; k < static_cast<int>(r.rows()); ++k) {
            os << (n + 1) << ',' << (k + 1) << ',' << format_double(r(k, n)) << ','
               << format_double(rep.final_power(k, n)) << '\n';
        }
    }
    return os.str();
}

std::string convergence_csv(const SolveReport& rep) {
    std::ostringstream os;
    os << "# columns: outer_iter (1-based), tau_bps (bits/s), power_w (Watts), "
          "admm_iters (count), admm_final_residual (meters)\n";
    os << "outer_iter,tau_bps,power_w,admm_iters,admm_final_residual\n";
    for (int i = 0; i < rep.outer_iterations; ++i) {
        double residual = 0.0;
        int iters = 0;
        if (i < static_cast<int>(rep.admm_traces.size())) {
            const auto& tr = rep.admm_traces[i];
            iters = tr.iters;
            if (!tr.primal.empty()) residual = std::max(tr.primal.back(), tr.dual.back());
        }
        os << (i + 1) << ',' << format_double(rep.tau_trace[i]) << ','
           << format_double(rep.power_trace[i]) << ',' << iters << ',' << format_double(residual)
           << '\n';
    }
    return os.str();
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!header_done) {
            table.columns = std::move(cells);
            header_done = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw Error("parse_csv: bad numeric cell '" + cell + "'");
            }
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("failed writing file: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace uavopt
