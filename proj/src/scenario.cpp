// SPDX-License-Identifier: Apache-2.0
#include "uavopt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace uavopt {

namespace {

using nlohmann::json;

void require_positive(double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0)) {
        std::ostringstream os;
        os << "scenario field '" << field << "' must be a positive finite number, got " << v;
        throw ValidationError(os.str());
    }
}

void require_nonnegative(double v, const char* field) {
    if (!(std::isfinite(v) && v >= 0.0)) {
        std::ostringstream os;
        os << "scenario field '" << field << "' must be a nonnegative finite number, got " << v;
        throw ValidationError(os.str());
    }
}

std::pair<int, int> line_col_of(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

double as_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("field '" + key + "' must be a number");
    return j.get<double>();
}

int as_int(const json& j, const std::string& key) {
    if (!j.is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
    return j.get<int>();
}

bool as_bool(const json& j, const std::string& key) {
    if (!j.is_boolean()) throw ConfigError("field '" + key + "' must be a boolean");
    return j.get<bool>();
}

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be an object");

    static const char* known[] = {
        "users",          "altitude_m",      "bandwidth_hz",   "slot_s",
        "num_slots",      "v_max_mps",       "p_max_w",        "noise_psd_dbm_hz",
        "noise_psd_w_hz", "gamma0",          "rho1",           "rho2",
        "epsilon",        "eps_power",       "eps_outer",      "max_outer_iters",
        "max_admm_iters", "tol_admm",        "tol_feas",       "admm_z_uses_stale_q"};
    for (const auto& [key, _] : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config field '" + key + "'");
    }

    Scenario s;

    if (!doc.contains("users")) throw ConfigError("missing required field 'users'");
    const json& users = doc.at("users");
    if (!users.is_array() || users.empty())
        throw ConfigError("field 'users' must be a non-empty list of [x, y] pairs");
    for (std::size_t k = 0; k < users.size(); ++k) {
        const json& u = users[k];
        if (!u.is_array() || u.size() != 2 || !u[0].is_number() || !u[1].is_number()) {
            throw ConfigError("field 'users[" + std::to_string(k) + "]' must be an [x, y] pair");
        }
        s.users.emplace_back(u[0].get<double>(), u[1].get<double>());
    }

    if (doc.contains("altitude_m")) s.altitude = as_number(doc["altitude_m"], "altitude_m");
    if (doc.contains("bandwidth_hz")) s.bandwidth = as_number(doc["bandwidth_hz"], "bandwidth_hz");
    if (doc.contains("slot_s")) s.slot_len = as_number(doc["slot_s"], "slot_s");
    if (doc.contains("num_slots")) s.num_slots = as_int(doc["num_slots"], "num_slots");
    if (doc.contains("v_max_mps")) s.v_max = as_number(doc["v_max_mps"], "v_max_mps");
    if (doc.contains("p_max_w")) s.p_max = as_number(doc["p_max_w"], "p_max_w");
    if (doc.contains("gamma0")) s.gamma0 = as_number(doc["gamma0"], "gamma0");

    if (doc.contains("noise_psd_w_hz") && doc.contains("noise_psd_dbm_hz")) {
        throw ConfigError("fields 'noise_psd_w_hz' and 'noise_psd_dbm_hz' are mutually exclusive");
    }
    if (doc.contains("noise_psd_w_hz")) {
        s.noise_psd = as_number(doc["noise_psd_w_hz"], "noise_psd_w_hz");
    } else if (doc.contains("noise_psd_dbm_hz")) {
        double dbm = as_number(doc["noise_psd_dbm_hz"], "noise_psd_dbm_hz");
        s.noise_psd = std::pow(10.0, dbm / 10.0) * 1e-3;  // dBm/Hz -> W/Hz
    }

    if (doc.contains("rho1")) s.rho1 = as_number(doc["rho1"], "rho1");
    if (doc.contains("rho2")) s.rho2 = as_number(doc["rho2"], "rho2");

    // 'epsilon' seeds both thresholds; the specific keys take precedence.
    if (doc.contains("epsilon")) {
        double eps = as_number(doc["epsilon"], "epsilon");
        s.eps_power = eps;
        s.eps_outer = eps;
    }
    if (doc.contains("eps_power")) s.eps_power = as_number(doc["eps_power"], "eps_power");
    if (doc.contains("eps_outer")) s.eps_outer = as_number(doc["eps_outer"], "eps_outer");

    if (doc.contains("max_outer_iters")) s.max_outer_iters = as_int(doc["max_outer_iters"], "max_outer_iters");
    if (doc.contains("max_admm_iters")) s.max_admm_iters = as_int(doc["max_admm_iters"], "max_admm_iters");
    if (doc.contains("tol_admm")) s.tol_admm = as_number(doc["tol_admm"], "tol_admm");
    if (doc.contains("tol_feas")) s.tol_feas = as_number(doc["tol_feas"], "tol_feas");
    if (doc.contains("admm_z_uses_stale_q"))
        s.admm_z_uses_stale_q = as_bool(doc["admm_z_uses_stale_q"], "admm_z_uses_stale_q");

    validate(s);
    return s;
}

json override_value(const std::string& key, const std::string& value) {
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded() || !(v.is_number() || v.is_boolean())) {
        throw ConfigError("override '" + key + "=" + value + "' is not a number or boolean");
    }
    return v;
}

}  // namespace

void validate(const Scenario& s) {
    if (s.users.empty()) throw ValidationError("scenario field 'users' must list at least one user");
    for (std::size_t k = 0; k < s.users.size(); ++k) {
        if (!s.users[k].allFinite()) {
            throw ValidationError("scenario field 'users[" + std::to_string(k) + "]' is not finite");
        }
    }
    if (s.num_slots < 2) {
        throw ValidationError("scenario field 'num_slots' must be >= 2 (cyclic trajectory), got " +
                              std::to_string(s.num_slots));
    }
    require_positive(s.altitude, "altitude_m");
    require_positive(s.bandwidth, "bandwidth_hz");
    require_positive(s.slot_len, "slot_s");
    require_positive(s.v_max, "v_max_mps");
    require_positive(s.p_max, "p_max_w");
    require_positive(s.noise_psd, "noise_psd_w_hz");
    require_positive(s.gamma0, "gamma0");
    require_positive(s.rho1, "rho1");
    require_positive(s.rho2, "rho2");
    require_positive(s.eps_power, "eps_power");
    require_positive(s.eps_outer, "eps_outer");
    require_nonnegative(s.tol_admm, "tol_admm");
    require_nonnegative(s.tol_feas, "tol_feas");
    if (s.max_outer_iters < 1) throw ValidationError("scenario field 'max_outer_iters' must be >= 1");
    if (s.max_admm_iters < 1) throw ValidationError("scenario field 'max_admm_iters' must be >= 1");
}

void validate(const Scenario& s, const Trajectory& q, double tol) {
    if (q.num_points() != s.num_slots) {
        throw ValidationError("trajectory has " + std::to_string(q.num_points()) +
                              " waypoints, scenario expects " + std::to_string(s.num_slots));
    }
    if (!q.pts.allFinite()) throw ValidationError("trajectory contains non-finite coordinates");
    const double limit = s.s_max() * (1.0 + tol);
    for (int n = 0; n < q.num_points(); ++n) {
        double len = q.hop(n).norm();
        if (len > limit) {
            std::ostringstream os;
            os << "trajectory hop " << n << " has length " << len << " m, exceeding s_max "
               << s.s_max() << " m";
            throw ValidationError(os.str());
        }
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

Scenario parse_scenario_text(const std::string& json_text, const std::string& origin,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col_of(json_text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": " << e.what();
        throw ConfigError(os.str());
    }
    try {
        for (const auto& [key, value] : overrides) {
            if (key == "users") throw ConfigError("override of 'users' is not supported");
            doc[key] = override_value(key, value);
        }
        return scenario_from_json(doc);
    } catch (const Error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

std::string scenario_to_json_text(const Scenario& s) {
    json users = json::array();
    for (const auto& w : s.users) users.push_back({w.x(), w.y()});
    json doc = {
        {"users", users},
        {"altitude_m", s.altitude},
        {"bandwidth_hz", s.bandwidth},
        {"slot_s", s.slot_len},
        {"num_slots", s.num_slots},
        {"v_max_mps", s.v_max},
        {"p_max_w", s.p_max},
        {"noise_psd_w_hz", s.noise_psd},
        {"gamma0", s.gamma0},
        {"rho1", s.rho1},
        {"rho2", s.rho2},
        {"eps_power", s.eps_power},
        {"eps_outer", s.eps_outer},
        {"max_outer_iters", s.max_outer_iters},
        {"max_admm_iters", s.max_admm_iters},
        {"tol_admm", s.tol_admm},
        {"tol_feas", s.tol_feas},
        {"admm_z_uses_stale_q", s.admm_z_uses_stale_q},
    };
    return doc.dump(2);
}

GainMatrix channel_gains(const Scenario& s, const Trajectory& q) {
    const int K = s.num_users();
    const int N = s.num_slots;
    if (q.num_points() != N) {
        throw ValidationError("channel_gains: trajectory has " + std::to_string(q.num_points()) +
                              " waypoints, expected " + std::to_string(N));
    }
    const double h2 = s.altitude * s.altitude;
    const double gt = s.gamma_tilde();
    GainMatrix h(K, N);
    for (int k = 0; k < K; ++k) {
        for (int n = 0; n < N; ++n) {
            h(k, n) = gt / (h2 + (q.pts.col(n) - s.users[k]).squaredNorm());
        }
    }
    return h;
}

RateMatrix rates(const Scenario& s, const BetaAllocation& beta) {
    const double scale = s.bandwidth / (static_cast<double>(s.num_users()) * M_LN2);
    return scale * beta.array().log1p().matrix();
}

double min_avg_throughput(const Scenario& s, const BetaAllocation& beta) {
    RateMatrix r = rates(s, beta);
    return r.rowwise().sum().minCoeff() / static_cast<double>(s.num_slots);
}

double power_used(const BetaAllocation& beta, const GainMatrix& h) {
    return (beta.array() / h.array()).sum();
}

}  // namespace uavopt
