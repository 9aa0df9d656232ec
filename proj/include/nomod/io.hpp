#ifndef NOMOD_IO_HPP
#define NOMOD_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nomod/instances.hpp"
#include "nomod/pipeline.hpp"
#include "nomod/reduction.hpp"

namespace nomod {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Spec enums <-> strings
// ---------------------------------------------------------------------------

inline std::string to_string(SecretFamily f) {
    switch (f) {
        case SecretFamily::BinaryBernoulli: return "binary_bernoulli";
        case SecretFamily::BinaryFixedHW: return "binary_fixed_hw";
        case SecretFamily::TernaryBalanced: return "ternary_balanced";
        case SecretFamily::TernaryFixedHW: return "ternary_fixed_hw";
        case SecretFamily::Cbd: return "cbd";
        case SecretFamily::CbdFixedHW: return "cbd_fixed_hw";
    }
    return "?";
}

inline SecretFamily secret_family_from_string(const std::string& s) {
    if (s == "binary_bernoulli") return SecretFamily::BinaryBernoulli;
    if (s == "binary_fixed_hw") return SecretFamily::BinaryFixedHW;
    if (s == "ternary_balanced") return SecretFamily::TernaryBalanced;
    if (s == "ternary_fixed_hw") return SecretFamily::TernaryFixedHW;
    if (s == "cbd") return SecretFamily::Cbd;
    if (s == "cbd_fixed_hw") return SecretFamily::CbdFixedHW;
    throw std::invalid_argument("unknown secret family: " + s);
}

inline json to_json(const SecretSpec& s) {
    return {{"family", to_string(s.family)}, {"n", s.n_total}, {"p", s.p},
            {"h", s.h},                      {"eta", s.eta}};
}

inline SecretSpec secret_spec_from_json(const json& j) {
    SecretSpec s;
    s.family = secret_family_from_string(j.at("family").get<std::string>());
    s.n_total = j.at("n").get<int>();
    s.p = j.value("p", 0.5);
    s.h = j.value("h", 0);
    s.eta = j.value("eta", 0);
    return s;
}

inline json to_json(const ErrorSpec& e) {
    return {{"family", e.family == ErrorFamily::Gaussian ? "gaussian" : "cbd"},
            {"sigma", e.sigma},
            {"eta", e.eta}};
}

inline ErrorSpec error_spec_from_json(const json& j) {
    ErrorSpec e;
    std::string f = j.at("family").get<std::string>();
    if (f == "gaussian")
        e.family = ErrorFamily::Gaussian;
    else if (f == "cbd")
        e.family = ErrorFamily::Cbd;
    else
        throw std::invalid_argument("unknown error family: " + f);
    e.sigma = j.value("sigma", 3.0);
    e.eta = j.value("eta", 2);
    return e;
}

// ---------------------------------------------------------------------------
// Instance document {n, m, q, A, b, secret_spec, error_spec, truth?}
// ---------------------------------------------------------------------------

inline json to_json(const LweInstance& inst) {
    json a = json::array();
    for (const Vec& row : inst.A)
        for (i64 x : row) a.push_back(x);  // row-major
    json j = {{"n", inst.n()},         {"m", inst.m()},
              {"q", inst.q},           {"A", std::move(a)},
              {"b", inst.b},           {"secret_spec", to_json(inst.secret_spec)},
              {"error_spec", to_json(inst.error_spec)}};
    if (inst.truth) j["truth"] = {{"s", inst.truth->s}, {"e", inst.truth->e}};
    return j;
}

inline LweInstance lwe_from_json(const json& j) {
    LweInstance inst;
    int n = j.at("n").get<int>(), m = j.at("m").get<int>();
    inst.q = j.at("q").get<i64>();
    const json& a = j.at("A");
    if ((int)a.size() != n * m) throw std::invalid_argument("instance: A size mismatch");
    inst.A.assign(m, Vec(n));
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < n; ++c) inst.A[i][c] = a[(std::size_t)i * n + c].get<i64>();
    inst.b = j.at("b").get<Vec>();
    if ((int)inst.b.size() != m) throw std::invalid_argument("instance: b size mismatch");
    inst.secret_spec = secret_spec_from_json(j.at("secret_spec"));
    inst.error_spec = error_spec_from_json(j.at("error_spec"));
    if (j.contains("truth"))
        inst.truth = LweTruth{j["truth"].at("s").get<Vec>(), j["truth"].at("e").get<Vec>()};
    return inst;
}

// ---------------------------------------------------------------------------
// Pool document
// ---------------------------------------------------------------------------

inline json pool_to_json(const std::vector<PoolEntry>& entries, i64 omega, i64 q, int m,
                         int n) {
    json rows = json::array();
    for (const PoolEntry& e : entries)
        rows.push_back({{"vector", e.v},
                        {"priority", e.sigma},
                        {"source_matrix_id", e.source_matrix},
                        {"tour", e.tour}});
    return {{"omega", omega}, {"q", q}, {"m", m}, {"n", n}, {"rows", std::move(rows)}};
}

struct PoolFile {
    std::vector<PoolEntry> entries;
    i64 omega = 1;
    i64 q = 0;
    int m = 0;
    int n = 0;
};

inline PoolFile pool_from_json(const json& j) {
    PoolFile p;
    p.omega = j.at("omega").get<i64>();
    p.q = j.at("q").get<i64>();
    p.m = j.at("m").get<int>();
    p.n = j.at("n").get<int>();
    for (const json& r : j.at("rows")) {
        PoolEntry e;
        e.v = r.at("vector").get<Vec>();
        e.sigma = r.at("priority").get<double>();
        e.source_matrix = r.at("source_matrix_id").get<int>();
        e.tour = r.at("tour").get<int>();
        p.entries.push_back(std::move(e));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Samples CSV: sample_id, source_row, t, v0.., target
// ---------------------------------------------------------------------------

struct SampleRow {
    i64 sample_id = 0;
    i64 source_row = 0;
    i64 t = 0;
    Vec v;
    i64 target = 0;
};

inline void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
    if (rows.empty()) {
        os << "sample_id,source_row,t,target\n";
        return;
    }
    os << "sample_id,source_row,t";
    for (std::size_t c = 0; c < rows[0].v.size(); ++c) os << ",v" << c;
    os << ",target\n";
    for (const SampleRow& r : rows) {
        os << r.sample_id << ',' << r.source_row << ',' << r.t;
        for (i64 x : r.v) os << ',' << x;
        os << ',' << r.target << '\n';
    }
}

inline std::vector<SampleRow> read_samples_csv(std::istream& is) {
    std::vector<SampleRow> rows;
    std::string line;
    if (!std::getline(is, line)) return rows;  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<i64> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(std::stoll(cell));
        if (cells.size() < 4) throw std::invalid_argument("samples csv: short row");
        SampleRow r;
        r.sample_id = cells[0];
        r.source_row = cells[1];
        r.t = cells[2];
        r.v.assign(cells.begin() + 3, cells.end() - 1);
        r.target = cells.back();
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// PipelineConfig document
// ---------------------------------------------------------------------------

inline std::string to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::Lwe: return "lwe";
        case InstanceKind::Rlwe: return "rlwe";
        case InstanceKind::Mlwe: return "mlwe";
    }
    return "?";
}

inline InstanceKind kind_from_string(const std::string& s) {
    if (s == "lwe") return InstanceKind::Lwe;
    if (s == "rlwe") return InstanceKind::Rlwe;
    if (s == "mlwe") return InstanceKind::Mlwe;
    throw std::invalid_argument("unknown instance kind: " + s);
}

inline std::string to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::Ols: return "ols";
        case EstimatorKind::Huber: return "huber";
        case EstimatorKind::Ransac: return "ransac";
        case EstimatorKind::Tukey: return "tukey";
    }
    return "?";
}

inline EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "ols") return EstimatorKind::Ols;
    if (s == "huber") return EstimatorKind::Huber;
    if (s == "ransac") return EstimatorKind::Ransac;
    if (s == "tukey") return EstimatorKind::Tukey;
    throw std::invalid_argument("unknown estimator: " + s);
}

inline json to_json(const ReductionConfig& r) {
    return {{"delta_lll", r.delta_lll},
            {"delta_bkz", r.delta_bkz},
            {"block_start", r.block_start},
            {"block_cap", r.block_cap},
            {"block_increment", r.block_increment},
            {"stall_tours", r.stall_tours},
            {"pre_passes", r.pre_passes},
            {"tour_budget", r.tour_budget},
            {"enum_node_cap", r.enum_node_cap},
            {"pool_capacity", r.pool_capacity}};
}

inline ReductionConfig reduction_config_from_json(const json& j) {
    ReductionConfig r;
    r.delta_lll = j.value("delta_lll", r.delta_lll);
    r.delta_bkz = j.value("delta_bkz", r.delta_bkz);
    r.block_start = j.value("block_start", r.block_start);
    r.block_cap = j.value("block_cap", r.block_cap);
    r.block_increment = j.value("block_increment", r.block_increment);
    r.stall_tours = j.value("stall_tours", r.stall_tours);
    r.pre_passes = j.value("pre_passes", r.pre_passes);
    r.tour_budget = j.value("tour_budget", r.tour_budget);
    r.enum_node_cap = j.value("enum_node_cap", r.enum_node_cap);
    r.pool_capacity = j.value("pool_capacity", r.pool_capacity);
    return r;
}

inline json to_json(const PipelineConfig& c) {
    return {{"kind", to_string(c.kind)},
            {"n", c.n},
            {"ell", c.ell},
            {"k", c.k},
            {"q", c.q},
            {"secret_spec", to_json(c.secret_spec)},
            {"error_spec", to_json(c.error_spec)},
            {"omega", c.omega},
            {"reduction", to_json(c.reduction)},
            {"l", c.l},
            {"t", c.t},
            {"m_override", c.m_override},
            {"train_fraction", c.train_fraction},
            {"estimator", to_string(c.estimator)},
            {"huber_eps", c.huber_eps},
            {"tukey_c", c.tukey_c},
            {"ransac_subset", c.ransac_subset},
            {"ransac_trials", c.ransac_trials},
            {"ransac_tol", c.ransac_tol},
            {"t_sigma", c.t_sigma},
            {"tau", c.tau},
            {"seed", c.seed},
            {"workers", c.workers},
            {"interleaved", c.interleaved}};
}

inline PipelineConfig pipeline_config_from_json(const json& j) {
    PipelineConfig c;
    c.kind = kind_from_string(j.value("kind", std::string("lwe")));
    c.n = j.at("n").get<int>();
    c.ell = j.value("ell", 1);
    c.k = j.value("k", 1);
    c.q = j.at("q").get<i64>();
    c.secret_spec = secret_spec_from_json(j.at("secret_spec"));
    c.error_spec = error_spec_from_json(j.at("error_spec"));
    c.omega = j.value("omega", (i64)0);
    if (j.contains("reduction")) c.reduction = reduction_config_from_json(j["reduction"]);
    c.l = j.value("l", c.l);
    c.t = j.value("t", c.t);
    c.m_override = j.value("m_override", 0);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.estimator = estimator_from_string(j.value("estimator", std::string("tukey")));
    c.huber_eps = j.value("huber_eps", 0.0);
    c.tukey_c = j.value("tukey_c", 0.0);
    c.ransac_subset = j.value("ransac_subset", 0);
    c.ransac_trials = j.value("ransac_trials", c.ransac_trials);
    c.ransac_tol = j.value("ransac_tol", 0.0);
    c.t_sigma = j.value("t_sigma", c.t_sigma);
    c.tau = j.value("tau", c.tau);
    c.seed = j.value("seed", (std::uint64_t)1);
    c.workers = j.value("workers", 1);
    c.interleaved = j.value("interleaved", true);
    return c;
}

inline json to_json(const RunReport& r) {
    json train = {{"recovered", r.train.recovered},
                  {"subset_index", r.train.subset_index},
                  {"samples_used", r.train.samples_used},
                  {"ladder", r.train.ladder},
                  {"ladder_degenerate", r.train.ladder_degenerate},
                  {"predicted_inlier_rate", r.train.predicted_inlier_rate},
                  {"empirical_inlier_rate", r.train.empirical_inlier_rate},
                  {"fit_iterations", r.train.fit_iterations},
                  {"fit_converged", r.train.fit_converged},
                  {"sigma_r", r.train.verification.sigma_r},
                  {"threshold", r.train.verification.threshold}};
    return {{"recovered", r.recovered},
            {"secret", r.secret},
            {"train", std::move(train)},
            {"rho_A", r.rho_A},
            {"sigma_A", r.sigma_A},
            {"sigma_RA", r.sigma_RA},
            {"pool_mean_sigma", r.pool_mean_sigma},
            {"basis_mean_sigma", r.basis_mean_sigma},
            {"store_size", r.store_size},
            {"m_rows", r.m_rows},
            {"matrices_ok", r.matrices_ok},
            {"matrices_failed", r.matrices_failed},
            {"expected_inliers", r.expected_inliers},
            {"warnings", r.warnings},
            {"timings_ms",
             {{"gen", r.gen_ms}, {"preprocess", r.preprocess_ms}, {"train", r.train_ms}}}};
}

/// Same report stripped of wall-clock fields, for determinism comparisons.
inline json report_deterministic_view(const RunReport& r) {
    json j = to_json(r);
    j.erase("timings_ms");
    return j;
}

inline json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    json j;
    is >> j;
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << j.dump(2) << '\n';
}

}  // namespace nomod

#endif
