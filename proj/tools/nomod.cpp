// Command-line front end: instance generation, reduction, amplification,
// moment estimation, robust training, verification, full runs, cost reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nomod/io.hpp"

using namespace nomod;

namespace {

struct SpecFlags {
    std::string secret_family = "binary_bernoulli";
    double p = 0.5;
    int h = 0;
    int eta = 2;
    std::string error_family = "gaussian";
    double sigma = 3.0;
    int error_eta = 2;

    void attach(CLI::App* app) {
        app->add_option("--secret-family", secret_family,
                        "binary_bernoulli|binary_fixed_hw|ternary_balanced|ternary_fixed_hw|"
                        "cbd|cbd_fixed_hw");
        app->add_option("--p", p, "Bernoulli density");
        app->add_option("--hw", h, "fixed Hamming weight");
        app->add_option("--eta", eta, "CBD parameter for the secret");
        app->add_option("--error-family", error_family, "gaussian|cbd");
        app->add_option("--sigma", sigma, "Gaussian error width");
        app->add_option("--error-eta", error_eta, "CBD parameter for the error");
    }

    SecretSpec secret(int n_total) const {
        SecretSpec s;
        s.family = secret_family_from_string(secret_family);
        s.n_total = n_total;
        s.p = p;
        s.h = h;
        s.eta = eta;
        return s;
    }

    ErrorSpec error() const {
        ErrorSpec e;
        e.family = error_family == "cbd" ? ErrorFamily::Cbd : ErrorFamily::Gaussian;
        e.sigma = sigma;
        e.eta = error_eta;
        return e;
    }
};

struct ReductionFlags {
    ReductionConfig cfg;

    void attach(CLI::App* app) {
        app->add_option("--delta-lll", cfg.delta_lll);
        app->add_option("--delta-bkz", cfg.delta_bkz);
        app->add_option("--block-start", cfg.block_start);
        app->add_option("--block-cap", cfg.block_cap);
        app->add_option("--block-increment", cfg.block_increment);
        app->add_option("--stall-tours", cfg.stall_tours);
        app->add_option("--pre-passes", cfg.pre_passes);
        app->add_option("--tour-budget", cfg.tour_budget);
        app->add_option("--enum-node-cap", cfg.enum_node_cap);
    }
};

int cmd_gen(const std::string& kind, int n, int ell, int k, int m, i64 q,
            const SpecFlags& specs, std::uint64_t seed, const std::string& out) {
    LweInstance inst;
    if (kind == "lwe") {
        if (m <= 0) m = 4 * n;
        inst = gen_lwe(n, m, q, specs.secret(n), specs.error(), seed);
    } else if (kind == "rlwe") {
        inst = rlwe_to_lwe(gen_rlwe(n, k, q, specs.secret(n), specs.error(), seed));
    } else if (kind == "mlwe") {
        inst = mlwe_to_lwe(gen_mlwe(n, ell, k, q, specs.secret(ell * n), specs.error(), seed));
    } else {
        std::cerr << "unknown kind: " << kind << "\n";
        return 1;
    }
    save_json(out, to_json(inst));
    std::cout << "wrote " << out << " (" << inst.m() << " x " << inst.n() << ", q=" << inst.q
              << ")\n";
    return 0;
}

int cmd_reduce(const std::string& in, i64 omega, std::size_t pool_cap,
               const ReductionFlags& rf, const std::string& out) {
    LweInstance inst = lwe_from_json(load_json(in));
    if (omega <= 0) omega = inst.error_spec.family == ErrorFamily::Cbd ? 4 : 10;
    ReductionConfig cfg = rf.cfg;
    cfg.pool_capacity = pool_cap;
    ShortVectorPool pool(pool_cap);
    EmbeddedBasis eb = embed(inst.A, omega, inst.q);
    progressive_reduce(eb, cfg, pool, inst.secret_spec, inst.error_spec, 0);
    save_json(out, pool_to_json(pool.entries(), omega, inst.q, eb.m, eb.n));
    std::cout << "wrote " << out << " (" << pool.size() << " vectors, mean sigma "
              << pool.mean_sigma() << ")\n";
    return 0;
}

int cmd_amplify(const std::string& pool_path, const std::string& inst_path, int ring_n,
                const std::string& out) {
    PoolFile pf = pool_from_json(load_json(pool_path));
    LweInstance inst = lwe_from_json(load_json(inst_path));
    std::vector<SampleRow> rows;
    i64 id = 0;
    for (std::size_t pi = 0; pi < pf.entries.size(); ++pi) {
        const PoolEntry& e = pf.entries[pi];
        Vec r(pf.m);
        for (int i = 0; i < pf.m; ++i) r[i] = e.v[i] / pf.omega;
        if (ring_n <= 0) {
            SampleRow sr;
            sr.sample_id = id++;
            sr.source_row = (i64)pi;
            sr.t = 0;
            sr.v = e.v;
            i128 tgt = 0;
            for (int i = 0; i < pf.m; ++i) tgt += (i128)r[i] * inst.b[i];
            sr.target = center_mod((i64)tgt, pf.q);
            rows.push_back(std::move(sr));
            continue;
        }
        // flattened ring rows: row i is the rotation row u = -(i mod n) of
        // polynomial sample i / n
        int n = ring_n;
        std::vector<Vec> bpoly(inst.m() / n);
        for (std::size_t bl = 0; bl < bpoly.size(); ++bl)
            bpoly[bl] = Vec(inst.b.begin() + (std::size_t)bl * n,
                            inst.b.begin() + (std::size_t)(bl + 1) * n);
        Vec y(e.v.begin() + pf.m, e.v.end());
        int blocks = (int)y.size() / n;
        std::set<Vec> seen;
        for (i64 t = 0; t < n; ++t) {
            Vec yt;
            for (int bl = 0; bl < blocks; ++bl) {
                Vec sub(y.begin() + (std::size_t)bl * n, y.begin() + (std::size_t)(bl + 1) * n);
                Vec rot = rotate_negacyclic(sub, t);
                yt.insert(yt.end(), rot.begin(), rot.end());
            }
            if (!seen.insert(yt).second) continue;
            SampleRow sr;
            sr.sample_id = id++;
            sr.source_row = (i64)pi;
            sr.t = t;
            sr.v = e.v;
            std::copy(yt.begin(), yt.end(), sr.v.begin() + pf.m);
            i128 tgt = 0;
            for (int i = 0; i < pf.m; ++i) {
                int blk = i / n;
                i64 u = -(i64)(i % n);
                tgt += (i128)r[i] * rotation_target(bpoly[blk], u - t);
            }
            sr.target = center_mod((i64)tgt, pf.q);
            rows.push_back(std::move(sr));
        }
    }
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    write_samples_csv(os, rows);
    std::cout << "wrote " << out << " (" << rows.size() << " samples)\n";
    return 0;
}

int cmd_estimate(const std::string& samples_path, const std::string& inst_path, i64 omega,
                 const std::string& report_path) {
    LweInstance inst = lwe_from_json(load_json(inst_path));
    std::ifstream is(samples_path);
    if (!is) throw std::runtime_error("cannot open " + samples_path);
    std::vector<SampleRow> rows = read_samples_csv(is);
    if (omega <= 0) omega = inst.error_spec.family == ErrorFamily::Cbd ? 4 : 10;
    int N = inst.secret_spec.n_total;
    json per_row = json::array();
    std::vector<double> sigmas;
    for (const SampleRow& r : rows) {
        int m = (int)r.v.size() - N;
        if (m < 0) throw std::invalid_argument("estimate: sample narrower than secret");
        MomentEstimate me =
            sample_moments(r.v, m, inst.secret_spec, inst.error_spec, omega);
        double sg = std::sqrt(me.var);
        sigmas.push_back(sg);
        per_row.push_back({{"sample_id", r.sample_id},
                           {"sigma", sg},
                           {"mu", me.mu},
                           {"inlier_prob", inlier_prob(inst.q, sg)}});
    }
    json rep = {{"rows", std::move(per_row)},
                {"expected_inliers", expected_inliers(sigmas, inst.q)},
                {"count", rows.size()}};
    save_json(report_path, rep);
    std::cout << "wrote " << report_path << " (expected inliers "
              << expected_inliers(sigmas, inst.q) << " of " << rows.size() << ")\n";
    return 0;
}

int cmd_train(const std::string& samples_path, const std::string& inst_path,
              const std::string& estimator, i64 omega, double t_sigma, double tau,
              std::uint64_t seed, const std::string& out) {
    LweInstance inst = lwe_from_json(load_json(inst_path));
    std::ifstream is(samples_path);
    if (!is) throw std::runtime_error("cannot open " + samples_path);
    std::vector<SampleRow> rows = read_samples_csv(is);
    if (rows.empty()) throw std::runtime_error("train: empty sample store");
    if (omega <= 0) omega = inst.error_spec.family == ErrorFamily::Cbd ? 4 : 10;
    int N = inst.secret_spec.n_total;
    int m = (int)rows[0].v.size() - N;

    PipelineConfig cfg;
    cfg.kind = InstanceKind::Lwe;
    cfg.n = N;
    cfg.q = inst.q;
    cfg.secret_spec = inst.secret_spec;
    cfg.error_spec = inst.error_spec;
    cfg.estimator = estimator_from_string(estimator);
    cfg.t_sigma = t_sigma;
    cfg.tau = tau;
    cfg.seed = seed;
    std::vector<Sample> store;
    for (const SampleRow& r : rows) {
        Sample s;
        s.v = r.v;
        MomentEstimate me = sample_moments(r.v, m, inst.secret_spec, inst.error_spec, omega);
        s.sigma = std::sqrt(me.var);
        s.mu = me.mu;
        s.target = r.target;
        s.source_matrix = 0;
        s.source_row = (int)r.source_row;
        s.orbit_t = r.t;
        store.push_back(std::move(s));
    }
    TrainResult tr = run_train(cfg, store, inst);
    json fit = {{"secret", tr.secret},
                {"accepted", tr.recovered},
                {"estimator", estimator},
                {"subset_index", tr.subset_index},
                {"samples_used", tr.samples_used},
                {"sigma_r", tr.verification.sigma_r},
                {"threshold", tr.verification.threshold}};
    save_json(out, fit);
    std::cout << (tr.recovered ? "recovered" : "not recovered") << ", wrote " << out << "\n";
    return tr.recovered ? 0 : 2;
}

int cmd_verify(const std::string& inst_path, const std::string& candidate_path, double tau) {
    LweInstance inst = lwe_from_json(load_json(inst_path));
    json fit = load_json(candidate_path);
    Vec s = fit.at("secret").get<Vec>();
    VerificationReport rep = verify_secret(inst.A, inst.b, inst.q, s, inst.error_spec, tau);
    std::cout << (rep.accept ? "ACCEPT" : "REJECT") << " sigma_r=" << rep.sigma_r
              << " threshold=" << rep.threshold << "\n";
    return rep.accept ? 0 : 2;
}

int cmd_cost(int beta, int dim, double log_volume, int n, int k, i64 q, i64 omega) {
    CostReport r = bkz_cost(beta, dim, log_volume);
    json j = {{"beta", beta},
              {"dim", dim},
              {"delta0", r.delta0},
              {"expected_shortest_log", r.expected_shortest_log},
              {"rop_classical_log2", r.rop_classical_log2},
              {"rop_quantum_log2", r.rop_quantum_log2}};
    if (n > 0 && q > 1) {
        if (omega <= 0) omega = 10;
        auto m = optimal_sample_count(n, std::max(k, 1), q, omega, beta);
        j["optimal_m"] = m.m;
        j["optimal_m_clamped"] = m.clamped;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Module-LWE lattice-reduction and robust-regression workbench"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance");
    std::string g_kind = "lwe", g_out = "inst.json";
    int g_n = 32, g_ell = 1, g_k = 1, g_m = 0;
    i64 g_q = 251;
    std::uint64_t g_seed = 1;
    SpecFlags g_specs;
    gen->add_option("--kind", g_kind, "lwe|rlwe|mlwe");
    gen->add_option("--n", g_n, "dimension / ring degree")->required();
    gen->add_option("--ell", g_ell, "module rank");
    gen->add_option("--k", g_k, "polynomial samples");
    gen->add_option("--m", g_m, "LWE rows (default 4n)");
    gen->add_option("--q", g_q)->required();
    gen->add_option("--seed", g_seed)->required();
    gen->add_option("--out", g_out);
    g_specs.attach(gen);

    // reduce
    auto* red = app.add_subcommand("reduce", "embed and reduce an instance");
    std::string r_in = "inst.json", r_out = "pool.json";
    i64 r_omega = 0;
    std::size_t r_pool = 50;
    ReductionFlags r_flags;
    red->add_option("--in", r_in)->required();
    red->add_option("--omega", r_omega, "error penalty (0 = by error family)");
    red->add_option("--pool-cap", r_pool);
    red->add_option("--out", r_out);
    r_flags.attach(red);

    // amplify
    auto* amp = app.add_subcommand("amplify", "orbit-expand a vector pool");
    std::string a_pool = "pool.json", a_inst = "inst.json", a_out = "samples.csv";
    int a_ring_n = 0;
    amp->add_option("--pool", a_pool)->required();
    amp->add_option("--instance", a_inst)->required();
    amp->add_option("--ring-n", a_ring_n, "ring degree (0 = plain LWE pass-through)");
    amp->add_option("--out", a_out);

    // estimate
    auto* est = app.add_subcommand("estimate", "per-sample moment report");
    std::string e_samples = "samples.csv", e_inst = "inst.json", e_report = "report.json";
    i64 e_omega = 0;
    est->add_option("--samples", e_samples)->required();
    est->add_option("--instance", e_inst)->required();
    est->add_option("--omega", e_omega);
    est->add_option("--report", e_report);

    // train
    auto* trn = app.add_subcommand("train", "robust fit over ranked subsets");
    std::string t_samples = "samples.csv", t_inst = "inst.json", t_est = "tukey",
                t_out = "fit.json";
    i64 t_omega = 0;
    double t_tsigma = 4.0, t_tau = 1.5;
    std::uint64_t t_seed = 1;
    trn->add_option("--samples", t_samples)->required();
    trn->add_option("--instance", t_inst)->required();
    trn->add_option("--estimator", t_est, "ols|huber|ransac|tukey");
    trn->add_option("--omega", t_omega);
    trn->add_option("--t-sigma", t_tsigma);
    trn->add_option("--tau", t_tau);
    trn->add_option("--seed", t_seed);
    trn->add_option("--out", t_out);

    // verify
    auto* ver = app.add_subcommand("verify", "check a candidate secret");
    std::string v_inst = "inst.json", v_cand = "fit.json";
    double v_tau = 1.5;
    ver->add_option("--instance", v_inst)->required();
    ver->add_option("--candidate", v_cand)->required();
    ver->add_option("--tau", v_tau);

    // run
    auto* run = app.add_subcommand("run", "full pipeline");
    std::string run_config, run_out;
    PipelineConfig rc;
    rc.n = 0;
    std::string run_kind, run_estimator;
    std::uint64_t run_seed = 0;
    run->add_option("--config", run_config, "JSON config file");
    run->add_option("--out", run_out, "report path (default stdout)");
    run->add_option("--seed", run_seed)->required();
    run->add_option("--kind", run_kind);
    run->add_option("--n", rc.n);
    run->add_option("--ell", rc.ell);
    run->add_option("--k", rc.k);
    run->add_option("--q", rc.q);
    run->add_option("--omega", rc.omega);
    run->add_option("--l", rc.l);
    run->add_option("--t", rc.t);
    run->add_option("--m-rows", rc.m_override);
    run->add_option("--train-fraction", rc.train_fraction);
    run->add_option("--estimator", run_estimator);
    run->add_option("--t-sigma", rc.t_sigma);
    run->add_option("--tau", rc.tau);
    run->add_option("--workers", rc.workers);
    run->add_flag("--no-interleave", [&](std::size_t) { rc.interleaved = false; });
    SpecFlags run_specs;
    run_specs.attach(run);
    ReductionFlags run_red;
    run_red.attach(run);

    // cost
    auto* cost = app.add_subcommand("cost", "analytic hardness report");
    int c_beta = 50, c_dim = 128, c_n = 0, c_k = 1;
    double c_logvol = 0.0;
    i64 c_q = 0, c_omega = 0;
    cost->add_option("--beta", c_beta)->required();
    cost->add_option("--dim", c_dim)->required();
    cost->add_option("--log-volume", c_logvol);
    cost->add_option("--n", c_n, "secret dimension for the sample-count report");
    cost->add_option("--k", c_k);
    cost->add_option("--q", c_q);
    cost->add_option("--omega", c_omega);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(g_kind, g_n, g_ell, g_k, g_m, g_q, g_specs, g_seed, g_out);
        if (red->parsed()) return cmd_reduce(r_in, r_omega, r_pool, r_flags, r_out);
        if (amp->parsed()) return cmd_amplify(a_pool, a_inst, a_ring_n, a_out);
        if (est->parsed()) return cmd_estimate(e_samples, e_inst, e_omega, e_report);
        if (trn->parsed())
            return cmd_train(t_samples, t_inst, t_est, t_omega, t_tsigma, t_tau, t_seed, t_out);
        if (ver->parsed()) return cmd_verify(v_inst, v_cand, v_tau);
        if (cost->parsed()) return cmd_cost(c_beta, c_dim, c_logvol, c_n, c_k, c_q, c_omega);
        if (run->parsed()) {
            PipelineConfig cfg;
            if (!run_config.empty()) cfg = pipeline_config_from_json(load_json(run_config));
            // flag overrides on top of the file
            if (run->count("--kind")) cfg.kind = kind_from_string(run_kind);
            if (run->count("--n")) cfg.n = rc.n;
            if (run->count("--ell")) cfg.ell = rc.ell;
            if (run->count("--k")) cfg.k = rc.k;
            if (run->count("--q")) cfg.q = rc.q;
            if (run->count("--omega")) cfg.omega = rc.omega;
            if (run->count("--l")) cfg.l = rc.l;
            if (run->count("--t")) cfg.t = rc.t;
            if (run->count("--m-rows")) cfg.m_override = rc.m_override;
            if (run->count("--train-fraction")) cfg.train_fraction = rc.train_fraction;
            if (run->count("--estimator"))
                cfg.estimator = estimator_from_string(run_estimator);
            if (run->count("--t-sigma")) cfg.t_sigma = rc.t_sigma;
            if (run->count("--tau")) cfg.tau = rc.tau;
            if (run->count("--workers")) cfg.workers = rc.workers;
            if (run->count("--no-interleave")) cfg.interleaved = false;
            if (run->count("--secret-family") || run_config.empty())
                cfg.secret_spec = run_specs.secret(
                    cfg.kind == InstanceKind::Lwe ? cfg.n : cfg.ell * cfg.n);
            if (run->count("--error-family") || run->count("--sigma") ||
                run->count("--error-eta") || run_config.empty())
                cfg.error_spec = run_specs.error();
            if (run->count("--block-start") || run->count("--block-cap") ||
                run->count("--tour-budget") || run_config.empty())
                cfg.reduction = run_red.cfg;
            cfg.seed = run_seed;
            RunReport rep = run_full(cfg);
            json j = to_json(rep);
            if (run_out.empty())
                std::cout << j.dump(2) << "\n";
            else
                save_json(run_out, j);
            std::cerr << (rep.recovered ? "recovered" : "not recovered") << " (rho_A "
                      << rep.rho_A << ", store " << rep.store_size << ")\n";
            return rep.recovered ? 0 : 2;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }

    // cost is stateless; handle it last
    return 0;
}
