#include "fastmtgp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "fastmtgp/cubature.hpp"
#include "fastmtgp/rng.hpp"

namespace fastmtgp {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kTestStream = 0x7E57;
constexpr std::uint64_t kNoiseStream = 0x401;

SeqKind kind_of(const std::string& kernel) {
    return kernel == "si-lattice" ? SeqKind::lattice : SeqKind::digital;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string n_label(const std::vector<int>& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(std::size_t{1} << m[i]);
    }
    return s;
}

std::vector<int> default_m(const RunConfig& cfg, int L) {
    if (!cfg.m.empty()) return cfg.m;
    return std::vector<int>(static_cast<std::size_t>(L), 6);
}

json hyper_json(const Hyperparams& h) {
    json j;
    j["gamma"] = h.gamma;
    j["eta"] = h.eta;
    j["si_alpha"] = h.si_alpha;
    j["b"] = std::vector<double>(h.b.begin(), h.b.end());
    std::vector<std::vector<double>> B(static_cast<std::size_t>(h.B.rows()));
    for (Eigen::Index l = 0; l < h.B.rows(); ++l)
        B[static_cast<std::size_t>(l)] =
            std::vector<double>(h.B.row(l).begin(), h.B.row(l).end());
    j["B"] = B;
    j["t"] = h.t;
    j["xi"] = h.xi;
    j["tau"] = h.tau;
    j["lengthscales"] = h.lengthscales;
    return j;
}

json report_json(const FitReport& rep) {
    json j;
    j["steps"] = rep.steps;
    j["final_loss"] = rep.final_loss;
    j["jitter_escalations"] = rep.jitter_escalations;
    j["loss_trace"] = rep.loss_trace;
    j["step_seconds"] = rep.step_seconds;
    j["tau"] = std::vector<double>(rep.tau.data(), rep.tau.data() + rep.tau.size());
    return j;
}

struct TrialRun {
    GpModel model;
    FitReport report;
};

TrialRun fit_trial(const RunConfig& cfg, int trial) {
    const Problem& p = get_problem(cfg.problem);
    const std::vector<int> m = default_m(cfg, p.L);
    if (static_cast<int>(m.size()) > p.L)
        throw FastMtgpError("more tasks requested than the problem has fidelities");
    const KernelFamily family = parse_kernel(cfg.kernel);
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
    LdDesign dz = make_design(kind_of(cfg.kernel), p.d, m, seed);

    const int L = static_cast<int>(m.size());
    std::vector<std::vector<double>> y(L);
    for (int u = 0; u < L; ++u) {
        const int l = dz.user_to_internal[u];
        y[u] = eval_batch(p, u + 1, dz.X[l], dz.n[l]);
        if (cfg.noise > 0.0)
            for (std::size_t i = 0; i < y[u].size(); ++i)
                y[u][i] += cfg.noise * rng::normal(seed, kNoiseStream + static_cast<std::uint64_t>(u), i);
    }
    std::vector<double> y_all;
    for (const auto& v : y) y_all.insert(y_all.end(), v.begin(), v.end());

    Hyperparams h = init_hyperparams(family, p.d, L, cfg.task_rank, y_all, cfg.jitter, seed);
    TrialRun run{make_model(std::move(dz), family, std::move(h), y, parse_loss(cfg.loss)), {}};
    if (run.model.dense_path() && run.model.design.N > cfg.dense_cap)
        throw FastMtgpError("dense kernel above the dense cap (" + std::to_string(cfg.dense_cap) + ")");
    run.report = fit(run.model, cfg.steps, parse_loss(cfg.loss));
    return run;
}

}  // namespace

RunConfig config_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FastMtgpError("cannot open config: " + path);
    json doc;
    in >> doc;
    RunConfig cfg;
    cfg.problem = doc.value("problem", cfg.problem);
    cfg.kernel = doc.value("kernel", cfg.kernel);
    cfg.loss = doc.value("loss", cfg.loss);
    if (doc.contains("n")) {
        cfg.m.clear();
        for (const auto& v : doc.at("n")) cfg.m.push_back(log2_exact(v.get<std::size_t>()));
    }
    cfg.steps = doc.value("steps", cfg.steps);
    cfg.trials = doc.value("trials", cfg.trials);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.noise = doc.value("noise", cfg.noise);
    cfg.jitter = doc.value("jitter", cfg.jitter);
    cfg.task_rank = doc.value("task_rank", cfg.task_rank);
    cfg.out = doc.value("out", cfg.out);
    cfg.model_out = doc.value("model_out", cfg.model_out);
    cfg.test_points = doc.value("test_points", cfg.test_points);
    cfg.dense_cap = doc.value("dense_cap", cfg.dense_cap);
    cfg.dims = doc.value("d", cfg.dims);
    return cfg;
}

KernelFamily parse_kernel(const std::string& name) {
    if (name == "si-lattice") return KernelFamily::si_lattice;
    if (name == "dsi-digital") return KernelFamily::dsi_digital;
    if (name == "se-dense") return KernelFamily::se_dense;
    throw FastMtgpError("unknown kernel family: " + name);
}

LossKind parse_loss(const std::string& name) {
    if (name == "nmll") return LossKind::nmll;
    if (name == "gcv") return LossKind::gcv;
    throw FastMtgpError("unknown loss: " + name);
}

std::vector<double> test_set(const RunConfig& cfg, const Problem& p) {
    return shifted_points(kind_of(cfg.kernel), p.d, 0, cfg.test_points, cfg.seed, kTestStream);
}

double l2_relative_error(const GpModel& model, const Problem& p, int user_task,
                         const std::vector<double>& Xtest, std::size_t count) {
    const std::vector<double> truth = eval_batch(p, user_task + 1, Xtest, count);
    const std::vector<double> pred = posterior_mean_batch(model, user_task, Xtest, count);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        num += (pred[i] - truth[i]) * (pred[i] - truth[i]);
        den += truth[i] * truth[i];
    }
    return std::sqrt(num / den);
}

TrialResult run_trial(const RunConfig& cfg, int trial) {
    const Problem& p = get_problem(cfg.problem);
    TrialRun run = fit_trial(cfg, trial);
    const int L = run.model.design.L;

    TrialResult res;
    res.trial = trial;
    res.time_per_step = median(run.report.step_seconds);
    res.final_loss = run.report.final_loss;

    const std::vector<double> Xtest = test_set(cfg, p);
    res.l2_rel_error_task.resize(L);
    for (int u = 0; u < L; ++u)
        res.l2_rel_error_task[u] = l2_relative_error(run.model, p, u, Xtest, cfg.test_points);
    res.l2_rel_error = res.l2_rel_error_task[L - 1];

    double mu_top;
    if (L == 1) {
        mu_top = single_task_cubature(run.model).first;
    } else {
        mu_top = multitask_cubature(run.model).mu[L - 1];
    }
    res.cubature_abs_error = std::abs(mu_top - p.ref_integral[L - 1]);
    return res;
}

int cmd_points(const RunConfig& cfg, std::ostream& os) {
    int d = cfg.dims;
    if (d <= 0) d = get_problem(cfg.problem).d;
    std::vector<int> m = cfg.m.empty() ? std::vector<int>{3} : cfg.m;
    LdDesign dz = make_design(kind_of(cfg.kernel), d, m, cfg.seed);
    os << "task,index";
    for (int j = 1; j <= d; ++j) os << ",x" << j;
    os << '\n';
    os << std::setprecision(17);
    for (int u = 0; u < dz.L; ++u) {
        const int l = dz.user_to_internal[u];
        for (std::size_t i = 0; i < dz.n[l]; ++i) {
            os << (u + 1) << ',' << i;
            const double* x = dz.point(l, i);
            for (int j = 0; j < d; ++j) os << ',' << x[j];
            os << '\n';
        }
    }
    return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& os) {
    const Problem& p = get_problem(cfg.problem);
    TrialRun run = fit_trial(cfg, 0);
    const std::vector<double> Xtest = test_set(cfg, p);
    json doc;
    doc["problem"] = cfg.problem;
    doc["kernel"] = cfg.kernel;
    doc["loss"] = cfg.loss;
    doc["n"] = n_label(default_m(cfg, p.L));
    doc["seed"] = cfg.seed;
    doc["hyperparameters"] = hyper_json(run.model.hyper);
    doc["report"] = report_json(run.report);
    std::vector<double> errs(run.model.design.L);
    for (int u = 0; u < run.model.design.L; ++u)
        errs[u] = l2_relative_error(run.model, p, u, Xtest, cfg.test_points);
    doc["l2_rel_error"] = errs;
    if (!cfg.model_out.empty()) {
        std::ofstream mf(cfg.model_out);
        if (!mf) throw FastMtgpError("cannot open model output: " + cfg.model_out);
        mf << model_to_json(run.model) << '\n';
        doc["model_out"] = cfg.model_out;
    }
    os << doc.dump(1) << '\n';
    return 0;
}

int cmd_cubature(const RunConfig& cfg, std::ostream& os) {
    const Problem& p = get_problem(cfg.problem);
    TrialRun run = fit_trial(cfg, 0);
    const int L = run.model.design.L;

    Eigen::VectorXd mu(L);
    Eigen::MatrixXd Sigma(L, L);
    if (L == 1) {
        auto [m1, v1] = single_task_cubature(run.model);
        mu[0] = m1;
        Sigma(0, 0) = v1;
    } else {
        CubatureResult cr = multitask_cubature(run.model);
        mu = cr.mu;
        Sigma = cr.Sigma;
    }
    const Eigen::VectorXd chi = Eigen::VectorXd::Ones(L);
    auto [w, mse_min] = optimal_weights(mu, Sigma, chi);

    json doc;
    doc["problem"] = cfg.problem;
    doc["kernel"] = cfg.kernel;
    doc["n"] = n_label(default_m(cfg, p.L));
    doc["seed"] = cfg.seed;
    doc["mu"] = std::vector<double>(mu.data(), mu.data() + L);
    std::vector<double> sd(L);
    for (int l = 0; l < L; ++l) sd[l] = Sigma(l, l);
    doc["Sigma_diag"] = sd;
    doc["chi"] = std::vector<double>(chi.data(), chi.data() + L);
    doc["chi_mu"] = chi.dot(mu);
    doc["chi_Sigma_chi"] = chi.dot(Sigma * chi);
    doc["weights"] = std::vector<double>(w.data(), w.data() + L);
    doc["weights_mse_min"] = mse_min;
    std::vector<double> abs_err(L);
    for (int l = 0; l < L; ++l) abs_err[l] = std::abs(mu[l] - p.ref_integral[l]);
    doc["abs_error_vs_reference"] = abs_err;
    os << doc.dump(1) << '\n';
    return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& os) {
    const Problem& p = get_problem(cfg.problem);
    const std::vector<int> m = default_m(cfg, p.L);
    std::size_t N = 0;
    for (int mi : m) N += std::size_t{1} << mi;
    os << "problem,method,n,trial,time_per_step,l2_rel_error,cubature_abs_error,final_loss\n";
    if (parse_kernel(cfg.kernel) == KernelFamily::se_dense && N > cfg.dense_cap) {
        std::cerr << "bench: se-dense skipped, N = " << N << " above the dense cap "
                  << cfg.dense_cap << "\n";
        return 0;
    }
    std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
    std::vector<std::string> failures(static_cast<std::size_t>(cfg.trials));
    parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
        try {
            results[t] = run_trial(cfg, static_cast<int>(t));
        } catch (const std::exception& e) {
            failures[t] = e.what();
        }
    });
    os << std::setprecision(17);
    std::vector<double> times, errs, cubs, losses;
    int bad = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        if (!failures[t].empty()) {
            std::cerr << "bench: trial " << t << " failed: " << failures[t] << "\n";
            ++bad;
            continue;
        }
        const TrialResult& r = results[t];
        os << cfg.problem << ',' << cfg.kernel << ',' << n_label(m) << ',' << r.trial << ','
           << r.time_per_step << ',' << r.l2_rel_error << ',' << r.cubature_abs_error << ','
           << r.final_loss << '\n';
        times.push_back(r.time_per_step);
        errs.push_back(r.l2_rel_error);
        cubs.push_back(r.cubature_abs_error);
        losses.push_back(r.final_loss);
    }
    if (!times.empty())
        os << cfg.problem << ',' << cfg.kernel << ',' << n_label(m) << ",median,"
           << median(times) << ',' << median(errs) << ',' << median(cubs) << ','
           << median(losses) << '\n';
    return bad == 0 ? 0 : 1;
}

double time_build_invert(SeqKind kind, KernelFamily family, const std::vector<int>& m,
                         std::uint64_t seed, int repeats) {
    const int d = 4;
    const int L = static_cast<int>(m.size());
    LdDesign dz = make_design(kind, d, m, seed);
    Hyperparams h;
    h.gamma = 1.0;
    h.eta.assign(d, 1.0);
    h.si_alpha = 1;
    h.b = {1.0, 1.0, 1.0, 1.0};
    h.B = Eigen::MatrixXd::Constant(L, 1, 0.5);
    h.t.assign(L, 0.5);
    h.xi.assign(L, 1e-8);
    Eigen::MatrixXd R_int(L, L);
    const Eigen::MatrixXd R_user = task_gram(h.B, h.t);
    for (int l = 0; l < L; ++l)
        for (int lp = 0; lp < L; ++lp)
            R_int(l, lp) = R_user(dz.internal_to_user[l], dz.internal_to_user[lp]);
    std::vector<double> xi(L);
    for (int l = 0; l < L; ++l) xi[l] = h.xi[dz.internal_to_user[l]];
    const SpatialKernel q = SpatialKernel::from(h, family);

    using clock = std::chrono::steady_clock;
    std::vector<double> secs;
    for (int r = 0; r < repeats; ++r) {
        const auto tic = clock::now();
        BlockSpectrum spec = build_spectrum(dz, R_int, q, xi);
        BlockInverse inv = invert_and_logdet(spec);
        secs.push_back(std::chrono::duration<double>(clock::now() - tic).count());
        if (!std::isfinite(inv.logdet)) throw FastMtgpError("time_build_invert: bad logdet");
    }
    return median(secs);
}

double time_per_step(const RunConfig& cfg, int steps) {
    RunConfig c = cfg;
    c.steps = steps;
    TrialRun run = fit_trial(c, 0);
    return median(run.report.step_seconds);
}

int cmd_scaling(const RunConfig& cfg, std::ostream& os) {
    const SeqKind kind = kind_of(cfg.kernel);
    const KernelFamily family = parse_kernel(cfg.kernel);
    if (family == KernelFamily::se_dense)
        throw FastMtgpError("scaling: fast families only");
    const int repeats = std::max(1, cfg.trials);
    os << "kind,n,seconds\n";
    os << std::setprecision(6);
    std::vector<std::vector<int>> grid;
    if (!cfg.m.empty()) {
        grid.push_back(cfg.m);
    } else {
        for (int m = 10; m <= 16; ++m) grid.push_back({m});
        grid.push_back({12, 12});
        grid.push_back({14, 4});
    }
    for (const auto& m : grid) {
        const double t = time_build_invert(kind, family, m, cfg.seed, repeats);
        os << cfg.kernel << ',' << n_label(m) << ',' << t << '\n';
    }
    return 0;
}

}  // namespace fastmtgp
