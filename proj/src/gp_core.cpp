#include "fastmtgp/gp_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "fastmtgp/rng.hpp"

namespace fastmtgp {

namespace {

using json = nlohmann::json;

Eigen::MatrixXd user_task_gram(const Hyperparams& h) { return task_gram(h.B, h.t); }

Eigen::MatrixXd to_internal(const Eigen::MatrixXd& R_user, const LdDesign& dz) {
    Eigen::MatrixXd R(dz.L, dz.L);
    for (int l = 0; l < dz.L; ++l)
        for (int lp = 0; lp < dz.L; ++lp)
            R(l, lp) = R_user(dz.internal_to_user[l], dz.internal_to_user[lp]);
    return R;
}

std::vector<double> xi_internal(const GpModel& m, double scale) {
    std::vector<double> xi(m.design.L);
    for (int l = 0; l < m.design.L; ++l)
        xi[l] = m.hyper.xi.at(m.design.internal_to_user[l]) * scale;
    return xi;
}

Eigen::VectorXd block_sums(const std::vector<double>& v, const LdDesign& dz) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(dz.L);
    for (int l = 0; l < dz.L; ++l)
        for (std::size_t k = dz.offset[l]; k < dz.offset[l + 1]; ++k) s[l] += v[k];
    return s;
}

double variance(const std::vector<double>& y) {
    if (y.empty()) return 1.0;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    return var;
}

}  // namespace

void GpModel::invalidate() {
    spec.reset();
    inv.reset();
    dense.reset();
    c.clear();
    tau_internal.resize(0);
}

namespace {

// tau for the requested loss at internal order; L = 1 is the sample mean on
// the fast path (the lone transform eigenvector is constant, so the normal
// equations collapse to it exactly)
Eigen::VectorXd compute_tau_internal(GpModel& m, LossKind kind) {
    const LdDesign& dz = m.design;
    if (!m.dense_path() && dz.L == 1) {
        double mean = 0.0;
        for (double v : m.y) mean += v;
        return Eigen::VectorXd::Constant(1, mean / static_cast<double>(m.y.size()));
    }
    if (m.dense_path()) {
        Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(m.y.data(), static_cast<Eigen::Index>(m.y.size()));
        auto [tn, tg] = dense_normal_equations(*m.dense, y);
        return kind == LossKind::nmll ? tn : tg;
    }
    const std::vector<double> w = solve(*m.inv, m.y);
    const PiH ph = extract_pi_h(*m.inv);
    if (kind == LossKind::nmll) {
        const Eigen::VectorXd rhs = block_sums(w, dz);
        return Eigen::LDLT<Eigen::MatrixXd>(ph.Pi).solve(rhs);
    }
    const std::vector<double> w2 = solve(*m.inv, w);
    const Eigen::VectorXd rhs = block_sums(w2, dz);
    return Eigen::LDLT<Eigen::MatrixXd>(ph.HHbar()).solve(rhs);
}

}  // namespace

void GpModel::refresh() {
    const int L = design.L;
    if (!spec && !dense) {
        const Eigen::MatrixXd R_int = to_internal(user_task_gram(hyper), design);
        const SpatialKernel q = SpatialKernel::from(hyper, family);
        double scale = 1.0;
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt > 6) throw SchurBreakdown("noise escalation schedule exhausted");
            std::vector<double> xi = xi_internal(*this, scale);
            if (attempt > 0)
                for (auto& v : xi)
                    if (v == 0.0) v = 1e-12 * scale;
            try {
                if (dense_path()) {
                    std::vector<std::vector<double>> pts(L);
                    for (int l = 0; l < L; ++l) pts[l] = design.X[l];
                    DenseGram g = dense_assemble(pts, design.d, R_int, q, xi);
                    if (!dense_factor(g)) throw SchurBreakdown("dense Cholesky failed");
                    dense = std::move(g);
                } else {
                    BlockSpectrum s = build_spectrum(design, R_int, q, xi);
                    BlockInverse iv = invert_and_logdet(s);
                    spec = std::move(s);
                    inv = std::move(iv);
                }
                xi_effective = scale;
                jitter_escalations = attempt;
                break;
            } catch (const SchurBreakdown&) {
                dense.reset();
                spec.reset();
                inv.reset();
                scale *= 10.0;
            }
        }
    }
    tau_internal = compute_tau_internal(*this, loss);
    std::vector<double> resid = y;
    for (int l = 0; l < L; ++l)
        for (std::size_t k = design.offset[l]; k < design.offset[l + 1]; ++k)
            resid[k] -= tau_internal[l];
    if (dense_path()) {
        Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(resid.data(), static_cast<Eigen::Index>(resid.size()));
        Eigen::VectorXd sol = dense_solve(*dense, r);
        c.assign(sol.data(), sol.data() + sol.size());
    } else {
        c = solve(*inv, resid);
    }
}

GpModel make_model(LdDesign design, KernelFamily family, Hyperparams hyper,
                   const std::vector<std::vector<double>>& y_user, LossKind loss) {
    GpModel m;
    m.design = std::move(design);
    m.family = family;
    m.hyper = std::move(hyper);
    m.loss = loss;
    if (static_cast<int>(y_user.size()) != m.design.L)
        throw FastMtgpError("make_model: observation task count mismatch");
    m.y.resize(m.design.N);
    for (int l = 0; l < m.design.L; ++l) {
        const auto& yl = y_user[m.design.internal_to_user[l]];
        if (yl.size() != m.design.n[l]) throw FastMtgpError("make_model: observation size mismatch");
        std::copy(yl.begin(), yl.end(), m.y.begin() + m.design.offset[l]);
    }
    const int L = m.design.L;
    auto fix = [&](std::vector<double>& v, int len, double fill) {
        if (static_cast<int>(v.size()) != len) v.assign(len, fill);
    };
    fix(m.hyper.t, L, 0.1);
    fix(m.hyper.xi, L, 1e-8);
    fix(m.hyper.tau, L, 0.0);
    fix(m.hyper.eta, m.design.d, 1.0);
    fix(m.hyper.lengthscales, m.design.d, 0.25);
    if (m.hyper.B.rows() != L) {
        if (m.hyper.B.size() != 0) throw FastMtgpError("make_model: task loading matrix row mismatch");
        m.hyper.B = Eigen::MatrixXd::Zero(L, 1);
    }
    return m;
}

Hyperparams init_hyperparams(KernelFamily family, int d, int L, int s,
                             const std::vector<double>& y, double xi, std::uint64_t seed) {
    Hyperparams h;
    h.gamma = std::max(variance(y), 1e-12);
    h.eta.assign(d, 1.0);
    h.si_alpha = 1;
    h.b = {1.0, 1.0, 1.0, 1.0};
    h.B.resize(L, s);
    constexpr std::uint64_t kInitStream = 0xB011;
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < s; ++k)
            h.B(l, k) = 0.1 * rng::normal(seed, kInitStream, static_cast<std::uint64_t>(l) * s + k);
    h.t.assign(L, 0.1);
    h.xi.assign(L, xi);
    h.tau.assign(L, 0.0);
    h.lengthscales.assign(d, 0.25);
    (void)family;
    return h;
}

double nmll(GpModel& model) { return loss_value(model, LossKind::nmll); }
double gcv(GpModel& model) { return loss_value(model, LossKind::gcv); }

double loss_value(GpModel& model, LossKind kind) {
    if (model.loss != kind) {
        model.loss = kind;
        model.c.clear();  // tau depends on the loss; spectrum does not
    }
    model.refresh();
    std::vector<double> resid = model.y;
    for (int l = 0; l < model.design.L; ++l)
        for (std::size_t k = model.design.offset[l]; k < model.design.offset[l + 1]; ++k)
            resid[k] -= model.tau_internal[l];
    if (kind == LossKind::nmll) {
        double quad = 0.0;
        for (std::size_t i = 0; i < resid.size(); ++i) quad += resid[i] * model.c[i];
        const double logdet = model.dense_path() ? model.dense->logdet : model.inv->logdet;
        return quad + logdet;
    }
    double num = 0.0;
    for (double v : model.c) num += v * v;
    double tr;
    if (model.dense_path()) {
        // trace(K^{-1}) = |Linv|_F^2 through N triangular solves
        const auto& llt = model.dense->llt;
        const Eigen::Index N = model.dense->K.rows();
        Eigen::MatrixXd Linv = Eigen::MatrixXd::Identity(N, N);
        llt.matrixL().solveInPlace(Linv);
        tr = Linv.squaredNorm();
    } else {
        tr = trace_inverse(*model.inv);
    }
    return num / (tr * tr);
}

Eigen::VectorXd optimal_tau(GpModel& model, LossKind kind) {
    if (model.loss != kind) {
        model.loss = kind;
        model.c.clear();
    }
    model.refresh();
    Eigen::VectorXd user(model.design.L);
    for (int l = 0; l < model.design.L; ++l)
        user[model.design.internal_to_user[l]] = model.tau_internal[l];
    return user;
}

namespace {

struct ParamPack {
    // offsets into the unconstrained vector; log-space except B
    int n_params = 0;
    int off_gamma = -1, off_eta = -1, off_ls = -1, off_B = -1, off_t = -1, off_b = -1;
    int d = 0, L = 0, s = 0;
    KernelFamily family{};

    static ParamPack layout(const GpModel& m) {
        ParamPack p;
        p.family = m.family;
        p.d = m.design.d;
        p.L = m.design.L;
        p.s = static_cast<int>(m.hyper.B.cols());
        int k = 0;
        p.off_gamma = k++;
        if (m.family == KernelFamily::se_dense) {
            p.off_ls = k;
            k += p.d;
        } else {
            p.off_eta = k;
            k += p.d;
        }
        p.off_B = k;
        k += p.L * p.s;
        p.off_t = k;
        k += p.L;
        if (m.family == KernelFamily::dsi_digital) {
            p.off_b = k;
            k += 4;
        }
        p.n_params = k;
        return p;
    }

    std::vector<double> pack(const Hyperparams& h) const {
        std::vector<double> th(n_params);
        th[off_gamma] = std::log(h.gamma);
        if (off_eta >= 0)
            for (int j = 0; j < d; ++j) th[off_eta + j] = std::log(h.eta[j]);
        if (off_ls >= 0)
            for (int j = 0; j < d; ++j) th[off_ls + j] = std::log(h.lengthscales[j]);
        for (int l = 0; l < L; ++l)
            for (int q = 0; q < s; ++q) th[off_B + l * s + q] = h.B(l, q);
        for (int l = 0; l < L; ++l) th[off_t + l] = std::log(h.t[l]);
        if (off_b >= 0)
            for (int a = 0; a < 4; ++a) th[off_b + a] = std::log(h.b[a]);
        return th;
    }

    void unpack(const std::vector<double>& th, Hyperparams& h) const {
        h.gamma = std::exp(th[off_gamma]);
        if (off_eta >= 0)
            for (int j = 0; j < d; ++j) h.eta[j] = std::exp(th[off_eta + j]);
        if (off_ls >= 0)
            for (int j = 0; j < d; ++j) h.lengthscales[j] = std::exp(th[off_ls + j]);
        for (int l = 0; l < L; ++l)
            for (int q = 0; q < s; ++q) h.B(l, q) = th[off_B + l * s + q];
        for (int l = 0; l < L; ++l) h.t[l] = std::exp(th[off_t + l]);
        if (off_b >= 0)
            for (int a = 0; a < 4; ++a) h.b[a] = std::exp(th[off_b + a]);
    }
};

double guarded_loss(GpModel& m, LossKind kind) {
    try {
        const double v = loss_value(m, kind);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    } catch (const SchurBreakdown&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

FitReport fit(GpModel& model, int steps, LossKind kind) {
    using clock = std::chrono::steady_clock;
    const ParamPack pp = ParamPack::layout(model);
    model.loss = kind;

    std::vector<double> theta = pp.pack(model.hyper);
    auto eval_at = [&](const std::vector<double>& th) {
        pp.unpack(th, model.hyper);
        model.invalidate();
        return guarded_loss(model, kind);
    };

    FitReport report;
    report.steps = steps;
    double best_loss = eval_at(theta);
    if (!std::isfinite(best_loss))
        throw FastMtgpError("fit: initial loss is not finite");
    std::vector<double> best_theta = theta;

    const int P = pp.n_params;
    std::vector<double> step(P, 0.1), grad_prev(P, 0.0);
    constexpr double kUp = 1.2, kDown = 0.5, kMax = 1.0, kMin = 1e-6;

    for (int it = 0; it < steps; ++it) {
        const auto tic = clock::now();
        std::vector<double> grad(P, 0.0);
        for (int i = 0; i < P; ++i) {
            const double h = 1e-4 * std::max(1.0, std::abs(theta[i]));
            std::vector<double> th = theta;
            th[i] = theta[i] + h;
            const double fp = eval_at(th);
            th[i] = theta[i] - h;
            const double fm = eval_at(th);
            grad[i] = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2.0 * h) : 0.0;
        }
        for (int i = 0; i < P; ++i) {
            const double s = grad[i] * grad_prev[i];
            if (s > 0.0)
                step[i] = std::min(step[i] * kUp, kMax);
            else if (s < 0.0) {
                step[i] = std::max(step[i] * kDown, kMin);
                grad[i] = 0.0;  // iRprop-: skip the update after a sign flip
            }
            if (grad[i] > 0.0)
                theta[i] -= step[i];
            else if (grad[i] < 0.0)
                theta[i] += step[i];
            grad_prev[i] = grad[i];
        }
        const double cur = eval_at(theta);
        if (cur < best_loss) {
            best_loss = cur;
            best_theta = theta;
        }
        report.loss_trace.push_back(best_loss);
        report.step_seconds.push_back(std::chrono::duration<double>(clock::now() - tic).count());
    }

    pp.unpack(best_theta, model.hyper);
    model.invalidate();
    model.refresh();
    report.final_loss = best_loss;
    report.jitter_escalations = model.jitter_escalations;
    report.tau = optimal_tau(model, kind);
    return report;
}

namespace {

double kernel_against_data(const GpModel& m, int internal_l, const double* x,
                           const Eigen::MatrixXd& R_int, const SpatialKernel& q,
                           const std::vector<double>& weights) {
    // sum_i K((l,x),(l_i,x_i)) * weights_i over all stored points
    double acc = 0.0;
    for (int lp = 0; lp < m.design.L; ++lp) {
        const double r = R_int(internal_l, lp);
        for (std::size_t i = 0; i < m.design.n[lp]; ++i)
            acc += r * q(x, m.design.point(lp, i), m.design.d) * weights[m.design.offset[lp] + i];
    }
    return acc;
}

}  // namespace

double posterior_mean(const GpModel& model, int user_task, const double* x) {
    if (!model.fresh()) throw FastMtgpError("posterior_mean: model not refreshed");
    const int l = model.design.user_to_internal.at(user_task);
    const Eigen::MatrixXd R_int = to_internal(user_task_gram(model.hyper), model.design);
    const SpatialKernel q = SpatialKernel::from(model.hyper, model.family);
    return model.tau_internal[l] + kernel_against_data(model, l, x, R_int, q, model.c);
}

std::vector<double> posterior_mean_batch(const GpModel& model, int user_task,
                                         const std::vector<double>& X, std::size_t count) {
    if (!model.fresh()) throw FastMtgpError("posterior_mean_batch: model not refreshed");
    const int l = model.design.user_to_internal.at(user_task);
    const Eigen::MatrixXd R_int = to_internal(user_task_gram(model.hyper), model.design);
    const SpatialKernel q = SpatialKernel::from(model.hyper, model.family);
    std::vector<double> out(count);
    parallel_for(count, [&](std::size_t i) {
        out[i] = model.tau_internal[l] +
                 kernel_against_data(model, l, X.data() + i * model.design.d, R_int, q, model.c);
    });
    return out;
}

double posterior_cov(const GpModel& model, int user_task, const double* x,
                     int user_task2, const double* xp) {
    if (!model.fresh()) throw FastMtgpError("posterior_cov: model not refreshed");
    const LdDesign& dz = model.design;
    const int l = dz.user_to_internal.at(user_task);
    const int lp = dz.user_to_internal.at(user_task2);
    const Eigen::MatrixXd R_int = to_internal(user_task_gram(model.hyper), dz);
    const SpatialKernel q = SpatialKernel::from(model.hyper, model.family);
    std::vector<double> kxp(dz.N);
    for (int j = 0; j < dz.L; ++j)
        for (std::size_t i = 0; i < dz.n[j]; ++i)
            kxp[dz.offset[j] + i] = R_int(lp, j) * q(xp, dz.point(j, i), dz.d);
    std::vector<double> w;
    if (model.dense_path()) {
        Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(kxp.data(), static_cast<Eigen::Index>(kxp.size()));
        Eigen::VectorXd sol = dense_solve(*model.dense, rhs);
        w.assign(sol.data(), sol.data() + sol.size());
    } else {
        w = solve(*model.inv, kxp);
    }
    const double prior = R_int(l, lp) * q(x, xp, dz.d);
    return prior - kernel_against_data(model, l, x, R_int, q, w);
}

std::string model_to_json(const GpModel& model) {
    json doc;
    doc["kind"] = model.design.kind == SeqKind::lattice ? "lattice" : "digital";
    doc["family"] = model.family == KernelFamily::si_lattice    ? "si-lattice"
                    : model.family == KernelFamily::dsi_digital ? "dsi-digital"
                                                                : "se-dense";
    doc["loss"] = model.loss == LossKind::nmll ? "nmll" : "gcv";
    doc["d"] = model.design.d;
    doc["seed"] = model.design.seed;
    std::vector<int> m_user(model.design.L);
    for (int l = 0; l < model.design.L; ++l)
        m_user[model.design.internal_to_user[l]] = model.design.m[l];
    doc["m"] = m_user;
    const Hyperparams& h = model.hyper;
    doc["hyper"] = {{"gamma", h.gamma},     {"eta", h.eta},
                    {"si_alpha", h.si_alpha}, {"b", h.b},
                    {"t", h.t},             {"xi", h.xi},
                    {"tau", h.tau},         {"lengthscales", h.lengthscales}};
    std::vector<std::vector<double>> B(h.B.rows());
    for (Eigen::Index l = 0; l < h.B.rows(); ++l) {
        B[l].resize(h.B.cols());
        for (Eigen::Index k = 0; k < h.B.cols(); ++k) B[l][k] = h.B(l, k);
    }
    doc["hyper"]["B"] = B;
    std::vector<std::vector<double>> y_user(model.design.L);
    for (int l = 0; l < model.design.L; ++l) {
        const int u = model.design.internal_to_user[l];
        y_user[u].assign(model.y.begin() + model.design.offset[l],
                         model.y.begin() + model.design.offset[l + 1]);
    }
    doc["y"] = y_user;
    return doc.dump(1);
}

GpModel model_from_json(const std::string& text) {
    const json doc = json::parse(text);
    const SeqKind kind = doc.at("kind") == "lattice" ? SeqKind::lattice : SeqKind::digital;
    const std::string fam = doc.at("family");
    const KernelFamily family = fam == "si-lattice"    ? KernelFamily::si_lattice
                                : fam == "dsi-digital" ? KernelFamily::dsi_digital
                                                       : KernelFamily::se_dense;
    const std::vector<int> m_user = doc.at("m");
    LdDesign dz = make_design(kind, doc.at("d"), m_user, doc.at("seed"));
    Hyperparams h;
    const json& hj = doc.at("hyper");
    h.gamma = hj.at("gamma");
    h.eta = hj.at("eta").get<std::vector<double>>();
    h.si_alpha = hj.at("si_alpha");
    h.b = hj.at("b");
    h.t = hj.at("t").get<std::vector<double>>();
    h.xi = hj.at("xi").get<std::vector<double>>();
    h.tau = hj.at("tau").get<std::vector<double>>();
    h.lengthscales = hj.at("lengthscales").get<std::vector<double>>();
    const std::vector<std::vector<double>> B = hj.at("B");
    h.B.resize(static_cast<Eigen::Index>(B.size()), B.empty() ? 0 : static_cast<Eigen::Index>(B[0].size()));
    for (std::size_t l = 0; l < B.size(); ++l)
        for (std::size_t k = 0; k < B[l].size(); ++k)
            h.B(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = B[l][k];
    const std::vector<std::vector<double>> y_user = doc.at("y");
    const LossKind loss = doc.at("loss") == "gcv" ? LossKind::gcv : LossKind::nmll;
    return make_model(std::move(dz), family, std::move(h), y_user, loss);
}

}  // namespace fastmtgp
