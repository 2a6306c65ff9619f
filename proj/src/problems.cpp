#include "fastmtgp/problems.hpp"

#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace fastmtgp {

namespace embedded {
extern const char* const reference_json;
}

double norminv(double p) {
    // Wichura, Applied Statistics 37 (1988), algorithm AS 241 (PPND16)
    if (!(p > 0.0 && p < 1.0)) throw FastMtgpError("norminv: p outside (0,1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                             1.3314166789178437745e2) * r + 3.3871328727963666080);
        const double den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                             4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                                 2.41780725177450611770e-1) * r + 1.27045825245236838258) * r +
                               3.64784832476320460504) * r + 5.76949722146069140550) * r +
                             4.63033784615654529590) * r + 1.42343711074968357734);
        const double den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                                 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                               6.89767334985100004550e-1) * r + 1.67638483018380384940) * r +
                             2.05319162663775882187) * r + 1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                                 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                               2.96560571828504891230e-1) * r + 1.78482653991729133580) * r +
                             5.46378491116411436990) * r + 6.65790464350110377720);
        const double den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                                 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                               1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                             5.99832206555887937690e-1) * r + 1.0);
        val = num / den;
    }
    return q < 0.0 ? -val : val;
}

namespace {

constexpr double kEps = 0x1p-53;
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kE = 2.71828182845904523536028747135266250;

double clamp01(double v) { return std::min(std::max(v, kEps), 1.0 - kEps); }

}  // namespace

double rosenbrock(int level, const double* x) {
    const double x1 = 4.0 * x[0] - 2.0;
    const double x2 = 4.0 * x[1] - 2.0;
    const double g = x2 - x1 * x1;
    const double f3 = 100.0 * g * g + (1.0 - x1) * (1.0 - x1);
    if (level == 3) return f3;
    if (level == 2)
        return 50.0 * g * g + (-2.0 - x1) * (-2.0 - x1) - 80.0 - 0.25 * x1 * x2;
    return (f3 - 4.0 - 0.5 * x1 - 0.5 * x2) / (10.0 + 0.25 * x1 + 0.25 * x2);
}

double ackley(int level, const double* x) {
    const double c = level == 1 ? 0.0 : 2.0 * kPi;
    double sq = 0.0, cs = 0.0;
    for (int j = 0; j < 4; ++j) {
        const double t = 65.536 * x[j] - 32.768;
        sq += t * t;
        cs += std::cos(c * t);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / 4.0)) - std::exp(cs / 4.0) + 20.0 + kE;
}

double borehole(int level, const double* x) {
    double u[8];
    for (int j = 0; j < 8; ++j) u[j] = clamp01(x[j]);
    const double c1 = level == 1 ? 2.0 : 5.0;
    const double c2 = level == 1 ? 1.0 : 1.5;
    const double rw = 0.1 + 0.0161812 * norminv(u[0]);
    const double ri = std::exp(7.71 + 1.0056 * norminv(u[1]));
    const double tu = 63070.0 + u[2] * (115600.0 - 63070.0);
    const double hu = 990.0 + u[3] * (1110.0 - 990.0);
    const double tl = 63.1 + u[4] * (116.0 - 63.1);
    const double hl = 700.0 + u[5] * (820.0 - 700.0);
    const double lb = 1120.0 + u[6] * (1680.0 - 1120.0);
    const double kw = 9855.0 + u[7] * (12045.0 - 9855.0);
    const double lr = std::log(ri / rw);
    return c1 * kPi * tu * (hu - hl) /
           (lr * (c2 + 2.0 * lb * tu / (lr * rw * rw * kw) + tu / tl));
}

double elliptic_pde(int level, const double* x) {
    // -d/du(e^{a(u,x)} dF/du) = 1 on (0,1), F(0) = F(1) = 0,
    // a(u,x) = sum_j norminv(x_j) sin(pi j u) / j; 3-point scheme with e^a at
    // interval midpoints on 2^{1+level} cells, tridiagonal solve, max_k F_k.
    constexpr int d = 16;
    const int mm = 1 << (1 + level);
    const double h = 1.0 / mm;
    double z[d];
    for (int j = 0; j < d; ++j) z[j] = norminv(clamp01(x[j]));
    std::vector<double> c(mm);
    for (int k = 0; k < mm; ++k) {
        const double umid = (k + 0.5) * h;
        double a = 0.0;
        for (int j = 0; j < d; ++j) a += z[j] * std::sin(kPi * (j + 1) * umid) / (j + 1);
        c[k] = std::exp(a);
    }
    const int nin = mm - 1;
    std::vector<double> diag(nin), lower(nin > 1 ? nin - 1 : 0), cp(lower.size()), dp(nin);
    for (int i = 0; i < nin; ++i) diag[i] = c[i] + c[i + 1];
    for (int i = 0; i + 1 < nin; ++i) lower[i] = -c[i + 1];
    const double rhs = h * h;
    dp[0] = rhs / diag[0];
    if (nin > 1) {
        cp[0] = lower[0] / diag[0];
        for (int k = 1; k < nin; ++k) {
            const double denom = diag[k] - lower[k - 1] * cp[k - 1];
            if (k < nin - 1) cp[k] = lower[k] / denom;
            dp[k] = (rhs - lower[k - 1] * dp[k - 1]) / denom;
        }
        for (int k = nin - 2; k >= 0; --k) dp[k] -= cp[k] * dp[k + 1];
    }
    double best = dp[0];
    for (int k = 1; k < nin; ++k) best = std::max(best, dp[k]);
    return best;
}

namespace {

std::map<std::string, Problem> build_registry() {
    const nlohmann::json doc = nlohmann::json::parse(embedded::reference_json);
    const auto& integrals = doc.at("integrals");
    auto refs = [&](const std::string& name, int L) {
        std::vector<double> v(L);
        for (int l = 1; l <= L; ++l) v[l - 1] = integrals.at(name).at(std::to_string(l));
        return v;
    };
    std::map<std::string, Problem> reg;
    reg["rosenbrock"] = {"rosenbrock", 2, 3, &rosenbrock, refs("rosenbrock", 3)};
    reg["ackley"] = {"ackley", 4, 2, &ackley, refs("ackley", 2)};
    reg["borehole"] = {"borehole", 8, 2, &borehole, refs("borehole", 2)};
    reg["elliptic"] = {"elliptic", 16, 3, &elliptic_pde, refs("elliptic", 3)};
    return reg;
}

}  // namespace

const Problem& get_problem(const std::string& name) {
    static const std::map<std::string, Problem> reg = build_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw FastMtgpError("unknown problem: " + name);
    return it->second;
}

std::vector<std::string> problem_names() {
    return {"ackley", "borehole", "elliptic", "rosenbrock"};
}

std::vector<double> eval_batch(const Problem& p, int level,
                               const std::vector<double>& X, std::size_t count) {
    if (level < 1 || level > p.L) throw FastMtgpError("eval_batch: level out of range");
    std::vector<double> out(count);
    parallel_for(count, [&](std::size_t i) {
        out[i] = p.f(level, X.data() + i * static_cast<std::size_t>(p.d));
    });
    return out;
}

}  // namespace fastmtgp
