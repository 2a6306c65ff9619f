#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "fastmtgp/bench.hpp"
#include "fastmtgp/cubature.hpp"
#include "fastmtgp/gp_core.hpp"
#include "fastmtgp/problems.hpp"
#include "fastmtgp/transforms.hpp"

namespace py = pybind11;
using namespace fastmtgp;

namespace {

SeqKind parse_kind(const std::string& name) {
    if (name == "lattice") return SeqKind::lattice;
    if (name == "digital") return SeqKind::digital;
    throw std::invalid_argument("kind must be 'lattice' or 'digital'");
}

std::vector<int> m_of_sizes(const std::vector<std::size_t>& n) {
    std::vector<int> m;
    m.reserve(n.size());
    for (std::size_t v : n) m.push_back(log2_exact(v));
    return m;
}

// Per-task point sets in user order, each a flat row-major n_l x d list.
std::vector<std::vector<double>> design_points(const std::string& kind, int d,
                                               const std::vector<std::size_t>& n,
                                               std::uint64_t seed) {
    LdDesign dz = make_design(parse_kind(kind), d, m_of_sizes(n), seed);
    std::vector<std::vector<double>> out(dz.L);
    for (int u = 0; u < dz.L; ++u) out[u] = dz.X[dz.user_to_internal[u]];
    return out;
}

struct PyModel {
    GpModel model;
    LossKind loss = LossKind::nmll;

    PyModel(const std::string& kernel, int d, const std::vector<std::size_t>& n,
            std::uint64_t seed, const std::vector<std::vector<double>>& y,
            const std::string& loss_name, int task_rank, double jitter)
        : loss(parse_loss(loss_name)) {
        const KernelFamily family = parse_kernel(kernel);
        const SeqKind kind =
            kernel == "si-lattice" ? SeqKind::lattice : SeqKind::digital;
        LdDesign dz = make_design(kind, d, m_of_sizes(n), seed);
        std::vector<double> y_all;
        for (const auto& v : y) y_all.insert(y_all.end(), v.begin(), v.end());
        Hyperparams h = init_hyperparams(family, d, dz.L, task_rank, y_all, jitter, seed);
        model = make_model(std::move(dz), family, std::move(h), y, loss);
    }

    explicit PyModel(GpModel m) : model(std::move(m)), loss(model.loss) {}

    py::dict fit_steps(int steps) {
        FitReport rep = fit(model, steps, loss);
        py::dict d;
        d["steps"] = rep.steps;
        d["final_loss"] = rep.final_loss;
        d["loss_trace"] = rep.loss_trace;
        d["step_seconds"] = rep.step_seconds;
        d["jitter_escalations"] = rep.jitter_escalations;
        d["tau"] = std::vector<double>(rep.tau.data(), rep.tau.data() + rep.tau.size());
        return d;
    }

    double loss_now() { return loss_value(model, loss); }

    std::vector<double> tau() {
        const Eigen::VectorXd t = optimal_tau(model, loss);
        return std::vector<double>(t.data(), t.data() + t.size());
    }

    double mean_at(int task, const std::vector<double>& x) {
        check_x(x);
        model.refresh();
        return posterior_mean(model, task, x.data());
    }

    std::vector<double> mean_batch(int task, const std::vector<std::vector<double>>& X) {
        model.refresh();
        std::vector<double> flat;
        flat.reserve(X.size() * static_cast<std::size_t>(model.design.d));
        for (const auto& row : X) {
            check_x(row);
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return posterior_mean_batch(model, task, flat, X.size());
    }

    double cov_at(int task, const std::vector<double>& x, int task2,
                  const std::vector<double>& xp) {
        check_x(x);
        check_x(xp);
        model.refresh();
        return posterior_cov(model, task, x.data(), task2, xp.data());
    }

    py::tuple cubature() {
        if (model.design.L == 1) {
            auto [mu, var] = single_task_cubature(model);
            Eigen::VectorXd m(1);
            Eigen::MatrixXd S(1, 1);
            m[0] = mu;
            S(0, 0) = var;
            return py::make_tuple(m, S);
        }
        CubatureResult r = multitask_cubature(model);
        return py::make_tuple(r.mu, r.Sigma);
    }

    std::string to_json() const { return model_to_json(model); }

   private:
    void check_x(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != model.design.d)
            throw std::invalid_argument("point has wrong dimension");
    }
};

}  // namespace

PYBIND11_MODULE(fastmtgp, mod) {
    mod.doc() =
        "Fast multitask Gaussian process regression and Bayesian cubature on "
        "rank-1 lattices and digital nets";

    mod.def("design_points", &design_points, py::arg("kind"), py::arg("d"), py::arg("n"),
            py::arg("seed") = 0,
            "Shifted per-task point sets (user task order, flat row-major blocks)");

    mod.def(
        "fwht",
        [](std::vector<double> a) {
            fwht(a.data(), a.size());
            return a;
        },
        "Orthonormal fast Walsh-Hadamard transform (self-inverse)");
    mod.def(
        "fft_bitrev",
        [](std::vector<cplx> a) {
            fft_bitrev(a.data(), a.size());
            return a;
        },
        "Unitary DFT composed with bit reversal (the lattice-path forward transform)");
    mod.def(
        "fft_bitrev_inv",
        [](std::vector<cplx> a) {
            fft_bitrev_inv(a.data(), a.size());
            return a;
        },
        "Inverse of fft_bitrev");

    mod.def("si_bernoulli", &si_bernoulli_1d, py::arg("x"), py::arg("xp"), py::arg("alpha"),
            "Shift-invariant Bernoulli-polynomial base kernel");
    mod.def("dsi_order", &dsi_order_1d, py::arg("order"), py::arg("x"), py::arg("xp"),
            "Digitally-shift-invariant Walsh base kernel of the given order");

    mod.def("problem_names", &problem_names);
    mod.def(
        "problem_info",
        [](const std::string& name) {
            const Problem& p = get_problem(name);
            py::dict d;
            d["name"] = p.name;
            d["d"] = p.d;
            d["L"] = p.L;
            d["ref_integral"] = p.ref_integral;
            return d;
        },
        py::arg("name"));
    mod.def(
        "problem_eval",
        [](const std::string& name, int level, const std::vector<double>& x) {
            const Problem& p = get_problem(name);
            if (static_cast<int>(x.size()) != p.d)
                throw std::invalid_argument("point has wrong dimension");
            return p.eval(level, x.data());
        },
        py::arg("name"), py::arg("level"), py::arg("x"));

    mod.def(
        "optimal_weights",
        [](const Eigen::VectorXd& mu, const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& chi) {
            auto [w, mse] = optimal_weights(mu, Sigma, chi);
            return py::make_tuple(w, mse);
        },
        py::arg("mu"), py::arg("Sigma"), py::arg("chi"),
        "Task combination weights minimizing the posterior MSE, with its minimum");

    py::class_<PyModel>(mod, "Model")
        .def(py::init<const std::string&, int, const std::vector<std::size_t>&, std::uint64_t,
                      const std::vector<std::vector<double>>&, const std::string&, int, double>(),
             py::arg("kernel"), py::arg("d"), py::arg("n"), py::arg("seed"), py::arg("y"),
             py::arg("loss") = "nmll", py::arg("task_rank") = 1, py::arg("jitter") = 1e-8)
        .def("fit", &PyModel::fit_steps, py::arg("steps"))
        .def("loss", &PyModel::loss_now)
        .def("tau", &PyModel::tau)
        .def("posterior_mean", &PyModel::mean_at, py::arg("task"), py::arg("x"))
        .def("posterior_mean_batch", &PyModel::mean_batch, py::arg("task"), py::arg("X"))
        .def("posterior_cov", &PyModel::cov_at, py::arg("task"), py::arg("x"), py::arg("task2"),
             py::arg("xp"))
        .def("cubature", &PyModel::cubature)
        .def("to_json", &PyModel::to_json)
        .def_static("from_json",
                    [](const std::string& text) { return PyModel(model_from_json(text)); });
}
