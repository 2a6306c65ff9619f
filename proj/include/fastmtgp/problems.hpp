#pragma once

#include <string>
#include <vector>

#include "fastmtgp/common.hpp"

// Multifidelity benchmark problems on [0,1)^d (task index 1-based; higher
// task = higher fidelity) plus frozen reference integrals of each task
// (scrambled-QMC constants generated by scripts/reference_values.py).

namespace fastmtgp {

// Standard normal quantile (Wichura's PPND16 rational approximation).
double norminv(double p);

double rosenbrock(int level, const double* x);   // d=2, L=3, domain [-2,2]^2
double ackley(int level, const double* x);       // d=4, L=2
double borehole(int level, const double* x);     // d=8, L=2
double elliptic_pde(int level, const double* x); // d=16, L=3

struct Problem {
    std::string name;
    int d = 0;
    int L = 0;
    double (*f)(int, const double*) = nullptr;
    std::vector<double> ref_integral;  // [level-1], frozen reference values

    double eval(int level, const double* x) const { return f(level, x); }
};

const Problem& get_problem(const std::string& name);
std::vector<std::string> problem_names();

// f(level, row i of X) for i < count, parallel over points.
std::vector<double> eval_batch(const Problem& p, int level,
                               const std::vector<double>& X, std::size_t count);

}  // namespace fastmtgp
