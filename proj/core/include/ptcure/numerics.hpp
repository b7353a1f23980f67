#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ptcure {

/// Small dense square matrix, row major. Sized for Hessians of a handful of
/// parameters, not for linear algebra at scale.
class Matrix {
  public:
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::size_t size() const { return n_; }

  private:
    std::size_t n_;
    std::vector<double> a_;
};

using Objective = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

/// Central-difference gradient with steps cbrt(eps) * max(1, |x_j|).
std::vector<double> numeric_gradient(const Objective& f, std::span<const double> x);

/// Central-difference Hessian with per-coordinate steps
/// h_j = max(1e-5, 1e-5 |x_j|). Symmetric by construction.
Matrix numeric_hessian(const Objective& f, std::span<const double> x);

/// Inverse via Cholesky; nullopt when the (symmetrized) input is not
/// positive definite.
std::optional<Matrix> invert_spd(const Matrix& a);

struct MinimizeOptions {
    int max_iterations = 500;
    double relative_tolerance = 1e-8; // on objective improvement
    double gradient_tolerance = 1e-5; // scaled by 1 + |f|
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace; // accepted objective values, one per iteration
};

/// BFGS with backtracking line search. Converged means both the relative
/// improvement and the gradient-norm criteria hold. Non-finite objective
/// regions are treated as uphill and backed away from.
MinimizeResult minimize_bfgs(const Objective& f, const GradientFn& grad,
                             std::vector<double> x0, const MinimizeOptions& opts = {});

/// Nelder-Mead simplex, for objectives without a usable gradient. Converged
/// means the simplex collapsed in both value spread and extent.
MinimizeResult minimize_nelder_mead(const Objective& f, std::vector<double> x0,
                                    const MinimizeOptions& opts = {});

} // namespace ptcure
