#include "ptcure/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ptcure {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

} // namespace

std::vector<double> numeric_gradient(const Objective& f, std::span<const double> x) {
    const double rel = std::cbrt(std::numeric_limits<double>::epsilon());
    std::vector<double> xt(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double h = rel * std::max(1.0, std::abs(x[j]));
        xt[j] = x[j] + h;
        const double fp = f(xt);
        xt[j] = x[j] - h;
        const double fm = f(xt);
        xt[j] = x[j];
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Matrix numeric_hessian(const Objective& f, std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> h(n);
    for (std::size_t j = 0; j < n; ++j)
        h[j] = std::max(1e-5, 1e-5 * std::abs(x[j]));

    std::vector<double> xt(x.begin(), x.end());
    const double f0 = f(xt);
    Matrix hess(n);

    for (std::size_t j = 0; j < n; ++j) {
        xt[j] = x[j] + h[j];
        const double fp = f(xt);
        xt[j] = x[j] - h[j];
        const double fm = f(xt);
        xt[j] = x[j];
        hess(j, j) = (fp - 2.0 * f0 + fm) / (h[j] * h[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            xt[j] = x[j] + h[j];
            xt[k] = x[k] + h[k];
            const double fpp = f(xt);
            xt[k] = x[k] - h[k];
            const double fpm = f(xt);
            xt[j] = x[j] - h[j];
            const double fmm = f(xt);
            xt[k] = x[k] + h[k];
            const double fmp = f(xt);
            xt[j] = x[j];
            xt[k] = x[k];
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[j] * h[k]);
            hess(j, k) = v;
            hess(k, j) = v;
        }
    }
    return hess;
}

std::optional<Matrix> invert_spd(const Matrix& a) {
    const std::size_t n = a.size();

    // Cholesky on the symmetrized input; failure means not positive definite.
    Matrix chol(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.5 * (a(i, j) + a(j, i));
            for (std::size_t k = 0; k < j; ++k)
                s -= chol(i, k) * chol(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s))
                    return std::nullopt;
                chol(i, i) = std::sqrt(s);
            } else {
                chol(i, j) = s / chol(j, j);
            }
        }
    }

    // Invert column by column: solve L (L^T x) = e_j.
    Matrix inv(n);
    std::vector<double> y(n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k)
                s -= chol(i, k) * y[k];
            y[i] = s / chol(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k)
                s -= chol(k, ii) * inv(k, col);
            inv(ii, col) = s / chol(ii, ii);
        }
    }
    return inv;
}

MinimizeResult minimize_bfgs(const Objective& f, const GradientFn& grad,
                             std::vector<double> x0, const MinimizeOptions& opts) {
    const std::size_t n = x0.size();
    MinimizeResult res;
    res.x = std::move(x0);
    res.value = f(res.x);
    res.trace.push_back(res.value);
    if (!std::isfinite(res.value))
        return res; // cannot start from a non-finite point

    std::vector<double> g = grad(res.x);
    Matrix hinv(n); // inverse Hessian approximation, starts as identity
    for (std::size_t i = 0; i < n; ++i)
        hinv(i, i) = 1.0;

    std::vector<double> dir(n), xt(n), gt(n), s(n), yv(n);
    constexpr double kArmijo = 1e-4;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter;

        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                d -= hinv(i, j) * g[j];
            dir[i] = d;
        }
        double slope = dot(dir, g);
        if (!(slope < 0.0)) {
            // Curvature information went bad; restart from steepest descent.
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j)
                    hinv(i, j) = (i == j) ? 1.0 : 0.0;
                dir[i] = -g[i];
            }
            slope = dot(dir, g);
            if (!(slope < 0.0))
                break; // gradient is zero or non-finite
        }

        double step = 1.0;
        double ft = kInf;
        bool accepted = false;
        while (true) {
            // Once the expected decrease drops below roundoff in f, no step
            // along this direction is representable; stop probing.
            if (step * (-slope) < 4.0 * std::numeric_limits<double>::epsilon() *
                                      (1.0 + std::abs(res.value)))
                break;
            for (std::size_t i = 0; i < n; ++i)
                xt[i] = res.x[i] + step * dir[i];
            ft = f(xt);
            if (std::isfinite(ft) && ft <= res.value + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break; // stalled at the resolution floor; convergence check below

        gt = grad(xt);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xt[i] - res.x[i];
            yv[i] = gt[i] - g[i];
        }
        const double sy = dot(s, yv);
        if (sy > 1e-12 * norm2(s) * norm2(yv)) {
            // BFGS update of the inverse Hessian.
            const double rho = 1.0 / sy;
            std::vector<double> hy(n);
            for (std::size_t i = 0; i < n; ++i) {
                double v = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    v += hinv(i, j) * yv[j];
                hy[i] = v;
            }
            const double yhy = dot(yv, hy);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    hinv(i, j) += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
        }

        const double improvement = res.value - ft;
        res.x = xt;
        res.value = ft;
        g = gt;
        res.trace.push_back(res.value);

        const bool small_improvement =
            improvement <= opts.relative_tolerance * (1.0 + std::abs(res.value));
        const bool small_gradient = norm2(g) < opts.gradient_tolerance * (1.0 + std::abs(res.value));
        if (small_improvement && small_gradient) {
            res.converged = true;
            break;
        }
    }

    if (!res.converged && std::isfinite(res.value))
        res.converged = norm2(grad(res.x)) < opts.gradient_tolerance * (1.0 + std::abs(res.value));
    return res;
}

MinimizeResult minimize_nelder_mead(const Objective& f, std::vector<double> x0,
                                    const MinimizeOptions& opts) {
    const std::size_t n = x0.size();
    MinimizeResult res;

    // Initial simplex: x0 plus a bump along each axis.
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        pts[i + 1][i] += (x0[i] != 0.0) ? 0.05 * std::abs(x0[i]) : 0.05;
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = f(pts[i]);
        if (!std::isfinite(vals[i]))
            vals[i] = kInf;
    }

    auto order = [&] {
        for (std::size_t i = 1; i <= n; ++i) {
            std::size_t j = i;
            while (j > 0 && vals[j] < vals[j - 1]) {
                std::swap(vals[j], vals[j - 1]);
                std::swap(pts[j], pts[j - 1]);
                --j;
            }
        }
    };
    order();
    res.trace.push_back(vals[0]);

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto eval = [&](const std::vector<double>& p) {
        const double v = f(p);
        return std::isfinite(v) ? v : kInf;
    };

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        res.iterations = iter;

        for (std::size_t j = 0; j < n; ++j) {
            double c = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                c += pts[i][j];
            centroid[j] = c / n;
        }

        for (std::size_t j = 0; j < n; ++j)
            xr[j] = centroid[j] + (centroid[j] - pts[n][j]);
        const double fr = eval(xr);

        if (fr < vals[0]) {
            for (std::size_t j = 0; j < n; ++j)
                xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[n][j]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const bool outside = fr < vals[n];
            for (std::size_t j = 0; j < n; ++j)
                xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j])
                                : centroid[j] - 0.5 * (centroid[j] - pts[n][j]);
            const double fc = eval(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
        order();
        res.trace.push_back(vals[0]);

        double extent = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                extent = std::max(extent, std::abs(pts[i][j] - pts[0][j]));
        const double spread = vals[n] - vals[0];
        if (spread <= opts.relative_tolerance * (1.0 + std::abs(vals[0])) && extent < 1e-7) {
            res.converged = true;
            break;
        }
    }

    res.x = pts[0];
    res.value = vals[0];
    return res;
}

} // namespace ptcure
