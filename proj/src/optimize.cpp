#include "censmed/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace censmed {

namespace {

double safe_eval(const Objective& f, const Eigen::VectorXd& x, int& counter) {
    ++counter;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opts) {
    const Eigen::Index n = x0.size();
    std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), x0);
    std::vector<double> values(static_cast<std::size_t>(n + 1));
    int evals = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& v = simplex[static_cast<std::size_t>(i + 1)];
        v(i) += opts.initial_step * std::max(1.0, std::abs(v(i)));
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = safe_eval(f, simplex[i], evals);

    std::vector<std::size_t> order(simplex.size());
    bool converged = false;
    int iter = 0;
    while (evals < opts.max_evals) {
        ++iter;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        if (std::abs(values[worst] - values[best]) < opts.f_tol) {
            converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
        const double f_reflected = safe_eval(f, reflected, evals);
        if (f_reflected < values[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
            const double f_expanded = safe_eval(f, expanded, evals);
            if (f_expanded < f_reflected) {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < values[second]) {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }
        const bool outside = f_reflected < values[worst];
        const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                                   : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
        const double f_contracted = safe_eval(f, contracted, evals);
        if (f_contracted < std::min(f_reflected, values[worst])) {
            simplex[worst] = contracted;
            values[worst] = f_contracted;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == best) continue;
            simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
            values[i] = safe_eval(f, simplex[i], evals);
        }
    }
    const auto best_it = std::min_element(values.begin(), values.end());
    OptimResult out;
    out.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    out.value = *best_it;
    out.n_evals = evals;
    out.n_iter = iter;
    out.converged = converged;
    return out;
}

Eigen::VectorXd fd_gradient(const Objective& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::abs(x(i)));
        probe(i) = x(i) + h;
        const double up = f(probe);
        probe(i) = x(i) - h;
        const double down = f(probe);
        probe(i) = x(i);
        g(i) = (up - down) / (2.0 * h);
    }
    return g;
}

OptimResult bfgs(const Objective& f, const Eigen::VectorXd& x0, const BfgsOptions& opts) {
    const Eigen::Index n = x0.size();
    int evals = 0;
    auto grad = [&](const Eigen::VectorXd& x) {
        evals += static_cast<int>(2 * n);
        return fd_gradient(f, x, opts.rel_step);
    };

    Eigen::VectorXd x = x0;
    double fx = safe_eval(f, x, evals);
    Eigen::VectorXd g = grad(x);
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
    bool scaled = false;

    OptimResult out;
    int iter = 0;
    int stalled = 0;
    for (; iter < opts.max_iter; ++iter) {
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) break;
        Eigen::VectorXd direction = -inv_hessian * g;
        double slope = g.dot(direction);
        if (!(slope < 0.0)) {
            inv_hessian.setIdentity();
            direction = -g;
            slope = -g.squaredNorm();
        }
        double step = 1.0;
        Eigen::VectorXd x_new;
        double f_new = fx;
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            x_new = x + step * direction;
            f_new = safe_eval(f, x_new, evals);
            if (f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Eigen::VectorXd g_new = grad(x_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd yv = g_new - g;
        const double sy = s.dot(yv);
        if (sy > 1e-12 * s.norm() * yv.norm()) {
            if (!scaled) {
                inv_hessian *= sy / yv.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * s * yv.transpose();
            inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
        }
        const double decrease = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        stalled = decrease < opts.f_rel_tol * (1.0 + std::abs(fx)) ? stalled + 1 : 0;
        if (stalled >= 2) {
            ++iter;
            break;
        }
    }
    out.x = x;
    out.value = fx;
    out.grad_inf_norm = g.lpNorm<Eigen::Infinity>();
    out.n_evals = evals;
    out.n_iter = iter;
    out.converged = out.grad_inf_norm < opts.grad_tol;
    return out;
}

}  // namespace censmed
