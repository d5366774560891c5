#include "censmed/mcem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "censmed/censored_normal.hpp"
#include "censmed/distributions.hpp"
#include "censmed/error.hpp"
#include "censmed/logistic.hpp"
#include "censmed/observed_likelihood.hpp"

namespace censmed {

void McemConfig::validate() const {
    if (J < 1 || K < 2 || !(tol > 0.0) || max_iter < 1 || !(grid_halfwidth > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "MCEM config requires J >= 1, K >= 2, and positive tol, max_iter, grid_halfwidth");
    }
}

double GridWeights::sample(double u) const {
    const auto* begin = cumulative.data();
    const auto* end = begin + cumulative.size();
    const auto* it = std::lower_bound(begin, end, u);
    const auto idx = std::min<std::ptrdiff_t>(it - begin, cumulative.size() - 1);
    return points(idx);
}

namespace {

GridWeights grid_weights(int y, double mu, double sigma, double eta_without_m, double beta_m,
                         double assay_limit, int K, double halfwidth) {
    double hi = std::min(assay_limit, mu + halfwidth * sigma);
    double lo = mu - halfwidth * sigma;
    if (!(lo < hi)) lo = hi - halfwidth * sigma;
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        std::ostringstream os;
        os << "empty grid for mediator mean " << mu << ", sd " << sigma << ", limit " << assay_limit;
        throw Error(ErrorKind::DegenerateGrid, os.str());
    }
    GridWeights g;
    g.points.resize(K);
    g.weights.resize(K);
    g.cumulative.resize(K);
    const double step = (hi - lo) / (K - 1);
    double max_log = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        const double m = k + 1 == K ? hi : lo + step * k;
        const double eta = eta_without_m + beta_m * m;
        // log Bern(y; expit(eta)) = y * eta - log(1 + e^eta)
        const double t = (m - mu) / sigma;
        const double lw = y * eta - log1p_exp(eta) - 0.5 * t * t;
        g.points(k) = m;
        g.weights(k) = lw;
        max_log = std::max(max_log, lw);
    }
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        g.weights(k) = std::exp(g.weights(k) - max_log);
        total += g.weights(k);
    }
    double running = 0.0;
    for (int k = 0; k < K; ++k) {
        g.weights(k) /= total;
        running += g.weights(k);
        g.cumulative(k) = running;
    }
    g.cumulative(K - 1) = 1.0;
    return g;
}

}  // namespace

GridWeights grid_conditional_weights(int y, const Eigen::VectorXd& c, const Theta& theta, double assay_limit,
                                     int K, double grid_halfwidth) {
    const Eigen::Index k = c.size();
    if (theta.alpha.size() != k + 1) {
        throw Error(ErrorKind::InvalidArgument, "covariate dimension does not match theta");
    }
    if (K < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two points");
    const double mu = theta.alpha(0) + theta.alpha.tail(k).dot(c);
    const double eta = theta.beta(0) + theta.beta.tail(k).dot(c);
    return grid_weights(y, mu, theta.sigma_m(), eta, theta.beta(1), assay_limit, K, grid_halfwidth);
}

CompletedData e_step(const ArmSample& sample, const Theta& theta, const McemConfig& config,
                     const Eigen::MatrixXd& uniforms) {
    const auto n_obs = static_cast<Eigen::Index>(sample.count_observed());
    const auto n_cens = static_cast<Eigen::Index>(sample.count_censored());
    const Eigen::Index J = config.J;
    if (uniforms.rows() != n_cens || uniforms.cols() != J) {
        throw Error(ErrorKind::InvalidArgument, "uniform matrix must be (censored rows) x J");
    }
    const Eigen::Index p = sample.n_params();
    const Eigen::Index total = n_obs + n_cens * J;
    CompletedData out;
    out.design.resize(total, p);
    out.m.resize(total);
    out.y.resize(total);
    out.w.resize(total);
    out.n_original = sample.rows();

    Eigen::VectorXd gamma(p);
    gamma(0) = theta.beta(0);
    gamma.tail(p - 1) = theta.beta.tail(p - 1);
    const double sigma = theta.sigma_m();
    const double inv_j = 1.0 / static_cast<double>(J);

    std::map<std::vector<double>, GridWeights> cache;
    Eigen::Index obs_row = 0;
    Eigen::Index cens_row = n_obs;
    Eigen::Index cens_index = 0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        if (sample.observed[static_cast<std::size_t>(i)]) {
            out.design.row(obs_row) = sample.design.row(i);
            out.m(obs_row) = sample.m(i);
            out.y(obs_row) = sample.y(i);
            out.w(obs_row) = 1.0;
            ++obs_row;
            continue;
        }
        std::vector<double> key(static_cast<std::size_t>(p) + 1);
        for (Eigen::Index j = 0; j < p; ++j) key[static_cast<std::size_t>(j)] = sample.design(i, j);
        key.back() = sample.y(i);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const auto x = sample.design.row(i);
            GridWeights g = grid_weights(static_cast<int>(sample.y(i)), x.dot(theta.alpha), sigma, x.dot(gamma),
                                         theta.beta(1), sample.assay_limit, config.K, config.grid_halfwidth);
            it = cache.emplace(std::move(key), std::move(g)).first;
        }
        for (Eigen::Index j = 0; j < J; ++j) {
            out.design.row(cens_row) = sample.design.row(i);
            out.m(cens_row) = it->second.sample(uniforms(cens_index, j));
            out.y(cens_row) = sample.y(i);
            out.w(cens_row) = inv_j;
            ++cens_row;
        }
        ++cens_index;
    }
    return out;
}

CompletedData e_step(const ArmSample& sample, const Theta& theta, const McemConfig& config, Rng& rng) {
    const auto n_cens = static_cast<Eigen::Index>(sample.count_censored());
    Eigen::MatrixXd uniforms(n_cens, config.J);
    for (Eigen::Index i = 0; i < n_cens; ++i) {
        for (Eigen::Index j = 0; j < config.J; ++j) uniforms(i, j) = rng.uniform();
    }
    return e_step(sample, theta, config, uniforms);
}

namespace {

struct MStep {
    Theta theta;
    bool separation = false;
};

MStep m_step_impl(const CompletedData& completed) {
    const Eigen::MatrixXd& x = completed.design;
    const Eigen::Index p = x.cols();
    const Eigen::VectorXd sqrt_w = completed.w.cwiseSqrt();
    const Eigen::VectorXd alpha =
        least_squares(sqrt_w.asDiagonal() * x, sqrt_w.cwiseProduct(completed.m));
    const Eigen::VectorXd resid = completed.m - x * alpha;
    const double sigma2 = completed.w.dot(resid.cwiseProduct(resid)) / static_cast<double>(completed.n_original);

    Eigen::MatrixXd outcome_x(x.rows(), p + 1);
    outcome_x.col(0).setOnes();
    outcome_x.col(1) = completed.m;
    outcome_x.rightCols(p - 1) = x.rightCols(p - 1);
    const LogisticFit outcome = fit_weighted_logistic(outcome_x, completed.y, completed.w);
    return {Theta(alpha, sigma2, outcome.beta), outcome.separation};
}

}  // namespace

Theta m_step(const CompletedData& completed) { return m_step_impl(completed).theta; }

McemFit mcem_fit(const ArmSample& sample, const McemConfig& config, const std::optional<Theta>& init) {
    config.validate();
    if (sample.count_observed() == 0) {
        throw Error(ErrorKind::NoUncensoredRows, "MCEM needs at least one uncensored row");
    }
    McemFit fit;
    fit.theta = init ? *init : extrapolation_start(sample);

    const auto n_cens = static_cast<Eigen::Index>(sample.count_censored());
    Rng rng(derive_seed(config.seed, {0x4d43454dULL}));
    Eigen::MatrixXd uniforms(n_cens, config.J);
    for (Eigen::Index i = 0; i < n_cens; ++i) {
        for (Eigen::Index j = 0; j < config.J; ++j) uniforms(i, j) = rng.uniform();
    }

    CompletedData completed;
    for (int iter = 1; iter <= config.max_iter; ++iter) {
        fit.n_iter = iter;
        completed = e_step(sample, fit.theta, config, uniforms);
        MStep next = m_step_impl(completed);
        const double change = next.theta.max_abs_diff(fit.theta);
        fit.theta = std::move(next.theta);
        fit.separation = next.separation;
        if (change < config.tol) {
            fit.converged = true;
            break;
        }
    }

    fit.samples.assign(static_cast<std::size_t>(n_cens), std::vector<double>(static_cast<std::size_t>(config.J)));
    const auto n_obs = static_cast<Eigen::Index>(sample.count_observed());
    for (Eigen::Index i = 0; i < n_cens; ++i) {
        for (Eigen::Index j = 0; j < config.J; ++j) {
            fit.samples[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                completed.m(n_obs + i * config.J + j);
        }
    }
    return fit;
}

}  // namespace censmed
