#include "censmed/types.hpp"

#include <algorithm>
#include <sstream>

#include "censmed/error.hpp"

namespace censmed {

bool Dataset::has_treated() const {
    return std::any_of(observations.begin(), observations.end(),
                       [](const Observation& o) { return o.a == 1; });
}

std::size_t Dataset::count_censored() const {
    return static_cast<std::size_t>(std::count_if(
        observations.begin(), observations.end(), [](const Observation& o) { return o.delta == 0; }));
}

Dataset Dataset::arm(int a) const {
    Dataset out;
    out.assay_limit = assay_limit;
    out.covariate_names = covariate_names;
    for (const auto& o : observations) {
        if (o.a == a) out.observations.push_back(o);
    }
    return out;
}

void Dataset::validate() const {
    const std::size_t k = covariate_names.size();
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const auto& o = observations[i];
        auto fail = [i](const std::string& msg) {
            std::ostringstream os;
            os << "observation " << i << ": " << msg;
            throw Error(ErrorKind::InvalidArgument, os.str());
        };
        if (o.c.size() != k) fail("covariate dimension mismatch");
        if (o.a != 0 && o.a != 1) fail("a must be 0 or 1");
        if (o.y != 0 && o.y != 1) fail("y must be 0 or 1");
        if (o.delta != 0 && o.delta != 1) fail("delta must be 0 or 1");
        if (o.delta == 1 && !(o.m > assay_limit)) fail("uncensored mediator must exceed the assay limit");
        for (double v : o.c) {
            if (!std::isfinite(v)) fail("non-finite covariate");
        }
    }
}

Theta::Theta(Eigen::VectorXd alpha_, double sigma2, Eigen::VectorXd beta_)
    : alpha(std::move(alpha_)), sigma2_m(sigma2), beta(std::move(beta_)) {
    if (!(sigma2_m > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "sigma2_m must be positive");
    }
    if (beta.size() != alpha.size() + 1) {
        throw Error(ErrorKind::InvalidArgument, "beta must have one more entry than alpha");
    }
}

Eigen::VectorXd Theta::flat() const {
    Eigen::VectorXd v(alpha.size() + 1 + beta.size());
    v << alpha, sigma2_m, beta;
    return v;
}

Theta Theta::from_flat(const Eigen::VectorXd& v, std::size_t k) {
    const auto na = static_cast<Eigen::Index>(k + 1);
    return Theta(v.head(na), v(na), v.tail(na + 1));
}

double Theta::max_abs_diff(const Theta& other) const {
    return (flat() - other.flat()).cwiseAbs().maxCoeff();
}

bool Theta::is_finite() const { return flat().allFinite(); }

std::size_t ArmSample::count_observed() const {
    return static_cast<std::size_t>(std::count(observed.begin(), observed.end(), char{1}));
}

ArmSample ArmSample::from_dataset(const Dataset& data) {
    const auto n = static_cast<Eigen::Index>(data.size());
    const auto k = static_cast<Eigen::Index>(data.n_covariates());
    ArmSample s;
    s.design.resize(n, k + 1);
    s.m.resize(n);
    s.y.resize(n);
    s.observed.resize(static_cast<std::size_t>(n));
    s.assay_limit = data.assay_limit;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& o = data.observations[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(o.c.size()) != k) {
            throw Error(ErrorKind::InvalidArgument, "covariate dimension mismatch");
        }
        s.design(i, 0) = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) s.design(i, j + 1) = o.c[static_cast<std::size_t>(j)];
        s.observed[static_cast<std::size_t>(i)] = o.delta == 1 ? 1 : 0;
        s.m(i) = o.delta == 1 ? o.m : std::numeric_limits<double>::quiet_NaN();
        s.y(i) = o.y;
    }
    return s;
}

}  // namespace censmed
