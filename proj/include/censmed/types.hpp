#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace censmed {

/// One subject. `m` is only meaningful when `delta == 1`; estimators never
/// read it for censored rows.
struct Observation {
    std::vector<double> c;
    int a = 0;
    double m = std::numeric_limits<double>::quiet_NaN();
    int delta = 1;
    int y = 0;
};

struct Dataset {
    std::vector<Observation> observations;
    double assay_limit = -std::numeric_limits<double>::infinity();
    std::vector<std::string> covariate_names;

    std::size_t size() const { return observations.size(); }
    std::size_t n_covariates() const { return covariate_names.size(); }
    bool has_treated() const;
    std::size_t count_censored() const;

    /// Rows with the given treatment arm, same assay limit and covariates.
    Dataset arm(int a) const;

    /// Throws InvalidArgument on ragged covariates, bad binaries, or
    /// uncensored values at or below the assay limit.
    void validate() const;
};

/// Joint parameter vector of the mediator model (alpha, sigma2_m) and the
/// untreated-arm outcome model (beta = intercept, mediator slope, covariates).
struct Theta {
    Eigen::VectorXd alpha;
    double sigma2_m = 1.0;
    Eigen::VectorXd beta;

    Theta() = default;
    Theta(Eigen::VectorXd alpha_, double sigma2, Eigen::VectorXd beta_);

    std::size_t n_covariates() const { return static_cast<std::size_t>(alpha.size()) - 1; }
    double sigma_m() const { return std::sqrt(sigma2_m); }

    /// alpha, sigma2_m, beta concatenated.
    Eigen::VectorXd flat() const;
    static Theta from_flat(const Eigen::VectorXd& v, std::size_t k);

    double max_abs_diff(const Theta& other) const;
    bool is_finite() const;
};

struct ShiftSpec {
    double xi = 0.0;
};

/// Column view of one arm used by every fitter: design has an intercept
/// column followed by covariates. `m` is NaN on censored rows so that any
/// accidental read poisons the result.
struct ArmSample {
    Eigen::MatrixXd design;
    Eigen::VectorXd m;
    std::vector<char> observed;
    Eigen::VectorXd y;
    double assay_limit = -std::numeric_limits<double>::infinity();

    Eigen::Index rows() const { return design.rows(); }
    Eigen::Index n_params() const { return design.cols(); }
    std::size_t count_observed() const;
    std::size_t count_censored() const { return static_cast<std::size_t>(rows()) - count_observed(); }

    static ArmSample from_dataset(const Dataset& data);
};

}  // namespace censmed
