#pragma once

#include <functional>

namespace censmed {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int n_intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration on a finite
/// interval. Refines the subinterval with the largest |K15 - G7| until the
/// summed estimate is at most abs_tol. Throws QuadratureFailure when the
/// interval budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, int max_intervals = 400);

}  // namespace censmed
