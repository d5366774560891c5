#include "censmed/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "censmed/error.hpp"

namespace censmed {

namespace {

// Kronrod nodes (descending) and weights; Gauss weights for every other node.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kKronrod[7] * fc;
    double gauss = kGauss[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrod[i] * pair;
        if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
    }
    return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, int max_intervals) {
    if (!(hi > lo)) {
        return {0.0, 0.0, 0};
    }
    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod(f, lo, hi);
    double value = first.value;
    double error = first.error;
    panels.push(first);
    while (error > abs_tol) {
        if (static_cast<int>(panels.size()) >= max_intervals) {
            std::ostringstream os;
            os << "adaptive quadrature on [" << lo << ", " << hi << "] did not reach tolerance "
               << abs_tol << " (estimate " << error << ")";
            throw Error(ErrorKind::QuadratureFailure, os.str());
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = gauss_kronrod(f, worst.lo, mid);
        const Panel right = gauss_kronrod(f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
        if (!std::isfinite(value)) {
            throw Error(ErrorKind::QuadratureFailure, "non-finite integrand");
        }
    }
    // Re-sum to shed the drift from incremental updates.
    double total = 0.0;
    double total_err = 0.0;
    int count = 0;
    while (!panels.empty()) {
        total += panels.top().value;
        total_err += panels.top().error;
        panels.pop();
        ++count;
    }
    return {total, total_err, count};
}

}  // namespace censmed
