#include "perc/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace perc {

Interval wilson_interval(uint64_t successes, uint64_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanCI mean_ci_from_moments(double sum, double sumsq, uint64_t count, double z) {
    MeanCI out;
    out.count = count;
    if (count == 0) return out;
    double n = static_cast<double>(count);
    out.mean = sum / n;
    if (count < 2) {
        out.ci = {out.mean, out.mean};
        return out;
    }
    double var = (sumsq - sum * sum / n) / (n - 1);
    if (var < 0) var = 0;
    double half = z * std::sqrt(var / n);
    out.ci = {out.mean - half, out.mean + half};
    return out;
}

MeanCI mean_ci(const std::vector<double>& xs, double z) {
    double s = 0, ss = 0;
    for (double x : xs) {
        s += x;
        ss += x * x;
    }
    return mean_ci_from_moments(s, ss, xs.size(), z);
}

PowerLawFit fit_power_law(const std::vector<double>& n, const std::vector<double>& y) {
    if (n.size() != y.size() || n.size() < 3)
        throw std::invalid_argument("power-law fit needs >= 3 points");
    size_t m = n.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(m), ly(m);
    for (size_t i = 0; i < m; ++i) {
        if (n[i] <= 0 || y[i] <= 0) throw std::invalid_argument("power-law fit needs positive data");
        lx[i] = std::log(n[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    double dm = static_cast<double>(m);
    double denom = dm * sxx - sx * sx;
    PowerLawFit fit;
    fit.points = m;
    fit.slope = (dm * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / dm;
    double sse = 0;
    for (size_t i = 0; i < m; ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        sse += r * r;
    }
    if (m > 2) {
        double sigma2 = sse / (dm - 2);
        fit.stderr_slope = std::sqrt(sigma2 * dm / denom);
    }
    return fit;
}

} // namespace perc
