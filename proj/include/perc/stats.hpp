// Small statistics utilities: confidence intervals, power-law fits, and the
// record type all estimators emit.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace perc {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a Bernoulli frequency (default 95%).
Interval wilson_interval(uint64_t successes, uint64_t trials, double z = 1.96);

// Normal/t-based interval for a sample mean.
struct MeanCI {
    double mean = 0.0;
    Interval ci;
    uint64_t count = 0;
};
MeanCI mean_ci(const std::vector<double>& xs, double z = 1.96);
MeanCI mean_ci_from_moments(double sum, double sumsq, uint64_t count, double z = 1.96);

// One named statistic with provenance; the row type of every results CSV.
struct EstimateRecord {
    std::string statistic;
    int n = 0;
    int N = 0; // 0 when not annular
    double estimate = 0.0;
    Interval ci;
    uint64_t samples = 0;
    uint64_t accepted = 0; // = samples for unconditioned statistics
    uint64_t seed = 0;
};

// Least-squares fit of log(y) against log(n).
struct PowerLawFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    size_t points = 0;
};
PowerLawFit fit_power_law(const std::vector<double>& n, const std::vector<double>& y);

} // namespace perc
