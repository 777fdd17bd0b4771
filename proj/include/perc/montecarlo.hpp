// Conditioned sampling, estimator orchestration, exponent regression and the
// headline ratio checks.  Every estimator is deterministic under its seed and
// independent of the worker count: per-sample results land in indexed slots
// and are reduced serially in index order.
#pragma once

#include "perc/shortcuts.hpp"

namespace perc {

struct ExperimentConfig {
    std::vector<int> n_grid = {8, 16, 32, 64};
    uint64_t samples = 1000;    // raw attempts per grid point
    uint64_t min_accepted = 0;  // when > 0, sample in blocks until this many accepted
    uint64_t seed = 1;
    double p = 0.5;
    double delta = 0.75;
    double epsilon = 0.25;
    double nu = 0.5;
    bool with_gamma = true;
    bool with_splice = true;
    int threads = 0;

    void validate() const;
};

// Rejection sampling of {0 <-> dB_n}: streams accepted configurations in
// sample-index order (sequential; the estimators parallelize internally).
struct ConditionedCounts {
    uint64_t attempts = 0;
    uint64_t accepted = 0;
};
ConditionedCounts sample_conditioned(int n, uint64_t samples, uint64_t seed, double p,
                                     const std::function<void(uint64_t, const Configuration&)>& consume);

// E[S_n | 0 <-> dB_n], E[#gamma | .], E[#s | .] per grid point.  Statistic
// names: chem_S, gamma_len, splice_len.  The per-sample chain
// S_n <= #s <= #gamma is asserted on every accepted sample.
std::vector<EstimateRecord> estimate_chemdist(const ExperimentConfig& config);

// P(0 <-> dB_n) per grid point (statistic: p_radial).
std::vector<EstimateRecord> estimate_radial(const ExperimentConfig& config);

// Least-squares power-law fit over a record family (log estimate vs log n).
PowerLawFit exponent_fit(const std::vector<EstimateRecord>& records);

struct TheoremTrendReport {
    std::vector<int> n;
    std::vector<double> rho;      // E-hat[S_n|.] / (n^2 pi3-hat(n))
    std::vector<double> rho_lo, rho_hi;
    double delta_hat = 0.0;       // -slope of log rho vs log n
    double delta_stderr = 0.0;
    bool nonpositive_flag = false;
};

// chem records (chem_S) and pi3 records must share the n grid.
TheoremTrendReport theorem_ratio_trend(const std::vector<EstimateRecord>& chem,
                                       const std::vector<EstimateRecord>& pi3);

// The default local event family E(e,k): the 4k edges of the axis-aligned
// cross through e_x within B(e,k), all open.
std::vector<EdgeIndex> cross_event_edges(const EdgeIndex& e, int k);
bool cross_event_holds(const Configuration& cfg, const EdgeIndex& e, int k);

struct ConditionalComparisonRow {
    EdgeIndex e;
    int M = 0;
    int d = 0; // M/2
    double p_given_gamma = 0.0; // P(E | 0 <-> dB_n, e in gamma)
    double p_given_arm = 0.0;   // P(E | A_3(e,d))
    double ratio = 0.0;
    uint64_t cond_gamma = 0; // accepted conditioning events
    uint64_t cond_arm = 0;
};

struct ConditionalComparisonReport {
    int n = 0;
    int k = 0;
    std::vector<ConditionalComparisonRow> rows;
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    bool insufficient = false; // some conditioning event never occurred
};

// Empirical check of P(E | 0 <-> dB_n, e in gamma) <= C P(E | A_3(e,d)) with
// d = M(e)/2, for edges on a coarse grid along the +x axis.
ConditionalComparisonReport conditional_comparison(const ExperimentConfig& config, int n, int k);

// Crossing frequency of the RSW rectangle per grid point.  For k = 1 the
// self-dual (n+1) x n rectangle is used; for k >= 2 the kn x n one.
// Statistic: rsw_h{k}; N holds the rectangle width.
std::vector<EstimateRecord> rsw_check(int k, const std::vector<int>& n_grid, uint64_t samples,
                                      uint64_t seed, int threads = 0);

} // namespace perc
