// Ensemble observables: weight and opinion histograms, the weight versus
// opinion-difference Pearson correlation, and pooled summary statistics.
#ifndef SHIMR_METRICS_HPP
#define SHIMR_METRICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "shimr/engine.hpp"
#include "shimr/model.hpp"

namespace shimr {

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<long long> counts;
    std::vector<double> density;  // counts / (total * bin width); 0 if empty
    long long total = 0;

    double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
};

// Uniform-width binning over [lo, hi]; out-of-range samples land in the end
// bins, samples on an interior edge in the upper bin. Counts always conserve
// the sample count. Requires bins >= 1 and lo < hi.
Histogram build_histogram(std::span<const double> samples, double lo, double hi, int bins);

struct CorrelationOptions {
    bool include_influencers = false;  // include pairs touching influencers
    bool directed = true;              // ordered pairs; else average both directions
};

// Pearson correlation between w(m,n) and |o_m - o_n| over agent pairs of one
// final state (normal-agent pairs only by default). Degenerate, zero-variance
// samples yield an empty optional, never a silent zero.
std::optional<double> weight_opinion_correlation(std::span<const double> opinions,
                                                 const WeightMatrix& weights,
                                                 int num_influencers,
                                                 const CorrelationOptions& opt = {});

struct EnsembleSummary {
    int runs = 0;
    long long pooled_pairs = 0;
    std::optional<double> pooled_r;      // pair samples concatenated across runs
    std::vector<std::optional<double>> run_r;  // per-run correlations, run order
    std::optional<double> run_r_mean;    // over runs where r is defined
    std::optional<double> run_r_std;
    // Moments of the pooled final opinions of normal agents.
    double opinion_mean = 0.0;
    double opinion_variance = 0.0;
    double opinion_skewness = 0.0;
    double mean_abs_opinion = 0.0;
};

// Folds final states in run-index order: pooled correlation, per-run
// correlations, and pooled opinion moments. Requires at least one run.
EnsembleSummary pooled_correlation(const std::vector<RunResult>& runs,
                                   const CorrelationOptions& opt = {});

// Pooled final opinions (normal agents) and pooled final weights
// (off-diagonal normal-agent pairs, same pair set as the correlation).
std::vector<double> pooled_final_opinions(const std::vector<RunResult>& runs);
std::vector<double> pooled_final_weights(const std::vector<RunResult>& runs,
                                         const CorrelationOptions& opt = {});

}  // namespace shimr

#endif  // SHIMR_METRICS_HPP
