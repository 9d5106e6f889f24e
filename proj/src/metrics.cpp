#include "shimr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shimr {

Histogram build_histogram(std::span<const double> samples, double lo, double hi, int bins) {
    if (bins < 1) throw std::invalid_argument("build_histogram: bins must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("build_histogram: lo must be < hi");

    Histogram hist;
    hist.lo = lo;
    hist.hi = hi;
    hist.counts.assign(bins, 0);
    hist.density.assign(bins, 0.0);
    hist.total = static_cast<long long>(samples.size());

    const double width = (hi - lo) / bins;
    for (double x : samples) {
        int bin = static_cast<int>(std::floor((x - lo) / width));
        bin = std::clamp(bin, 0, bins - 1);
        // keep the right-closed convention exact w.r.t. the emitted edges
        if (bin + 1 < bins && x >= lo + (bin + 1) * width) ++bin;
        else if (bin > 0 && x < lo + bin * width) --bin;
        ++hist.counts[bin];
    }
    if (hist.total > 0) {
        for (int b = 0; b < bins; ++b)
            hist.density[b] = static_cast<double>(hist.counts[b]) /
                              (static_cast<double>(hist.total) * width);
    }
    return hist;
}

namespace {

// Single-pass pair accumulator. Merging and evaluation happen in fixed run
// order so serial and parallel harnesses agree bit-for-bit.
struct PairAccumulator {
    long long n = 0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;

    void add(double x, double y) {
        if (n == 0) {
            min_x = max_x = x;
            min_y = max_y = y;
        } else {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
        ++n;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }

    void merge(const PairAccumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        n += o.n;
        sx += o.sx;
        sy += o.sy;
        sxx += o.sxx;
        syy += o.syy;
        sxy += o.sxy;
        min_x = std::min(min_x, o.min_x);
        max_x = std::max(max_x, o.max_x);
        min_y = std::min(min_y, o.min_y);
        max_y = std::max(max_y, o.max_y);
    }

    std::optional<double> pearson() const {
        if (n < 2 || min_x == max_x || min_y == max_y) return std::nullopt;
        double nd = static_cast<double>(n);
        double cov = nd * sxy - sx * sy;
        double var_x = nd * sxx - sx * sx;
        double var_y = nd * syy - sy * sy;
        if (!(var_x > 0.0) || !(var_y > 0.0)) return std::nullopt;
        return std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);
    }
};

template <typename Fn>
void for_each_pair(int num_agents, int num_influencers, const CorrelationOptions& opt,
                   Fn&& fn) {
    const int first = opt.include_influencers ? 0 : num_influencers;
    if (opt.directed) {
        for (int m = first; m < num_agents; ++m)
            for (int n = first; n < num_agents; ++n)
                if (m != n) fn(m, n);
    } else {
        for (int m = first; m < num_agents; ++m)
            for (int n = m + 1; n < num_agents; ++n) fn(m, n);
    }
}

PairAccumulator accumulate_pairs(std::span<const double> opinions, const WeightMatrix& w,
                                 int num_influencers, const CorrelationOptions& opt) {
    PairAccumulator acc;
    for_each_pair(static_cast<int>(opinions.size()), num_influencers, opt, [&](int m, int n) {
        double weight = opt.directed ? w(m, n) : 0.5 * (w(m, n) + w(n, m));
        acc.add(weight, std::abs(opinions[m] - opinions[n]));
    });
    return acc;
}

}  // namespace

std::optional<double> weight_opinion_correlation(std::span<const double> opinions,
                                                 const WeightMatrix& weights,
                                                 int num_influencers,
                                                 const CorrelationOptions& opt) {
    return accumulate_pairs(opinions, weights, num_influencers, opt).pearson();
}

EnsembleSummary pooled_correlation(const std::vector<RunResult>& runs,
                                   const CorrelationOptions& opt) {
    if (runs.empty()) throw std::invalid_argument("pooled_correlation: no runs");

    EnsembleSummary summary;
    summary.runs = static_cast<int>(runs.size());

    PairAccumulator pooled;
    double o_sum = 0.0, o_sq = 0.0, o_cube = 0.0, o_abs = 0.0;
    long long o_count = 0;
    for (const RunResult& run : runs) {
        const int n_influencers = run.cfg.num_influencers();
        PairAccumulator acc =
            accumulate_pairs(run.final_opinions, run.final_weights, n_influencers, opt);
        summary.run_r.push_back(acc.pearson());
        pooled.merge(acc);
        for (std::size_t i = n_influencers; i < run.final_opinions.size(); ++i) {
            double o = run.final_opinions[i];
            o_sum += o;
            o_sq += o * o;
            o_cube += o * o * o;
            o_abs += std::abs(o);
            ++o_count;
        }
    }
    summary.pooled_pairs = pooled.n;
    summary.pooled_r = pooled.pearson();

    double r_sum = 0.0;
    int r_count = 0;
    for (const auto& r : summary.run_r) {
        if (r) {
            r_sum += *r;
            ++r_count;
        }
    }
    if (r_count > 0) summary.run_r_mean = r_sum / r_count;
    if (r_count > 1) {
        double mean = *summary.run_r_mean;
        double sq = 0.0;
        for (const auto& r : summary.run_r)
            if (r) sq += (*r - mean) * (*r - mean);
        summary.run_r_std = std::sqrt(sq / (r_count - 1));
    }

    if (o_count > 0) {
        double n = static_cast<double>(o_count);
        double mean = o_sum / n;
        double var = o_sq / n - mean * mean;
        double m3 = o_cube / n - 3.0 * mean * (o_sq / n) + 2.0 * mean * mean * mean;
        summary.opinion_mean = mean;
        summary.opinion_variance = var;
        summary.opinion_skewness = var > 1e-300 ? m3 / std::pow(var, 1.5) : 0.0;
        summary.mean_abs_opinion = o_abs / n;
    }
    return summary;
}

std::vector<double> pooled_final_opinions(const std::vector<RunResult>& runs) {
    std::vector<double> pooled;
    for (const RunResult& run : runs)
        for (std::size_t i = run.cfg.num_influencers(); i < run.final_opinions.size(); ++i)
            pooled.push_back(run.final_opinions[i]);
    return pooled;
}

std::vector<double> pooled_final_weights(const std::vector<RunResult>& runs,
                                         const CorrelationOptions& opt) {
    std::vector<double> pooled;
    for (const RunResult& run : runs) {
        for_each_pair(static_cast<int>(run.final_opinions.size()), run.cfg.num_influencers(),
                      opt, [&](int m, int n) {
                          double w = opt.directed
                                         ? run.final_weights(m, n)
                                         : 0.5 * (run.final_weights(m, n) + run.final_weights(n, m));
                          pooled.push_back(w);
                      });
    }
    return pooled;
}

}  // namespace shimr
