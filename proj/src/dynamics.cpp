#include "shimr/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shimr {

const Snapshot::ActiveRumor& Snapshot::rumor(int rumor_id) const {
    if (rumor_id < 0 || rumor_id >= static_cast<int>(rumor_pos.size()) ||
        rumor_pos[rumor_id] < 0) {
        throw std::logic_error("Snapshot: rumor is not active");
    }
    return rumors[rumor_pos[rumor_id]];
}

double exposure_probability(int agent, int rumor, const Snapshot& snap) {
    const auto& r = snap.rumor(rumor);
    double not_reached = 1.0;
    for (int m : r.discussers) {
        if (m == agent) continue;
        not_reached *= 1.0 - (*snap.weights)(m, agent);
    }
    return 1.0 - not_reached;
}

double perceived_deviation_raw(int agent, int rumor, const Snapshot& snap,
                               DeviationNorm norm) {
    const auto& r = snap.rumor(rumor);
    int own = r.stance[agent];
    int count = static_cast<int>(r.discussers.size()) - (own != 0 ? 1 : 0);
    if (count == 0) return 0.0;

    int stance_sum = r.stance_sum - own;
    double denom = norm == DeviationNorm::Population
                       ? static_cast<double>(snap.num_agents() - 1)
                       : static_cast<double>(count);
    double mean = static_cast<double>(stance_sum) / denom;

    double weighted_sq = 0.0;
    double total_weight = 0.0;
    for (int m : r.discussers) {
        if (m == agent) continue;
        double w = (*snap.weights)(m, agent);
        double dev = static_cast<double>(r.stance[m]) - mean;
        weighted_sq += w * dev * dev;
        total_weight += w;
    }
    if (total_weight == 0.0) return 0.0;
    return std::sqrt(weighted_sq / total_weight);
}

double perceived_deviation(int agent, int rumor, const Snapshot& snap, DeviationNorm norm) {
    return std::min(1.0, perceived_deviation_raw(agent, rumor, snap, norm));
}

double decision_probability(int agent, int rumor, const Snapshot& snap,
                            const ModelParams& params) {
    double sigma = perceived_deviation(agent, rumor, snap, params.deviation_norm);
    return std::max(std::abs(snap.opinion(agent)) * (1.0 - sigma), params.beta_min);
}

double approval_probability(double opinion, double value) {
    return 1.0 - std::abs(value - opinion) / 2.0;
}

double expression_probability(double opinion, double value, int stance,
                              const ModelParams& params) {
    if (stance != 1 && stance != -1)
        throw std::invalid_argument("expression_probability: stance must be +1 or -1");
    return std::exp(-params.gamma * std::abs(opinion - stance * value));
}

double interest_loss_probability(int agent, int rumor, const Snapshot& snap,
                                 const ModelParams& params) {
    const auto& r = snap.rumor(rumor);
    int stance = r.stance[agent];
    if (stance == 0)
        throw std::logic_error("interest_loss_probability: agent is not discussing");
    double alpha = exposure_probability(agent, rumor, snap);
    double gamma = expression_probability(snap.opinion(agent), r.value, stance, params);
    return 1.0 - params.xi * alpha * gamma;
}

double weight_update(double w_prev, double o_m, double o_n, const ModelParams& params) {
    double diff = std::abs(o_m - o_n);
    if (diff <= params.consensus)
        return 1.0 - std::exp(params.eta * (diff - params.consensus)) * (1.0 - w_prev);
    return std::exp(params.eta * (params.consensus - diff)) * w_prev;
}

double opinion_shift(int d, double opinion, double value, const ModelParams& params) {
    double gap = value - opinion;
    double sign = gap > 0.0 ? 1.0 : (gap < 0.0 ? -1.0 : 0.0);
    return params.lambda * static_cast<double>(d) * sign;
}

std::pair<double, double> opinion_update(double phi, std::span<const double> shifts,
                                         const ModelParams& params) {
    double next = params.rho * phi;
    for (double s : shifts) next += s;
    next = clamp_phi(next);
    return {next, opinion_from_phi(next)};
}

}  // namespace shimr
