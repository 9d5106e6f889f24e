// Pure per-round probability and update rules of the model. Every function
// is a side-effect-free map from an explicit state snapshot to a value, so
// evaluations within a round can run in any order or in parallel.
#ifndef SHIMR_DYNAMICS_HPP
#define SHIMR_DYNAMICS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shimr/model.hpp"

namespace shimr {

// Immutable view of the network at the point all per-round probabilities are
// evaluated: opinions and weights of the current round, stances from the end
// of the previous round (the origin influencer counts as a permanent
// forwarder of its own rumor while it is active).
struct Snapshot {
    struct ActiveRumor {
        int id = 0;
        double value = 0.0;
        std::vector<std::int8_t> stance;  // per agent: -1, 0, +1
        std::vector<int> discussers;      // agents with nonzero stance, ascending
        int stance_sum = 0;               // sum of stance over discussers
    };

    const std::vector<double>* opinions = nullptr;  // all agents
    const WeightMatrix* weights = nullptr;
    int first_normal = 0;  // agents below this id are influencers
    std::vector<ActiveRumor> rumors;
    std::vector<int> rumor_pos;  // rumor id -> index in rumors, -1 if inactive

    int num_agents() const { return static_cast<int>(opinions->size()); }
    const ActiveRumor& rumor(int rumor_id) const;
    double opinion(int agent) const { return (*opinions)[agent]; }
};

// Probability that agent n is exposed to rumor k this round:
// 1 - prod_{m in N+} (1 - w(m,n)); 0 when nobody is discussing.
double exposure_probability(int agent, int rumor, const Snapshot& snap);

// Weighted deviation of discusser stances around the neighborhood mean,
// as written: sqrt( sum w (i - I)^2 / sum w ). Range [0,2]; 0 when the
// discusser set is empty or carries zero total weight.
double perceived_deviation_raw(int agent, int rumor, const Snapshot& snap,
                               DeviationNorm norm = DeviationNorm::Population);

// The raw deviation clamped to [0,1], the domain the decision rule expects.
double perceived_deviation(int agent, int rumor, const Snapshot& snap,
                           DeviationNorm norm = DeviationNorm::Population);

// Decision chance of a hesitant agent: max{ |o_n| (1 - sigma), beta_min }.
double decision_probability(int agent, int rumor, const Snapshot& snap,
                            const ModelParams& params);

// Approval chance: 1 - |v_k - o_n| / 2.
double approval_probability(double opinion, double value);

// Willingness to state the decision publicly: exp(-Gamma |o_n - stance*v_k|).
// stance must be +1 (approval) or -1 (disproval).
double expression_probability(double opinion, double value, int stance,
                              const ModelParams& params);

// Chance of a discussing agent losing interest: 1 - xi * alpha * gamma,
// with alpha re-read as the agent-perceived popularity of the rumor and
// gamma evaluated at the agent's current stance.
double interest_loss_probability(int agent, int rumor, const Snapshot& snap,
                                 const ModelParams& params);

// Homophily update of one directed weight. Ties strengthen when the opinion
// difference is within the consensus threshold and decay otherwise; the two
// branches agree at the threshold and the result stays in [0,1].
double weight_update(double w_prev, double o_m, double o_n, const ModelParams& params);

// Opinion-index shift caused by one decision: Lambda * d * sgn(v_k - o_n),
// with sgn(0) = 0.
double opinion_shift(int d, double opinion, double value, const ModelParams& params);

// One application of the memory-discounted opinion update:
// phi' = rho * phi + sum(shifts), capped; o' = (2/pi) atan(phi').
std::pair<double, double> opinion_update(double phi, std::span<const double> shifts,
                                         const ModelParams& params);

}  // namespace shimr

#endif  // SHIMR_DYNAMICS_HPP
