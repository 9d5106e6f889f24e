// Round-loop orchestration: opinion updates, homophily weight updates, rumor
// generation, state transitions, shift accumulation, and rumor expiry, all
// under per-event deterministic random substreams.
#ifndef SHIMR_ENGINE_HPP
#define SHIMR_ENGINE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "shimr/dynamics.hpp"
#include "shimr/model.hpp"
#include "shimr/rng.hpp"

namespace shimr {

struct Decision {
    int agent = 0;
    int rumor = 0;
    int d = 0;  // +1 on H->I, -1 on H->M
};

struct Transition {
    int agent = 0;
    int rumor = 0;
    Compartment from = Compartment::S;
    Compartment to = Compartment::S;
};

struct RumorCensus {
    int rumor = 0;
    std::array<int, kNumCompartments> counts{};
};

struct RoundTrace {
    int round = 0;
    std::vector<double> opinions;     // all agents, after this round's update
    std::vector<RumorCensus> census;  // every rumor active during the round
    std::vector<Decision> decisions;
    std::vector<Transition> transitions;  // compartment changes only
    std::vector<int> rumors_created;
    std::vector<int> rumors_expired;
    int active_rumors_end = 0;

    double mean_abs_opinion(int first_normal) const;
};

struct World {
    RunConfig cfg;
    std::vector<AgentRecord> agents;
    WeightMatrix weights;
    std::vector<RumorRecord> rumors;  // every rumor ever created
    StateTable states;
    std::vector<int> active;  // ids of active rumors, ascending

    int num_agents() const { return static_cast<int>(agents.size()); }
    int num_influencers() const { return cfg.num_influencers(); }
};

// Outcome of one per-(agent,rumor) step.
struct StepOutcome {
    Compartment next = Compartment::S;
    int d = 0;
};

// One draw cascade through the state machine with the probabilities already
// evaluated. From S one uniform decides exposure; from H one uniform decides
// whether to decide, one picks the side, one decides public expression (the
// expression chance depends on the side taken); from I or M one uniform
// decides loss of interest. Unused probabilities are ignored. Throws
// std::logic_error if any consumed probability leaves [0,1].
StepOutcome advance_compartment(Compartment cur, double alpha, double beta, double q,
                                double gamma_approve, double gamma_disprove, double mu,
                                RngStream& rng);

// Evaluates the probabilities the current compartment needs on the snapshot,
// then delegates to advance_compartment. The agent must be normal and the
// rumor active in the snapshot.
StepOutcome step_state(int agent, int rumor, Compartment cur, const Snapshot& snap,
                       const ModelParams& params, RngStream& rng);

// Mutable simulation of one run. A round is begin_round + step_pair for every
// (active rumor, normal agent) in any order + finish_round; run_round does
// the three in canonical order. Each step reads only the begin_round snapshot
// and writes its own cell, so step order cannot change the outcome.
class Engine {
public:
    Engine(World world, std::uint64_t run_seed);

    Snapshot begin_round(int t, RoundTrace& trace);
    void step_pair(int t, const Snapshot& snap, int agent, int rumor, RoundTrace& trace);
    void finish_round(int t, const Snapshot& snap, RoundTrace& trace);

    RoundTrace run_round(int t);

    const World& world() const { return world_; }
    std::uint64_t run_seed() const { return run_seed_; }

private:
    struct ShiftEvent {
        int agent = 0;
        int rumor = 0;
        double dphi = 0.0;
    };

    void apply_opinion_updates();
    void apply_weight_updates();
    void generate_rumors(int t, RoundTrace& trace);
    Snapshot make_snapshot() const;

    World world_;
    std::uint64_t run_seed_ = 0;
    std::vector<ShiftEvent> pending_shifts_;  // decisions of the previous round
    std::vector<double> opinions_;            // per-agent cache backing the snapshot
    int next_rumor_id_ = 0;
};

struct RunResult {
    RunConfig cfg;
    std::uint64_t run_index = 0;
    std::vector<double> final_opinions;  // all agents
    WeightMatrix final_weights;
    std::vector<RoundTrace> trace;  // one entry per round
};

// Executes T rounds from a freshly initialized world. Bit-identical output
// for identical (cfg, run_index). Throws std::invalid_argument when the
// config fails validation.
RunResult run_simulation(const RunConfig& cfg, std::uint64_t run_index);

}  // namespace shimr

#endif  // SHIMR_ENGINE_HPP
