#include "shimr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "shimr/scenarios.hpp"

namespace shimr {

double RoundTrace::mean_abs_opinion(int first_normal) const {
    int count = static_cast<int>(opinions.size()) - first_normal;
    if (count <= 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = first_normal; i < opinions.size(); ++i) sum += std::abs(opinions[i]);
    return sum / static_cast<double>(count);
}

namespace {

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "probability " << name << " out of [0,1]: " << p;
        throw std::logic_error(msg.str());
    }
}

}  // namespace

StepOutcome advance_compartment(Compartment cur, double alpha, double beta, double q,
                                double gamma_approve, double gamma_disprove, double mu,
                                RngStream& rng) {
    switch (cur) {
        case Compartment::S:
            check_probability(alpha, "alpha");
            return {rng.next_uniform() < alpha ? Compartment::H : Compartment::S, 0};
        case Compartment::H: {
            check_probability(beta, "beta");
            if (rng.next_uniform() >= beta) return {Compartment::H, 0};
            check_probability(q, "q");
            bool approve = rng.next_uniform() < q;
            double gamma = approve ? gamma_approve : gamma_disprove;
            check_probability(gamma, "gamma");
            if (rng.next_uniform() >= gamma) return {Compartment::R, 0};
            return approve ? StepOutcome{Compartment::I, 1} : StepOutcome{Compartment::M, -1};
        }
        case Compartment::I:
        case Compartment::M:
            check_probability(mu, "mu");
            if (rng.next_uniform() < mu) return {Compartment::R, 0};
            return {cur, 0};
        case Compartment::R:
            return {Compartment::R, 0};
    }
    throw std::logic_error("advance_compartment: unknown compartment");
}

StepOutcome step_state(int agent, int rumor, Compartment cur, const Snapshot& snap,
                       const ModelParams& params, RngStream& rng) {
    if (agent < snap.first_normal)
        throw std::logic_error("step_state: influencers have no rumor state");
    const auto& r = snap.rumor(rumor);  // throws for inactive rumors

    double alpha = 0.0, beta = 0.0, q = 0.0;
    double gamma_approve = 0.0, gamma_disprove = 0.0, mu = 0.0;
    switch (cur) {
        case Compartment::S:
            alpha = exposure_probability(agent, rumor, snap);
            break;
        case Compartment::H:
            beta = decision_probability(agent, rumor, snap, params);
            q = approval_probability(snap.opinion(agent), r.value);
            gamma_approve = expression_probability(snap.opinion(agent), r.value, 1, params);
            gamma_disprove = expression_probability(snap.opinion(agent), r.value, -1, params);
            break;
        case Compartment::I:
        case Compartment::M:
            mu = interest_loss_probability(agent, rumor, snap, params);
            break;
        case Compartment::R:
            break;
    }
    return advance_compartment(cur, alpha, beta, q, gamma_approve, gamma_disprove, mu, rng);
}

Engine::Engine(World world, std::uint64_t run_seed)
    : world_(std::move(world)), run_seed_(run_seed) {
    next_rumor_id_ = static_cast<int>(world_.rumors.size());
}

void Engine::apply_opinion_updates() {
    std::sort(pending_shifts_.begin(), pending_shifts_.end(),
              [](const ShiftEvent& a, const ShiftEvent& b) {
                  return a.agent != b.agent ? a.agent < b.agent : a.rumor < b.rumor;
              });
    std::vector<double> shifts;
    std::size_t idx = 0;
    for (int n = world_.num_influencers(); n < world_.num_agents(); ++n) {
        shifts.clear();
        while (idx < pending_shifts_.size() && pending_shifts_[idx].agent == n)
            shifts.push_back(pending_shifts_[idx++].dphi);
        AgentRecord& agent = world_.agents[n];
        auto [phi, opinion] = opinion_update(agent.phi, shifts, world_.cfg.params);
        if (!(std::abs(opinion) < 1.0))
            throw std::logic_error("opinion update left (-1,1) for a normal agent");
        agent.phi = phi;
        agent.opinion = opinion;
    }
    pending_shifts_.clear();
}

void Engine::apply_weight_updates() {
    const int n_agents = world_.num_agents();
    for (int m = 0; m < n_agents; ++m) {
        for (int n = 0; n < n_agents; ++n) {
            if (m == n) continue;
            double next = weight_update(world_.weights(m, n), world_.agents[m].opinion,
                                        world_.agents[n].opinion, world_.cfg.params);
            world_.weights.set(m, n, next);
        }
    }
}

void Engine::generate_rumors(int t, RoundTrace& trace) {
    for (int i = 0; i < world_.num_influencers(); ++i) {
        for (int j = 0; j < world_.cfg.rumor_rate; ++j) {
            int id = next_rumor_id_++;
            world_.rumors.push_back({id, world_.agents[i].opinion, i, t, true});
            world_.states.add_rumor(id);
            world_.active.push_back(id);
            trace.rumors_created.push_back(id);
        }
    }
}

Snapshot Engine::make_snapshot() const {
    Snapshot snap;
    snap.opinions = &opinions_;
    snap.weights = &world_.weights;
    snap.first_normal = world_.num_influencers();
    snap.rumor_pos.assign(next_rumor_id_, -1);
    snap.rumors.reserve(world_.active.size());
    const int n_agents = world_.num_agents();
    for (int id : world_.active) {
        Snapshot::ActiveRumor r;
        r.id = id;
        r.value = world_.rumors[id].value;
        r.stance.assign(n_agents, 0);
        r.stance[world_.rumors[id].origin] = 1;  // permanent forwarder of own rumor
        for (int n = snap.first_normal; n < n_agents; ++n)
            r.stance[n] = static_cast<std::int8_t>(stance_of(world_.states.get(n, id)));
        for (int n = 0; n < n_agents; ++n) {
            if (r.stance[n] != 0) {
                r.discussers.push_back(n);
                r.stance_sum += r.stance[n];
            }
        }
        snap.rumor_pos[id] = static_cast<int>(snap.rumors.size());
        snap.rumors.push_back(std::move(r));
    }
    return snap;
}

Snapshot Engine::begin_round(int t, RoundTrace& trace) {
    trace.round = t;
    apply_opinion_updates();
    apply_weight_updates();
    generate_rumors(t, trace);
    opinions_.resize(world_.num_agents());
    for (int n = 0; n < world_.num_agents(); ++n) opinions_[n] = world_.agents[n].opinion;
    return make_snapshot();
}

void Engine::step_pair(int t, const Snapshot& snap, int agent, int rumor, RoundTrace& trace) {
    Compartment cur = world_.states.get(agent, rumor);
    RngStream rng = RngStream::for_event(run_seed_, static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(agent),
                                         static_cast<std::uint64_t>(rumor));
    StepOutcome out = step_state(agent, rumor, cur, snap, world_.cfg.params, rng);
    if (out.next != cur) {
        world_.states.set(agent, rumor, out.next);
        trace.transitions.push_back({agent, rumor, cur, out.next});
    }
    if (out.d != 0) {
        trace.decisions.push_back({agent, rumor, out.d});
        double dphi = opinion_shift(out.d, snap.opinion(agent), snap.rumor(rumor).value,
                                    world_.cfg.params);
        pending_shifts_.push_back({agent, rumor, dphi});
    }
}

void Engine::finish_round(int t, const Snapshot& snap, RoundTrace& trace) {
    trace.opinions = opinions_;
    std::vector<int> still_active;
    still_active.reserve(world_.active.size());
    for (const auto& r : snap.rumors) {
        RumorCensus census{r.id, world_.states.census(r.id)};
        trace.census.push_back(census);
        if (world_.states.all_removed(r.id)) {
            world_.rumors[r.id].active = false;
            trace.rumors_expired.push_back(r.id);
        } else {
            still_active.push_back(r.id);
        }
    }
    world_.active = std::move(still_active);
    trace.active_rumors_end = static_cast<int>(world_.active.size());
}

RoundTrace Engine::run_round(int t) {
    RoundTrace trace;
    Snapshot snap = begin_round(t, trace);
    for (const auto& r : snap.rumors)
        for (int n = world_.num_influencers(); n < world_.num_agents(); ++n)
            step_pair(t, snap, n, r.id, trace);
    finish_round(t, snap, trace);
    return trace;
}

RunResult run_simulation(const RunConfig& cfg, std::uint64_t run_index) {
    auto errors = validate_config(cfg);
    if (!errors.empty()) {
        std::string joined = "invalid config:";
        for (const auto& e : errors) joined += " " + e + ";";
        throw std::invalid_argument(joined);
    }
    std::uint64_t run_seed = RngStream::derive(cfg.master_seed, run_index);
    RngStream init_rng(RngStream::derive(run_seed, 0));
    World world = init_world(cfg, resolve_scenario(cfg.scenario, cfg.influencer_opinions),
                             init_rng);

    Engine engine(std::move(world), run_seed);
    RunResult result;
    result.cfg = cfg;
    result.run_index = run_index;
    result.trace.reserve(cfg.rounds);
    for (int t = 1; t <= cfg.rounds; ++t) result.trace.push_back(engine.run_round(t));

    result.final_opinions.reserve(cfg.agents);
    for (const AgentRecord& a : engine.world().agents)
        result.final_opinions.push_back(a.opinion);
    result.final_weights = engine.world().weights;
    return result;
}

}  // namespace shimr
