#include "shimr/scenarios.hpp"

#include <stdexcept>

namespace shimr {

const std::vector<ScenarioSpec>& scenario_presets() {
    static const std::vector<ScenarioSpec> presets = {
        {"radical-controversy", {-1.0, 1.0}},
        {"radical-unipolar", {-1.0}},
        {"unpaired-controversy", {-1.0, 0.3}},
        {"rational-controversy", {-0.3, 0.3}},
    };
    return presets;
}

ScenarioSpec resolve_scenario(const std::string& name,
                              const std::vector<double>& custom_opinions) {
    if (name == "custom") return {name, custom_opinions};
    for (const ScenarioSpec& preset : scenario_presets())
        if (preset.name == name) return preset;
    throw std::invalid_argument("unknown scenario preset: " + name);
}

World init_world(const RunConfig& cfg, const ScenarioSpec& spec, RngStream& rng) {
    const int n_agents = cfg.agents;
    const int n_influencers = static_cast<int>(spec.influencer_opinions.size());
    if (n_influencers >= n_agents)
        throw std::invalid_argument("init_world: influencer count must be below N");

    World world;
    world.cfg = cfg;
    world.cfg.scenario = spec.name;
    world.cfg.influencer_opinions = spec.influencer_opinions;
    world.agents.reserve(n_agents);
    for (int i = 0; i < n_influencers; ++i)
        world.agents.push_back({i, Role::Influencer, spec.influencer_opinions[i], 0.0});
    for (int n = n_influencers; n < n_agents; ++n) {
        double phi = rng.next_normal();
        world.agents.push_back({n, Role::Normal, opinion_from_phi(phi), phi});
    }

    world.weights = WeightMatrix(n_agents);
    for (int m = 0; m < n_agents; ++m)
        for (int n = 0; n < n_agents; ++n)
            if (m != n) world.weights.set(m, n, rng.next_uniform_open());

    world.states = StateTable(n_influencers, n_agents);
    return world;
}

}  // namespace shimr
