// Initial-world construction: the named influencer presets and the random
// initialization of opinions and social weights.
#ifndef SHIMR_SCENARIOS_HPP
#define SHIMR_SCENARIOS_HPP

#include <string>
#include <vector>

#include "shimr/engine.hpp"
#include "shimr/model.hpp"
#include "shimr/rng.hpp"

namespace shimr {

struct ScenarioSpec {
    std::string name;
    std::vector<double> influencer_opinions;
};

// The four named influencer setups plus "custom".
const std::vector<ScenarioSpec>& scenario_presets();

// Resolves a preset name to its influencer opinions. "custom" keeps the
// opinions already present in the config. Throws std::invalid_argument for
// unknown names.
ScenarioSpec resolve_scenario(const std::string& name,
                              const std::vector<double>& custom_opinions = {});

// Builds the initial world: influencers occupy the first slots with their
// fixed opinions; normal agents draw phi ~ N(0,1) with o = (2/pi) atan(phi);
// every off-diagonal weight draws independently from U(0,1). No rumors yet.
// Draw order: phi per agent ascending, then weights row-major.
World init_world(const RunConfig& cfg, const ScenarioSpec& spec, RngStream& rng);

}  // namespace shimr

#endif  // SHIMR_SCENARIOS_HPP
