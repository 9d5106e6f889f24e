#include "shimr/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shimr {

char compartment_label(Compartment c) {
    switch (c) {
        case Compartment::S: return 'S';
        case Compartment::H: return 'H';
        case Compartment::I: return 'I';
        case Compartment::M: return 'M';
        case Compartment::R: return 'R';
    }
    return '?';
}

bool legal_transition(Compartment from, Compartment to) {
    if (from == to) return true;
    switch (from) {
        case Compartment::S: return to == Compartment::H;
        case Compartment::H:
            return to == Compartment::I || to == Compartment::M || to == Compartment::R;
        case Compartment::I: return to == Compartment::R;
        case Compartment::M: return to == Compartment::R;
        case Compartment::R: return false;
    }
    return false;
}

double opinion_from_phi(double phi) {
    if (!std::isfinite(phi)) throw std::domain_error("opinion_from_phi: non-finite phi");
    return 2.0 * std::atan(phi) / std::numbers::pi;
}

double phi_from_opinion(double o) {
    if (!(std::abs(o) < 1.0)) throw std::domain_error("phi_from_opinion: |o| must be < 1");
    return std::tan(std::numbers::pi / 2.0 * o);
}

namespace {

void require(std::vector<std::string>& errors, bool ok, const std::string& message) {
    if (!ok) errors.push_back(message);
}

}  // namespace

std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> errors;
    const ModelParams& p = cfg.params;

    require(errors, std::isfinite(p.lambda) && p.lambda > 0.0, "lambda out of (0, inf)");
    require(errors, std::isfinite(p.rho) && p.rho > 0.0 && p.rho < 1.0, "rho out of (0,1)");
    require(errors, std::isfinite(p.eta) && p.eta > 0.0, "eta out of (0, inf)");
    require(errors, std::isfinite(p.consensus) && p.consensus > 0.0,
            "consensus-threshold out of (0, inf)");
    require(errors, std::isfinite(p.gamma) && p.gamma > 0.0, "gamma out of (0, inf)");
    require(errors, std::isfinite(p.beta_min) && p.beta_min > 0.0 && p.beta_min <= 1.0,
            "beta-min out of (0,1]");
    require(errors, std::isfinite(p.xi) && p.xi > 0.0 && p.xi <= 1.0, "xi out of (0,1]");

    require(errors, cfg.agents >= 2, "agents must be >= 2");
    require(errors, cfg.rounds >= 1, "rounds must be >= 1");
    require(errors, cfg.runs >= 1, "runs must be >= 1");
    require(errors, cfg.rumor_rate >= 1, "rumor-rate must be >= 1");
    require(errors, cfg.num_influencers() < cfg.agents,
            "influencer count must be smaller than the agent count");
    for (std::size_t i = 0; i < cfg.influencer_opinions.size(); ++i) {
        double o = cfg.influencer_opinions[i];
        if (!(std::isfinite(o) && o >= -1.0 && o <= 1.0)) {
            std::ostringstream msg;
            msg << "influencer opinion " << i << " out of [-1,1]";
            errors.push_back(msg.str());
        }
    }
    return errors;
}

void WeightMatrix::set(int m, int n, double w) {
    if (m < 0 || m >= n_ || n < 0 || n >= n_)
        throw std::logic_error("WeightMatrix: index out of range");
    if (m == n) throw std::logic_error("WeightMatrix: diagonal is fixed at 0");
    if (!(w >= 0.0 && w <= 1.0)) throw std::logic_error("WeightMatrix: weight out of [0,1]");
    w_[static_cast<std::size_t>(m) * n_ + n] = w;
}

void StateTable::add_rumor(int rumor_id) {
    if (rumor_id != static_cast<int>(by_rumor_.size()))
        throw std::logic_error("StateTable: rumor ids must be added in order");
    by_rumor_.emplace_back(static_cast<std::size_t>(num_agents_ - first_normal_),
                           Compartment::S);
}

Compartment& StateTable::cell(int agent, int rumor) {
    if (rumor < 0 || rumor >= static_cast<int>(by_rumor_.size()))
        throw std::logic_error("StateTable: unknown rumor");
    if (agent < first_normal_ || agent >= num_agents_)
        throw std::logic_error("StateTable: not a normal agent");
    return by_rumor_[rumor][agent - first_normal_];
}

Compartment StateTable::get(int agent, int rumor) const {
    return const_cast<StateTable*>(this)->cell(agent, rumor);
}

void StateTable::set(int agent, int rumor, Compartment next) {
    Compartment& cur = cell(agent, rumor);
    if (!legal_transition(cur, next)) {
        throw std::logic_error(std::string("StateTable: illegal transition ") +
                               compartment_label(cur) + "->" + compartment_label(next));
    }
    cur = next;
}

bool StateTable::all_removed(int rumor) const {
    if (rumor < 0 || rumor >= static_cast<int>(by_rumor_.size()))
        throw std::logic_error("StateTable: unknown rumor");
    for (Compartment c : by_rumor_[rumor])
        if (c != Compartment::R) return false;
    return true;
}

std::array<int, kNumCompartments> StateTable::census(int rumor) const {
    if (rumor < 0 || rumor >= static_cast<int>(by_rumor_.size()))
        throw std::logic_error("StateTable: unknown rumor");
    std::array<int, kNumCompartments> counts{};
    for (Compartment c : by_rumor_[rumor]) ++counts[static_cast<int>(c)];
    return counts;
}

}  // namespace shimr
