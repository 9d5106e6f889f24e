// Core domain types of the extended SHIMR opinion-diffusion model:
// agents, rumors, compartment states, the social weight matrix, and the
// validated run configuration.
#ifndef SHIMR_MODEL_HPP
#define SHIMR_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace shimr {

// Influencers emit rumors every round, never receive them, and keep a fixed
// opinion. Normal agents receive rumors, decide, and diffuse opinion.
enum class Role : std::uint8_t { Influencer, Normal };

// Per-(agent,rumor) compartment: Susceptible, Hesitant, Infected (forwarding),
// Mitigated (refuting), Removed (silent / lost interest).
enum class Compartment : std::uint8_t { S, H, I, M, R };

inline constexpr int kNumCompartments = 5;

char compartment_label(Compartment c);

// Legal edges of the state machine:
// S->{S,H}, H->{H,I,M,R}, I->{I,R}, M->{M,R}, R->{R}.
bool legal_transition(Compartment from, Compartment to);

// Stance indicator: +1 while forwarding (I), -1 while refuting (M), else 0.
inline int stance_of(Compartment c) {
    if (c == Compartment::I) return 1;
    if (c == Compartment::M) return -1;
    return 0;
}

struct AgentRecord {
    int id = 0;
    Role role = Role::Normal;
    double opinion = 0.0;  // o in [-1,1]; the closed ends only for influencers
    double phi = 0.0;      // tangential index tan(pi/2 * o); normal agents only
};

struct RumorRecord {
    int id = 0;
    double value = 0.0;  // equals the origin influencer's opinion
    int origin = 0;
    int birth_round = 0;
    bool active = true;
};

// Accumulated opinion-index shifts are capped at this magnitude before being
// stored. Keeps phi finite under long runs; the corresponding opinion differs
// from +-1 by ~6e-16, below output precision.
inline constexpr double kPhiCap = 1e15;

// (2/pi) atan(phi): maps the unbounded opinion index back into (-1,1).
double opinion_from_phi(double phi);

// tan(pi/2 * o): requires |o| < 1 strictly. Inverse of opinion_from_phi
// within 1e-12 round-trip tolerance.
double phi_from_opinion(double o);

inline double clamp_phi(double phi) {
    if (phi > kPhiCap) return kPhiCap;
    if (phi < -kPhiCap) return -kPhiCap;
    return phi;
}

// Normalization of the neighborhood stance mean entering the perceived
// deviation: Population divides the discusser stance sum by N-1 (default),
// Discussers divides by the discusser count instead.
enum class DeviationNorm : std::uint8_t { Population, Discussers };

struct ModelParams {
    double lambda = 1.0;     // influence factor, > 0
    double rho = 0.5;        // memory factor, in (0,1)
    double eta = 0.1;        // crowd exponent (homophily strength), > 0
    double consensus = 1.0;  // consensus threshold O on |o_m - o_n|, > 0
    double gamma = 1.0;      // silence exponent (self-presentation), > 0
    double beta_min = 0.01;  // minimum decision chance, in (0,1]
    double xi = 0.8;         // trend factor (interest persistence), in (0,1]
    DeviationNorm deviation_norm = DeviationNorm::Population;
};

struct RunConfig {
    int agents = 100;    // N, >= 2
    int rounds = 150;    // T, >= 1
    int runs = 100;      // R, Monte-Carlo ensemble size, >= 1
    int rumor_rate = 1;  // rumors per influencer per round, >= 1
    std::uint64_t master_seed = 42;
    std::string scenario = "radical-controversy";
    std::vector<double> influencer_opinions = {-1.0, 1.0};  // slot i -> agent i
    ModelParams params;

    int num_influencers() const { return static_cast<int>(influencer_opinions.size()); }
    int num_normal() const { return agents - num_influencers(); }
};

// Returns the complete list of invariant violations; empty means valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

// Dense directed social weights w(m,n) in [0,1]: the influence of m on n,
// and the per-round probability that n receives a rumor m is discussing.
// The diagonal is fixed at 0 and excluded from all sums.
class WeightMatrix {
public:
    WeightMatrix() = default;
    explicit WeightMatrix(int n) : n_(n), w_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }

    double operator()(int m, int n) const {
        return w_[static_cast<std::size_t>(m) * n_ + n];
    }

    // Throws std::logic_error on m == n, out-of-range value, or bad index.
    void set(int m, int n, double w);

    bool operator==(const WeightMatrix& other) const = default;

private:
    int n_ = 0;
    std::vector<double> w_;
};

// Per-(normal agent, rumor) compartment table. Influencers carry no entries;
// their permanent I-stance on own rumors is handled by the engine snapshot.
class StateTable {
public:
    StateTable() = default;
    StateTable(int num_influencers, int num_agents)
        : first_normal_(num_influencers), num_agents_(num_agents) {}

    // Registers a rumor; every normal agent starts in S for it.
    // Rumor ids must arrive in increasing order without gaps.
    void add_rumor(int rumor_id);

    Compartment get(int agent, int rumor) const;

    // Applies a transition, enforcing state-machine legality.
    void set(int agent, int rumor, Compartment next);

    bool all_removed(int rumor) const;

    // Compartment census over normal agents, indexed by Compartment value.
    std::array<int, kNumCompartments> census(int rumor) const;

    int num_rumors() const { return static_cast<int>(by_rumor_.size()); }
    int first_normal() const { return first_normal_; }

private:
    Compartment& cell(int agent, int rumor);

    int first_normal_ = 0;
    int num_agents_ = 0;
    std::vector<std::vector<Compartment>> by_rumor_;
};

}  // namespace shimr

#endif  // SHIMR_MODEL_HPP
