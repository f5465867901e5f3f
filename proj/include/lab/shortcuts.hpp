#pragma once
#include <optional>
#include <vector>

#include "lab/laakso.hpp"

namespace lab {

// Level-i shortcut set: the M vertices q(t, a, c, 1...1), c in [M], at the
// midpoint height t of an interval in I_i with both endpoints in W_i^h.
struct ShortcutSet {
    int level = 0;
    std::int64_t t_idx = 0;          // height in units of 1/D
    std::vector<int> prefix;         // a in [M]^(i-1)
    std::vector<int> members;        // vertex ids, ordered by digit i = 1..M
};

// All shortcut sets of levels 1..n, ordered by (level, height, prefix).
std::vector<ShortcutSet> enumerate_shortcuts(const LaaksoGraph& g);

struct EtaSchedule {
    std::vector<Rational> eta;  // eta[i-1] is the level-i contraction

    void validate(int levels) const;
    const Rational& at(int level) const { return eta[level - 1]; }

    static EtaSchedule ones(int levels);
    static EtaSchedule constant(int levels, Rational v);
    static EtaSchedule geometric(int levels, Rational ratio);
    // eta_i ~ i^-exponent, rounded to a rational with the given denominator.
    static EtaSchedule power(int levels, double exponent, std::int64_t denom = 4096);
};

// Base graph plus one chord per unordered member pair of every shortcut set,
// with weight eta_i * delta_i. All weights are held as exact integers in
// units of 1/(D * scale).
class EtaGraph {
  public:
    EtaGraph(const LaaksoGraph& base, EtaSchedule eta);

    const LaaksoGraph& base() const { return *base_; }
    const EtaSchedule& eta() const { return eta_; }
    const std::vector<ShortcutSet>& shortcut_sets() const { return sets_; }

    struct Chord {
        int u, v;
        int set_id;
        std::int64_t weight_units;
    };
    const std::vector<Chord>& chords() const { return chords_; }

    std::int64_t scale() const { return scale_; }  // base edge = scale units
    Rational from_units(std::int64_t u) const;
    std::int64_t chord_units(int level) const;  // eta_i*delta_i in units

    // Exact shortest-path distance in the augmented graph.
    Rational dist_eta(int x, int y) const;
    // Distances in integer units; vertices beyond stop_beyond (when >= 0) are
    // left at -1, which keeps radius-bounded sweeps cheap.
    std::vector<std::int64_t> units_from(const std::vector<int>& sources,
                                         std::int64_t stop_beyond = -1) const;

    // Test hook: perturb one chord weight (fault injection for the verifier).
    void inject_chord_fault();

  private:
    const LaaksoGraph* base_;
    EtaSchedule eta_;
    std::vector<ShortcutSet> sets_;
    std::vector<Chord> chords_;
    std::int64_t scale_ = 1;
    // CSR over base edges + chords
    std::vector<std::pair<int, std::int64_t>> adj_;
    std::vector<int> adj_off_;

    void build_adj();
};

struct Jump {
    int set_id;
    int p_minus, p_plus;   // ordered member pair
    Rational cost;         // d(x,p-) + eta_i*delta_i + d(p+,y)
};

// Minimizes d(x,p-) + rho_eta(p-,p+) + d(p+,y) over ordered member pairs of
// all shortcut sets; ties broken by (level, height, prefix, member indices).
// Returns nullopt when no jump beats the base distance d(x,y).
std::optional<Jump> best_single_jump(const EtaGraph& eg, int x, int y);

// Index blocks produced by the greedy schedule selection, with the two
// series the selection is designed to control.
struct ScheduleReport {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) into alpha
    std::vector<double> block_sums;        // sum of alpha over each block
    std::vector<double> block_power_sums;  // (sum of alpha^p over block)^sigma
    double total_sum = 0;                  // sum over blocks of block sums
    double total_power_sum = 0;
    bool diverging = false;  // selection kept meeting its targets to the end
};

ScheduleReport schedule_blocks(const std::vector<double>& alpha, double p, double sigma);

// Measure fraction of vertices within alpha_i * delta_i of the union of the
// level-i shortcut sets, per level and cumulatively over level ranges.
struct DensityProfile {
    std::vector<double> per_level;   // index i-1: fraction for level i
    std::vector<double> cumulative;  // index i0-1: fraction covered by some level >= i0
};

enum class Metric { base, eta };

DensityProfile density_profile(const EtaGraph& eg, const std::vector<Rational>& alpha,
                               Metric metric);

}  // namespace lab
