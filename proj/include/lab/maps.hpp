#pragma once
#include <vector>

#include "lab/shortcuts.hpp"

namespace lab {

// Target norm of a PAMap: Euclidean, or an l_q direct sum over coordinate
// blocks (the block structure is used for per-block Lipschitz reporting).
struct NormTag {
    enum Kind { euclidean, block_lq } kind = euclidean;
    double q = 2.0;
    std::vector<std::vector<int>> blocks;  // coordinate groups for block_lq

    double eval(const std::vector<double>& x) const;
};

// Piecewise-affine map into R^k, determined by its vertex values; affine on
// edges, so LIP is the maximal edge slope.
struct PAMap {
    const LaaksoGraph* g = nullptr;
    int k = 1;
    std::vector<double> values;  // k entries per vertex
    NormTag norm;

    static PAMap zero(const LaaksoGraph& g, int k);
    double value1(int v) const { return values[v]; }  // k == 1 convenience
    std::vector<double> value(int v) const;
    std::vector<double> delta(int u, int v) const;  // f(u) - f(v)
};

// The level-i tent: on each interval of I_i with wormhole endpoints it rises
// with slope 1 to delta_i/2 at the midpoint, signed + on digit i = M and - on
// digit i = 1, zero elsewhere. Exact rational vertex values.
std::vector<Rational> tent_values(const LaaksoGraph& g, int level);
PAMap tent_block(const LaaksoGraph& g, int level);

// Exact Lipschitz constant of rational vertex values (max edge slope).
Rational lip_exact(const LaaksoGraph& g, const std::vector<Rational>& values);

double lip(const PAMap& f);
// Max slope over base edges and shortcut chords (chord weight eta_i*delta_i).
double lip_eta(const PAMap& f, const EtaGraph& eg);

// One induction step: adds A * tent_i * v to f, with v a unit vector
// orthogonal to the affine direction of f on each modified piece. Requires f
// affine (in h) on every level-`level` cube; violations raise param_error.
PAMap orthogonal_step(const PAMap& f, int level, double A);

// Iterated orthogonal steps with A = eta_i over the given levels (ascending).
PAMap bad_map_r2(const LaaksoGraph& g, const std::vector<int>& levels,
                 const EtaSchedule& eta);

// Per block m the coordinates (eta_i * tent_i)_{i in I_m}; the sum is carried
// by disjoint coordinate blocks under the block-l_q norm.
PAMap bad_map_blocked_lq(const LaaksoGraph& g, const std::vector<std::vector<int>>& blocks,
                         const EtaSchedule& eta, double q);
// Lipschitz constant of the restriction of f to one coordinate block.
double block_lip(const PAMap& f, const std::vector<int>& coords);

Rational diam_exact(const LaaksoGraph& g, const std::vector<Rational>& values,
                    const std::vector<int>& set);
double diam_of(const PAMap& f, const std::vector<int>& set);
Rational diam_eta(const EtaGraph& eg, const std::vector<int>& set);

struct OscillationEntry {
    int set_id;
    int level;
    double diam_f;
    Rational diam_eta;
    double ratio;    // diam_f / (eta_i * delta_i)
    bool classified; // member of J_i^eps(f)
};

struct OscillationReport {
    double eps;
    std::vector<OscillationEntry> entries;
    std::vector<int> classified_sets;  // ids with diam f(S) >= eps*eta_i*delta_i
    double bad_density;  // measure fraction within eta_i*delta_i/eps of some classified net
};

OscillationReport oscillation_report(const PAMap& f, const EtaGraph& eg, double eps);
// Fraction of vertex measure within eta_i*delta_i/eps (in d_eta) of the union
// of classified level-i sets, for some level in [level_lo, level_hi].
double bad_density(const PAMap& f, const EtaGraph& eg, double eps, int level_lo, int level_hi);

}  // namespace lab
