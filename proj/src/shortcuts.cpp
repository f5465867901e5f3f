#include "lab/shortcuts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace lab {

std::vector<ShortcutSet> enumerate_shortcuts(const LaaksoGraph& g) {
    const auto& p = g.params();
    std::vector<ShortcutSet> out;
    for (int i = 1; i <= p.n; ++i) {
        std::int64_t step = p.level_step(i);
        std::int64_t grid = p.prefix_product(i);
        std::vector<int> prefix(i - 1, 1);
        for (std::int64_t m = 0; m < grid; ++m) {
            std::int64_t ti = m % p.N[i - 1];
            if (ti < 1 || ti >= p.N[i - 1] - 1) continue;  // need both endpoints in W_i^h
            std::int64_t t_idx = m * step + step / 2;
            std::fill(prefix.begin(), prefix.end(), 1);
            while (true) {
                ShortcutSet s;
                s.level = i;
                s.t_idx = t_idx;
                s.prefix = prefix;
                std::vector<int> digits(p.n, 1);
                for (int j = 0; j < i - 1; ++j) digits[j] = prefix[j];
                for (int c = 1; c <= p.M; ++c) {
                    digits[i - 1] = c;
                    s.members.push_back(g.vertex_id(t_idx, digits));
                }
                out.push_back(std::move(s));
                int j = 0;
                while (j < i - 1 && prefix[j] == p.M) prefix[j++] = 1;
                if (j >= i - 1) break;
                ++prefix[j];
            }
        }
    }
    return out;
}

void EtaSchedule::validate(int levels) const {
    if (static_cast<int>(eta.size()) < levels)
        throw param_error("eta schedule shorter than shortcut levels");
    for (auto& e : eta)
        if (e.num() <= 0 || e > Rational(1))
            throw param_error("eta values must lie in (0, 1]");
}

EtaSchedule EtaSchedule::ones(int levels) { return constant(levels, Rational(1)); }

EtaSchedule EtaSchedule::constant(int levels, Rational v) {
    EtaSchedule s;
    s.eta.assign(levels, v);
    return s;
}

EtaSchedule EtaSchedule::geometric(int levels, Rational ratio) {
    EtaSchedule s;
    Rational v(1);
    for (int i = 0; i < levels; ++i) {
        v = v * ratio;
        s.eta.push_back(v);
    }
    return s;
}

EtaSchedule EtaSchedule::power(int levels, double exponent, std::int64_t denom) {
    EtaSchedule s;
    for (int i = 1; i <= levels; ++i) {
        double v = std::pow(static_cast<double>(i), -exponent);
        std::int64_t num = std::llround(v * static_cast<double>(denom));
        num = std::clamp<std::int64_t>(num, 1, denom);
        s.eta.emplace_back(num, denom);
    }
    return s;
}

EtaGraph::EtaGraph(const LaaksoGraph& base, EtaSchedule eta)
    : base_(&base), eta_(std::move(eta)) {
    const auto& p = base.params();
    eta_.validate(p.n);
    sets_ = enumerate_shortcuts(base);

    // Chord of level i costs eta_i * delta_i = eta_i * level_step(i)/D. Scale
    // everything by the lcm of the eta denominators so weights are integers.
    scale_ = 1;
    for (int i = 1; i <= p.n; ++i)
        scale_ = std::lcm(scale_, eta_.at(i).den());

    for (int sid = 0; sid < static_cast<int>(sets_.size()); ++sid) {
        const auto& s = sets_[sid];
        std::int64_t w = chord_units(s.level);
        for (std::size_t a = 0; a < s.members.size(); ++a)
            for (std::size_t b = a + 1; b < s.members.size(); ++b)
                chords_.push_back(Chord{s.members[a], s.members[b], sid, w});
    }
    // chord weight never exceeds the base distance of its endpoints
    for (const auto& c : chords_) {
        const auto& s = sets_[c.set_id];
        Rational basedist = p.delta(s.level);
        if (from_units(c.weight_units) > basedist)
            throw invariant_error("chord heavier than base distance");
    }
    build_adj();
}

std::int64_t EtaGraph::chord_units(int level) const {
    const auto& p = base_->params();
    const Rational& e = eta_.at(level);
    // eta * level_step(level) * scale / den is integral by choice of scale
    return e.num() * (p.level_step(level) * (scale_ / e.den()));
}

Rational EtaGraph::from_units(std::int64_t u) const {
    return Rational(u, base_->params().D() * scale_);
}

void EtaGraph::build_adj() {
    int V = base_->vertex_count();
    adj_off_.assign(V + 1, 0);
    for (auto& [u, v] : base_->edges()) { ++adj_off_[u + 1]; ++adj_off_[v + 1]; }
    for (auto& c : chords_) { ++adj_off_[c.u + 1]; ++adj_off_[c.v + 1]; }
    for (int i = 1; i <= V; ++i) adj_off_[i] += adj_off_[i - 1];
    adj_.resize(adj_off_[V]);
    std::vector<int> cur(adj_off_.begin(), adj_off_.end() - 1);
    for (auto& [u, v] : base_->edges()) {
        adj_[cur[u]++] = {v, scale_};
        adj_[cur[v]++] = {u, scale_};
    }
    for (auto& c : chords_) {
        adj_[cur[c.u]++] = {c.v, c.weight_units};
        adj_[cur[c.v]++] = {c.u, c.weight_units};
    }
}

void EtaGraph::inject_chord_fault() {
    if (chords_.empty()) throw param_error("no chords to perturb");
    chords_[0].weight_units = std::max<std::int64_t>(1, chords_[0].weight_units / 7);
    build_adj();
}

std::vector<std::int64_t> EtaGraph::units_from(const std::vector<int>& sources,
                                               std::int64_t stop_beyond) const {
    std::vector<std::int64_t> dist(base_->vertex_count(), -1);
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (int s : sources) {
        if (dist[s] == 0) continue;
        dist[s] = 0;
        pq.emplace(0, s);
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        if (stop_beyond >= 0 && d > stop_beyond) break;  // monotone pops
        for (int k = adj_off_[u]; k < adj_off_[u + 1]; ++k) {
            auto [v, w] = adj_[k];
            std::int64_t nd = d + w;
            if (dist[v] < 0 || nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    if (stop_beyond >= 0)
        for (auto& d : dist)
            if (d > stop_beyond) d = -1;
    return dist;
}

Rational EtaGraph::dist_eta(int x, int y) const {
    if (x < 0 || x >= base_->vertex_count() || y < 0 || y >= base_->vertex_count())
        throw lookup_error("vertex id out of range");
    if (x == y) return Rational(0);
    auto d = units_from({x});
    if (d[y] < 0) throw invariant_error("augmented graph not connected");
    return from_units(d[y]);
}

std::optional<Jump> best_single_jump(const EtaGraph& eg, int x, int y) {
    const auto& g = eg.base();
    auto hx = g.hops_from({x});
    auto hy = g.hops_from({y});
    const std::int64_t D = g.params().D();
    std::optional<Jump> best;
    const auto& sets = eg.shortcut_sets();
    for (int sid = 0; sid < static_cast<int>(sets.size()); ++sid) {
        const auto& s = sets[sid];
        Rational rho = eg.eta().at(s.level) * g.params().delta(s.level);
        for (std::size_t a = 0; a < s.members.size(); ++a)
            for (std::size_t b = 0; b < s.members.size(); ++b) {
                if (a == b) continue;
                int pm = s.members[a], pp = s.members[b];
                Rational cost = Rational(hx[pm], D) + rho + Rational(hy[pp], D);
                if (!best || cost < best->cost)
                    best = Jump{sid, pm, pp, cost};
            }
    }
    if (best && best->cost < g.dist(x, y)) return best;
    return std::nullopt;
}

namespace {

// Greedy packing toward targets: group g consists of K_g mini-targets of
// size 1/K_g with K_g = 2^ceil(g/(sigma*(p-1))), so each completed group
// sums to ~1 while sum_g (sum over group of mini^p)^sigma stays summable.
ScheduleReport pack_blocks(const std::vector<double>& alpha, std::size_t len, double p,
                           double sigma) {
    ScheduleReport rep;
    std::size_t idx = 0;
    for (int group = 1; idx < len; ++group) {
        double kexp = std::ceil(static_cast<double>(group) / (sigma * (p - 1.0)));
        std::size_t K = static_cast<std::size_t>(std::ldexp(1.0, std::min(kexp, 40.0)));
        double target = 1.0 / static_cast<double>(K);
        std::size_t block_begin = idx;
        double block_sum = 0, block_pow = 0;
        std::size_t met = 0;
        bool exhausted = false;
        while (idx < len && met < K) {
            double mini = 0;
            while (idx < len && mini < target) {
                // entries far above the target would overshoot; drop them
                // (the heavy set the hypothesis allows us to discard)
                if (alpha[idx] > 2 * target) {
                    if (mini > 0) break;
                    ++idx;
                    continue;
                }
                mini += alpha[idx++];
            }
            if (mini >= 0.5 * target) {
                ++met;
                block_sum += mini;
                block_pow += std::pow(mini, p);
            } else {
                exhausted = true;
                break;
            }
        }
        if (met == 0) break;
        rep.blocks.emplace_back(block_begin, idx);
        rep.block_sums.push_back(block_sum);
        rep.block_power_sums.push_back(std::pow(block_pow, sigma));
        rep.total_sum += block_sum;
        rep.total_power_sum += rep.block_power_sums.back();
        if (exhausted || met < K) break;
    }
    return rep;
}

}  // namespace

ScheduleReport schedule_blocks(const std::vector<double>& alpha, double p, double sigma) {
    if (alpha.empty()) throw schedule_error("empty alpha prefix");
    if (!(p > 1.0) || !(sigma > 0.0) || sigma > 1.0)
        throw schedule_error("need p > 1 and sigma in (0,1]");
    for (double a : alpha)
        if (!(a > 0)) throw schedule_error("alpha must be positive");

    // Finite surrogate of the tail-infimum hypothesis: off a heavy head, the
    // remaining alpha must become small relative to the largest value.
    double amax = *std::max_element(alpha.begin(), alpha.end());
    std::size_t tail_start = alpha.size() - alpha.size() / 4 - 1;
    double tail_min = *std::min_element(alpha.begin() + tail_start, alpha.end());
    if (tail_min > 0.01 * amax)
        throw schedule_error("tail infimum stays large; summable-subsequence hypothesis fails");

    ScheduleReport rep = pack_blocks(alpha, alpha.size(), p, sigma);
    // Divergence indicator: the packed mass must still be growing over the
    // second half of the prefix. Never an asymptotic claim.
    if (alpha.size() >= 8) {
        ScheduleReport half = pack_blocks(alpha, alpha.size() / 2, p, sigma);
        rep.diverging = rep.total_sum - half.total_sum > 0.1;
    }
    return rep;
}

DensityProfile density_profile(const EtaGraph& eg, const std::vector<Rational>& alpha,
                               Metric metric) {
    const auto& g = eg.base();
    const auto& p = g.params();
    if (static_cast<int>(alpha.size()) < p.n)
        throw param_error("alpha shorter than shortcut levels");
    for (auto& a : alpha)
        if (a < Rational(0)) throw param_error("alpha must be non-negative");

    DensityProfile prof;
    prof.per_level.resize(p.n, 0.0);
    std::vector<std::vector<char>> covered(p.n, std::vector<char>(g.vertex_count(), 0));

    for (int i = 1; i <= p.n; ++i) {
        std::vector<int> sources;
        for (const auto& s : eg.shortcut_sets())
            if (s.level == i)
                sources.insert(sources.end(), s.members.begin(), s.members.end());
        Rational radius = alpha[i - 1] * p.delta(i);
        Rational frac(0);
        if (metric == Metric::base) {
            auto hops = g.hops_from(sources);
            for (int v = 0; v < g.vertex_count(); ++v)
                if (hops[v] >= 0 && Rational(hops[v], p.D()) <= radius) {
                    covered[i - 1][v] = 1;
                    frac += g.vertex_measure(v);
                }
        } else {
            auto units = eg.units_from(sources);
            for (int v = 0; v < g.vertex_count(); ++v)
                if (units[v] >= 0 && eg.from_units(units[v]) <= radius) {
                    covered[i - 1][v] = 1;
                    frac += g.vertex_measure(v);
                }
        }
        prof.per_level[i - 1] = frac.to_double();
    }

    prof.cumulative.resize(p.n, 0.0);
    for (int i0 = 1; i0 <= p.n; ++i0) {
        Rational frac(0);
        for (int v = 0; v < g.vertex_count(); ++v) {
            bool any = false;
            for (int i = i0; i <= p.n && !any; ++i) any = covered[i - 1][v];
            if (any) frac += g.vertex_measure(v);
        }
        prof.cumulative[i0 - 1] = frac.to_double();
    }
    return prof;
}

}  // namespace lab
