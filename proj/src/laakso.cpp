#include "lab/laakso.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

namespace lab {

void LaaksoParams::validate() const {
    if (M < 2) throw param_error("M must be >= 2");
    if (n < 0) throw param_error("depth must be >= 0");
    if (static_cast<int>(N.size()) != n + 1)
        throw param_error("N must have length n+1");
    for (auto v : N) {
        if (v < 4) throw param_error("every N_i must be >= 4");
        if (v % 2 != 0) throw param_error("every N_i must be even");
    }
    double est = static_cast<double>(D());
    for (int i = 0; i < n; ++i) est *= static_cast<double>(M);
    if (est > static_cast<double>(vertex_cap))
        throw param_error("vertex count D*M^n exceeds cap");
}

std::int64_t LaaksoParams::D() const { return level_step(0); }

std::int64_t LaaksoParams::level_step(int i) const {
    std::int64_t p = 1;
    for (std::size_t j = i; j < N.size(); ++j) p *= N[j];
    return p;
}

std::int64_t LaaksoParams::prefix_product(int i) const {
    std::int64_t p = 1;
    for (int j = 0; j < i; ++j) p *= N[j];
    return p;
}

bool LaaksoParams::constant_N() const {
    for (auto v : N)
        if (v != N[0]) return false;
    return true;
}

double LaaksoParams::theta() const {
    if (constant_N()) return 1.0 / static_cast<double>(N[0]);
    double logsum = 0;
    for (auto v : N) logsum += std::log(static_cast<double>(v));
    return std::exp(-logsum / static_cast<double>(N.size()));
}

double LaaksoParams::hausdorff_dim() const {
    return 1.0 + std::log(static_cast<double>(M)) / std::log(1.0 / theta());
}

std::optional<int> wormhole_level(const LaaksoParams& p, std::int64_t idx) {
    if (idx <= 0 || idx >= p.D()) return std::nullopt;
    for (int i = 1; i <= p.n + 1; ++i) {
        std::int64_t step = p.level_step(i);
        if (idx % step != 0) continue;
        std::int64_t m = idx / step;
        if (m % p.N[i - 1] != 0) return i;
    }
    return std::nullopt;  // unreachable for 0 < idx < D
}

std::vector<Rational> wormholes(const LaaksoParams& p, int i) {
    if (i < 1 || i > p.n + 1) throw param_error("wormhole level out of range");
    std::vector<Rational> out;
    std::int64_t gridD = p.prefix_product(i);
    for (std::int64_t m = 1; m < gridD; ++m)
        if (m % p.N[i - 1] != 0) out.emplace_back(m, gridD);
    return out;
}

namespace {

// Digit codes are base (M+1) with 0 reserved for the wildcard.
std::uint64_t pack_digits(const std::vector<int>& digits, std::int64_t M) {
    std::uint64_t code = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        code = code * static_cast<std::uint64_t>(M + 1) + static_cast<std::uint64_t>(*it);
    return code;
}

}  // namespace

LaaksoGraph::LaaksoGraph(LaaksoParams params) : params_(std::move(params)) {
    params_.validate();
    const std::int64_t D = params_.D();
    const std::int64_t M = params_.M;
    const int n = params_.n;

    std::vector<int> digits(n, 1);
    auto emit_column = [&](std::int64_t h, int wildcard_at) {
        // Enumerate digit words in increasing packed order, wildcard pinned.
        std::fill(digits.begin(), digits.end(), 1);
        if (wildcard_at > 0) digits[wildcard_at - 1] = 0;
        while (true) {
            verts_.push_back(LVertex{h, pack_digits(digits, M)});
            int j = 0;
            while (j < n) {
                if (j + 1 == wildcard_at) { ++j; continue; }
                if (digits[j] < M) { ++digits[j]; break; }
                digits[j] = 1;
                ++j;
            }
            if (j >= n) break;
        }
    };

    for (std::int64_t h = 0; h <= D; ++h) {
        auto lvl = wormhole_level(params_, h);
        int wc = (lvl && *lvl <= n) ? *lvl : 0;
        emit_column(h, wc);
    }

    index_.reserve(verts_.size() * 2);
    for (int i = 0; i < static_cast<int>(verts_.size()); ++i)
        index_.emplace(key(verts_[i].h_idx, verts_[i].code), i);

    // Adjacency: heights differ by one grid step and digits agree wherever
    // both are non-wildcard. At most one endpoint of an edge is a wildcard
    // vertex since consecutive height indices cannot both be wormholes.
    std::vector<int> col_begin(D + 2, 0);
    {
        int v = 0;
        for (std::int64_t h = 0; h <= D; ++h) {
            col_begin[h] = v;
            while (v < static_cast<int>(verts_.size()) && verts_[v].h_idx == h) ++v;
        }
        col_begin[D + 1] = v;
    }
    for (std::int64_t h = 0; h < D; ++h) {
        for (int u = col_begin[h]; u < col_begin[h + 1]; ++u) {
            for (int v = col_begin[h + 1]; v < col_begin[h + 2]; ++v) {
                bool ok = true;
                std::uint64_t cu = verts_[u].code, cv = verts_[v].code;
                for (int j = 0; j < n; ++j) {
                    auto du = cu % (M + 1), dv = cv % (M + 1);
                    cu /= (M + 1); cv /= (M + 1);
                    if (du != 0 && dv != 0 && du != dv) { ok = false; break; }
                }
                if (ok) edges_.emplace_back(u, v);
            }
        }
    }

    adj_off_.assign(verts_.size() + 1, 0);
    for (auto& [u, v] : edges_) { ++adj_off_[u + 1]; ++adj_off_[v + 1]; }
    for (std::size_t i = 1; i < adj_off_.size(); ++i) adj_off_[i] += adj_off_[i - 1];
    adj_.resize(2 * edges_.size());
    std::vector<int> cursor(adj_off_.begin(), adj_off_.end() - 1);
    for (auto& [u, v] : edges_) {
        adj_[cursor[u]++] = v;
        adj_[cursor[v]++] = u;
    }

    base_ = vertex_id(0, std::vector<int>(n, 1));
}

std::uint64_t LaaksoGraph::key(std::int64_t h_idx, std::uint64_t code) const {
    std::uint64_t columns = 1;
    for (int j = 0; j < params_.n; ++j) columns *= static_cast<std::uint64_t>(params_.M + 1);
    return static_cast<std::uint64_t>(h_idx) * columns + code;
}

int LaaksoGraph::digit(int id, int level) const {
    std::uint64_t c = verts_[id].code;
    for (int j = 1; j < level; ++j) c /= (params_.M + 1);
    return static_cast<int>(c % (params_.M + 1));
}

Rational LaaksoGraph::edge_weight() const {
    std::int64_t cols = 1;
    for (int j = 0; j < params_.n; ++j) cols *= params_.M;
    return Rational(1, params_.D() * cols);
}

Rational LaaksoGraph::vertex_measure(int v) const {
    std::int64_t deg = adj_off_[v + 1] - adj_off_[v];
    return Rational(deg, 2) * edge_weight();
}

int LaaksoGraph::vertex_id(std::int64_t h_idx, const std::vector<int>& digits) const {
    if (static_cast<int>(digits.size()) != params_.n)
        throw lookup_error("digit word has wrong length");
    // Canonicalize: at a wormhole height the merged digit is the wildcard, so
    // any value written there refers to the same quotient point.
    std::vector<int> canon = digits;
    auto lvl = wormhole_level(params_, h_idx);
    if (lvl && *lvl <= params_.n) canon[*lvl - 1] = 0;
    return find(LVertex{h_idx, pack_digits(canon, params_.M)});
}

int LaaksoGraph::find(const LVertex& v) const {
    if (v.h_idx < 0 || v.h_idx > params_.D()) throw lookup_error("height out of range");
    auto it = index_.find(key(v.h_idx, v.code));
    if (it == index_.end()) throw lookup_error("vertex not in graph");
    return it->second;
}

std::vector<int> LaaksoGraph::digits_of(int id) const {
    std::vector<int> out(params_.n);
    for (int j = 1; j <= params_.n; ++j) out[j - 1] = digit(id, j);
    return out;
}

std::string LaaksoGraph::vertex_label(int id) const {
    std::string s = std::to_string(verts_[id].h_idx) + "/" + std::to_string(params_.D()) + ":";
    for (int j = 1; j <= params_.n; ++j) {
        int d = digit(id, j);
        s += d == 0 ? "*" : std::to_string(d);
    }
    return s;
}

Rational LaaksoGraph::dist(int x, int y) const {
    if (x < 0 || x >= vertex_count() || y < 0 || y >= vertex_count())
        throw lookup_error("vertex id out of range");
    if (x == y) return Rational(0);
    std::vector<std::int64_t> h = hops_from({x});
    if (h[y] < 0) throw invariant_error("graph not connected");
    return Rational(h[y], params_.D());
}

std::vector<std::int64_t> LaaksoGraph::hops_from(const std::vector<int>& sources) const {
    std::vector<std::int64_t> dist(verts_.size(), -1);
    std::deque<int> q;
    for (int s : sources) {
        if (dist[s] >= 0) continue;
        dist[s] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (const int* it = adj_begin(u); it != adj_end(u); ++it) {
            if (dist[*it] < 0) {
                dist[*it] = dist[u] + 1;
                q.push_back(*it);
            }
        }
    }
    return dist;
}

Rational LaaksoGraph::dist_formula(int x, int y) const {
    const std::int64_t D = params_.D();
    std::vector<int> delta;
    for (int j = 1; j <= params_.n; ++j) {
        int dx = digit(x, j), dy = digit(y, j);
        if (dx != 0 && dy != 0 && dx != dy) delta.push_back(j);
    }
    if (static_cast<int>(delta.size()) > 12) return dist(x, y);

    std::int64_t lo = std::min(verts_[x].h_idx, verts_[y].h_idx);
    std::int64_t hi = std::max(verts_[x].h_idx, verts_[y].h_idx);
    std::int64_t hgap = hi - lo;

    // Levels whose wormholes already meet [lo, hi] need no extension. For the
    // rest, pick per level the nearest W_j point below lo / above hi and
    // enumerate left/right assignments.
    struct Need { std::int64_t below_gap; std::int64_t above_gap; };
    std::vector<Need> needs;
    for (int j : delta) {
        std::int64_t step = params_.level_step(j);
        std::int64_t Nj = params_.N[j - 1];
        // Nearest wormhole of level j at height <= t resp. >= t. W_j consists
        // of the multiples m*step with m not divisible by N_j, 0 < m*step < D.
        auto at_or_below = [&](std::int64_t t) -> std::optional<std::int64_t> {
            if (t < step) return std::nullopt;
            std::int64_t m = t / step;
            if (m % Nj == 0) --m;
            if (m < 1) return std::nullopt;
            return m * step;
        };
        auto at_or_above = [&](std::int64_t t) -> std::optional<std::int64_t> {
            std::int64_t m = (t + step - 1) / step;
            if (m % Nj == 0) ++m;
            if (m * step >= D) return std::nullopt;
            return m * step;
        };
        auto inside_lo = at_or_above(lo);
        if (inside_lo && *inside_lo <= hi) continue;  // hull already meets W_j
        auto below = at_or_below(lo - 1);
        auto above = at_or_above(hi + 1);
        needs.push_back(Need{below ? lo - *below : -1, above ? *above - hi : -1});
    }

    std::int64_t best = -1;
    const std::size_t k = needs.size();
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
        std::int64_t left = 0, right = 0;
        bool feasible = true;
        for (std::size_t j = 0; j < k; ++j) {
            if (mask & (1ULL << j)) {
                if (needs[j].below_gap < 0) { feasible = false; break; }
                left = std::max(left, needs[j].below_gap);
            } else {
                if (needs[j].above_gap < 0) { feasible = false; break; }
                right = std::max(right, needs[j].above_gap);
            }
        }
        if (!feasible) continue;
        std::int64_t len = hgap + left + right;
        if (best < 0 || len < best) best = len;
    }
    if (best < 0) throw invariant_error("no feasible interval in dist_formula");
    return Rational(2 * best - hgap, D);
}

std::string Cube::label() const {
    std::string s = "L" + std::to_string(level) + ":I" + std::to_string(m) + ":";
    for (int d : prefix) s += std::to_string(d);
    return s;
}

std::vector<Cube> cubes(const LaaksoGraph& g, int level) {
    const auto& p = g.params();
    if (level < 0 || level > p.n) throw param_error("cube level out of range");
    std::int64_t intervals = p.prefix_product(level);
    std::vector<Cube> out;
    std::vector<int> prefix(level, 1);
    for (std::int64_t m = 0; m < intervals; ++m) {
        std::fill(prefix.begin(), prefix.end(), 1);
        while (true) {
            out.push_back(Cube{level, m, prefix});
            int j = 0;
            while (j < level && prefix[j] == p.M) prefix[j++] = 1;
            if (j >= level) break;
            ++prefix[j];
        }
    }
    return out;
}

Rational cube_measure(const LaaksoGraph& g, const Cube& q) {
    std::int64_t cols = 1;
    for (int j = 0; j < q.level; ++j) cols *= g.params().M;
    return Rational(1, g.params().prefix_product(q.level) * cols);
}

namespace {
bool prefix_compatible(const LaaksoGraph& g, int v, const std::vector<int>& prefix) {
    for (std::size_t j = 0; j < prefix.size(); ++j) {
        int d = g.digit(v, static_cast<int>(j) + 1);
        if (d != 0 && d != prefix[j]) return false;
    }
    return true;
}
}  // namespace

std::vector<int> vertices_in(const LaaksoGraph& g, const Cube& q) {
    std::int64_t step = g.params().level_step(q.level);
    std::int64_t lo = q.m * step, hi = (q.m + 1) * step;
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::int64_t h = g.height_idx(v);
        if (h < lo || h > hi) continue;
        if (prefix_compatible(g, v, q.prefix)) out.push_back(v);
    }
    return out;
}

std::vector<int> boundary_vertices(const LaaksoGraph& g, const Cube& q) {
    std::int64_t step = g.params().level_step(q.level);
    std::int64_t lo = q.m * step, hi = (q.m + 1) * step;
    std::vector<int> out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::int64_t h = g.height_idx(v);
        if (h != lo && h != hi) continue;
        if (prefix_compatible(g, v, q.prefix)) out.push_back(v);
    }
    return out;
}

int cube_of_edge(const LaaksoGraph& g, int level, int edge_id) {
    const auto& p = g.params();
    auto [u, v] = g.edges()[edge_id];
    std::int64_t step = p.level_step(level);
    std::int64_t hlo = std::min(g.height_idx(u), g.height_idx(v));
    std::int64_t m = hlo / step;
    // The endpoint strictly inside the interval carries defined digits at all
    // levels <= `level`; at most one endpoint sits on the level grid.
    int rep = (g.height_idx(u) % step == 0 || g.height_idx(v) % step == 0)
                  ? (g.height_idx(u) % step != 0 ? u : v)
                  : u;
    std::int64_t cols = 1, code = 0;
    for (int j = 1; j <= level; ++j) {
        code += (g.digit(rep, j) - 1) * cols;
        cols *= p.M;
    }
    return static_cast<int>(m * cols + code);
}

std::vector<int> edges_in(const LaaksoGraph& g, const Cube& q) {
    std::int64_t cols = 1, code = 0;
    for (int j = 0; j < q.level; ++j) {
        code += (q.prefix[j] - 1) * cols;
        cols *= g.params().M;
    }
    int want = static_cast<int>(q.m * cols + code);
    std::vector<int> out;
    for (int e = 0; e < g.edge_count(); ++e)
        if (cube_of_edge(g, q.level, e) == want) out.push_back(e);
    return out;
}

}  // namespace lab
