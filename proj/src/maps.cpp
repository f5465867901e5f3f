#include "lab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lab {

double NormTag::eval(const std::vector<double>& x) const {
    if (kind == euclidean) {
        double s = 0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    double s = 0;
    for (const auto& blk : blocks)
        for (int c : blk) s += std::pow(std::abs(x[c]), q);
    return std::pow(s, 1.0 / q);
}

PAMap PAMap::zero(const LaaksoGraph& g, int k) {
    PAMap f;
    f.g = &g;
    f.k = k;
    f.values.assign(static_cast<std::size_t>(g.vertex_count()) * k, 0.0);
    return f;
}

std::vector<double> PAMap::value(int v) const {
    return {values.begin() + static_cast<std::size_t>(v) * k,
            values.begin() + static_cast<std::size_t>(v + 1) * k};
}

std::vector<double> PAMap::delta(int u, int v) const {
    std::vector<double> d(k);
    for (int c = 0; c < k; ++c)
        d[c] = values[static_cast<std::size_t>(u) * k + c] -
               values[static_cast<std::size_t>(v) * k + c];
    return d;
}

std::vector<Rational> tent_values(const LaaksoGraph& g, int level) {
    const auto& p = g.params();
    if (level < 1 || level > p.n) throw param_error("tent level out of range");
    const std::int64_t step = p.level_step(level);
    const std::int64_t Ni = p.N[level - 1];
    std::vector<Rational> out(g.vertex_count(), Rational(0));
    for (int v = 0; v < g.vertex_count(); ++v) {
        std::int64_t h = g.height_idx(v);
        if (h % step == 0) continue;  // interval endpoints carry value 0
        std::int64_t m = h / step;
        std::int64_t ti = m % Ni;
        if (ti < 1 || ti > Ni - 2) continue;  // need both endpoints in W_i^h
        int d = g.digit(v, level);
        if (d != 1 && d != p.M) continue;
        std::int64_t t0 = m * step + step / 2;
        Rational val(step / 2 - std::abs(h - t0), p.D());
        out[v] = d == p.M ? val : -val;
    }
    return out;
}

PAMap tent_block(const LaaksoGraph& g, int level) {
    auto exact = tent_values(g, level);
    PAMap f = PAMap::zero(g, 1);
    for (int v = 0; v < g.vertex_count(); ++v) f.values[v] = exact[v].to_double();
    return f;
}

Rational lip_exact(const LaaksoGraph& g, const std::vector<Rational>& values) {
    Rational best(0);
    const std::int64_t D = g.params().D();
    for (auto& [u, v] : g.edges())
        best = std::max(best, (values[u] - values[v]).abs() * Rational(D));
    return best;
}

double lip(const PAMap& f) {
    const auto& g = *f.g;
    const double invlen = static_cast<double>(g.params().D());
    double best = 0;
    for (auto& [u, v] : g.edges())
        best = std::max(best, f.norm.eval(f.delta(u, v)) * invlen);
    return best;
}

double lip_eta(const PAMap& f, const EtaGraph& eg) {
    double best = lip(f);
    for (const auto& c : eg.chords()) {
        double w = eg.from_units(c.weight_units).to_double();
        best = std::max(best, f.norm.eval(f.delta(c.u, c.v)) / w);
    }
    return best;
}

namespace {

// Uniform edge-slope vectors per level-`level` cube; affine in h on a cube
// means every edge inside it realizes the same slope.
struct CubeSlopes {
    std::vector<std::vector<double>> slope;  // per cube, length k
    std::vector<char> seen;
};

CubeSlopes cube_slopes_checked(const PAMap& f, int level, double rel_tol) {
    const auto& g = *f.g;
    const auto& p = g.params();
    std::int64_t ncubes = p.prefix_product(level);
    for (int j = 0; j < level; ++j) ncubes *= p.M;
    CubeSlopes cs;
    cs.slope.assign(ncubes, {});
    cs.seen.assign(ncubes, 0);
    const double invlen = static_cast<double>(p.D());
    double scale = std::max(1.0, lip(f));
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edges()[e];
        int c = cube_of_edge(g, level, e);
        // slope oriented with increasing height
        int hi = g.height_idx(u) > g.height_idx(v) ? u : v;
        int lo = hi == u ? v : u;
        auto d = f.delta(hi, lo);
        for (auto& x : d) x *= invlen;
        if (!cs.seen[c]) {
            cs.slope[c] = d;
            cs.seen[c] = 1;
        } else {
            for (int j = 0; j < f.k; ++j)
                if (std::abs(d[j] - cs.slope[c][j]) > rel_tol * scale)
                    throw param_error("map is not affine on a required piece");
        }
    }
    return cs;
}

}  // namespace

PAMap orthogonal_step(const PAMap& f, int level, double A) {
    if (f.k != 2) throw param_error("orthogonal_step needs a plane-valued map");
    const auto& g = *f.g;
    const auto& p = g.params();
    if (level < 1 || level > p.n) throw param_error("level out of range");
    auto cs = cube_slopes_checked(f, level, 1e-12);

    auto tent = tent_values(g, level);
    const std::int64_t step = p.level_step(level);
    const std::int64_t Ni = p.N[level - 1];

    // Unit normal per (interval, prefix) family: all M digit-`level` cubes
    // over one family share their affine direction (they agree at the
    // wormhole endpoints), so the representative cube with digit 1 fixes v.
    PAMap F = f;
    std::int64_t mcols = 1;
    for (int j = 0; j < level; ++j) mcols *= p.M;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (tent[v] == Rational(0)) continue;
        std::int64_t h = g.height_idx(v);
        std::int64_t m = h / step;
        std::int64_t ti = m % Ni;
        if (ti < 1 || ti > Ni - 2) continue;
        std::int64_t code = 0, pw = 1;
        for (int j = 1; j < level; ++j) {
            code += (g.digit(v, j) - 1) * pw;
            pw *= p.M;
        }
        int cube0 = static_cast<int>(m * mcols + code);  // digit `level` pinned to 1
        double nx = 0, ny = 1;
        if (cs.seen[cube0]) {
            const auto& dir = cs.slope[cube0];
            double nrm = std::hypot(dir[0], dir[1]);
            if (nrm > 1e-300) {
                nx = -dir[1] / nrm;
                ny = dir[0] / nrm;
            }
        }
        double t = A * tent[v].to_double();
        F.values[2 * v] += t * nx;
        F.values[2 * v + 1] += t * ny;
    }
    return F;
}

PAMap bad_map_r2(const LaaksoGraph& g, const std::vector<int>& levels,
                 const EtaSchedule& eta) {
    if (levels.empty()) throw param_error("empty level set");
    std::vector<int> order = levels;
    std::sort(order.begin(), order.end());
    PAMap f = PAMap::zero(g, 2);
    for (int i : order) f = orthogonal_step(f, i, eta.at(i).to_double());
    return f;
}

PAMap bad_map_blocked_lq(const LaaksoGraph& g, const std::vector<std::vector<int>>& blocks,
                         const EtaSchedule& eta, double q) {
    if (q < 1.0) throw param_error("q must be >= 1");
    std::vector<char> used(g.params().n + 1, 0);
    int k = 0;
    for (const auto& blk : blocks)
        for (int i : blk) {
            if (i < 1 || i > g.params().n) throw param_error("block level out of range");
            if (used[i]) throw param_error("blocks must be disjoint");
            used[i] = 1;
            ++k;
        }
    PAMap f = PAMap::zero(g, k);
    f.norm.kind = NormTag::block_lq;
    f.norm.q = q;
    int coord = 0;
    for (const auto& blk : blocks) {
        std::vector<int> coords;
        for (int i : blk) {
            auto tent = tent_values(g, i);
            double e = eta.at(i).to_double();
            for (int v = 0; v < g.vertex_count(); ++v)
                f.values[static_cast<std::size_t>(v) * k + coord] = e * tent[v].to_double();
            coords.push_back(coord++);
        }
        f.norm.blocks.push_back(std::move(coords));
    }
    return f;
}

double block_lip(const PAMap& f, const std::vector<int>& coords) {
    const auto& g = *f.g;
    const double invlen = static_cast<double>(g.params().D());
    const double q = f.norm.kind == NormTag::block_lq ? f.norm.q : 2.0;
    double best = 0;
    for (auto& [u, v] : g.edges()) {
        double s = 0;
        for (int c : coords)
            s += std::pow(std::abs(f.values[static_cast<std::size_t>(u) * f.k + c] -
                                   f.values[static_cast<std::size_t>(v) * f.k + c]),
                          q);
        best = std::max(best, std::pow(s, 1.0 / q) * invlen);
    }
    return best;
}

Rational diam_exact(const LaaksoGraph&, const std::vector<Rational>& values,
                    const std::vector<int>& set) {
    Rational best(0);
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
            best = std::max(best, (values[set[a]] - values[set[b]]).abs());
    return best;
}

double diam_of(const PAMap& f, const std::vector<int>& set) {
    double best = 0;
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
            best = std::max(best, f.norm.eval(f.delta(set[a], set[b])));
    return best;
}

Rational diam_eta(const EtaGraph& eg, const std::vector<int>& set) {
    Rational best(0);
    for (std::size_t a = 0; a < set.size(); ++a) {
        auto units = eg.units_from({set[a]});
        for (std::size_t b = a + 1; b < set.size(); ++b)
            best = std::max(best, eg.from_units(units[set[b]]));
    }
    return best;
}

OscillationReport oscillation_report(const PAMap& f, const EtaGraph& eg, double eps) {
    if (!(eps > 0)) throw param_error("eps must be positive");
    const auto& g = eg.base();
    OscillationReport rep;
    rep.eps = eps;
    const auto& sets = eg.shortcut_sets();
    for (int sid = 0; sid < static_cast<int>(sets.size()); ++sid) {
        const auto& s = sets[sid];
        OscillationEntry e;
        e.set_id = sid;
        e.level = s.level;
        e.diam_f = diam_of(f, s.members);
        e.diam_eta = diam_eta(eg, s.members);
        double rho = (eg.eta().at(s.level) * g.params().delta(s.level)).to_double();
        e.ratio = e.diam_f / rho;
        e.classified = e.diam_f >= eps * rho;
        if (e.classified) rep.classified_sets.push_back(sid);
        rep.entries.push_back(e);
    }
    rep.bad_density = bad_density(f, eg, eps, 1, g.params().n);
    return rep;
}

double bad_density(const PAMap& f, const EtaGraph& eg, double eps, int level_lo, int level_hi) {
    const auto& g = eg.base();
    const auto& p = g.params();
    std::vector<char> covered(g.vertex_count(), 0);
    for (int i = level_lo; i <= level_hi; ++i) {
        std::vector<int> sources;
        double rho = (eg.eta().at(i) * p.delta(i)).to_double();
        for (const auto& s : eg.shortcut_sets()) {
            if (s.level != i) continue;
            if (diam_of(f, s.members) >= eps * rho)
                sources.insert(sources.end(), s.members.begin(), s.members.end());
        }
        if (sources.empty()) continue;
        auto units = eg.units_from(sources);
        double radius = rho / eps;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (units[v] >= 0 && eg.from_units(units[v]).to_double() <= radius) covered[v] = 1;
    }
    Rational frac(0);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (covered[v]) frac += g.vertex_measure(v);
    return frac.to_double();
}

}  // namespace lab
