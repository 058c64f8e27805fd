#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gen.hpp"
#include "graph.hpp"

namespace klwl {

enum class CountMode { Induced, NonInduced };

struct Pattern {
    enum class Kind { Triangle, TailedTriangle, Star3, ChordalCycle, Cycle } kind;
    int cycle_len = 0;  // Kind::Cycle only
    CountMode mode = CountMode::Induced;
};

inline Graph pattern_graph(const Pattern& p) {
    switch (p.kind) {
        case Pattern::Kind::Triangle:
            return gen_cycle(3);
        case Pattern::Kind::TailedTriangle:
            return Graph::make(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
        case Pattern::Kind::Star3:
            return Graph::make(4, {{0, 1}, {0, 2}, {0, 3}});
        case Pattern::Kind::ChordalCycle:
            return Graph::make(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}});
        case Pattern::Kind::Cycle:
            if (p.cycle_len < 3 || p.cycle_len > 8)
                throw ArgumentError("cycle pattern length must be in [3, 8]");
            return gen_cycle(p.cycle_len);
    }
    throw ArgumentError("unknown pattern");
}

inline Pattern parse_pattern(const std::string& name, CountMode mode) {
    Pattern p;
    p.mode = mode;
    if (name == "triangle" || name == "tri") {
        p.kind = Pattern::Kind::Triangle;
    } else if (name == "tailed" || name == "tailed_triangle") {
        p.kind = Pattern::Kind::TailedTriangle;
    } else if (name == "star" || name == "star3") {
        p.kind = Pattern::Kind::Star3;
    } else if (name == "chordal" || name == "chordal_cycle") {
        p.kind = Pattern::Kind::ChordalCycle;
    } else if (name.rfind("cycle:", 0) == 0) {
        p.kind = Pattern::Kind::Cycle;
        long long len;
        if (!detail::parse_ll(name.substr(6), len)) throw ArgumentError("bad cycle length");
        p.cycle_len = static_cast<int>(len);
        pattern_graph(p);  // validates the bound
    } else {
        throw ArgumentError("unknown pattern '" + name + "'");
    }
    return p;
}

namespace detail {

// Counts injective mappings pattern -> g preserving pattern edges; in strict
// mode non-edges must also be preserved (induced embeddings).
inline long long count_embeddings(const Graph& g, const Graph& pat, bool strict) {
    int p = pat.node_count();
    // order pattern nodes so each (after the first) touches a previous one
    std::vector<int> order;
    std::vector<char> placed(static_cast<size_t>(p), 0);
    for (int start = 0; static_cast<int>(order.size()) < p; ++start) {
        if (placed[static_cast<size_t>(start)]) continue;
        order.push_back(start);
        placed[static_cast<size_t>(start)] = 1;
        for (size_t head = order.size() - 1; head < order.size(); ++head)
            for (int w : pat.neighbors(order[head]))
                if (!placed[static_cast<size_t>(w)]) {
                    placed[static_cast<size_t>(w)] = 1;
                    order.push_back(w);
                }
    }
    std::vector<int> map(static_cast<size_t>(p), -1);
    std::vector<char> used(static_cast<size_t>(g.node_count()), 0);
    long long found = 0;
    auto rec = [&](auto&& self, size_t depth) -> void {
        if (depth == order.size()) {
            ++found;
            return;
        }
        int pv = order[depth];
        for (int gv = 0; gv < g.node_count(); ++gv) {
            if (used[static_cast<size_t>(gv)]) continue;
            bool ok = true;
            for (size_t d = 0; d < depth && ok; ++d) {
                bool pe = pat.has_edge(pv, order[d]);
                bool ge = g.has_edge(gv, map[static_cast<size_t>(order[d])]);
                if (pe != ge && (pe || strict)) ok = false;
            }
            if (!ok) continue;
            map[static_cast<size_t>(pv)] = gv;
            used[static_cast<size_t>(gv)] = 1;
            self(self, depth + 1);
            used[static_cast<size_t>(gv)] = 0;
        }
    };
    rec(rec, 0);
    return found;
}

inline long long automorphism_count(const Graph& pat) {
    return count_embeddings(pat, pat, true);
}

}  // namespace detail

// Induced occurrences: vertex subsets whose induced subgraph is isomorphic to
// the pattern.
inline long long count_induced(const Graph& g, const Graph& pattern) {
    if (pattern.node_count() > 8) throw ArgumentError("pattern too large (limit 8 nodes)");
    return detail::count_embeddings(g, pattern, true) / detail::automorphism_count(pattern);
}

// Non-induced occurrences: subgraph embeddings up to pattern automorphism.
inline long long count_noninduced(const Graph& g, const Graph& pattern) {
    if (pattern.node_count() > 8) throw ArgumentError("pattern too large (limit 8 nodes)");
    return detail::count_embeddings(g, pattern, false) / detail::automorphism_count(pattern);
}

inline long long count_pattern(const Graph& g, const Pattern& p) {
    Graph pat = pattern_graph(p);
    return p.mode == CountMode::Induced ? count_induced(g, pat) : count_noninduced(g, pat);
}

// Independent triangle oracle: trace(A^3) / 6.
inline long long triangle_trace_check(const Graph& g) {
    int n = g.node_count();
    std::vector<long long> a(static_cast<size_t>(n) * n, 0), a2(static_cast<size_t>(n) * n, 0);
    for (auto [u, v] : g.edges()) {
        a[static_cast<size_t>(u) * n + v] = 1;
        a[static_cast<size_t>(v) * n + u] = 1;
    }
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            long long x = a[static_cast<size_t>(i) * n + l];
            if (!x) continue;
            for (int j = 0; j < n; ++j) a2[static_cast<size_t>(i) * n + j] += x * a[static_cast<size_t>(l) * n + j];
        }
    long long trace = 0;
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            trace += a2[static_cast<size_t>(i) * n + l] * a[static_cast<size_t>(l) * n + i];
    return trace / 6;
}

// ---------------------------------------------------------------------------
// Brute-force isomorphism test with color-class and degree pruning. The
// pruning refinement below is deliberately self-contained so this stays an
// independent oracle for the refinement engine.

inline bool brute_force_isomorphic(const Graph& g, const Graph& h, int node_limit = 64,
                                   long long step_budget = 200'000'000) {
    if (g.node_count() != h.node_count()) return false;
    if (g.edges().size() != h.edges().size()) return false;
    int n = g.node_count();
    if (n > node_limit) throw ResourceError("isomorphism oracle limited to " +
                                            std::to_string(node_limit) + " nodes");
    if (n == 0) return true;

    // joint 1-WL refinement for candidate classes
    std::vector<long long> cg(static_cast<size_t>(n)), ch(static_cast<size_t>(n));
    {
        std::map<std::vector<long long>, long long> table;
        auto relabel = [&](const std::vector<long long>& key) {
            auto [it, fresh] = table.emplace(key, static_cast<long long>(table.size()));
            (void)fresh;
            return it->second;
        };
        for (int v = 0; v < n; ++v) {
            cg[static_cast<size_t>(v)] = relabel({g.color(v)});
            ch[static_cast<size_t>(v)] = relabel({h.color(v)});
        }
        size_t classes = table.size();
        while (true) {
            std::vector<long long> ng(static_cast<size_t>(n)), nh(static_cast<size_t>(n));
            size_t before = table.size();
            auto step = [&](const Graph& gr, const std::vector<long long>& cur,
                            std::vector<long long>& out) {
                for (int v = 0; v < n; ++v) {
                    std::vector<long long> key{cur[static_cast<size_t>(v)]};
                    for (int w : gr.neighbors(v)) key.push_back(cur[static_cast<size_t>(w)]);
                    std::sort(key.begin() + 1, key.end());
                    out[static_cast<size_t>(v)] = relabel(key);
                }
            };
            step(g, cg, ng);
            step(h, ch, nh);
            cg.swap(ng);
            ch.swap(nh);
            size_t now = table.size() - before;
            if (now == classes) break;
            classes = now;
        }
    }
    std::map<long long, long long> hist_g, hist_h;
    for (auto c : cg) ++hist_g[c];
    for (auto c : ch) ++hist_h[c];
    if (hist_g != hist_h) return false;

    // backtracking over the stable classes, most-constrained first
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        long long sa = hist_g[cg[static_cast<size_t>(a)]], sb = hist_g[cg[static_cast<size_t>(b)]];
        if (sa != sb) return sa < sb;
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    std::vector<int> map(static_cast<size_t>(n), -1);
    std::vector<char> used(static_cast<size_t>(n), 0);
    long long steps = 0;
    auto rec = [&](auto&& self, size_t depth) -> bool {
        if (depth == order.size()) return true;
        if (++steps > step_budget) throw ResourceError("isomorphism oracle exceeded step budget");
        int gv = order[depth];
        for (int hv = 0; hv < n; ++hv) {
            if (used[static_cast<size_t>(hv)]) continue;
            if (cg[static_cast<size_t>(gv)] != ch[static_cast<size_t>(hv)]) continue;
            bool ok = true;
            for (size_t d = 0; d < depth && ok; ++d)
                if (g.has_edge(gv, order[d]) != h.has_edge(hv, map[static_cast<size_t>(order[d])]))
                    ok = false;
            if (!ok) continue;
            map[static_cast<size_t>(gv)] = hv;
            used[static_cast<size_t>(hv)] = 1;
            if (self(self, depth + 1)) return true;
            used[static_cast<size_t>(hv)] = 0;
        }
        return false;
    };
    return rec(rec, 0);
}

}  // namespace klwl
