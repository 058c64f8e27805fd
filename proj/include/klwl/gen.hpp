#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace klwl {

inline Graph gen_cycle(int n) {
    if (n < 3) throw ArgumentError("cycle needs at least 3 nodes");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph::make(n, std::move(e));
}

inline Graph gen_path(int n) {
    if (n < 1) throw ArgumentError("path needs at least 1 node");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::make(n, std::move(e));
}

// Complete graph on l nodes, node i colored i+1.
inline Graph gen_clique_colored(int l) {
    if (l < 1) throw ArgumentError("clique needs at least 1 node");
    std::vector<std::pair<int, int>> e;
    std::vector<NodeColor> colors;
    for (int i = 0; i < l; ++i) {
        colors.push_back(i + 1);
        for (int j = i + 1; j < l; ++j) e.emplace_back(i, j);
    }
    return Graph::make(l, std::move(e), std::move(colors));
}

// 4x4 rook's graph: cells adjacent iff same row or same column.
inline Graph gen_rook4() {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < 16; ++a)
        for (int b = a + 1; b < 16; ++b)
            if (a / 4 == b / 4 || a % 4 == b % 4) e.emplace_back(a, b);
    return Graph::make(16, std::move(e));
}

// Shrikhande graph on Z4 x Z4: adjacent iff difference in {±(1,0), ±(0,1), ±(1,1)}.
inline Graph gen_shrikhande() {
    auto id = [](int i, int j) { return ((i % 4 + 4) % 4) * 4 + ((j % 4 + 4) % 4); };
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
                int a = id(i, j), b = id(i + di, j + dj);
                e.emplace_back(std::min(a, b), std::max(a, b));
            }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return Graph::make(16, std::move(e));
}

// ---------------------------------------------------------------------------
// CFI construction. Each base vertex v of degree d becomes a block with
// parity-constrained binary nodes over d bits plus d bit pairs (a_i, b_i);
// the binary with bit string m connects to a_i when m_i = 1, else to b_i.
// Per base edge (v,w), the associated bit pairs are joined straight
// (a-a, b-b), or crossed (a-b, b-a) on twisted edges.
//
// Block kinds: chi keeps even-parity binaries only; omega adds odd-parity
// binaries under a second parity color; gamma gives all binaries one shared
// color and instead attaches a private CFI branch to each binary (twisted
// branch on even parity, straight on odd), recoverable only structurally.

enum class BlockKind { Chi, Omega, Gamma };

struct CfiSpec {
    Graph base;
    BlockKind kind = BlockKind::Chi;
    int gamma_branch = 2;                          // branch parameter a (gamma only)
    std::vector<std::pair<int, int>> twist_edges;  // base edges to twist, u < v
};

namespace detail {

enum CfiColorTag : long long {
    kCfiEven = 1,
    kCfiOdd = 2,
    kCfiBit = 3,
    kCfiGammaBin = 4,
    kCfiBranch = 5,
};

inline NodeColor cfi_color(long long tag, long long a, long long b = 0) {
    return (tag << 40) | (a << 20) | b;
}

}  // namespace detail

inline Graph gen_cfi(const CfiSpec& spec) {
    const Graph& base = spec.base;
    int n = base.node_count();
    if (n < 1) throw ArgumentError("cfi base must be non-empty");
    for (int v = 0; v < n; ++v)
        if (base.degree(v) < 2) throw ArgumentError("cfi base needs minimal degree 2");
    for (NodeColor c : base.node_colors())
        if (c < 0 || c >= (1 << 20)) throw ArgumentError("cfi base colors must fit in 20 bits");

    std::vector<std::pair<int, int>> twists = spec.twist_edges;
    for (auto& [u, v] : twists)
        if (u > v) std::swap(u, v);
    std::sort(twists.begin(), twists.end());
    if (std::adjacent_find(twists.begin(), twists.end()) != twists.end())
        throw ArgumentError("twist edges must be distinct");
    for (auto& e : twists)
        if (!base.has_edge(e.first, e.second)) throw ArgumentError("twist edge not in base graph");

    // Branch instances for gamma blocks: straight and twisted CFI of a
    // colored clique, with colors remapped onto a dense branch palette.
    Graph branch_plain, branch_twisted;
    std::vector<NodeColor> branch_palette;
    if (spec.kind == BlockKind::Gamma) {
        if (spec.gamma_branch < 2) throw ArgumentError("gamma branch parameter must be >= 2");
        CfiSpec inner;
        inner.base = gen_clique_colored(spec.gamma_branch + 1);
        inner.kind = BlockKind::Chi;
        branch_plain = gen_cfi(inner);
        inner.twist_edges = {inner.base.edges().front()};
        branch_twisted = gen_cfi(inner);
        branch_palette = branch_plain.node_colors();
        std::sort(branch_palette.begin(), branch_palette.end());
        branch_palette.erase(std::unique(branch_palette.begin(), branch_palette.end()),
                             branch_palette.end());
    }
    auto branch_color = [&](NodeColor inner) {
        long long idx = std::lower_bound(branch_palette.begin(), branch_palette.end(), inner) -
                        branch_palette.begin();
        return detail::cfi_color(detail::kCfiBranch, idx);
    };

    std::vector<std::pair<int, int>> edges;
    std::vector<NodeColor> colors;
    int next = 0;
    auto add_node = [&](NodeColor c) {
        colors.push_back(c);
        return next++;
    };

    // bit_nodes[v] = flat [a_0, b_0, a_1, b_1, ...] in sorted-neighbor slot order
    std::vector<std::vector<int>> bit_nodes(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        int d = base.degree(v);
        NodeColor xv = base.color(v);
        std::vector<int> binaries;
        for (int mask = 0; mask < (1 << d); ++mask) {
            bool even = (std::popcount(static_cast<unsigned>(mask)) % 2) == 0;
            if (spec.kind == BlockKind::Chi && !even) continue;
            NodeColor c = spec.kind == BlockKind::Gamma
                              ? detail::cfi_color(detail::kCfiGammaBin, xv)
                              : detail::cfi_color(even ? detail::kCfiEven : detail::kCfiOdd, xv);
            binaries.push_back(add_node(c));
        }
        auto& bits = bit_nodes[static_cast<size_t>(v)];
        for (int i = 0; i < d; ++i) {
            NodeColor xw = base.color(base.neighbors(v)[static_cast<size_t>(i)]);
            bits.push_back(add_node(detail::cfi_color(detail::kCfiBit, xv, xw)));  // a_i
            bits.push_back(add_node(detail::cfi_color(detail::kCfiBit, xv, xw)));  // b_i
        }
        int bi = 0;
        for (int mask = 0; mask < (1 << d); ++mask) {
            bool even = (std::popcount(static_cast<unsigned>(mask)) % 2) == 0;
            if (spec.kind == BlockKind::Chi && !even) continue;
            int bin = binaries[static_cast<size_t>(bi++)];
            for (int i = 0; i < d; ++i)
                edges.emplace_back(bin, bits[static_cast<size_t>(2 * i + ((mask >> i) & 1 ? 0 : 1))]);
            if (spec.kind == BlockKind::Gamma) {
                const Graph& br = even ? branch_twisted : branch_plain;
                int off = next;
                for (NodeColor c : br.node_colors()) add_node(branch_color(c));
                for (auto [a, b] : br.edges()) edges.emplace_back(a + off, b + off);
                for (int t = 0; t < br.node_count(); ++t) edges.emplace_back(bin, t + off);
            }
        }
    }

    for (auto [v, w] : base.edges()) {
        auto slot = [&](int at, int other) {
            const auto& nb = base.neighbors(at);
            return static_cast<int>(std::lower_bound(nb.begin(), nb.end(), other) - nb.begin());
        };
        int av = bit_nodes[static_cast<size_t>(v)][static_cast<size_t>(2 * slot(v, w))];
        int bv = av + 1;
        int aw = bit_nodes[static_cast<size_t>(w)][static_cast<size_t>(2 * slot(w, v))];
        int bw = aw + 1;
        bool twisted = std::binary_search(twists.begin(), twists.end(), std::pair{v, w});
        if (twisted) {
            edges.emplace_back(av, bw);
            edges.emplace_back(bv, aw);
        } else {
            edges.emplace_back(av, aw);
            edges.emplace_back(bv, bw);
        }
    }
    for (auto& [u, v] : edges)
        if (u > v) std::swap(u, v);
    return Graph::make(next, std::move(edges), std::move(colors));
}

inline Graph gen_cfi(const Graph& base, BlockKind kind, bool twisted, int gamma_branch = 2) {
    CfiSpec spec;
    spec.base = base;
    spec.kind = kind;
    spec.gamma_branch = gamma_branch;
    if (twisted) spec.twist_edges = {base.edges().front()};
    return gen_cfi(spec);
}

// ---------------------------------------------------------------------------

// Simple d-regular graph by seeded stub pairing with restarts.
inline Graph gen_random_regular(int n, int d, uint64_t seed) {
    if (n < 1 || d < 0 || d >= n) throw ArgumentError("need 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0)
        throw ArgumentError("n*d must be even for a d-regular graph");
    std::mt19937_64 rng(seed);
    std::vector<int> stubs;
    for (int attempt = 0; attempt < 2000; ++attempt) {
        stubs.clear();
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng() % i]);
        std::vector<std::pair<int, int>> edges;
        bool ok = true;
        for (size_t i = 0; ok && i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) ok = false;
            if (u > v) std::swap(u, v);
            edges.emplace_back(u, v);
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        return Graph::make(n, std::move(edges));
    }
    throw ResourceError("random regular pairing failed within retry budget");
}

// ---------------------------------------------------------------------------
// Family strings:
//   cycle:N | path:N | clique:L | rook4 | shrikhande
//   union:<family>:<family>
//   cfi:chi|omega|gamma(A):<base family>:twisted|untwisted
//   randreg:N:D:SEED

namespace detail {

inline long long family_int(const std::vector<std::string>& toks, size_t& pos) {
    if (pos >= toks.size()) throw ArgumentError("family spec: missing integer");
    long long v;
    if (!parse_ll(toks[pos], v)) throw ArgumentError("family spec: bad integer '" + toks[pos] + "'");
    ++pos;
    return v;
}

inline Graph parse_family(const std::vector<std::string>& toks, size_t& pos) {
    if (pos >= toks.size()) throw ArgumentError("family spec: unexpected end");
    std::string head = toks[pos++];
    if (head == "cycle") return gen_cycle(static_cast<int>(family_int(toks, pos)));
    if (head == "path") return gen_path(static_cast<int>(family_int(toks, pos)));
    if (head == "clique") return gen_clique_colored(static_cast<int>(family_int(toks, pos)));
    if (head == "rook4") return gen_rook4();
    if (head == "shrikhande") return gen_shrikhande();
    if (head == "union") {
        Graph a = parse_family(toks, pos);
        Graph b = parse_family(toks, pos);
        return disjoint_union(a, b);
    }
    if (head == "randreg") {
        long long n = family_int(toks, pos);
        long long d = family_int(toks, pos);
        long long seed = family_int(toks, pos);
        return gen_random_regular(static_cast<int>(n), static_cast<int>(d),
                                  static_cast<uint64_t>(seed));
    }
    if (head == "cfi") {
        if (pos >= toks.size()) throw ArgumentError("family spec: cfi needs a block kind");
        std::string kind_tok = toks[pos++];
        CfiSpec spec;
        if (kind_tok == "chi") {
            spec.kind = BlockKind::Chi;
        } else if (kind_tok == "omega") {
            spec.kind = BlockKind::Omega;
        } else if (kind_tok.rfind("gamma(", 0) == 0 && kind_tok.back() == ')') {
            spec.kind = BlockKind::Gamma;
            long long a;
            if (!parse_ll(kind_tok.substr(6, kind_tok.size() - 7), a))
                throw ArgumentError("family spec: bad gamma parameter");
            spec.gamma_branch = static_cast<int>(a);
        } else {
            throw ArgumentError("family spec: unknown cfi kind '" + kind_tok + "'");
        }
        spec.base = parse_family(toks, pos);
        if (pos >= toks.size()) throw ArgumentError("family spec: cfi needs twisted|untwisted");
        std::string tw = toks[pos++];
        if (tw == "twisted")
            spec.twist_edges = {spec.base.edges().front()};
        else if (tw != "untwisted")
            throw ArgumentError("family spec: expected twisted|untwisted, got '" + tw + "'");
        return gen_cfi(spec);
    }
    throw ArgumentError("unknown family '" + head + "'");
}

}  // namespace detail

inline Graph gen_family(const std::string& spec) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            toks.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    toks.push_back(cur);
    size_t pos = 0;
    Graph g = detail::parse_family(toks, pos);
    if (pos != toks.size()) throw ArgumentError("family spec: trailing tokens");
    return g;
}

}  // namespace klwl
