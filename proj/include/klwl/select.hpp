#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace klwl {

struct SelectionPolicy {
    enum class Kind { Exhaustive, Random, Ego, Constraint, Cluster } kind = Kind::Exhaustive;
    double rate = 1.0;       // random
    uint64_t seed = 0;       // random
    int hops = 1;            // ego
    int max_dist = 1;        // constraint; kUnreachable means unbounded
    int cluster_size = 1;    // cluster

    // Policy strings: all | random:RATE:SEED | ego:K | constraint:D | cluster:M
    static SelectionPolicy parse(const std::string& s) {
        SelectionPolicy p;
        auto next = [&s](size_t& pos) {
            size_t c = s.find(':', pos);
            std::string tok = s.substr(pos, c == std::string::npos ? c : c - pos);
            pos = c == std::string::npos ? s.size() : c + 1;
            return tok;
        };
        size_t pos = 0;
        std::string head = next(pos);
        auto want_int = [&](long long lo) {
            size_t before = pos;
            std::string tok = next(pos);
            long long v;
            if (tok.empty() || !detail::parse_ll(tok, v) || v < lo)
                throw ArgumentError("bad policy parameter at '" + s.substr(before) + "'");
            return v;
        };
        if (head == "all" || head == "exhaustive") {
            p.kind = Kind::Exhaustive;
        } else if (head == "random") {
            p.kind = Kind::Random;
            std::string rate_tok = next(pos);
            try {
                p.rate = std::stod(rate_tok);
            } catch (...) {
                throw ArgumentError("bad sampling rate '" + rate_tok + "'");
            }
            p.seed = static_cast<uint64_t>(want_int(0));
            if (!(p.rate > 0.0 && p.rate <= 1.0))
                throw ArgumentError("sampling rate must be in (0, 1]");
        } else if (head == "ego") {
            p.kind = Kind::Ego;
            p.hops = static_cast<int>(want_int(0));
        } else if (head == "constraint") {
            p.kind = Kind::Constraint;
            p.max_dist = static_cast<int>(want_int(1));
        } else if (head == "cluster") {
            p.kind = Kind::Cluster;
            p.cluster_size = static_cast<int>(want_int(1));
        } else {
            throw ArgumentError("unknown selection policy '" + head + "'");
        }
        if (pos != s.size()) throw ArgumentError("trailing policy tokens in '" + s + "'");
        return p;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Exhaustive:
                return "all";
            case Kind::Random:
                return "random:" + std::to_string(rate) + ":" + std::to_string(seed);
            case Kind::Ego:
                return "ego:" + std::to_string(hops);
            case Kind::Constraint:
                return "constraint:" + std::to_string(max_dist);
            case Kind::Cluster:
                return "cluster:" + std::to_string(cluster_size);
        }
        return "?";
    }
};

struct ScopePolicy {
    enum class Kind { Full, Labels, KHop } kind = Kind::Full;
    int radius = 0;

    // Scope strings: full | labels | khop:R
    static ScopePolicy parse(const std::string& s) {
        ScopePolicy p;
        if (s == "full") {
            p.kind = Kind::Full;
        } else if (s == "labels") {
            p.kind = Kind::Labels;
        } else if (s.rfind("khop:", 0) == 0) {
            p.kind = Kind::KHop;
            long long r;
            if (!detail::parse_ll(s.substr(5), r) || r < 0)
                throw ArgumentError("bad khop radius in '" + s + "'");
            p.radius = static_cast<int>(r);
        } else {
            throw ArgumentError("unknown scope policy '" + s + "'");
        }
        return p;
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::Full:
                return "full";
            case Kind::Labels:
                return "labels";
            case Kind::KHop:
                return "khop:" + std::to_string(radius);
        }
        return "?";
    }
};

namespace detail {

// all l-tuples over `universe` in lexicographic order
inline std::vector<NodeTuple> tuples_over(const std::vector<int>& universe, int l) {
    if (l < 0) throw ArgumentError("label count must be nonnegative");
    long long total = 1;
    for (int i = 0; i < l; ++i) {
        total *= static_cast<long long>(universe.size());
        if (total > (1ll << 31)) throw ResourceError("tuple enumeration too large");
    }
    std::vector<NodeTuple> out;
    out.reserve(static_cast<size_t>(total));
    NodeTuple cur(static_cast<size_t>(l));
    std::vector<int> dig(static_cast<size_t>(l), 0);
    for (long long i = 0; i < total; ++i) {
        for (int p = 0; p < l; ++p) cur[static_cast<size_t>(p)] = universe[static_cast<size_t>(dig[static_cast<size_t>(p)])];
        out.push_back(cur);
        for (int p = l - 1; p >= 0; --p) {
            if (++dig[static_cast<size_t>(p)] < static_cast<int>(universe.size())) break;
            dig[static_cast<size_t>(p)] = 0;
        }
    }
    return out;
}

inline std::vector<int> all_nodes(const Graph& g) {
    std::vector<int> v(static_cast<size_t>(g.node_count()));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

}  // namespace detail

inline std::vector<NodeTuple> select_exhaustive(const Graph& g, int l) {
    return detail::tuples_over(detail::all_nodes(g), l);
}

// Each tuple of V^l kept independently with probability `rate`; deterministic
// given the seed (explicit bit arithmetic, no distribution objects).
inline std::vector<NodeTuple> select_random(const Graph& g, int l, double rate, uint64_t seed) {
    if (!(rate > 0.0 && rate <= 1.0)) throw ArgumentError("sampling rate must be in (0, 1]");
    std::mt19937_64 rng(seed);
    std::vector<NodeTuple> out;
    for (auto& t : select_exhaustive(g, l)) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < rate) out.push_back(std::move(t));
    }
    return out;
}

// Root-first tuples inside K-hop ego-nets: (r, x_2, ..., x_l) with every x_i
// within K hops of r. Set semantics across roots.
inline std::vector<NodeTuple> select_ego(const Graph& g, int hops, int l) {
    if (l < 1) throw ArgumentError("ego selection needs l >= 1 (root position)");
    std::set<NodeTuple> seen;
    for (int r = 0; r < g.node_count(); ++r) {
        auto ego = ego_net(g, r, hops);
        for (auto& rest : detail::tuples_over(ego, l - 1)) {
            NodeTuple t;
            t.reserve(static_cast<size_t>(l));
            t.push_back(r);
            t.insert(t.end(), rest.begin(), rest.end());
            seen.insert(std::move(t));
        }
    }
    return {seen.begin(), seen.end()};
}

// Tuples whose pairwise entries sit within max_dist hops (equal entries pass).
inline std::vector<NodeTuple> select_constraint(const Graph& g, int l, int max_dist) {
    if (max_dist < 1) throw ArgumentError("distance bound must be >= 1");
    auto dist = all_pairs_shortest_paths(g);
    std::vector<NodeTuple> out;
    for (auto& t : select_exhaustive(g, l)) {
        bool ok = true;
        for (size_t i = 0; i < t.size() && ok; ++i)
            for (size_t j = i + 1; j < t.size() && ok; ++j) {
                int d = dist[static_cast<size_t>(t[i])][static_cast<size_t>(t[j])];
                if (d > max_dist) ok = false;
            }
        if (ok) out.push_back(std::move(t));
    }
    return out;
}

// Deterministic greedy clusters: seed at the lowest unassigned id, then
// repeatedly absorb the lowest-id unassigned node adjacent to the cluster,
// up to target_size nodes.
inline std::vector<std::vector<int>> cluster_partition(const Graph& g, int target_size) {
    if (target_size < 1) throw ArgumentError("cluster size must be >= 1");
    int n = g.node_count();
    std::vector<char> assigned(static_cast<size_t>(n), 0);
    std::vector<std::vector<int>> clusters;
    for (int seed = 0; seed < n; ++seed) {
        if (assigned[static_cast<size_t>(seed)]) continue;
        std::vector<int> cluster{seed};
        assigned[static_cast<size_t>(seed)] = 1;
        std::set<int> frontier;
        for (int w : g.neighbors(seed))
            if (!assigned[static_cast<size_t>(w)]) frontier.insert(w);
        while (static_cast<int>(cluster.size()) < target_size && !frontier.empty()) {
            int x = *frontier.begin();
            frontier.erase(frontier.begin());
            if (assigned[static_cast<size_t>(x)]) continue;
            assigned[static_cast<size_t>(x)] = 1;
            cluster.push_back(x);
            for (int w : g.neighbors(x))
                if (!assigned[static_cast<size_t>(w)]) frontier.insert(w);
        }
        std::sort(cluster.begin(), cluster.end());
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

inline std::vector<NodeTuple> select_cluster(const Graph& g, int l, int target_size) {
    std::vector<NodeTuple> out;
    for (auto& c : cluster_partition(g, target_size))
        for (auto& t : detail::tuples_over(c, l)) out.push_back(std::move(t));
    if (l == 0) {
        // one empty tuple per cluster, deduplicated
        out.assign(1, NodeTuple{});
    }
    return out;
}

inline std::vector<NodeTuple> select_tuples(const Graph& g, int l, const SelectionPolicy& p) {
    switch (p.kind) {
        case SelectionPolicy::Kind::Exhaustive:
            return select_exhaustive(g, l);
        case SelectionPolicy::Kind::Random:
            return select_random(g, l, p.rate, p.seed);
        case SelectionPolicy::Kind::Ego:
            return select_ego(g, p.hops, l);
        case SelectionPolicy::Kind::Constraint:
            return select_constraint(g, l, p.max_dist);
        case SelectionPolicy::Kind::Cluster:
            return select_cluster(g, l, p.cluster_size);
    }
    throw ArgumentError("unknown selection policy");
}

// Node scope for one labeled copy: the whole graph, the labeled nodes only,
// or the union of R-hop ego-nets of the labeled nodes.
inline std::vector<int> scope_for(const Graph& g, const NodeTuple& labels, const ScopePolicy& p) {
    switch (p.kind) {
        case ScopePolicy::Kind::Full:
            return detail::all_nodes(g);
        case ScopePolicy::Kind::Labels: {
            if (labels.empty()) throw ArgumentError("label-based scope needs l >= 1");
            std::vector<int> s = labels;
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            return s;
        }
        case ScopePolicy::Kind::KHop: {
            if (labels.empty()) throw ArgumentError("khop scope needs l >= 1");
            std::set<int> s;
            for (int v : labels) {
                auto ego = ego_net(g, v, p.radius);
                s.insert(ego.begin(), ego.end());
            }
            return {s.begin(), s.end()};
        }
    }
    throw ArgumentError("unknown scope policy");
}

}  // namespace klwl
