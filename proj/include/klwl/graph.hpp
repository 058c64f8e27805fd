#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace klwl {

using NodeColor = long long;
using NodeTuple = std::vector<int>;

constexpr int kUnreachable = std::numeric_limits<int>::max();

// Undirected graph with per-node colors. Immutable after construction;
// all free functions below are pure.
class Graph {
public:
    Graph() = default;

    static Graph make(int n, std::vector<std::pair<int, int>> edges,
                      std::vector<NodeColor> colors = {}) {
        if (n < 0) throw ArgumentError("node count must be nonnegative");
        if (colors.empty()) colors.assign(static_cast<size_t>(n), 0);
        if (static_cast<int>(colors.size()) != n)
            throw ArgumentError("color list length does not match node count");
        for (auto& [u, v] : edges) {
            if (u == v) throw ArgumentError("self-loop on node " + std::to_string(u));
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw ArgumentError("edge endpoint out of range");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw ArgumentError("duplicate edge");
        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.colors_ = std::move(colors);
        g.build_adjacency();
        return g;
    }

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<NodeColor>& node_colors() const { return colors_; }
    NodeColor color(int v) const { return colors_[static_cast<size_t>(v)]; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<size_t>(v)].size()); }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        size_t idx = static_cast<size_t>(u) * static_cast<size_t>(n_) + static_cast<size_t>(v);
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && edges_ == o.edges_ && colors_ == o.colors_;
    }

private:
    void build_adjacency() {
        adj_.assign(static_cast<size_t>(n_), {});
        size_t nbits = static_cast<size_t>(n_) * static_cast<size_t>(n_);
        bits_.assign((nbits + 63) / 64, 0);
        for (auto [u, v] : edges_) {
            adj_[static_cast<size_t>(u)].push_back(v);
            adj_[static_cast<size_t>(v)].push_back(u);
            size_t a = static_cast<size_t>(u) * n_ + v, b = static_cast<size_t>(v) * n_ + u;
            bits_[a >> 6] |= uint64_t{1} << (a & 63);
            bits_[b >> 6] |= uint64_t{1} << (b & 63);
        }
        for (auto& lst : adj_) std::sort(lst.begin(), lst.end());
    }

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<NodeColor> colors_;
    std::vector<std::vector<int>> adj_;
    std::vector<uint64_t> bits_;
};

// Relabels nodes by the bijection pi (node v becomes pi[v]).
inline Graph permute(const Graph& g, const std::vector<int>& pi) {
    int n = g.node_count();
    if (static_cast<int>(pi.size()) != n) throw ArgumentError("permutation has wrong length");
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int x : pi) {
        if (x < 0 || x >= n || seen[static_cast<size_t>(x)])
            throw ArgumentError("not a bijection on node ids");
        seen[static_cast<size_t>(x)] = 1;
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edges().size());
    for (auto [u, v] : g.edges()) edges.emplace_back(pi[static_cast<size_t>(u)], pi[static_cast<size_t>(v)]);
    std::vector<NodeColor> colors(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) colors[static_cast<size_t>(pi[static_cast<size_t>(v)])] = g.color(v);
    return Graph::make(n, std::move(edges), std::move(colors));
}

// Disjoint union; h's node ids are offset by g.node_count().
inline Graph disjoint_union(const Graph& g, const Graph& h) {
    int off = g.node_count();
    std::vector<std::pair<int, int>> edges = g.edges();
    for (auto [u, v] : h.edges()) edges.emplace_back(u + off, v + off);
    std::vector<NodeColor> colors = g.node_colors();
    colors.insert(colors.end(), h.node_colors().begin(), h.node_colors().end());
    return Graph::make(off + h.node_count(), std::move(edges), std::move(colors));
}

// Hop distances; kUnreachable across components.
inline std::vector<std::vector<int>> all_pairs_shortest_paths(const Graph& g) {
    int n = g.node_count();
    std::vector<std::vector<int>> dist(static_cast<size_t>(n),
                                       std::vector<int>(static_cast<size_t>(n), kUnreachable));
    std::vector<int> queue;
    for (int s = 0; s < n; ++s) {
        auto& d = dist[static_cast<size_t>(s)];
        d[static_cast<size_t>(s)] = 0;
        queue.assign(1, s);
        for (size_t head = 0; head < queue.size(); ++head) {
            int v = queue[head];
            for (int w : g.neighbors(v)) {
                if (d[static_cast<size_t>(w)] == kUnreachable) {
                    d[static_cast<size_t>(w)] = d[static_cast<size_t>(v)] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return dist;
}

// Nodes within `radius` hops of root, root included. Sorted.
inline std::vector<int> ego_net(const Graph& g, int root, int radius) {
    if (root < 0 || root >= g.node_count()) throw ArgumentError("ego root out of range");
    if (radius < 0) throw ArgumentError("ego radius must be nonnegative");
    std::vector<int> depth(static_cast<size_t>(g.node_count()), -1);
    std::vector<int> queue{root};
    depth[static_cast<size_t>(root)] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        if (depth[static_cast<size_t>(v)] == radius) continue;
        for (int w : g.neighbors(v)) {
            if (depth[static_cast<size_t>(w)] < 0) {
                depth[static_cast<size_t>(w)] = depth[static_cast<size_t>(v)] + 1;
                queue.push_back(w);
            }
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

// ---------------------------------------------------------------------------
// Edge-list text format:
//   line 1: "n m"
//   line 2: "colors c_0 ... c_{n-1}"   (optional; all zero when absent)
//   then m lines "u v" with u < v, ASCII decimal, single spaces.
// Endpoint ids above n-1 are accepted and densified with a sorted remapping,
// recorded in the parse report.

struct ParseReport {
    bool densified = false;
    std::vector<long long> original_ids;  // original_ids[dense] = id in the document
};

namespace detail {

inline bool parse_ll(const std::string& tok, long long& out) {
    if (tok.empty()) return false;
    size_t i = tok[0] == '-' ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (tok[i] < '0' || tok[i] > '9') return false;
    try {
        out = std::stoll(tok);
    } catch (...) {
        return false;
    }
    return true;
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace detail

inline Graph parse_graph(const std::string& text, ParseReport* report = nullptr) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("empty document");

    auto head = detail::split_ws(lines[0]);
    long long n = 0, m = 0;
    if (head.size() != 2 || !detail::parse_ll(head[0], n) || !detail::parse_ll(head[1], m) ||
        n < 0 || m < 0)
        throw ParseError("expected header \"n m\"", 1);

    size_t li = 1;
    std::vector<NodeColor> colors(static_cast<size_t>(n), 0);
    if (li < lines.size()) {
        auto toks = detail::split_ws(lines[li]);
        if (!toks.empty() && toks[0] == "colors") {
            if (static_cast<long long>(toks.size()) != n + 1)
                throw ParseError("colors line must list exactly " + std::to_string(n) + " values",
                                 static_cast<int>(li + 1));
            for (long long i = 0; i < n; ++i) {
                long long c;
                if (!detail::parse_ll(toks[static_cast<size_t>(i + 1)], c))
                    throw ParseError("bad color value", static_cast<int>(li + 1));
                colors[static_cast<size_t>(i)] = c;
            }
            ++li;
        }
    }

    std::vector<std::pair<long long, long long>> raw;
    raw.reserve(static_cast<size_t>(m));
    for (long long e = 0; e < m; ++e, ++li) {
        if (li >= lines.size()) throw ParseError("fewer edge lines than declared");
        int line_no = static_cast<int>(li + 1);
        auto toks = detail::split_ws(lines[li]);
        long long u, v;
        if (toks.size() != 2 || !detail::parse_ll(toks[0], u) || !detail::parse_ll(toks[1], v))
            throw ParseError("expected edge line \"u v\"", line_no);
        if (u < 0 || v < 0) throw ParseError("negative endpoint", line_no);
        if (u == v) throw ParseError("self-loop", line_no);
        if (u > v) throw ParseError("edge endpoints must satisfy u < v", line_no);
        raw.emplace_back(u, v);
    }
    if (li < lines.size()) throw ParseError("unexpected trailing content", static_cast<int>(li + 1));

    // Densify when the document uses sparse ids.
    bool densify = false;
    for (auto [u, v] : raw)
        if (v >= n) densify = true;
    std::vector<long long> ids;
    if (densify) {
        for (auto [u, v] : raw) {
            ids.push_back(u);
            ids.push_back(v);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (static_cast<long long>(ids.size()) > n)
            throw ParseError("endpoint out of range: edges name more than " + std::to_string(n) +
                             " nodes");
    }
    auto to_dense = [&](long long id) -> int {
        if (!densify) return static_cast<int>(id);
        return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    std::vector<std::pair<int, int>> edges;
    edges.reserve(raw.size());
    for (auto [u, v] : raw) edges.emplace_back(to_dense(u), to_dense(v));
    {
        auto sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParseError("duplicate edge");
    }
    if (report) {
        report->densified = densify;
        report->original_ids.clear();
        if (densify)
            report->original_ids = ids;
        else
            for (long long i = 0; i < n; ++i) report->original_ids.push_back(i);
    }
    return Graph::make(static_cast<int>(n), std::move(edges), std::move(colors));
}

inline std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << g.node_count() << ' ' << g.edges().size() << '\n';
    bool colored = false;
    for (auto c : g.node_colors())
        if (c != 0) colored = true;
    if (colored) {
        out << "colors";
        for (auto c : g.node_colors()) out << ' ' << c;
        out << '\n';
    }
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

inline Graph parse_graph_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("bad json: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n")) throw ParseError("json graph needs an \"n\" field");
    long long n = j["n"].get<long long>();
    std::vector<NodeColor> colors;
    if (j.contains("colors")) colors = j["colors"].get<std::vector<NodeColor>>();
    std::vector<std::pair<int, int>> edges;
    if (j.contains("edges"))
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge entries must be pairs");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
    try {
        return Graph::make(static_cast<int>(n), std::move(edges), std::move(colors));
    } catch (const ArgumentError& e) {
        throw ParseError(e.what());
    }
}

inline std::string serialize_graph_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.node_count();
    j["colors"] = g.node_colors();
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    return j.dump();
}

// Accepts either the text format or the JSON mirror.
inline Graph parse_graph_any(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (c == '{') return parse_graph_json(text);
        break;
    }
    return parse_graph(text);
}

}  // namespace klwl
