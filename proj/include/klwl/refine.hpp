#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "sig_table.hpp"

namespace klwl {

enum class Variant { WL, FWL };

inline const char* to_string(Variant v) { return v == Variant::WL ? "wl" : "fwl"; }

// One tracked refinement unit: a graph together with an optional label tuple
// and a node scope. Tuples range over scope^k and the replacement universe in
// updates is the scope as well.
struct Unit {
    const Graph* graph = nullptr;
    NodeTuple labels;        // label slot i+1 goes to node labels[i]
    std::vector<int> scope;  // sorted, non-empty
};

inline Unit make_unit(const Graph& g, NodeTuple labels = {}, std::vector<int> scope = {}) {
    Unit u;
    u.graph = &g;
    for (int v : labels)
        if (v < 0 || v >= g.node_count()) throw ArgumentError("label node out of range");
    u.labels = std::move(labels);
    if (scope.empty()) {
        u.scope.resize(static_cast<size_t>(g.node_count()));
        std::iota(u.scope.begin(), u.scope.end(), 0);
    } else {
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        for (int v : scope)
            if (v < 0 || v >= g.node_count()) throw ArgumentError("scope node out of range");
        u.scope = std::move(scope);
    }
    if (u.scope.empty()) throw ArgumentError("empty scope");
    return u;
}

// Signature kinds. The leading tag keeps the different signature species
// disjoint inside one shared table.
enum SigTag : int64_t {
    kTagEffColor = 1,
    kTagIsoType = 2,
    kTagStep = 3,
    kTagUnitPool = 4,
    kTagGraphPool = 5,
    kTagLtInner = 6,
    kTagLtOuter = 7,
};

// Canonical value of the isomorphism type of `tup` inside a (labeled) graph:
// equality pattern, per-position effective colors, pairwise adjacency.
// Value equality of the returned vectors coincides with iso-type equality.
inline std::vector<long long> iso_type_signature(const Graph& g, const NodeTuple& labels,
                                                 std::vector<int> scope, const NodeTuple& tup) {
    Unit u = make_unit(g, labels, std::move(scope));
    int k = static_cast<int>(tup.size());
    if (k < 1) throw ArgumentError("tuple must be non-empty");
    for (int v : tup)
        if (!std::binary_search(u.scope.begin(), u.scope.end(), v))
            throw ArgumentError("tuple entry outside unit scope");
    long long eq = 0, adj = 0;
    int bit = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++bit) {
            if (tup[static_cast<size_t>(i)] == tup[static_cast<size_t>(j)]) eq |= 1ll << bit;
            if (g.has_edge(tup[static_cast<size_t>(i)], tup[static_cast<size_t>(j)])) adj |= 1ll << bit;
        }
    std::vector<long long> sig{kTagIsoType, k, eq, adj};
    for (int i = 0; i < k; ++i) {
        int v = tup[static_cast<size_t>(i)];
        sig.push_back(g.color(v));
        std::vector<long long> slots;
        for (size_t s = 0; s < labels.size(); ++s)
            if (labels[s] == v) slots.push_back(static_cast<long long>(s) + 1);
        sig.push_back(static_cast<long long>(slots.size()));
        sig.insert(sig.end(), slots.begin(), slots.end());
    }
    return sig;
}

struct StepStat {
    int t;
    int64_t classes;
};

// Lockstep color refinement over a set of units with one shared injective
// signature table, so tuple colors are comparable across graphs and labeled
// copies. Update rules:
//   k = 1          new = (prev, {{prev of scoped neighbors}})
//   k >= 2, WL     new = (prev, ({{prev of i-th replacements}} for i in [k]))
//   k >= 2, FWL    new = (prev, {{(prev of i-th replacement for i in [k]) per u}})
// Stability is global: the partition over the union of all tracked tuples is
// unchanged for one full step.
class RefinementSession {
public:
    RefinementSession(std::vector<Unit> units, int k, Variant variant, int threads = 1)
        : k_(k), variant_(variant), threads_(std::max(1, threads)), base_(alloc_), step_(alloc_) {
        if (k < 1) throw ArgumentError("arity k must be >= 1");
        if (units.empty()) throw ArgumentError("session needs at least one unit");
        if (k > 8) throw ArgumentError("arity k above supported bound");
        states_.reserve(units.size());
        for (auto& u : units) states_.push_back(build_state(std::move(u)));
        init_colors();
    }

    int k() const { return k_; }
    Variant variant() const { return variant_; }
    int iteration() const { return t_; }
    bool stable() const { return stable_; }
    int64_t class_count() const { return class_count_; }
    const std::vector<StepStat>& history() const { return history_; }
    int unit_count() const { return static_cast<int>(states_.size()); }
    int64_t tracked_tuples() const { return total_tuples_; }
    int32_t colors_allocated() const { return alloc_.allocated(); }

    const Unit& unit(int i) const { return states_[static_cast<size_t>(i)].unit; }
    const std::vector<int>& unit_scope(int i) const { return states_[static_cast<size_t>(i)].unit.scope; }
    int64_t unit_tuple_count(int i) const { return states_[static_cast<size_t>(i)].tcount; }
    int32_t tuple_color(int i, int64_t idx) const {
        return states_[static_cast<size_t>(i)].colors[static_cast<size_t>(idx)];
    }

    int64_t tuple_index(int i, const NodeTuple& tup) const {
        const UnitState& st = states_[static_cast<size_t>(i)];
        if (static_cast<int>(tup.size()) != k_) throw ArgumentError("tuple arity mismatch");
        int64_t idx = 0;
        for (int v : tup) {
            auto it = std::lower_bound(st.unit.scope.begin(), st.unit.scope.end(), v);
            if (it == st.unit.scope.end() || *it != v)
                throw ArgumentError("tuple entry outside unit scope");
            idx = idx * st.s + (it - st.unit.scope.begin());
        }
        return idx;
    }

    void refine_step() {
        step_.clear_payloads();
        for (auto& st : states_) update_unit(st);
        for (auto& st : states_) st.colors.swap(st.next);
        int64_t classes = static_cast<int64_t>(step_.distinct());
        stable_ = (classes == class_count_);
        class_count_ = classes;
        ++t_;
        history_.push_back({t_, classes});
    }

    // Iterates until the global partition is unchanged for one full step.
    int run_to_stable() {
        int64_t guard = total_tuples_ + 2;
        while (!stable_) {
            if (t_ >= guard) throw StateError("refinement did not stabilize within bound");
            refine_step();
        }
        return t_;
    }

    // Color of one unit: multiset of its stable tuple colors.
    int32_t unit_graph_color(int i) {
        if (!stable_) throw StateError("graph color requested before convergence");
        UnitState& st = states_[static_cast<size_t>(i)];
        if (st.pooled >= 0) return st.pooled;
        std::vector<long long> vals(st.colors.begin(), st.colors.end());
        st.pooled = pool(kTagUnitPool, std::move(vals));
        return st.pooled;
    }

    // Multiset hash through the shared table.
    int32_t pool(SigTag tag, std::vector<long long> vals) {
        std::sort(vals.begin(), vals.end());
        std::vector<long long> sig;
        sig.reserve(vals.size() + 1);
        sig.push_back(tag);
        sig.insert(sig.end(), vals.begin(), vals.end());
        return base_.intern(sig.data(), sig.size());
    }

private:
    struct UnitState {
        Unit unit;
        int s = 0;                       // scope size
        int64_t tcount = 0;              // s^k
        std::vector<int64_t> strides;    // strides[i] = s^(k-1-i)
        std::vector<int32_t> eff;        // effective color id per scope position
        std::vector<uint64_t> adjbits;   // s x s adjacency over scope positions
        std::vector<int32_t> nbr;        // scoped neighbor positions, flattened
        std::vector<int32_t> nbr_off;    // offsets into nbr, size s+1
        std::vector<int32_t> colors;
        std::vector<int32_t> next;
        int32_t pooled = -1;
    };

    bool adj(const UnitState& st, int p, int q) const {
        size_t idx = static_cast<size_t>(p) * static_cast<size_t>(st.s) + static_cast<size_t>(q);
        return (st.adjbits[idx >> 6] >> (idx & 63)) & 1u;
    }

    UnitState build_state(Unit u) {
        UnitState st;
        st.s = static_cast<int>(u.scope.size());
        st.tcount = 1;
        for (int i = 0; i < k_; ++i) {
            if (st.tcount > (int64_t{1} << 56) / st.s)
                throw ResourceError("tuple count overflows internal bound");
            st.tcount *= st.s;
        }
        st.strides.assign(static_cast<size_t>(k_), 1);
        for (int i = k_ - 2; i >= 0; --i)
            st.strides[static_cast<size_t>(i)] = st.strides[static_cast<size_t>(i + 1)] * st.s;

        const Graph& g = *u.graph;
        std::vector<int> pos(static_cast<size_t>(g.node_count()), -1);
        for (int p = 0; p < st.s; ++p) pos[static_cast<size_t>(u.scope[static_cast<size_t>(p)])] = p;

        st.eff.resize(static_cast<size_t>(st.s));
        for (int p = 0; p < st.s; ++p) {
            int v = u.scope[static_cast<size_t>(p)];
            std::vector<long long> sig{kTagEffColor, g.color(v)};
            for (size_t sl = 0; sl < u.labels.size(); ++sl)
                if (u.labels[sl] == v) sig.push_back(static_cast<long long>(sl) + 1);
            st.eff[static_cast<size_t>(p)] = base_.intern(sig.data(), sig.size());
        }

        size_t nb = static_cast<size_t>(st.s) * static_cast<size_t>(st.s);
        st.adjbits.assign((nb + 63) / 64, 0);
        st.nbr_off.assign(static_cast<size_t>(st.s) + 1, 0);
        for (int p = 0; p < st.s; ++p) {
            int v = u.scope[static_cast<size_t>(p)];
            for (int w : g.neighbors(v)) {
                int q = pos[static_cast<size_t>(w)];
                if (q < 0) continue;
                size_t idx = static_cast<size_t>(p) * st.s + static_cast<size_t>(q);
                st.adjbits[idx >> 6] |= uint64_t{1} << (idx & 63);
                st.nbr.push_back(q);
                ++st.nbr_off[static_cast<size_t>(p) + 1];
            }
        }
        for (int p = 0; p < st.s; ++p)
            st.nbr_off[static_cast<size_t>(p) + 1] += st.nbr_off[static_cast<size_t>(p)];

        st.unit = std::move(u);
        total_tuples_ += st.tcount;
        return st;
    }

    void init_colors() {
        std::vector<long long> sig;
        for (auto& st : states_) {
            st.colors.resize(static_cast<size_t>(st.tcount));
            st.next.resize(static_cast<size_t>(st.tcount));
            std::vector<int> dig(static_cast<size_t>(k_), 0);
            for (int64_t idx = 0; idx < st.tcount; ++idx) {
                long long eq = 0, ad = 0;
                int bit = 0;
                for (int i = 0; i < k_; ++i)
                    for (int j = i + 1; j < k_; ++j, ++bit) {
                        if (dig[static_cast<size_t>(i)] == dig[static_cast<size_t>(j)]) eq |= 1ll << bit;
                        if (adj(st, dig[static_cast<size_t>(i)], dig[static_cast<size_t>(j)]))
                            ad |= 1ll << bit;
                    }
                sig.assign({kTagIsoType, k_, eq, ad});
                for (int i = 0; i < k_; ++i)
                    sig.push_back(st.eff[static_cast<size_t>(dig[static_cast<size_t>(i)])]);
                st.colors[static_cast<size_t>(idx)] = base_.intern(sig.data(), sig.size());
                for (int i = k_ - 1; i >= 0; --i) {
                    if (++dig[static_cast<size_t>(i)] < st.s) break;
                    dig[static_cast<size_t>(i)] = 0;
                }
            }
        }
        // distinct initial classes
        std::vector<char> seen(static_cast<size_t>(alloc_.allocated()), 0);
        int64_t classes = 0;
        for (auto& st : states_)
            for (int32_t c : st.colors)
                if (!seen[static_cast<size_t>(c)]) {
                    seen[static_cast<size_t>(c)] = 1;
                    ++classes;
                }
        class_count_ = classes;
        history_.push_back({0, classes});
    }

    // ---- one refinement step over one unit, chunked two-phase ----

    void update_unit(UnitState& st) {
        if (k_ == 1) {
            update_k1(st);
            return;
        }
        int64_t width = 2 + static_cast<int64_t>(k_) * st.s;
        int64_t chunk = std::max<int64_t>(1, (int64_t{8} << 20) / width);
        scratch_.resize(static_cast<size_t>(std::min(chunk, st.tcount) * width));
        for (int64_t lo = 0; lo < st.tcount; lo += chunk) {
            int64_t hi = std::min(st.tcount, lo + chunk);
            fill_range(st, lo, hi, width);
            for (int64_t idx = lo; idx < hi; ++idx)
                st.next[static_cast<size_t>(idx)] =
                    step_.intern(scratch_.data() + (idx - lo) * width, static_cast<size_t>(width));
        }
    }

    void fill_range(UnitState& st, int64_t lo, int64_t hi, int64_t width) {
        int nthreads = static_cast<int>(std::min<int64_t>(threads_, hi - lo));
        if (nthreads <= 1) {
            fill_slice(st, lo, hi, lo, width);
            return;
        }
        std::vector<std::thread> pool;
        int64_t per = (hi - lo + nthreads - 1) / nthreads;
        for (int w = 0; w < nthreads; ++w) {
            int64_t a = lo + w * per, b = std::min(hi, a + per);
            if (a >= b) break;
            pool.emplace_back([this, &st, a, b, lo, width] { fill_slice(st, a, b, lo, width); });
        }
        for (auto& th : pool) th.join();
    }

    void fill_slice(UnitState& st, int64_t lo, int64_t hi, int64_t base_idx, int64_t width) {
        std::array<int, 8> dig{};
        int64_t rem = lo;
        for (int i = 0; i < k_; ++i) {
            dig[static_cast<size_t>(i)] = static_cast<int>(rem / st.strides[static_cast<size_t>(i)]);
            rem %= st.strides[static_cast<size_t>(i)];
        }
        const int32_t* cur = st.colors.data();
        std::vector<uint64_t> packed(static_cast<size_t>(st.s));
        std::vector<int32_t> tmp(static_cast<size_t>(st.s) * static_cast<size_t>(k_));
        std::vector<int> order(static_cast<size_t>(st.s));
        for (int64_t idx = lo; idx < hi; ++idx) {
            int32_t* out = scratch_.data() + (idx - base_idx) * width;
            out[0] = static_cast<int32_t>(kTagStep);
            out[1] = cur[idx];
            int32_t* body = out + 2;
            if (variant_ == Variant::WL) {
                for (int i = 0; i < k_; ++i) {
                    int64_t stride = st.strides[static_cast<size_t>(i)];
                    int64_t base = idx - static_cast<int64_t>(dig[static_cast<size_t>(i)]) * stride;
                    int32_t* block = body + static_cast<int64_t>(i) * st.s;
                    for (int d = 0; d < st.s; ++d) block[d] = cur[base + d * stride];
                    std::sort(block, block + st.s);
                }
            } else if (k_ == 2) {
                int64_t b0 = idx - static_cast<int64_t>(dig[0]) * st.strides[0];
                int64_t b1 = idx - static_cast<int64_t>(dig[1]) * st.strides[1];
                for (int d = 0; d < st.s; ++d)
                    packed[static_cast<size_t>(d)] =
                        (static_cast<uint64_t>(static_cast<uint32_t>(cur[b0 + d * st.strides[0]])) << 32) |
                        static_cast<uint32_t>(cur[b1 + d * st.strides[1]]);
                std::sort(packed.begin(), packed.end());
                for (int d = 0; d < st.s; ++d) {
                    body[2 * d] = static_cast<int32_t>(packed[static_cast<size_t>(d)] >> 32);
                    body[2 * d + 1] = static_cast<int32_t>(packed[static_cast<size_t>(d)] & 0xffffffffu);
                }
            } else {
                for (int d = 0; d < st.s; ++d)
                    for (int i = 0; i < k_; ++i) {
                        int64_t stride = st.strides[static_cast<size_t>(i)];
                        tmp[static_cast<size_t>(d) * k_ + static_cast<size_t>(i)] =
                            cur[idx + (static_cast<int64_t>(d) - dig[static_cast<size_t>(i)]) * stride];
                    }
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(), [&](int a, int b) {
                    const int32_t* pa = tmp.data() + static_cast<size_t>(a) * k_;
                    const int32_t* pb = tmp.data() + static_cast<size_t>(b) * k_;
                    return std::lexicographical_compare(pa, pa + k_, pb, pb + k_);
                });
                for (int d = 0; d < st.s; ++d) {
                    const int32_t* src = tmp.data() + static_cast<size_t>(order[static_cast<size_t>(d)]) * k_;
                    std::copy(src, src + k_, body + static_cast<int64_t>(d) * k_);
                }
            }
            for (int i = k_ - 1; i >= 0; --i) {
                if (++dig[static_cast<size_t>(i)] < st.s) break;
                dig[static_cast<size_t>(i)] = 0;
            }
        }
    }

    void update_k1(UnitState& st) {
        // 1-WL neighbor rule, shared by both variants at k = 1.
        std::vector<int32_t> sig;
        for (int p = 0; p < st.s; ++p) {
            sig.clear();
            sig.push_back(static_cast<int32_t>(kTagStep));
            sig.push_back(st.colors[static_cast<size_t>(p)]);
            size_t lo = static_cast<size_t>(st.nbr_off[static_cast<size_t>(p)]);
            size_t hi = static_cast<size_t>(st.nbr_off[static_cast<size_t>(p) + 1]);
            for (size_t i = lo; i < hi; ++i)
                sig.push_back(st.colors[static_cast<size_t>(st.nbr[i])]);
            std::sort(sig.begin() + 2, sig.end());
            st.next[static_cast<size_t>(p)] = step_.intern(sig.data(), sig.size());
        }
    }

    int k_;
    Variant variant_;
    int threads_;
    ColorIdAllocator alloc_;
    SigTable<long long> base_;
    SigTable<int32_t> step_;
    std::vector<UnitState> states_;
    std::vector<int32_t> scratch_;
    int64_t total_tuples_ = 0;
    int64_t class_count_ = 0;
    bool stable_ = false;
    int t_ = 0;
    std::vector<StepStat> history_;
};

}  // namespace klwl
