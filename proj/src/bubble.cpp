#include "rbubble/bubble.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <queue>
#include <thread>
#include <tuple>

#include "rbubble/errors.hpp"

namespace rbubble {

std::vector<char> branching_flags(const DeBruijnGraph& g) {
    std::vector<char> flags(g.vertex_count(), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        flags[v] = g.out_degree(v) > 1 || g.in_degree(v) > 1;
    }
    return flags;
}

bool same_bubble(const Bubble& a, const Bubble& b) {
    if (a.sink != b.sink) return false;
    return (a.path1 == b.path1 && a.path2 == b.path2) ||
           (a.path1 == b.path2 && a.path2 == b.path1);
}

namespace {

constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

void canonicalize(Bubble& b) {
    bool swap = b.len1 < b.len2 || (b.len1 == b.len2 && b.path2 < b.path1);
    if (swap) {
        std::swap(b.path1, b.path2);
        std::swap(b.len1, b.len2);
        std::swap(b.branch1, b.branch2);
    }
}

// Layered Dijkstra over (vertex, accumulated branching charge). Walks only
// dominate simple paths in both length and charge, so path semantics are
// exact. With b >= |V| the charge can never bind and a single layer is used.
class BoundedDijkstra {
public:
    BoundedDijkstra(const DeBruijnGraph& g, const std::vector<char>& branching)
        : g_(g), branching_(branching), n_(g.vertex_count()) {}

    // Computes distances from u with at most `budget` charges and length at
    // most maxlen. alive/blocked/skip_to restrict the searched subgraph
    // (null means unrestricted). best(v)/touched() expose the per-vertex
    // minimum; `table` (optional) receives the full per-layer grid.
    void run(VertexId u, std::uint32_t budget, bool count_source, double maxlen,
             const std::vector<char>* alive, const std::vector<char>* blocked, VertexId skip_to,
             std::vector<std::vector<double>>* table) {
        bool unbounded = budget >= n_;
        std::uint32_t layers = unbounded ? 1 : budget + 1;
        ensure_capacity(layers);
        if (epoch_ == std::numeric_limits<std::uint32_t>::max()) {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            std::fill(best_stamp_.begin(), best_stamp_.end(), 0);
            epoch_ = 0;
        }
        ++epoch_;
        touched_.clear();

        using State = std::pair<double, std::uint64_t>;  // (dist, layer * n + v)
        std::priority_queue<State, std::vector<State>, std::greater<State>> pq;
        set_dist(0, u, 0.0);
        pq.push({0.0, static_cast<std::uint64_t>(u)});
        while (!pq.empty()) {
            auto [d, state] = pq.top();
            pq.pop();
            VertexId v = static_cast<VertexId>(state % n_);
            std::uint32_t j = static_cast<std::uint32_t>(state / n_);
            if (dist_at(j, v) < d) continue;
            touch_best(v, d);
            if (blocked != nullptr && (*blocked)[v]) continue;
            std::uint32_t charge = 0;
            if (!unbounded && branching_[v] && (v != u || count_source)) charge = 1;
            std::uint32_t nj = j + charge;
            if (!unbounded && nj > budget) continue;
            for (const Arc& a : g_.out(v)) {
                if (a.to == skip_to) continue;
                if (alive != nullptr && !(*alive)[a.to]) continue;
                double nd = d + a.weight;
                if (nd > maxlen) continue;
                if (nd < dist_at(nj, a.to)) {
                    set_dist(nj, a.to, nd);
                    pq.push({nd, static_cast<std::uint64_t>(nj) * n_ + a.to});
                }
            }
        }

        if (table != nullptr) {
            table->assign(layers, std::vector<double>(n_, kUnreachable));
            for (std::uint32_t j = 0; j < layers; ++j) {
                for (VertexId v = 0; v < n_; ++v) (*table)[j][v] = dist_at(j, v);
            }
            // prefix-min over layers: row j means "at most j charges"
            for (std::uint32_t j = 1; j < layers; ++j) {
                for (VertexId v = 0; v < n_; ++v) {
                    (*table)[j][v] = std::min((*table)[j][v], (*table)[j - 1][v]);
                }
            }
        }
    }

    double best(VertexId v) const {
        return best_stamp_[v] == epoch_ ? best_[v] : kUnreachable;
    }
    const std::vector<VertexId>& touched() const { return touched_; }

private:
    void ensure_capacity(std::uint32_t layers) {
        std::size_t need = static_cast<std::size_t>(layers) * n_;
        if (dist_.size() < need) {
            dist_.resize(need, kUnreachable);
            stamp_.resize(need, 0);
        }
        if (best_.size() < n_) {
            best_.resize(n_, kUnreachable);
            best_stamp_.resize(n_, 0);
        }
    }
    double dist_at(std::uint32_t j, VertexId v) const {
        std::size_t i = static_cast<std::size_t>(j) * n_ + v;
        return stamp_[i] == epoch_ ? dist_[i] : kUnreachable;
    }
    void set_dist(std::uint32_t j, VertexId v, double d) {
        std::size_t i = static_cast<std::size_t>(j) * n_ + v;
        dist_[i] = d;
        stamp_[i] = epoch_;
    }
    void touch_best(VertexId v, double d) {
        if (best_stamp_[v] != epoch_) {
            best_stamp_[v] = epoch_;
            best_[v] = d;
            touched_.push_back(v);
        } else if (d < best_[v]) {
            best_[v] = d;
        }
    }

    const DeBruijnGraph& g_;
    const std::vector<char>& branching_;
    std::size_t n_;
    std::vector<double> dist_;
    std::vector<double> best_;
    std::vector<std::uint32_t> stamp_, best_stamp_;
    std::vector<VertexId> touched_;
    std::uint32_t epoch_ = 0;
};

}  // namespace

BranchingDistTable branching_bounded_distances(const DeBruijnGraph& g, VertexId u, std::uint32_t b,
                                               bool count_source) {
    if (u >= g.vertex_count()) throw NoSuchVertexError(std::to_string(u));
    std::vector<char> branching = branching_flags(g);
    BoundedDijkstra dij(g, branching);
    std::vector<std::vector<double>> table;
    dij.run(u, std::min<std::uint32_t>(b, static_cast<std::uint32_t>(g.vertex_count())),
            count_source, kUnreachable, nullptr, nullptr, kNoVertex, &table);
    return BranchingDistTable(u, b, count_source, std::move(table));
}

bool bubble_feasible(const DeBruijnGraph& g, VertexId u1, VertexId u2, double rem_len1,
                     double rem_len2, std::uint32_t rem_b1, std::uint32_t rem_b2,
                     bool count_source1, bool count_source2) {
    if (u1 >= g.vertex_count()) throw NoSuchVertexError(std::to_string(u1));
    if (u2 >= g.vertex_count()) throw NoSuchVertexError(std::to_string(u2));
    if (rem_len1 < 0 || rem_len2 < 0) return false;
    std::vector<char> branching = branching_flags(g);
    BoundedDijkstra d1(g, branching), d2(g, branching);
    d1.run(u1, rem_b1, count_source1, rem_len1, nullptr, nullptr, kNoVertex, nullptr);
    d2.run(u2, rem_b2, count_source2, rem_len2, nullptr, nullptr, kNoVertex, nullptr);
    for (VertexId t : d1.touched()) {
        if (d1.best(t) <= rem_len1 && d2.best(t) <= rem_len2) return true;
    }
    return false;
}

namespace {

class Enumerator {
public:
    Enumerator(const DeBruijnGraph& g, const BubbleQuery& query, std::optional<VertexId> sink,
               const BubbleEmit& emit, const EnumerationLimits& limits)
        : g_(g),
          query_(query.normalized()),
          sink_(sink),
          emit_(emit),
          limits_(limits),
          branching_(branching_flags(g)),
          alive_(g.vertex_count(), 1),
          blocked_(g.vertex_count(), 0),
          dij1_(g, branching_),
          dij2_(g, branching_),
          start_(Clock::now()) {}

    EnumerationStats run() {
        const VertexId s = query_.source;
        if (s >= g_.vertex_count()) throw NoSuchVertexError(std::to_string(s));
        // Arcs into s are ignored throughout: a bubble never re-enters its
        // source (t != s), so they can only mislead the feasibility check.
        std::vector<std::pair<VertexId, double>> roots;
        for (const Arc& a : g_.out(s)) {
            if (a.to != s) roots.emplace_back(a.to, a.weight);
        }
        if (roots.size() >= 2) {
            alive_[s] = 0;
            // Unordered pairs of distinct out-arcs; the lower-id arc becomes
            // path1, so no bubble is ever produced twice with roles swapped.
            for (std::size_t i = 0; i < roots.size() && !stopped_; ++i) {
                for (std::size_t j = i + 1; j < roots.size() && !stopped_; ++j) {
                    if (out_of_budget()) {
                        stopped_ = true;
                        break;
                    }
                    auto [x, wx] = roots[i];
                    auto [y, wy] = roots[j];
                    path1_ = {s, x};
                    path2_ = {s, y};
                    if (feasible(x, y, wx, wy, 0, 0)) recurse(x, y, wx, wy, 0, 0, 1);
                }
            }
            alive_[s] = 1;
        }
        stats_.complete = !stopped_;
        stats_.elapsed_seconds = seconds_since_start();
        return stats_;
    }

private:
    using Clock = std::chrono::steady_clock;

    double seconds_since_start() const {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

    bool out_of_budget() {
        if (stats_.nodes >= limits_.max_nodes) return true;
        // the clock read is cheap relative to a feasibility check
        return seconds_since_start() > limits_.timeout_seconds;
    }

    // Remaining branching budget handed to the DP. With b >= |V| the bound
    // can never bind (no path charges |V| vertices), so the DP runs
    // unlayered instead of allocating |V| layers.
    std::uint32_t dp_budget(std::uint32_t spent) const {
        std::uint32_t n = static_cast<std::uint32_t>(g_.vertex_count());
        return query_.b >= n ? n : query_.b - spent;
    }

    bool feasible(VertexId u1, VertexId u2, double l1, double l2, std::uint32_t b1,
                  std::uint32_t b2) {
        if (b1 > query_.b || b2 > query_.b) return false;
        // Either path may end up paired with alpha1; bound each search by
        // the laxer assignment and test both pairings per meeting vertex.
        double cap1 = query_.alpha1 - l1;
        double cap2 = query_.alpha1 - l2;
        if (cap1 < 0 || cap2 < 0) return false;
        const VertexId s = query_.source;
        dij1_.run(u1, dp_budget(b1), u1 != s, cap1, &alive_, &blocked_, s, nullptr);
        dij2_.run(u2, dp_budget(b2), u2 != s, cap2, &alive_, &blocked_, s, nullptr);
        double a1l1 = query_.alpha1 - l1, a2l2 = query_.alpha2 - l2;
        double a2l1 = query_.alpha2 - l1, a1l2 = query_.alpha1 - l2;
        for (VertexId t : dij1_.touched()) {
            double d1 = dij1_.best(t);
            double d2 = dij2_.best(t);
            if (d2 == kUnreachable) continue;
            if ((d1 <= a1l1 && d2 <= a2l2) || (d1 <= a2l1 && d2 <= a1l2)) return true;
        }
        return false;
    }

    bool has_live_out(VertexId u) const {
        if (blocked_[u]) return false;
        for (const Arc& a : g_.out(u)) {
            if (a.to != query_.source && alive_[a.to]) return true;
        }
        return false;
    }

    void emit_bubble(VertexId t, double l1, double l2, std::uint32_t b1, std::uint32_t b2) {
        if (sink_.has_value() && *sink_ != t) return;
        Bubble bub;
        bub.sink = t;
        bub.path1 = path1_;
        bub.path2 = path2_;
        bub.len1 = l1;
        bub.len2 = l2;
        bub.branch1 = b1;
        bub.branch2 = b2;
        canonicalize(bub);
        ++stats_.emissions;
        stats_.emission_seconds.push_back(seconds_since_start());
        if (emit_) emit_(std::move(bub));
    }

    // Invariant on entry: the current subspace contains at least one bubble
    // (the caller checked feasible). Chooses the endpoint with the smaller
    // accumulated length and partitions on its outgoing arcs plus the
    // "stops here" branch.
    void recurse(VertexId u1, VertexId u2, double l1, double l2, std::uint32_t b1,
                 std::uint32_t b2, std::uint32_t depth) {
        ++stats_.nodes;
        if (out_of_budget()) {
            stopped_ = true;
            if (stats_.frontier_depth == 0) stats_.frontier_depth = depth;
            return;
        }
        if (u1 == u2) {
            emit_bubble(u1, l1, l2, b1, b2);
            return;
        }
        bool can1 = has_live_out(u1);
        bool can2 = has_live_out(u2);
        if (!can1 && !can2) return;  // cannot happen under the invariant
        bool extend_first = can1 && (!can2 || l1 <= l2);

        VertexId u = extend_first ? u1 : u2;
        double ulen = extend_first ? l1 : l2;
        std::uint32_t ubr = extend_first ? b1 : b2;
        std::vector<VertexId>& path = extend_first ? path1_ : path2_;
        std::uint32_t nb = ubr + (branching_[u] ? 1 : 0);  // u is left, hence internal

        alive_[u] = 0;
        for (const Arc& a : g_.out(u)) {
            if (stopped_) break;
            if (a.to == query_.source || !alive_[a.to]) continue;
            double nl = ulen + a.weight;
            path.push_back(a.to);
            if (extend_first) {
                if (feasible(a.to, u2, nl, l2, nb, b2)) recurse(a.to, u2, nl, l2, nb, b2, depth + 1);
            } else {
                if (feasible(u1, a.to, l1, nl, b1, nb)) recurse(u1, a.to, l1, nl, b1, nb, depth + 1);
            }
            path.pop_back();
        }
        alive_[u] = 1;

        // bubbles whose paths never leave u again: u must be the sink
        blocked_[u] = 1;
        if (!stopped_ && feasible(u1, u2, l1, l2, b1, b2)) {
            recurse(u1, u2, l1, l2, b1, b2, depth + 1);
        }
        blocked_[u] = 0;
    }

    const DeBruijnGraph& g_;
    BubbleQuery query_;
    std::optional<VertexId> sink_;
    const BubbleEmit& emit_;
    EnumerationLimits limits_;
    std::vector<char> branching_;
    std::vector<char> alive_, blocked_;
    BoundedDijkstra dij1_, dij2_;
    std::vector<VertexId> path1_, path2_;
    EnumerationStats stats_;
    bool stopped_ = false;
    Clock::time_point start_;
};

}  // namespace

EnumerationStats enumerate_bubbles(const DeBruijnGraph& g, const BubbleQuery& query,
                                   std::optional<VertexId> sink, const BubbleEmit& emit,
                                   const EnumerationLimits& limits) {
    Enumerator e(g, query, sink, emit, limits);
    return e.run();
}

std::vector<Bubble> enumerate_bubbles_collect(const DeBruijnGraph& g, const BubbleQuery& query,
                                              std::optional<VertexId> sink,
                                              const EnumerationLimits& limits,
                                              EnumerationStats* stats_out) {
    std::vector<Bubble> out;
    EnumerationStats st =
        enumerate_bubbles(g, query, sink, [&out](Bubble&& b) { out.push_back(std::move(b)); },
                          limits);
    if (stats_out != nullptr) *stats_out = st;
    return out;
}

std::vector<Bubble> oracle_enumerate(const DeBruijnGraph& g, const BubbleQuery& query) {
    if (g.vertex_count() > 20) throw OracleRefusedError(g.vertex_count());
    BubbleQuery q = query.normalized();
    if (q.source >= g.vertex_count()) throw NoSuchVertexError(std::to_string(q.source));
    std::vector<char> branching = branching_flags(g);

    // every simple path from s with weighted length <= alpha1, grouped by endpoint
    struct PathInfo {
        std::vector<VertexId> vertices;
        double length;
        std::uint32_t branch;
    };
    std::vector<std::vector<PathInfo>> by_sink(g.vertex_count());
    std::vector<VertexId> path{q.source};
    std::vector<char> on_path(g.vertex_count(), 0);
    on_path[q.source] = 1;

    std::function<void(VertexId, double)> dfs = [&](VertexId u, double len) {
        for (const Arc& a : g.out(u)) {
            if (on_path[a.to]) continue;
            double nl = len + a.weight;
            if (nl > q.alpha1) continue;
            path.push_back(a.to);
            on_path[a.to] = 1;
            std::uint32_t br = 0;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) br += branching[path[i]] ? 1 : 0;
            by_sink[a.to].push_back({path, nl, br});
            dfs(a.to, nl);
            on_path[a.to] = 0;
            path.pop_back();
        }
    };
    dfs(q.source, 0.0);

    std::vector<Bubble> out;
    for (VertexId t = 0; t < g.vertex_count(); ++t) {
        if (t == q.source) continue;
        const auto& paths = by_sink[t];
        for (std::size_t i = 0; i < paths.size(); ++i) {
            for (std::size_t j = i + 1; j < paths.size(); ++j) {
                const PathInfo& p = paths[i];
                const PathInfo& r = paths[j];
                if (p.branch > q.b || r.branch > q.b) continue;
                double lo = std::min(p.length, r.length);
                double hi = std::max(p.length, r.length);
                if (hi > q.alpha1 || lo > q.alpha2) continue;
                bool disjoint = true;
                for (std::size_t x = 1; x + 1 < p.vertices.size() && disjoint; ++x) {
                    for (std::size_t y = 1; y + 1 < r.vertices.size(); ++y) {
                        if (p.vertices[x] == r.vertices[y]) {
                            disjoint = false;
                            break;
                        }
                    }
                }
                if (!disjoint) continue;
                Bubble bub;
                bub.sink = t;
                bub.path1 = p.vertices;
                bub.path2 = r.vertices;
                bub.len1 = p.length;
                bub.len2 = r.length;
                bub.branch1 = p.branch;
                bub.branch2 = r.branch;
                canonicalize(bub);
                out.push_back(std::move(bub));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Bubble& a, const Bubble& b) {
        return std::tie(a.sink, a.path1, a.path2) < std::tie(b.sink, b.path1, b.path2);
    });
    return out;
}

std::vector<SourceRun> enumerate_all_sources(const DeBruijnGraph& g,
                                             const MultiSourceOptions& options) {
    std::vector<VertexId> sources;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (g.out_degree(v) >= 2) sources.push_back(v);
    }
    std::vector<SourceRun> runs(sources.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= sources.size()) break;
            SourceRun& run = runs[i];
            run.source = sources[i];
            BubbleQuery q{sources[i], options.alpha1, options.alpha2, options.b};
            run.bubbles = enumerate_bubbles_collect(g, q, options.sink,
                                                    options.per_source_limits, &run.stats);
        }
    };
    unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || sources.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, sources.size()); ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) t.join();
    }
    return runs;
}

}  // namespace rbubble
