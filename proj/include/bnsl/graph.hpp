#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bnsl {

struct Move {
    enum class Kind { Add, Delete, Reverse };
    Kind kind = Kind::Add;
    int from = -1;
    int to = -1;

    friend bool operator==(const Move&, const Move&) = default;
};

// Directed acyclic graph over named nodes. Acyclicity is the caller's
// responsibility when mutating through apply_move (which checks).
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<std::string> nodes) : nodes_(std::move(nodes)) {
        parents_.resize(nodes_.size());
        children_.resize(nodes_.size());
    }

    std::size_t num_nodes() const { return nodes_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::string& name(int i) const { return nodes_[i]; }
    int node(const std::string& name) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("no such node: " + name);
    }

    const std::vector<int>& parents(int i) const { return parents_[i]; }
    const std::vector<int>& children(int i) const { return children_[i]; }
    int in_degree(int i) const { return static_cast<int>(parents_[i].size()); }

    bool has_arc(int from, int to) const {
        const auto& p = parents_[to];
        return std::find(p.begin(), p.end(), from) != p.end();
    }

    std::size_t num_arcs() const {
        std::size_t total = 0;
        for (const auto& p : parents_) total += p.size();
        return total;
    }

    std::vector<std::pair<int, int>> arcs() const {
        std::vector<std::pair<int, int>> out;
        for (std::size_t to = 0; to < parents_.size(); ++to)
            for (int from : parents_[to]) out.emplace_back(from, static_cast<int>(to));
        std::sort(out.begin(), out.end());
        return out;
    }

    void add_arc_unchecked(int from, int to) {
        parents_[to].insert(std::lower_bound(parents_[to].begin(), parents_[to].end(), from), from);
        children_[from].insert(std::lower_bound(children_[from].begin(), children_[from].end(), to), to);
    }

    void remove_arc_unchecked(int from, int to) {
        auto& p = parents_[to];
        p.erase(std::find(p.begin(), p.end(), from));
        auto& c = children_[from];
        c.erase(std::find(c.begin(), c.end(), to));
    }

    // True iff `target` is reachable from `start` following arcs, ignoring the
    // arc skip_from -> skip_to if given.
    bool reachable(int start, int target, int skip_from = -1, int skip_to = -1) const {
        if (start == target) return true;
        std::vector<char> seen(nodes_.size(), 0);
        std::vector<int> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : children_[u]) {
                if (u == skip_from && v == skip_to) continue;
                if (v == target) return true;
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return false;
    }

private:
    std::vector<std::string> nodes_;
    std::vector<std::vector<int>> parents_;   // sorted
    std::vector<std::vector<int>> children_;  // sorted
};

inline void check_move_nodes(const Dag& dag, const Move& m) {
    int n = static_cast<int>(dag.num_nodes());
    if (m.from < 0 || m.from >= n || m.to < 0 || m.to >= n || m.from == m.to)
        throw std::invalid_argument("move references unknown node or self-loop");
}

inline bool would_create_cycle(const Dag& dag, const Move& m) {
    check_move_nodes(dag, m);
    switch (m.kind) {
        case Move::Kind::Add:
            // adding from->to cycles iff from is reachable from to
            return dag.reachable(m.to, m.from);
        case Move::Kind::Delete:
            return false;
        case Move::Kind::Reverse:
            // after removing from->to, adding to->from cycles iff a path
            // from `from` to `to` remains
            return dag.reachable(m.from, m.to, m.from, m.to);
    }
    return false;
}

inline Dag apply_move(const Dag& dag, const Move& m) {
    check_move_nodes(dag, m);
    Dag out = dag;
    switch (m.kind) {
        case Move::Kind::Add:
            if (dag.has_arc(m.from, m.to)) throw std::invalid_argument("apply_move: duplicate arc");
            if (would_create_cycle(dag, m)) throw std::invalid_argument("apply_move: cycle");
            out.add_arc_unchecked(m.from, m.to);
            break;
        case Move::Kind::Delete:
            if (!dag.has_arc(m.from, m.to)) throw std::invalid_argument("apply_move: missing arc");
            out.remove_arc_unchecked(m.from, m.to);
            break;
        case Move::Kind::Reverse:
            if (!dag.has_arc(m.from, m.to)) throw std::invalid_argument("apply_move: missing arc");
            if (would_create_cycle(dag, m)) throw std::invalid_argument("apply_move: cycle");
            out.remove_arc_unchecked(m.from, m.to);
            out.add_arc_unchecked(m.to, m.from);
            break;
    }
    return out;
}

// Stable Kahn ordering with lexicographic (node-name) tie-break.
inline std::vector<int> topological_order(const Dag& dag) {
    const int n = static_cast<int>(dag.num_nodes());
    std::vector<int> indeg(n);
    for (int i = 0; i < n; ++i) indeg[i] = dag.in_degree(i);
    auto cmp = [&](int a, int b) { return dag.name(a) > dag.name(b); };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int i = 0; i < n; ++i)
        if (indeg[i] == 0) ready.push(i);
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int u = ready.top();
        ready.pop();
        order.push_back(u);
        for (int v : dag.children(u))
            if (--indeg[v] == 0) ready.push(v);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::runtime_error("topological_order: graph has a cycle");
    return order;
}

// Equivalence-class representative: compelled arcs directed, the rest
// undirected. Undirected edges stored with the smaller index first.
class Cpdag {
public:
    Cpdag() = default;
    Cpdag(std::vector<std::string> nodes, std::set<std::pair<int, int>> directed,
          std::set<std::pair<int, int>> undirected)
        : nodes_(std::move(nodes)), directed_(std::move(directed)), undirected_(std::move(undirected)) {}

    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::set<std::pair<int, int>>& directed() const { return directed_; }
    const std::set<std::pair<int, int>>& undirected() const { return undirected_; }

    friend bool operator==(const Cpdag&, const Cpdag&) = default;

private:
    std::vector<std::string> nodes_;
    std::set<std::pair<int, int>> directed_;
    std::set<std::pair<int, int>> undirected_;
};

namespace detail {

// Edge status matrix used while orienting: 0 none, 1 undirected, 2 directed.
struct PdagWork {
    int n;
    std::vector<char> dir;   // dir[a*n+b]: a -> b compelled
    std::vector<char> und;   // und[a*n+b] == und[b*n+a]: undirected edge
    explicit PdagWork(int n) : n(n), dir(n * n, 0), und(n * n, 0) {}
    bool adjacent(int a, int b) const { return dir[a * n + b] || dir[b * n + a] || und[a * n + b]; }
    void orient(int a, int b) {
        und[a * n + b] = und[b * n + a] = 0;
        dir[a * n + b] = 1;
    }
};

}  // namespace detail

// Orient v-structures, then apply Meek rules 1-4 to fixpoint.
inline Cpdag cpdag_of(const Dag& dag) {
    const int n = static_cast<int>(dag.num_nodes());
    detail::PdagWork w(n);
    for (int to = 0; to < n; ++to)
        for (int from : dag.parents(to)) w.und[from * n + to] = w.und[to * n + from] = 1;

    // v-structures: a -> c <- b with a, b non-adjacent
    for (int c = 0; c < n; ++c) {
        const auto& par = dag.parents(c);
        for (std::size_t i = 0; i < par.size(); ++i)
            for (std::size_t k = i + 1; k < par.size(); ++k) {
                int a = par[i], b = par[k];
                if (!dag.has_arc(a, b) && !dag.has_arc(b, a)) {
                    w.orient(a, c);
                    w.orient(b, c);
                }
            }
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (!w.und[a * n + b] || a == b) continue;
                bool orient = false;
                // R1: c -> a, a -- b, c and b non-adjacent  =>  a -> b
                for (int c = 0; c < n && !orient; ++c)
                    if (w.dir[c * n + a] && !w.adjacent(c, b)) orient = true;
                // R2: a -> c -> b with a -- b  =>  a -> b
                for (int c = 0; c < n && !orient; ++c)
                    if (w.dir[a * n + c] && w.dir[c * n + b]) orient = true;
                // R3: a -- c -> b, a -- d -> b, c and d non-adjacent  =>  a -> b
                for (int c = 0; c < n && !orient; ++c) {
                    if (!(w.und[a * n + c] && w.dir[c * n + b])) continue;
                    for (int d = c + 1; d < n && !orient; ++d)
                        if (w.und[a * n + d] && w.dir[d * n + b] && !w.adjacent(c, d)) orient = true;
                }
                // R4: a -- d -> c -> b, a and c adjacent, d and b non-adjacent  =>  a -> b
                for (int d = 0; d < n && !orient; ++d) {
                    if (!w.und[a * n + d]) continue;
                    for (int c = 0; c < n && !orient; ++c)
                        if (w.dir[d * n + c] && w.dir[c * n + b] && w.adjacent(a, c) &&
                            !w.adjacent(d, b))
                            orient = true;
                }
                if (orient) {
                    w.orient(a, b);
                    changed = true;
                }
            }
    }

    std::set<std::pair<int, int>> directed, undirected;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (w.dir[a * n + b]) directed.emplace(a, b);
            if (a < b && w.und[a * n + b]) undirected.emplace(a, b);
        }
    return Cpdag(dag.nodes(), std::move(directed), std::move(undirected));
}

// Structural Hamming distance between two CPDAGs over the same node set:
// one unit per node pair that is an edge in exactly one graph, one unit per
// pair present in both with mismatching status.
inline int shd(const Cpdag& a, const Cpdag& b) {
    if (a.nodes() != b.nodes()) throw std::invalid_argument("shd: node sets differ");
    const int n = static_cast<int>(a.nodes().size());
    // status per ordered pair (i<j): 0 none, 1 undirected, 2 i->j, 3 j->i
    auto status = [n](const Cpdag& g, int i, int j) -> int {
        if (g.undirected().count({i, j})) return 1;
        if (g.directed().count({i, j})) return 2;
        if (g.directed().count({j, i})) return 3;
        return 0;
    };
    int dist = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int sa = status(a, i, j), sb = status(b, i, j);
            if (sa != sb) ++dist;
        }
    return dist;
}

// Arc-list text format: "parent -> child" per directed arc, "a -- b" per
// undirected edge, lines sorted lexicographically.
inline std::string to_arc_list(const Dag& dag) {
    std::vector<std::string> lines;
    for (auto [from, to] : dag.arcs())
        lines.push_back(dag.name(from) + " -> " + dag.name(to));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

inline std::string to_arc_list(const Cpdag& g) {
    std::vector<std::string> lines;
    for (auto [from, to] : g.directed())
        lines.push_back(g.nodes()[from] + " -> " + g.nodes()[to]);
    for (auto [a, b] : g.undirected())
        lines.push_back(g.nodes()[a] + " -- " + g.nodes()[b]);
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

// Parses "a -> b" lines into a Dag over the given node set.
inline Dag dag_from_arc_list(const std::string& text, std::vector<std::string> nodes) {
    Dag dag(std::move(nodes));
    std::istringstream in(text);
    std::string from, sep, to;
    while (in >> from >> sep >> to) {
        if (sep != "->") throw std::runtime_error("arc list: expected '->', got '" + sep + "'");
        Move m{Move::Kind::Add, dag.node(from), dag.node(to)};
        if (would_create_cycle(dag, m)) throw std::runtime_error("arc list: cyclic graph");
        dag.add_arc_unchecked(m.from, m.to);
    }
    return dag;
}

}  // namespace bnsl
