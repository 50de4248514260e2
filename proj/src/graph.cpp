#include "gsampler/graph.hpp"

#include <algorithm>

namespace gsampler {

Graph::Graph(int n_nodes)
    : n_(n_nodes),
      a_(static_cast<std::size_t>(n_nodes) * n_nodes, 0),
      outdeg_(n_nodes, 0) {
    if (n_nodes < 0) throw ValidationError("n_nodes must be >= 0");
}

Graph Graph::from_adjacency(int n_nodes, const std::vector<std::uint8_t>& a) {
    if (a.size() != static_cast<std::size_t>(n_nodes) * n_nodes)
        throw ShapeError("adjacency has " + std::to_string(a.size()) + " entries, expected " +
                         std::to_string(static_cast<std::size_t>(n_nodes) * n_nodes));
    Graph g(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        for (int j = 0; j < n_nodes; ++j) {
            std::uint8_t v = a[static_cast<std::size_t>(i) * n_nodes + j];
            if (v > 1)
                throw ValidationError("adjacency entries must be 0 or 1 (row " +
                                      std::to_string(i + 1) + ", column " + std::to_string(j + 1) + ")");
            if (v == 1 && i == j)
                throw ValidationError("self-loop on node " + std::to_string(i + 1));
            if (v) g.set_edge(i, j, true);
        }
    }
    return g;
}

void Graph::set_edge(int i, int j, bool present) {
    std::uint8_t& cell = a_[static_cast<std::size_t>(i) * n_ + j];
    if (cell == static_cast<std::uint8_t>(present)) return;
    cell = present ? 1 : 0;
    outdeg_[i] += present ? 1 : -1;
    n_edges_ += present ? 1 : -1;
}

std::vector<int> Graph::parents(int j) const {
    std::vector<int> p;
    for (int i = 0; i < n_; ++i)
        if (edge(i, j)) p.push_back(i);
    return p;
}

std::uint64_t Graph::edge_code() const {
    std::uint64_t code = 0;
    int bit = 0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            if (edge(i, j)) code |= std::uint64_t(1) << bit;
            ++bit;
        }
    return code;
}

bool is_dag(const Graph& g) {
    const int n = g.n_nodes();
    thread_local std::vector<std::int32_t> indeg;
    thread_local std::vector<std::int32_t> queue;
    indeg.assign(n, 0);
    queue.clear();

    const std::uint8_t* a = g.adjacency().data();
    for (int i = 0; i < n; ++i) {
        const std::uint8_t* row = a + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) indeg[j] += row[j];
    }
    for (int j = 0; j < n; ++j)
        if (indeg[j] == 0) queue.push_back(j);

    int removed = 0;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        ++removed;
        const std::uint8_t* row = a + static_cast<std::size_t>(v) * n;
        for (int j = 0; j < n; ++j) {
            if (row[j] && --indeg[j] == 0) queue.push_back(j);
        }
    }
    return removed == n;
}

std::vector<int> topological_order(const Graph& g) {
    const int n = g.n_nodes();
    std::vector<int> indeg(n, 0);
    std::vector<int> order;
    order.reserve(n);
    const std::uint8_t* a = g.adjacency().data();
    for (int i = 0; i < n; ++i) {
        const std::uint8_t* row = a + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) indeg[j] += row[j];
    }
    // Descending pushes keep the pop order deterministic.
    std::vector<int> frontier;
    for (int j = n - 1; j >= 0; --j)
        if (indeg[j] == 0) frontier.push_back(j);
    while (!frontier.empty()) {
        int v = frontier.back();
        frontier.pop_back();
        order.push_back(v);
        const std::uint8_t* row = a + static_cast<std::size_t>(v) * n;
        for (int j = n - 1; j >= 0; --j)
            if (row[j] && --indeg[j] == 0) frontier.push_back(j);
    }
    if (static_cast<int>(order.size()) != n)
        throw InconsistentGraph("graph contains a cycle");
    return order;
}

std::optional<Graph> apply_change(const Graph& g, const EdgeChange& c) {
    if (c.i == c.j) throw ValidationError("edge change must have i != j");
    Graph out = g;
    if (c.kind == EdgeChange::Kind::Delete) {
        out.set_edge(c.i, c.j, false);
        return out;
    }
    if (g.edge(c.i, c.j)) return out; // idempotent add
    out.set_edge(c.i, c.j, true);
    if (!is_dag(out)) return std::nullopt;
    return out;
}

boost::multiprecision::cpp_int count_dags(int n) {
    using boost::multiprecision::cpp_int;
    if (n < 0) throw ValidationError("n must be >= 0");
    // binomial table
    std::vector<std::vector<cpp_int>> choose(n + 1);
    for (int i = 0; i <= n; ++i) {
        choose[i].assign(i + 1, 1);
        for (int k = 1; k < i; ++k) choose[i][k] = choose[i - 1][k - 1] + choose[i - 1][k];
    }
    std::vector<cpp_int> a(n + 1);
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        cpp_int sum = 0;
        for (int k = 1; k <= m; ++k) {
            cpp_int term = choose[m][k] * (cpp_int(1) << (static_cast<std::size_t>(k) * (m - k))) * a[m - k];
            if (k % 2 == 1)
                sum += term;
            else
                sum -= term;
        }
        a[m] = sum;
    }
    return a[n];
}

std::vector<Graph> enumerate_dags(int n) {
    if (n < 0) throw ValidationError("n must be >= 0");
    if (n > 5)
        throw ValidationError("enumerate_dags supports n <= 5 (2^(n(n-1)) digraphs otherwise)");
    std::vector<Graph> out;
    const int cells = n * (n - 1);
    const std::uint64_t total = std::uint64_t(1) << cells;
    // map bit b (row-major over off-diagonal cells) back to (i,j)
    std::vector<std::pair<int, int>> cell_of(cells);
    {
        int b = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) cell_of[b++] = {i, j};
    }
    Graph g(n);
    for (std::uint64_t code = 0; code < total; ++code) {
        for (int b = 0; b < cells; ++b)
            g.set_edge(cell_of[b].first, cell_of[b].second, (code >> b) & 1u);
        if (is_dag(g)) out.push_back(g);
    }
    return out;
}

std::vector<int> parent_set(const Graph& g, int j) { return g.parents(j); }

} // namespace gsampler
