#ifndef GSAMPLER_GRAPH_HPP
#define GSAMPLER_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gsampler/errors.hpp"

namespace gsampler {

// Directed graph on N nodes stored as a dense row-major 0/1 adjacency
// matrix: a(i,j) = 1 means an edge i -> j. Node indices are 0-based in
// memory and 1-based in all file formats and messages.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n_nodes);

    // Validates 0/1 entries and a zero diagonal; `a` is row-major n*n.
    static Graph from_adjacency(int n_nodes, const std::vector<std::uint8_t>& a);

    int n_nodes() const { return n_; }
    int n_edges() const { return n_edges_; }

    bool edge(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j] != 0; }
    void set_edge(int i, int j, bool present);

    int out_degree(int i) const { return outdeg_[i]; }

    // Parents of j in ascending node order (deterministic design matrices).
    std::vector<int> parents(int j) const;

    const std::vector<std::uint8_t>& adjacency() const { return a_; }

    // Packs the off-diagonal entries (row-major) into one integer;
    // only valid for n*(n-1) <= 64, used to tally small graphs.
    std::uint64_t edge_code() const;

    bool operator==(const Graph& o) const { return n_ == o.n_ && a_ == o.a_; }
    bool operator!=(const Graph& o) const { return !(*this == o); }

  private:
    int n_ = 0;
    int n_edges_ = 0;
    std::vector<std::uint8_t> a_;
    std::vector<std::int32_t> outdeg_;
};

struct EdgeChange {
    enum class Kind { Add, Delete };
    int i;
    int j;
    Kind kind;
};

// Kahn-style topological sort over a node index list; scratch arrays are
// reused across calls (thread_local) so the hot loop never allocates.
bool is_dag(const Graph& g);

// Topological order, parents before children. Throws InconsistentGraph if
// the input has a cycle.
std::vector<int> topological_order(const Graph& g);

// Value-semantics edge mutation. Add of a present edge and Delete of an
// absent edge return the graph unchanged; an Add that would close a cycle
// returns nullopt (the caller treats the proposal as rejected). Deletion
// can never create a cycle.
std::optional<Graph> apply_change(const Graph& g, const EdgeChange& c);

// Number of labeled DAGs on n nodes (alternating-sign binomial recursion,
// a_0 = 1). Exact; the values explode, hence arbitrary precision.
boost::multiprecision::cpp_int count_dags(int n);

// Every labeled DAG on n nodes, by filtering all 2^(n(n-1)) digraphs
// through is_dag. Test oracle; refuses n > 5.
std::vector<Graph> enumerate_dags(int n);

std::vector<int> parent_set(const Graph& g, int j);

} // namespace gsampler

#endif
