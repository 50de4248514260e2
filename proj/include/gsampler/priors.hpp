#ifndef GSAMPLER_PRIORS_HPP
#define GSAMPLER_PRIORS_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "gsampler/graph.hpp"

namespace gsampler {

struct MotifCounts {
    std::int64_t cycles = 0; // directed 3-cycles
    std::int64_t ffl = 0;    // feed-forward loops i->j, j->k, i->k
};

// Plug-in log-weight on 3-node motif counts. Empty function = constant
// prior (log 1 = 0), which is the default.
using MotifLogWeight = std::function<double(const MotifCounts&)>;

// Hyperparameters and enable flags for the four structure priors. All
// log-densities are unnormalized; MH only ever needs ratios.
struct PriorSpec {
    Eigen::MatrixXd bernoulli_p;                 // NxN, zero diagonal
    std::optional<Eigen::MatrixXd> concordance;  // entries in {-1,+1} off-diagonal
    double rho = 1.0;
    std::optional<double> degree_gamma;
    MotifLogWeight motif_log_weight;

    // Flat Bernoulli(p) off-diagonal, everything else disabled.
    static PriorSpec flat(int n_nodes, double p = 0.5);

    int n_nodes() const { return static_cast<int>(bernoulli_p.rows()); }
    void validate() const;
};

double log_bernoulli_prior(const Graph& g, const PriorSpec& spec);
double log_concordance_prior(const Graph& g, const PriorSpec& spec);
double log_degree_prior(const Graph& g, const PriorSpec& spec);
double log_motif_prior(const Graph& g, const PriorSpec& spec);
double log_total_prior(const Graph& g, const PriorSpec& spec);

MotifCounts count_motifs(const Graph& g);

// Per-component change in log prior for a single edge move. The
// acceptance ratio excludes the Bernoulli part (it cancels against the
// proposal probabilities), while the state bookkeeping wants the total.
struct PriorDelta {
    double bernoulli = 0;
    double concordance = 0;
    double degree = 0;
    double motif = 0;
    double total() const { return bernoulli + concordance + degree + motif; }
    double acceptance_part() const { return concordance + degree + motif; }
};

/// Count deltas for applying c to g, touching only triples through (i,j): O(N).
MotifCounts motif_delta(const Graph& g, const EdgeChange& c);

// motifs_before, when supplied, skips the O(N^3) recount needed to feed
// the motif plug-in absolute counts. check_cycles=false skips the
// acyclicity test for callers that already verified the move.
PriorDelta delta_log_prior_parts(const Graph& g, const EdgeChange& c, const PriorSpec& spec,
                                 const MotifCounts* motifs_before = nullptr,
                                 bool check_cycles = true);
double delta_log_prior(const Graph& g, const EdgeChange& c, const PriorSpec& spec);

} // namespace gsampler

#endif
