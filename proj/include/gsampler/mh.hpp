#ifndef GSAMPLER_MH_HPP
#define GSAMPLER_MH_HPP

#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsampler/graph.hpp"
#include "gsampler/likelihood.hpp"
#include "gsampler/priors.hpp"
#include "gsampler/rng.hpp"

namespace gsampler {

struct RunConfig {
    std::int64_t n_iterations = 1000000;
    std::int64_t burn_in = -1; // -1: n_iterations / 10
    int n_chains = 3;
    std::uint64_t seed = 42;
    bool prior_only = false;
    std::int64_t sample_stride = 0; // 0: no strided graph dumps
    std::int64_t batch_length = 10000;
    bool random_scan = false;   // default: systematic row-major sweep
    bool compute_rhat = true;   // needs >= 2 chains and >= 2 batches
    std::size_t cache_capacity = std::size_t(1) << 20;
    std::optional<Graph> initial_graph; // default: empty graph

    std::int64_t effective_burn_in() const {
        return burn_in >= 0 ? burn_in : n_iterations / 10;
    }
    std::vector<std::uint64_t> chain_seeds() const;
    void validate() const;
};

struct Proposal {
    enum Kind { Move, NoOp, CycleRejection };
    Kind kind = NoOp;
    int i = -1;
    int j = -1;
    EdgeChange::Kind change = EdgeChange::Kind::Add; // meaningful for Move only
};

struct ChainResult {
    Eigen::MatrixXd edge_probability; // occupancy / post-burn-in samples
    Graph best_graph{1};
    double best_log_posterior = -std::numeric_limits<double>::infinity();
    std::vector<Eigen::MatrixXd> batch_means; // completed batches only
    std::vector<std::pair<std::int64_t, std::vector<std::uint8_t>>> samples;
    std::int64_t n_iterations = 0;
    std::int64_t burn_in = 0;
    std::uint64_t n_accepted = 0;
    std::uint64_t n_rejected = 0;
    std::uint64_t n_noop = 0;
    std::uint64_t n_cycle_rejected = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t cache_misses = 0;
    double wall_seconds = 0.0;
    bool partial = false; // run was cancelled before n_iterations
};

struct RunResult {
    std::vector<ChainResult> chains;
    Eigen::MatrixXd edge_probability; // mean over chains
    std::optional<Eigen::MatrixXd> rhat;
    Graph best_graph{1};
    double best_log_posterior = -std::numeric_limits<double>::infinity();
};

// One MCMC chain: systematic scan over non-deterministic off-diagonal
// pairs, Bernoulli(p_ij) add/delete proposals, acceptance on the
// simplified ratio (the Bernoulli prior cancels against the proposal
// probabilities, so only score/concordance/degree/motif deltas enter).
class Chain {
  public:
    // config and priors are copied; data/model are borrowed (may be null
    // only in prior_only mode) and must outlive the chain.
    Chain(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
          const ModelSpec* model, std::uint64_t seed);

    // Advances the scan cursor and draws z; never throws on rejection
    // outcomes (they are values).
    Proposal propose();

    // log of the simplified acceptance ratio for a concrete move.
    double acceptance_log_ratio(const Proposal& p);

    // One full proposal-accept/reject cycle plus accumulation.
    void step();

    // Steps until n_iterations, honoring an optional cancellation flag.
    void run(const std::atomic<bool>* cancel = nullptr);

    // Flushes accumulators and packages the result (call once, after run
    // or a manual stepping loop).
    ChainResult take_result();

    const Graph& graph() const { return graph_; }
    double log_prior() const { return log_prior_; }
    double log_score() const { return log_score_; }
    double log_posterior() const { return log_prior_ + log_score_; }
    std::int64_t iteration() const { return iteration_; }
    const ScoreCache& cache() const { return cache_; }

  private:
    void rle_init();
    void flush_batch(std::int64_t s);
    void resync();

    RunConfig config_;
    PriorSpec priors_;
    const DataSet* data_;
    const ModelSpec* model_;
    Rng rng_;
    Graph graph_;
    ScoreCache cache_;
    int n_;
    double log_prior_ = 0.0;
    double log_score_ = 0.0;
    bool track_motifs_ = false;
    MotifCounts motifs_{};
    std::vector<std::pair<int, int>> scan_;
    std::size_t cursor_ = 0;
    std::int64_t iteration_ = 0;
    std::int64_t burn_in_ = 0;

    PriorDelta last_prior_delta_{};
    double last_score_delta_ = 0.0;

    // Run-length occupancy accounting over post-burn-in samples
    // s = iteration - burn_in in [1, S]: per-edge completed-run totals plus
    // the start sample of the current presence run; batch means read off
    // occupancy snapshots at batch boundaries.
    std::vector<std::int64_t> occ_;
    std::vector<std::int64_t> since_;
    std::vector<std::int64_t> occ_prev_;
    std::vector<Eigen::MatrixXd> batch_means_;
    std::vector<std::pair<std::int64_t, std::vector<std::uint8_t>>> samples_;

    Graph best_graph_;
    double best_log_post_ = -std::numeric_limits<double>::infinity();
    std::uint64_t n_accepted_ = 0;
    std::uint64_t n_rejected_ = 0;
    std::uint64_t n_noop_ = 0;
    std::uint64_t n_cycle_rejected_ = 0;
    bool partial_ = false;
    double wall_seconds_ = 0.0;
};

ChainResult run_chain(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
                      const ModelSpec* model, std::uint64_t seed,
                      const std::atomic<bool>* cancel = nullptr);

// Runs n_chains chains concurrently (seeds = base + index), pools edge
// probabilities by averaging, and computes per-edge rhat when requested.
// A chain failure aborts the whole run as ChainError with the chain id.
RunResult run_chains(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
                     const ModelSpec* model);

} // namespace gsampler

#endif
