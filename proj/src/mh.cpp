#include "gsampler/mh.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "gsampler/diagnostics.hpp"
#include "gsampler/errors.hpp"

namespace gsampler {

std::vector<std::uint64_t> RunConfig::chain_seeds() const {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(n_chains));
    for (int k = 0; k < n_chains; ++k) s[static_cast<std::size_t>(k)] = seed + static_cast<std::uint64_t>(k);
    return s;
}

void RunConfig::validate() const {
    if (n_iterations < 1) throw ValidationError("n_iterations must be at least 1");
    if (burn_in >= n_iterations)
        throw ValidationError("burn_in must be smaller than n_iterations");
    if (n_chains < 1) throw ValidationError("n_chains must be at least 1");
    if (batch_length < 1) throw ValidationError("batch_length must be at least 1");
    if (sample_stride < 0) throw ValidationError("sample_stride must be non-negative");
    if (compute_rhat) {
        if (n_chains < 2)
            throw ValidationError("rhat requires at least 2 chains");
        if ((n_iterations - effective_burn_in()) / batch_length < 2)
            throw ValidationError("rhat requires at least 2 completed batches after burn-in");
    }
}

Chain::Chain(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
             const ModelSpec* model, std::uint64_t seed)
    : config_(config),
      priors_(priors),
      data_(data),
      model_(model),
      rng_(seed),
      graph_(config.initial_graph ? *config.initial_graph : Graph(priors.n_nodes())),
      cache_(config.cache_capacity),
      n_(priors.n_nodes()),
      best_graph_(priors.n_nodes()) {
    config.validate();
    priors.validate();
    if (!config.prior_only) {
        if (!data || !model) throw ValidationError("data and model are required unless prior_only");
        model->validate();
        if (data->n_nodes() != n_)
            throw DimensionMismatch("data has " + std::to_string(data->n_nodes()) +
                                    " nodes, prior has " + std::to_string(n_));
    }
    if (graph_.n_nodes() != n_)
        throw DimensionMismatch("initial graph has " + std::to_string(graph_.n_nodes()) +
                                " nodes, prior has " + std::to_string(n_));

    // Deterministic edges (p in {0,1}) never enter the scan; the initial
    // graph must already satisfy them. The default empty graph gets p=1
    // edges forced in.
    const bool user_initial = config.initial_graph.has_value();
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            const double p = priors_.bernoulli_p(i, j);
            if (p == 1.0 && !graph_.edge(i, j)) {
                if (user_initial)
                    throw InconsistentGraph("initial graph is missing the forced edge " +
                                            std::to_string(i + 1) + "->" + std::to_string(j + 1));
                graph_.set_edge(i, j, true);
            } else if (p == 0.0 && graph_.edge(i, j)) {
                throw InconsistentGraph("initial graph contains the forbidden edge " +
                                        std::to_string(i + 1) + "->" + std::to_string(j + 1));
            }
        }
    }
    if (!is_dag(graph_)) throw InconsistentGraph("initial graph is not a DAG");

    scan_.reserve(static_cast<std::size_t>(n_) * (n_ - 1));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            const double p = priors_.bernoulli_p(i, j);
            if (p > 0.0 && p < 1.0) scan_.emplace_back(i, j);
        }

    burn_in_ = config.effective_burn_in();
    log_prior_ = log_total_prior(graph_, priors_);
    log_score_ = config.prior_only ? 0.0 : graph_log_score(graph_, *data_, *model_, cache_);
    track_motifs_ = static_cast<bool>(priors_.motif_log_weight);
    if (track_motifs_) motifs_ = count_motifs(graph_);

    best_graph_ = graph_;
    best_log_post_ = log_posterior();

    const std::size_t cells = static_cast<std::size_t>(n_) * n_;
    occ_.assign(cells, 0);
    since_.assign(cells, 0);
    occ_prev_.assign(cells, 0);
}

Proposal Chain::propose() {
    Proposal pr;
    if (scan_.empty()) return pr; // everything deterministic: permanent NoOp
    std::size_t idx;
    if (config_.random_scan) {
        idx = static_cast<std::size_t>(rng_.below(scan_.size()));
    } else {
        idx = cursor_;
        cursor_ = (cursor_ + 1) % scan_.size();
    }
    const auto [i, j] = scan_[idx];
    pr.i = i;
    pr.j = j;
    const bool z = rng_.bernoulli(priors_.bernoulli_p(i, j));
    const bool present = graph_.edge(i, j);
    if (z) {
        if (present) return pr; // NoOp: A' = A when already present
        graph_.set_edge(i, j, true);
        const bool acyclic = is_dag(graph_);
        graph_.set_edge(i, j, false);
        if (!acyclic) {
            pr.kind = Proposal::CycleRejection;
            return pr;
        }
        pr.kind = Proposal::Move;
        pr.change = EdgeChange::Kind::Add;
    } else {
        if (!present) return pr; // NoOp: deleting an absent edge
        pr.kind = Proposal::Move;
        pr.change = EdgeChange::Kind::Delete;
    }
    return pr;
}

double Chain::acceptance_log_ratio(const Proposal& p) {
    if (p.kind != Proposal::Move)
        throw ValidationError("acceptance ratio is defined for concrete moves only");
    const EdgeChange c{p.i, p.j, p.change};
    last_prior_delta_ = delta_log_prior_parts(graph_, c, priors_,
                                              track_motifs_ ? &motifs_ : nullptr,
                                              /*check_cycles=*/false);
    last_score_delta_ =
        config_.prior_only ? 0.0 : delta_log_score(graph_, c, *data_, *model_, cache_);
    return last_score_delta_ + last_prior_delta_.acceptance_part();
}

void Chain::rle_init() {
    const std::uint8_t* a = graph_.adjacency().data();
    const std::size_t cells = static_cast<std::size_t>(n_) * n_;
    for (std::size_t e = 0; e < cells; ++e)
        if (a[e]) since_[e] = 1;
}

void Chain::flush_batch(std::int64_t s) {
    Eigen::MatrixXd bm(n_, n_);
    const std::uint8_t* a = graph_.adjacency().data();
    const double len = static_cast<double>(config_.batch_length);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const std::size_t e = static_cast<std::size_t>(i) * n_ + j;
            const std::int64_t now = occ_[e] + (a[e] ? s - since_[e] + 1 : 0);
            bm(i, j) = static_cast<double>(now - occ_prev_[e]) / len;
            occ_prev_[e] = now;
        }
    }
    batch_means_.push_back(std::move(bm));
}

void Chain::resync() {
    log_prior_ = log_total_prior(graph_, priors_);
    log_score_ = config_.prior_only ? 0.0 : graph_log_score(graph_, *data_, *model_, cache_);
    if (track_motifs_) motifs_ = count_motifs(graph_);
}

void Chain::step() {
    const std::int64_t t = iteration_ + 1;
    const std::int64_t s = t - burn_in_;
    const Proposal pr = propose();
    switch (pr.kind) {
    case Proposal::NoOp:
        ++n_noop_;
        break;
    case Proposal::CycleRejection:
        ++n_cycle_rejected_;
        break;
    case Proposal::Move: {
        const double logr = acceptance_log_ratio(pr);
        const double u = rng_.uniform01();
        if (logr >= 0.0 || std::log(u) < logr) {
            const bool now_present = pr.change == EdgeChange::Kind::Add;
            if (track_motifs_) {
                const MotifCounts d = motif_delta(graph_, {pr.i, pr.j, pr.change});
                motifs_.cycles += d.cycles;
                motifs_.ffl += d.ffl;
            }
            graph_.set_edge(pr.i, pr.j, now_present);
            log_prior_ += last_prior_delta_.total();
            log_score_ += last_score_delta_;
            if (s >= 2) {
                const std::size_t e = static_cast<std::size_t>(pr.i) * n_ + pr.j;
                if (now_present)
                    since_[e] = s;
                else
                    occ_[e] += s - since_[e];
            }
            ++n_accepted_;
        } else {
            ++n_rejected_;
        }
        break;
    }
    }
    iteration_ = t;

    const double lp = log_posterior();
    if (lp > best_log_post_) {
        best_log_post_ = lp;
        best_graph_ = graph_;
    }
    if (s >= 1) {
        if (s == 1) rle_init();
        if (s % config_.batch_length == 0) flush_batch(s);
        if (config_.sample_stride > 0 && s % config_.sample_stride == 0)
            samples_.emplace_back(t, graph_.adjacency());
    }
    if (t % 100000 == 0) resync();
#ifndef NDEBUG
    if (t % 10000 == 0 && !is_dag(graph_))
        throw InconsistentGraph("chain left DAG space (bookkeeping bug)");
#endif
}

void Chain::run(const std::atomic<bool>* cancel) {
    const auto t0 = std::chrono::steady_clock::now();
    while (iteration_ < config_.n_iterations) {
        step();
        if (cancel && (iteration_ & 0xFFF) == 0 && cancel->load(std::memory_order_relaxed)) {
            partial_ = iteration_ < config_.n_iterations;
            break;
        }
    }
    wall_seconds_ +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ChainResult Chain::take_result() {
    ChainResult r;
    r.n_iterations = iteration_;
    r.burn_in = burn_in_;
    const std::int64_t S = iteration_ > burn_in_ ? iteration_ - burn_in_ : 0;
    r.edge_probability = Eigen::MatrixXd::Zero(n_, n_);
    if (S > 0) {
        const std::uint8_t* a = graph_.adjacency().data();
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const std::size_t e = static_cast<std::size_t>(i) * n_ + j;
                std::int64_t occ = occ_[e] + (a[e] ? S - since_[e] + 1 : 0);
                r.edge_probability(i, j) = static_cast<double>(occ) / static_cast<double>(S);
            }
    }
    r.best_graph = best_graph_;
    r.best_log_posterior = best_log_post_;
    r.batch_means = std::move(batch_means_);
    r.samples = std::move(samples_);
    r.n_accepted = n_accepted_;
    r.n_rejected = n_rejected_;
    r.n_noop = n_noop_;
    r.n_cycle_rejected = n_cycle_rejected_;
    r.cache_hits = cache_.hits();
    r.cache_misses = cache_.misses();
    r.wall_seconds = wall_seconds_;
    r.partial = partial_;
    return r;
}

ChainResult run_chain(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
                      const ModelSpec* model, std::uint64_t seed,
                      const std::atomic<bool>* cancel) {
    Chain chain(config, priors, data, model, seed);
    chain.run(cancel);
    return chain.take_result();
}

RunResult run_chains(const RunConfig& config, const PriorSpec& priors, const DataSet* data,
                     const ModelSpec* model) {
    config.validate();
    const int m = config.n_chains;
    const auto seeds = config.chain_seeds();
    std::vector<std::optional<ChainResult>> results(static_cast<std::size_t>(m));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(m));
    std::atomic<bool> cancel{false};

    auto work = [&](int k) {
        try {
            results[static_cast<std::size_t>(k)] =
                run_chain(config, priors, data, model, seeds[static_cast<std::size_t>(k)], &cancel);
        } catch (...) {
            failures[static_cast<std::size_t>(k)] = std::current_exception();
            cancel.store(true, std::memory_order_relaxed);
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(m - 1));
    for (int k = 1; k < m; ++k) threads.emplace_back(work, k);
    work(0);
    for (auto& t : threads) t.join();

    for (int k = 0; k < m; ++k) {
        if (!failures[static_cast<std::size_t>(k)]) continue;
        try {
            std::rethrow_exception(failures[static_cast<std::size_t>(k)]);
        } catch (const std::exception& e) {
            throw ChainError(k, e.what());
        }
    }

    RunResult out;
    out.chains.reserve(static_cast<std::size_t>(m));
    for (auto& r : results) out.chains.push_back(std::move(*r));

    const int N = priors.n_nodes();
    out.edge_probability = Eigen::MatrixXd::Zero(N, N);
    for (const auto& r : out.chains) out.edge_probability += r.edge_probability;
    out.edge_probability /= static_cast<double>(m);

    out.best_log_posterior = -std::numeric_limits<double>::infinity();
    for (const auto& r : out.chains) {
        if (r.best_log_posterior > out.best_log_posterior) {
            out.best_log_posterior = r.best_log_posterior;
            out.best_graph = r.best_graph;
        }
    }

    if (config.compute_rhat && m >= 2) {
        std::vector<std::vector<Eigen::MatrixXd>> bm;
        bm.reserve(static_cast<std::size_t>(m));
        for (const auto& r : out.chains) bm.push_back(r.batch_means);
        out.rhat = gelman_rubin(bm);
    }
    return out;
}

} // namespace gsampler
