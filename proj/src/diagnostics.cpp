#include "gsampler/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "gsampler/errors.hpp"

namespace gsampler {

namespace {

double sample_variance(const std::vector<double>& v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (static_cast<double>(v.size()) - 1.0);
}

} // namespace

double rhat_scalar(const std::vector<std::vector<double>>& chains) {
    const std::size_t m_chains = chains.size();
    if (m_chains < 2) throw InsufficientChains("need at least 2 chains");
    const std::size_t m = chains[0].size(); // batches per chain
    if (m < 2) throw InsufficientChains("need at least 2 batches per chain");
    for (const auto& c : chains)
        if (c.size() != m) throw DimensionMismatch("chains have unequal batch counts");

    double W = 0.0;
    std::vector<double> chain_mean(m_chains);
    for (std::size_t c = 0; c < m_chains; ++c) {
        double mu = 0.0;
        for (double x : chains[c]) mu += x;
        mu /= static_cast<double>(m);
        chain_mean[c] = mu;
        W += sample_variance(chains[c], mu);
    }
    W /= static_cast<double>(m_chains);

    double grand = 0.0;
    for (double mu : chain_mean) grand += mu;
    grand /= static_cast<double>(m_chains);
    const double B = static_cast<double>(m) * sample_variance(chain_mean, grand);

    if (W == 0.0 && B == 0.0) return 1.0;
    const double md = static_cast<double>(m);
    const double vhat = (md - 1.0) / md * W + B / md;
    if (W == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(vhat / W);
}

Eigen::MatrixXd gelman_rubin(const std::vector<std::vector<Eigen::MatrixXd>>& batch_means) {
    const std::size_t m_chains = batch_means.size();
    if (m_chains < 2) throw InsufficientChains("need at least 2 chains");
    const std::size_t m = batch_means[0].size();
    if (m < 2) throw InsufficientChains("need at least 2 batches per chain");
    const Eigen::Index N = batch_means[0][0].rows();
    for (const auto& chain : batch_means) {
        if (chain.size() != m) throw DimensionMismatch("chains have unequal batch counts");
        for (const auto& mat : chain)
            if (mat.rows() != N || mat.cols() != N)
                throw DimensionMismatch("batch-mean matrices have mixed shapes");
    }

    Eigen::MatrixXd rhat = Eigen::MatrixXd::Ones(N, N);
    std::vector<std::vector<double>> series(m_chains, std::vector<double>(m));
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j < N; ++j) {
            if (i == j) continue;
            for (std::size_t c = 0; c < m_chains; ++c)
                for (std::size_t b = 0; b < m; ++b) series[c][b] = batch_means[c][b](i, j);
            rhat(i, j) = rhat_scalar(series);
        }
    }
    return rhat;
}

bool converged(const Eigen::MatrixXd& rhat, double threshold) {
    for (Eigen::Index i = 0; i < rhat.rows(); ++i)
        for (Eigen::Index j = 0; j < rhat.cols(); ++j) {
            if (i == j) continue;
            if (!(rhat(i, j) <= threshold)) return false;
        }
    return true;
}

std::vector<std::pair<double, double>> accuracy_curve(const Eigen::MatrixXd& probs,
                                                      const Graph& truth,
                                                      const std::vector<double>& thresholds) {
    const int N = truth.n_nodes();
    if (probs.rows() != N || probs.cols() != N)
        throw DimensionMismatch("probability matrix does not match graph size");
    for (double t : thresholds)
        if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("thresholds must lie in [0,1]");

    std::vector<std::pair<double, double>> curve;
    curve.reserve(thresholds.size());
    const double total = static_cast<double>(N) * (N - 1);
    for (double t : thresholds) {
        int correct = 0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                if (i == j) continue;
                const bool called = probs(i, j) > t;
                if (called == truth.edge(i, j)) ++correct;
            }
        curve.emplace_back(t, correct / total);
    }
    return curve;
}

Graph threshold_graph(const Eigen::MatrixXd& probs, double t) {
    const int N = static_cast<int>(probs.rows());
    if (probs.cols() != N) throw DimensionMismatch("probability matrix must be square");
    Graph g(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j && probs(i, j) > t) g.set_edge(i, j, true);
    return g;
}

std::vector<int> degree_histogram(const Graph& g) {
    const int N = g.n_nodes();
    std::vector<int> counts(static_cast<std::size_t>(N), 0);
    for (int i = 0; i < N; ++i) ++counts[static_cast<std::size_t>(g.out_degree(i))];
    return counts;
}

FlipGapResult flip_gap_probe(const DataSet& data, const ModelSpec& model, const PriorSpec& priors,
                             const Graph& base, int i, int j) {
    if (base.n_nodes() != data.n_nodes())
        throw DimensionMismatch("graph and data disagree on node count");
    if (base.edge(i, j) || base.edge(j, i))
        throw ValidationError("base graph must contain neither orientation of the probed pair");

    auto logpost = [&](const Graph& g) {
        return graph_log_score(g, data, model) + log_total_prior(g, priors);
    };
    Graph gij = base;
    gij.set_edge(i, j, true);
    if (!is_dag(gij)) throw InconsistentGraph("adding the probed edge creates a cycle");
    Graph gji = base;
    gji.set_edge(j, i, true);
    if (!is_dag(gji)) throw InconsistentGraph("adding the reversed edge creates a cycle");

    FlipGapResult r;
    r.with_ij = logpost(gij);
    r.with_ji = logpost(gji);
    r.neither = logpost(base);
    return r;
}

} // namespace gsampler
