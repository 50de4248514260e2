#ifndef GSAMPLER_DIAGNOSTICS_HPP
#define GSAMPLER_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsampler/graph.hpp"
#include "gsampler/likelihood.hpp"
#include "gsampler/priors.hpp"

namespace gsampler {

// Potential scale reduction factor from per-chain batch-mean series:
// W = mean per-chain variance, B = n_batches * variance of the chain means,
// Vhat = ((m-1)/m) W + B/m with m = n_batches, rhat = sqrt(Vhat/W).
// W = B = 0 (series frozen at one value in every chain) reports 1.
double rhat_scalar(const std::vector<std::vector<double>>& chains);

// Per-edge rhat over chains of N x N batch-mean matrices (one matrix per
// batch). Diagonal entries are reported as 1.
Eigen::MatrixXd gelman_rubin(const std::vector<std::vector<Eigen::MatrixXd>>& batch_means);

// Max off-diagonal rhat <= threshold. NaN/inf entries count as unconverged.
bool converged(const Eigen::MatrixXd& rhat, double threshold = 1.05);

/// Edge present iff prob > t (strict: t=0 is the all-present baseline, t=1
// all-absent). Accuracy = matching off-diagonal positions / N(N-1).
std::vector<std::pair<double, double>> accuracy_curve(const Eigen::MatrixXd& probs,
                                                      const Graph& truth,
                                                      const std::vector<double>& thresholds);

Graph threshold_graph(const Eigen::MatrixXd& probs, double t);

/// Out-degree histogram: counts[d] = number of nodes with out-degree d,
// d in [0, N-1].
std::vector<int> degree_histogram(const Graph& g);

struct FlipGapResult {
    double with_ij;   // log posterior with edge i->j
    double with_ji;   // log posterior with edge j->i
    double neither;   // log posterior of the base graph
};

// Unnormalized log posteriors (score + total structure prior) of the three
// orientation states of pair (i,j) on top of base, which must contain
// neither edge and admit both single-edge additions.
FlipGapResult flip_gap_probe(const DataSet& data, const ModelSpec& model, const PriorSpec& priors,
                             const Graph& base, int i, int j);

} // namespace gsampler

#endif
