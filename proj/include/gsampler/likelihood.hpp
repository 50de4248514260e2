#ifndef GSAMPLER_LIKELIHOOD_HPP
#define GSAMPLER_LIKELIHOOD_HPP

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "gsampler/graph.hpp"

namespace gsampler {

enum class DataKind { Continuous, Discrete };

// n observations per node, one column per node. Discrete data keeps the
// category codes alongside a real-valued view so the regression models
// can score 0/1-coded data directly.
struct DataSet {
    DataKind kind = DataKind::Continuous;
    Eigen::MatrixXd values;    // n x N
    Eigen::MatrixXi codes;     // n x N, discrete only
    std::vector<int> arities;  // per node, discrete only

    int n_obs() const { return static_cast<int>(values.rows()); }
    int n_nodes() const { return static_cast<int>(values.cols()); }

    static DataSet continuous(Eigen::MatrixXd values);
    // Arities inferred as max code + 1 per column when not supplied.
    static DataSet discrete(Eigen::MatrixXi codes, std::vector<int> arities = {});
};

enum class Family { NormalGamma, ZellnerG, DirichletMultinomial };

struct NormalGammaParams {
    double alpha = 1.0;    // Gamma shape on the noise precision
    double omega = 1.0;    // Gamma rate
    double beta0 = 0.0;    // broadcast over the k+1 coefficients
    double n0_scale = 1.0; // n0 = n0_scale * I_(k+1)
};

struct ModelSpec {
    Family family = Family::NormalGamma;
    NormalGammaParams normal_gamma;
    double zellner_g = 1.0;
    double dirichlet_pseudo_count = 1.0;
    void validate() const;
};

// Log prior-predictive of x under the conjugate Normal-Gamma regression:
// a multivariate t with nu = 2*alpha, mu = M*beta0 and
// Sigma^{-1} = h(M)*alpha/omega, h(M) = I - M (M'M + n0)^{-1} M',
// where M = [1 | parents]. The n x n determinant reduces to
// det(n0)/det(M'M + n0), so the cost is O(n k^2).
double node_score_normal_gamma(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data,
                               const NormalGammaParams& p);

// Full-matrix variant: beta0 of length k+1 and n0 of shape (k+1)x(k+1).
double node_score_normal_gamma(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data,
                               const Eigen::VectorXd& beta0, const Eigen::MatrixXd& n0,
                               double alpha, double omega);

// Zellner g-prior marginal, up to a constant depending on n alone:
// -(k+1)/2 log(1+g) - n/2 log s, s = x'x - g/(1+g) x'M(M'M)^{-1}M'x.
double node_score_zellner(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data, double g);

// Dirichlet-Multinomial marginal over parent configurations (mixed-radix
// encoded, radices in ascending parent order).
double node_score_dirichlet(const Eigen::VectorXi& x, const Eigen::MatrixXi& parents_data,
                            int arity, const std::vector<int>& parent_arities,
                            double pseudo_count);

// LRU cache of per-node log scores keyed by (node, sorted parent set).
class ScoreCache {
  public:
    explicit ScoreCache(std::size_t capacity = std::size_t(1) << 20);

    std::optional<double> get(int node, const std::vector<int>& parents);
    void put(int node, const std::vector<int>& parents, double value);

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }
    std::size_t size() const { return map_.size(); }
    void clear();

  private:
    struct Key {
        std::int32_t node;
        std::vector<std::int32_t> parents;
        bool operator==(const Key& o) const { return node == o.node && parents == o.parents; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    using Entry = std::pair<Key, double>;
    std::size_t capacity_;
    std::list<Entry> lru_; // front = most recent
    std::unordered_map<Key, std::list<Entry>::iterator, KeyHash> map_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

// Score of node j given an explicit parent set (dispatch on family).
double node_log_score(int j, const std::vector<int>& parents, const DataSet& data,
                      const ModelSpec& model);
double node_log_score_cached(int j, const std::vector<int>& parents, const DataSet& data,
                             const ModelSpec& model, ScoreCache& cache);

// Decomposable total: sum of per-node scores given parents in g.
double graph_log_score(const Graph& g, const DataSet& data, const ModelSpec& model,
                       ScoreCache& cache);
double graph_log_score(const Graph& g, const DataSet& data, const ModelSpec& model);

// Rescores only the child node of the change.
double delta_log_score(const Graph& g, const EdgeChange& c, const DataSet& data,
                       const ModelSpec& model, ScoreCache& cache);

} // namespace gsampler

#endif
