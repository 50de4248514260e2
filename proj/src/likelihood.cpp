#include "gsampler/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "gsampler/errors.hpp"

namespace gsampler {

namespace {

constexpr double kPi = 3.14159265358979323846;

// M = [1 | parents]: n x (k+1) design with intercept first.
Eigen::MatrixXd design_matrix(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data) {
    const int n = static_cast<int>(x.size());
    const int k = static_cast<int>(parents_data.cols());
    if (k > 0 && static_cast<int>(parents_data.rows()) != n)
        throw DimensionMismatch("parent data has " + std::to_string(parents_data.rows()) +
                                " rows, response has " + std::to_string(n));
    Eigen::MatrixXd M(n, k + 1);
    M.col(0).setOnes();
    if (k > 0) M.rightCols(k) = parents_data;
    return M;
}

} // namespace

DataSet DataSet::continuous(Eigen::MatrixXd values) {
    if (values.rows() < 1 || values.cols() < 1)
        throw ShapeError("continuous data must have at least one row and one column");
    DataSet d;
    d.kind = DataKind::Continuous;
    d.values = std::move(values);
    return d;
}

DataSet DataSet::discrete(Eigen::MatrixXi codes, std::vector<int> arities) {
    if (codes.rows() < 1 || codes.cols() < 1)
        throw ShapeError("discrete data must have at least one row and one column");
    const int N = static_cast<int>(codes.cols());
    if (codes.minCoeff() < 0) throw ValidationError("discrete data contains a negative category code");
    if (arities.empty()) {
        arities.resize(N);
        for (int j = 0; j < N; ++j) arities[j] = codes.col(j).maxCoeff() + 1;
    } else {
        if (static_cast<int>(arities.size()) != N)
            throw DimensionMismatch("arity list has " + std::to_string(arities.size()) +
                                    " entries for " + std::to_string(N) + " nodes");
        for (int j = 0; j < N; ++j) {
            if (arities[j] < 1) throw ValidationError("node arity must be at least 1");
            if (codes.col(j).maxCoeff() >= arities[j])
                throw ValidationError("category code out of range for node " + std::to_string(j + 1));
        }
    }
    DataSet d;
    d.kind = DataKind::Discrete;
    d.values = codes.cast<double>();
    d.codes = std::move(codes);
    d.arities = std::move(arities);
    return d;
}

void ModelSpec::validate() const {
    if (!(normal_gamma.alpha > 0.0)) throw ValidationError("alpha must be positive");
    if (!(normal_gamma.omega > 0.0)) throw ValidationError("omega must be positive");
    if (!(normal_gamma.n0_scale > 0.0)) throw ValidationError("n0 scale must be positive");
    if (!(zellner_g > 0.0)) throw ValidationError("g must be positive");
    if (!(dirichlet_pseudo_count > 0.0)) throw ValidationError("pseudo count must be positive");
}

double node_score_normal_gamma(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data,
                               const Eigen::VectorXd& beta0, const Eigen::MatrixXd& n0,
                               double alpha, double omega) {
    if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
    if (!(omega > 0.0)) throw ValidationError("omega must be positive");
    const Eigen::MatrixXd M = design_matrix(x, parents_data);
    const int n = static_cast<int>(M.rows());
    const int p = static_cast<int>(M.cols()); // k + 1
    if (n < 1) throw ShapeError("response vector is empty");
    if (static_cast<int>(beta0.size()) != p)
        throw DimensionMismatch("prior mean has " + std::to_string(beta0.size()) +
                                " entries, expected " + std::to_string(p));
    if (n0.rows() != p || n0.cols() != p)
        throw DimensionMismatch("prior precision must be " + std::to_string(p) + "x" +
                                std::to_string(p));

    Eigen::LLT<Eigen::MatrixXd> llt_n0(n0);
    if (llt_n0.info() != Eigen::Success)
        throw ValidationError("prior precision matrix must be positive definite");
    double logdet_n0 = 0.0;
    for (int i = 0; i < p; ++i) logdet_n0 += 2.0 * std::log(llt_n0.matrixL()(i, i));

    const Eigen::MatrixXd A = M.transpose() * M + n0;
    Eigen::LLT<Eigen::MatrixXd> llt_A(A);
    if (llt_A.info() != Eigen::Success)
        throw NumericalFailure("posterior precision factorization failed");
    double logdet_A = 0.0;
    for (int i = 0; i < p; ++i) logdet_A += 2.0 * std::log(llt_A.matrixL()(i, i));

    const Eigen::VectorXd r = x - M * beta0;
    const Eigen::VectorXd Mtr = M.transpose() * r;
    double quad = r.squaredNorm() - Mtr.dot(llt_A.solve(Mtr));
    if (quad < 0.0) quad = 0.0; // rounding
    const double Q = (alpha / omega) * quad;

    // log det Sigma^{-1} = n log(alpha/omega) + log det n0 - log det(M'M + n0)
    const double logdet_prec = n * std::log(alpha / omega) + logdet_n0 - logdet_A;
    return std::lgamma(alpha + 0.5 * n) - std::lgamma(alpha) - 0.5 * n * std::log(2.0 * alpha * kPi) +
           0.5 * logdet_prec - (alpha + 0.5 * n) * std::log1p(Q / (2.0 * alpha));
}

double node_score_normal_gamma(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data,
                               const NormalGammaParams& prm) {
    const int p = static_cast<int>(parents_data.cols()) + 1;
    const Eigen::VectorXd beta0 = Eigen::VectorXd::Constant(p, prm.beta0);
    const Eigen::MatrixXd n0 = prm.n0_scale * Eigen::MatrixXd::Identity(p, p);
    return node_score_normal_gamma(x, parents_data, beta0, n0, prm.alpha, prm.omega);
}

double node_score_zellner(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data, double g) {
    if (!(g > 0.0)) throw ValidationError("g must be positive");
    const Eigen::MatrixXd M = design_matrix(x, parents_data);
    const int n = static_cast<int>(M.rows());
    const int p = static_cast<int>(M.cols());
    if (n < 1) throw ShapeError("response vector is empty");
    if (p > n)
        throw TooManyParents("design has " + std::to_string(p) + " columns but only " +
                             std::to_string(n) + " observations");

    const Eigen::MatrixXd MtM = M.transpose() * M;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(MtM);
    if (!lu.isInvertible()) throw SingularDesign("collinear design (singular M'M)");

    const Eigen::VectorXd Mtx = M.transpose() * x;
    const double fit = Mtx.dot(lu.solve(Mtx));
    const double s = x.squaredNorm() - g / (1.0 + g) * fit;
    if (!(s > 0.0)) throw DegenerateData("shrunk residual sum of squares is not positive");
    return -0.5 * p * std::log1p(g) - 0.5 * n * std::log(s);
}

double node_score_dirichlet(const Eigen::VectorXi& x, const Eigen::MatrixXi& parents_data,
                            int arity, const std::vector<int>& parent_arities,
                            double pseudo_count) {
    if (!(pseudo_count > 0.0)) throw ValidationError("pseudo count must be positive");
    if (arity < 1) throw ValidationError("node arity must be at least 1");
    const int n = static_cast<int>(x.size());
    if (n < 1) throw ShapeError("response vector is empty");
    const int k = static_cast<int>(parents_data.cols());
    if (static_cast<int>(parent_arities.size()) != k)
        throw DimensionMismatch("arity list has " + std::to_string(parent_arities.size()) +
                                " entries for " + std::to_string(k) + " parents");
    if (k > 0 && static_cast<int>(parents_data.rows()) != n)
        throw DimensionMismatch("parent data has " + std::to_string(parents_data.rows()) +
                                " rows, response has " + std::to_string(n));

    // Mixed-radix weights, first parent least significant.
    std::vector<long long> weight(k);
    long long n_configs = 1;
    for (int t = 0; t < k; ++t) {
        if (parent_arities[t] < 1) throw ValidationError("parent arity must be at least 1");
        weight[t] = n_configs;
        if (n_configs > (std::numeric_limits<long long>::max() / 2) / parent_arities[t])
            throw TooManyParents("parent configuration space overflows");
        n_configs *= parent_arities[t];
    }
    for (int t = 0; t < n; ++t) {
        if (x[t] < 0 || x[t] >= arity)
            throw ValidationError("category code out of range in response");
        for (int c = 0; c < k; ++c)
            if (parents_data(t, c) < 0 || parents_data(t, c) >= parent_arities[c])
                throw ValidationError("category code out of range in parent data");
    }

    const double a0 = arity * pseudo_count;
    const double lg_pc = std::lgamma(pseudo_count);
    const double lg_a0 = std::lgamma(a0);
    double score = 0.0;

    const long long cells = n_configs * arity;
    if (cells <= (1LL << 20)) {
        std::vector<int> counts(static_cast<std::size_t>(cells), 0);
        for (int t = 0; t < n; ++t) {
            long long q = 0;
            for (int c = 0; c < k; ++c) q += weight[c] * parents_data(t, c);
            ++counts[static_cast<std::size_t>(q * arity + x[t])];
        }
        for (long long q = 0; q < n_configs; ++q) {
            int total = 0;
            for (int v = 0; v < arity; ++v) total += counts[static_cast<std::size_t>(q * arity + v)];
            if (total == 0) continue;
            score += lg_a0 - std::lgamma(a0 + total);
            for (int v = 0; v < arity; ++v) {
                const int c = counts[static_cast<std::size_t>(q * arity + v)];
                if (c > 0) score += std::lgamma(pseudo_count + c) - lg_pc;
            }
        }
    } else {
        std::unordered_map<long long, std::vector<int>> counts;
        counts.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            long long q = 0;
            for (int c = 0; c < k; ++c) q += weight[c] * parents_data(t, c);
            auto& cell = counts[q];
            if (cell.empty()) cell.assign(static_cast<std::size_t>(arity), 0);
            ++cell[static_cast<std::size_t>(x[t])];
        }
        for (const auto& [q, cell] : counts) {
            (void)q;
            int total = 0;
            for (int v = 0; v < arity; ++v) total += cell[static_cast<std::size_t>(v)];
            score += lg_a0 - std::lgamma(a0 + total);
            for (int v = 0; v < arity; ++v)
                if (cell[static_cast<std::size_t>(v)] > 0)
                    score += std::lgamma(pseudo_count + cell[static_cast<std::size_t>(v)]) - lg_pc;
        }
    }
    return score;
}

std::size_t ScoreCache::KeyHash::operator()(const Key& k) const {
    std::size_t h = std::hash<std::int32_t>()(k.node);
    for (std::int32_t p : k.parents)
        h ^= std::hash<std::int32_t>()(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

ScoreCache::ScoreCache(std::size_t capacity) : capacity_(capacity) {}

std::optional<double> ScoreCache::get(int node, const std::vector<int>& parents) {
    Key key{node, {parents.begin(), parents.end()}};
    std::sort(key.parents.begin(), key.parents.end());
    auto it = map_.find(key);
    if (it == map_.end()) {
        ++misses_;
        return std::nullopt;
    }
    ++hits_;
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->second;
}

void ScoreCache::put(int node, const std::vector<int>& parents, double value) {
    if (capacity_ == 0) return;
    Key key{node, {parents.begin(), parents.end()}};
    std::sort(key.parents.begin(), key.parents.end());
    auto it = map_.find(key);
    if (it != map_.end()) {
        it->second->second = value;
        lru_.splice(lru_.begin(), lru_, it->second);
        return;
    }
    lru_.emplace_front(key, value);
    map_[std::move(key)] = lru_.begin();
    if (map_.size() > capacity_) {
        map_.erase(lru_.back().first);
        lru_.pop_back();
    }
}

void ScoreCache::clear() {
    lru_.clear();
    map_.clear();
    hits_ = 0;
    misses_ = 0;
}

double node_log_score(int j, const std::vector<int>& parents, const DataSet& data,
                      const ModelSpec& model) {
    const int N = data.n_nodes();
    if (j < 0 || j >= N) throw ValidationError("node index out of range");
    for (int p : parents)
        if (p < 0 || p >= N || p == j) throw ValidationError("parent index out of range");
    const int n = data.n_obs();
    const int k = static_cast<int>(parents.size());

    if (model.family == Family::DirichletMultinomial) {
        if (data.kind != DataKind::Discrete)
            throw ValidationError("multinomial scoring requires discrete data");
        Eigen::MatrixXi pd(n, k);
        std::vector<int> par_ar(k);
        for (int c = 0; c < k; ++c) {
            pd.col(c) = data.codes.col(parents[c]);
            par_ar[c] = data.arities[parents[c]];
        }
        return node_score_dirichlet(data.codes.col(j), pd, data.arities[j], par_ar,
                                    model.dirichlet_pseudo_count);
    }

    Eigen::MatrixXd pd(n, k);
    for (int c = 0; c < k; ++c) pd.col(c) = data.values.col(parents[c]);
    if (model.family == Family::NormalGamma)
        return node_score_normal_gamma(data.values.col(j), pd, model.normal_gamma);
    return node_score_zellner(data.values.col(j), pd, model.zellner_g);
}

double node_log_score_cached(int j, const std::vector<int>& parents, const DataSet& data,
                             const ModelSpec& model, ScoreCache& cache) {
    if (auto hit = cache.get(j, parents)) return *hit;
    const double v = node_log_score(j, parents, data, model);
    cache.put(j, parents, v);
    return v;
}

double graph_log_score(const Graph& g, const DataSet& data, const ModelSpec& model,
                       ScoreCache& cache) {
    if (g.n_nodes() != data.n_nodes())
        throw DimensionMismatch("graph has " + std::to_string(g.n_nodes()) + " nodes, data has " +
                                std::to_string(data.n_nodes()));
    double total = 0.0;
    for (int j = 0; j < g.n_nodes(); ++j)
        total += node_log_score_cached(j, g.parents(j), data, model, cache);
    return total;
}

double graph_log_score(const Graph& g, const DataSet& data, const ModelSpec& model) {
    ScoreCache cache(0);
    if (g.n_nodes() != data.n_nodes())
        throw DimensionMismatch("graph has " + std::to_string(g.n_nodes()) + " nodes, data has " +
                                std::to_string(data.n_nodes()));
    double total = 0.0;
    for (int j = 0; j < g.n_nodes(); ++j)
        total += node_log_score(j, g.parents(j), data, model);
    return total;
}

double delta_log_score(const Graph& g, const EdgeChange& c, const DataSet& data,
                       const ModelSpec& model, ScoreCache& cache) {
    const bool present = g.edge(c.i, c.j);
    if ((c.kind == EdgeChange::Kind::Add && present) ||
        (c.kind == EdgeChange::Kind::Delete && !present))
        return 0.0;
    std::vector<int> before = g.parents(c.j);
    std::vector<int> after = before;
    if (c.kind == EdgeChange::Kind::Add) {
        after.insert(std::upper_bound(after.begin(), after.end(), c.i), c.i);
    } else {
        after.erase(std::find(after.begin(), after.end(), c.i));
    }
    return node_log_score_cached(c.j, after, data, model, cache) -
           node_log_score_cached(c.j, before, data, model, cache);
}

} // namespace gsampler
