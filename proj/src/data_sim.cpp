#include "gsampler/data_sim.hpp"

#include <cmath>

#include "gsampler/errors.hpp"
#include "gsampler/rng.hpp"

namespace gsampler {

void SimSpec::validate() const {
    if (n_obs < 1) throw ValidationError("n_obs must be at least 1");
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    for (double p : {p_root, p_active, p_inactive})
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probabilities must lie in [0,1]");
}

Graph gen_tree_network(int n_nodes) {
    if (n_nodes < 1) throw ValidationError("n_nodes must be at least 1");
    Graph g(n_nodes);
    for (int j = 1; j < n_nodes; ++j) g.set_edge((j - 1) / 2, j, true);
    return g;
}

DataSet sim_continuous(const Graph& g, const SimSpec& spec) {
    spec.validate();
    const int N = g.n_nodes();
    const std::vector<int> order = topological_order(g);
    const double sd = 1.0 / std::sqrt(spec.lambda);
    Rng rng(spec.seed);
    Eigen::MatrixXd x(spec.n_obs, N);
    for (int t = 0; t < spec.n_obs; ++t) {
        for (int j : order) {
            double mean = spec.intercept;
            for (int p : g.parents(j)) mean += spec.beta * x(t, p);
            x(t, j) = mean + sd * rng.normal();
        }
    }
    return DataSet::continuous(std::move(x));
}

DataSet sim_discrete(const Graph& g, const SimSpec& spec) {
    spec.validate();
    const int N = g.n_nodes();
    const std::vector<int> order = topological_order(g);
    Rng rng(spec.seed);
    Eigen::MatrixXi x(spec.n_obs, N);
    for (int t = 0; t < spec.n_obs; ++t) {
        for (int j : order) {
            const std::vector<int> par = g.parents(j);
            double p;
            if (par.empty()) {
                p = spec.p_root;
            } else {
                bool active = false;
                for (int q : par) active = active || (x(t, q) == 1);
                p = active ? spec.p_active : spec.p_inactive;
            }
            x(t, j) = rng.bernoulli(p) ? 1 : 0;
        }
    }
    return DataSet::discrete(std::move(x), std::vector<int>(N, 2));
}

} // namespace gsampler
