#include <cmath>

#include "doctest.h"
#include "gsampler/data_sim.hpp"
#include "gsampler/graph.hpp"
#include "oracles.hpp"

using namespace gsampler;

TEST_CASE("tree network shape") {
    CHECK(gen_tree_network(1).n_edges() == 0);

    const Graph t3 = gen_tree_network(3);
    CHECK(t3.edge(0, 1));
    CHECK(t3.edge(0, 2));
    CHECK(t3.n_edges() == 2);

    // Node j > 0 hangs under floor((j-1)/2); a larger tree contains the smaller.
    const Graph t5 = gen_tree_network(5);
    CHECK(t5.edge(0, 1));
    CHECK(t5.edge(0, 2));
    CHECK(t5.edge(1, 3));
    CHECK(t5.edge(1, 4));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(t5.edge(i, j) == t3.edge(i, j));

    const Graph t17 = gen_tree_network(17);
    CHECK(is_dag(t17));
    CHECK(t17.n_edges() == 16);
    for (int j = 1; j < 17; ++j) CHECK(t17.parents(j) == std::vector<int>{(j - 1) / 2});
}

TEST_CASE("continuous simulation follows the structural equations") {
    const Graph g = gen_tree_network(3);

    SimSpec noiseless;
    noiseless.n_obs = 50;
    noiseless.beta = 2.0;
    noiseless.intercept = 0.5;
    noiseless.lambda = 1e12;
    noiseless.seed = 7;
    const DataSet d = sim_continuous(g, noiseless);
    CHECK(d.n_obs() == 50);
    CHECK(d.n_nodes() == 3);
    for (int t = 0; t < 50; ++t) {
        const double want = 0.5 + 2.0 * d.values(t, 0);
        CHECK(std::abs(d.values(t, 1) - want) / std::max(1.0, std::abs(want)) < 1e-5);
        CHECK(std::abs(d.values(t, 2) - want) / std::max(1.0, std::abs(want)) < 1e-5);
    }

    SimSpec noisy;
    noisy.n_obs = 100000;
    noisy.intercept = -0.3;
    noisy.lambda = 4.0; // sd = 0.5
    noisy.seed = 11;
    const DataSet big = sim_continuous(gen_tree_network(1), noisy);
    const double mean = big.values.col(0).mean();
    CHECK(std::abs(mean - (-0.3)) < 4.0 / std::sqrt(4.0 * 100000));

    SimSpec slope;
    slope.n_obs = 10000;
    slope.beta = 1.5;
    slope.intercept = 0.2;
    slope.lambda = 1.0;
    slope.seed = 23;
    const DataSet pair = sim_continuous(gen_tree_network(2), slope);
    const auto fit = oracles::ols(pair.values.col(0), pair.values.col(1));
    CHECK(std::abs(fit.slope - 1.5) < 3.0 * fit.slope_se);
}

TEST_CASE("discrete simulation matches the gate probabilities") {
    SimSpec spec;
    spec.n_obs = 100000;
    spec.seed = 5;
    const DataSet d = sim_discrete(gen_tree_network(3), spec);
    CHECK(d.kind == DataKind::Discrete);
    CHECK(d.arities == std::vector<int>{2, 2, 2});

    long long root_on = 0, child_on_given_on = 0, on_total = 0, child_on_given_off = 0,
              off_total = 0;
    for (int t = 0; t < d.n_obs(); ++t) {
        const int r = d.codes(t, 0);
        root_on += r;
        if (r == 1) {
            ++on_total;
            child_on_given_on += d.codes(t, 1);
        } else {
            ++off_total;
            child_on_given_off += d.codes(t, 1);
        }
    }
    const double n = static_cast<double>(d.n_obs());
    CHECK(std::abs(root_on / n - 0.5) < 0.006);
    CHECK(std::abs(child_on_given_on / static_cast<double>(on_total) - 0.8) < 0.01);
    CHECK(std::abs(child_on_given_off / static_cast<double>(off_total) - 0.2) < 0.01);
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    const Graph g = gen_tree_network(5);
    SimSpec spec;
    spec.n_obs = 200;
    spec.seed = 99;
    const DataSet a = sim_continuous(g, spec);
    const DataSet b = sim_continuous(g, spec);
    CHECK(a.values == b.values);
    const DataSet da = sim_discrete(g, spec);
    const DataSet db = sim_discrete(g, spec);
    CHECK(da.codes == db.codes);

    spec.seed = 100;
    CHECK(sim_continuous(g, spec).values != a.values);
}

TEST_CASE("simulation spec validation") {
    SimSpec s;
    s.n_obs = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = SimSpec{};
    s.lambda = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = SimSpec{};
    s.p_active = 1.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = SimSpec{};
    s.p_root = -0.1;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}
