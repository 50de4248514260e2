#include <cmath>

#include "doctest.h"
#include "gsampler/graph.hpp"
#include "gsampler/priors.hpp"
#include "gsampler/rng.hpp"

using namespace gsampler;

namespace {

Graph make(int n, std::initializer_list<std::pair<int, int>> edges) {
    Graph g(n);
    for (auto [i, j] : edges) g.set_edge(i, j, true);
    return g;
}

// Random digraph (not necessarily acyclic) for pure prior evaluations.
Graph random_digraph(int n, double density, Rng& rng) {
    Graph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.uniform01() < density) g.set_edge(i, j, true);
    return g;
}

PriorSpec everything_spec(int n) {
    PriorSpec spec = PriorSpec::flat(n, 0.3);
    Eigen::MatrixXd e = Eigen::MatrixXd::Constant(n, n, -1.0);
    e.diagonal().setZero();
    e(0, 1) = 1.0;
    if (n > 2) e(1, 2) = 1.0;
    spec.concordance = e;
    spec.rho = 0.7;
    spec.degree_gamma = 1.3;
    spec.motif_log_weight = [](const MotifCounts& m) {
        return -0.31 * static_cast<double>(m.ffl) - 0.77 * static_cast<double>(m.cycles);
    };
    return spec;
}

} // namespace

TEST_CASE("bernoulli prior hand values") {
    const PriorSpec flat3 = PriorSpec::flat(3, 0.5);
    CHECK(log_bernoulli_prior(Graph(3), flat3) == doctest::Approx(-6.0 * std::log(2.0)).epsilon(1e-12));

    PriorSpec spec = PriorSpec::flat(2, 0.5);
    spec.bernoulli_p(0, 1) = 0.9;
    spec.bernoulli_p(1, 0) = 0.1;
    CHECK(log_bernoulli_prior(make(2, {{0, 1}}), spec) ==
          doctest::Approx(std::log(0.81)).epsilon(1e-12));
}

TEST_CASE("deterministic bernoulli entries") {
    // p = 1 exactly where the edge sits, p = 0 elsewhere: probability-1 graph.
    const Graph g = make(3, {{0, 1}, {1, 2}});
    PriorSpec spec = PriorSpec::flat(3, 0.0);
    spec.bernoulli_p(0, 1) = 1.0;
    spec.bernoulli_p(1, 2) = 1.0;
    CHECK(log_bernoulli_prior(g, spec) == 0.0);

    CHECK_THROWS_AS((void)log_bernoulli_prior(Graph(3), spec), InconsistentGraph);
    CHECK_THROWS_AS((void)log_bernoulli_prior(make(3, {{0, 1}, {1, 2}, {0, 2}}), spec),
                    InconsistentGraph);
}

TEST_CASE("flat bernoulli gives every DAG the same mass") {
    const PriorSpec flat = PriorSpec::flat(3, 0.5);
    const double ref = log_bernoulli_prior(Graph(3), flat);
    for (const auto& g : enumerate_dags(3))
        CHECK(log_bernoulli_prior(g, flat) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("concordance prior hand values") {
    PriorSpec spec = PriorSpec::flat(2, 0.5);
    Eigen::MatrixXd e(2, 2);
    e << 0, 1, -1, 0;
    spec.concordance = e;
    spec.rho = 1.0;
    CHECK(log_concordance_prior(make(2, {{0, 1}}), spec) == doctest::Approx(-1.0));
    CHECK(log_concordance_prior(make(2, {{1, 0}}), spec) == doctest::Approx(-3.0));

    PriorSpec doubled = spec;
    doubled.rho = 2.0;
    for (const auto& g : enumerate_dags(2))
        CHECK(log_concordance_prior(g, doubled) ==
              doctest::Approx(2.0 * log_concordance_prior(g, spec)).epsilon(1e-14));

    PriorSpec off = PriorSpec::flat(2, 0.5);
    CHECK_THROWS_AS((void)log_concordance_prior(make(2, {{0, 1}}), off), SpecMissing);
}

TEST_CASE("degree prior hand values and zero-degree convention") {
    PriorSpec spec = PriorSpec::flat(3, 0.5);
    spec.degree_gamma = 2.0;
    CHECK(log_degree_prior(make(3, {{0, 1}, {0, 2}}), spec) ==
          doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(log_degree_prior(Graph(3), spec) == 0.0);

    spec.degree_gamma = 3.0;
    CHECK(log_degree_prior(make(3, {{0, 1}, {1, 2}}), spec) == 0.0);
}

TEST_CASE("motif counts") {
    const auto ffl = count_motifs(make(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(ffl.cycles == 0);
    CHECK(ffl.ffl == 1);

    const auto cyc = count_motifs(make(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(cyc.cycles == 1);
    CHECK(cyc.ffl == 0);

    const auto none = count_motifs(Graph(3));
    CHECK(none.cycles == 0);
    CHECK(none.ffl == 0);
}

TEST_CASE("motif prior plug-in and default") {
    const PriorSpec flat = PriorSpec::flat(3, 0.5);
    CHECK(log_motif_prior(make(3, {{0, 1}, {1, 2}, {0, 2}}), flat) == 0.0);

    PriorSpec spec = PriorSpec::flat(3, 0.5);
    spec.motif_log_weight = [](const MotifCounts& m) { return -static_cast<double>(m.cycles); };
    CHECK(log_motif_prior(make(3, {{0, 1}, {1, 2}, {2, 0}}), spec) == doctest::Approx(-1.0));
    for (const auto& g : enumerate_dags(3)) CHECK(log_motif_prior(g, spec) == 0.0);
}

TEST_CASE("motif delta equals recount difference") {
    Rng rng(29);
    PriorSpec spec = everything_spec(6);
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = random_digraph(6, 0.35, rng);
        const int i = static_cast<int>(rng.below(6));
        int j = static_cast<int>(rng.below(6));
        if (i == j) j = (j + 1) % 6;
        const EdgeChange c{i, j,
                           g.edge(i, j) ? EdgeChange::Kind::Delete : EdgeChange::Kind::Add};
        const MotifCounts before = count_motifs(g);
        const MotifCounts d = motif_delta(g, c);
        Graph h = g;
        h.set_edge(i, j, c.kind == EdgeChange::Kind::Add);
        const MotifCounts after = count_motifs(h);
        CHECK(before.cycles + d.cycles == after.cycles);
        CHECK(before.ffl + d.ffl == after.ffl);
    }
}

TEST_CASE("total prior is the sum of its parts") {
    PriorSpec spec = everything_spec(3);
    // spec example: flat P_B on 2 nodes plus the concordance example.
    PriorSpec two = PriorSpec::flat(2, 0.5);
    Eigen::MatrixXd e(2, 2);
    e << 0, 1, -1, 0;
    two.concordance = e;
    CHECK(log_total_prior(make(2, {{0, 1}}), two) ==
          doctest::Approx(-2.0 * std::log(2.0) - 1.0).epsilon(1e-12));

    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const Graph g = random_digraph(3, 0.4, rng);
        const double total = log_total_prior(g, spec);
        const double parts = log_bernoulli_prior(g, spec) + log_concordance_prior(g, spec) +
                             log_degree_prior(g, spec) + log_motif_prior(g, spec);
        CHECK(total == doctest::Approx(parts).epsilon(1e-14));
    }
}

TEST_CASE("delta log prior hand values") {
    const PriorSpec flat = PriorSpec::flat(3, 0.5);
    CHECK(delta_log_prior(Graph(3), {0, 1, EdgeChange::Kind::Add}, flat) ==
          doctest::Approx(0.0));

    PriorSpec deg = PriorSpec::flat(3, 0.5);
    deg.degree_gamma = 2.0;
    CHECK(delta_log_prior(make(3, {{0, 1}}), {0, 2, EdgeChange::Kind::Add}, deg) ==
          doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("delta log prior equals full recompute") {
    Rng rng(17);
    const PriorSpec spec = everything_spec(6);
    int checked = 0;
    while (checked < 150) {
        Graph g = random_digraph(6, 0.3, rng);
        if (!is_dag(g)) continue;
        const int i = static_cast<int>(rng.below(6));
        int j = static_cast<int>(rng.below(6));
        if (i == j) j = (j + 1) % 6;
        const EdgeChange c{i, j,
                           g.edge(i, j) ? EdgeChange::Kind::Delete : EdgeChange::Kind::Add};
        const auto changed = apply_change(g, c);
        if (!changed) continue;
        const double delta = delta_log_prior(g, c, spec);
        const double brute = log_total_prior(*changed, spec) - log_total_prior(g, spec);
        CHECK(std::abs(delta - brute) <= 1e-12);

        // Per-component split agrees with the component evaluations.
        const PriorDelta parts = delta_log_prior_parts(g, c, spec);
        CHECK(parts.bernoulli ==
              doctest::Approx(log_bernoulli_prior(*changed, spec) - log_bernoulli_prior(g, spec))
                  .epsilon(1e-12));
        CHECK(parts.concordance ==
              doctest::Approx(log_concordance_prior(*changed, spec) -
                              log_concordance_prior(g, spec))
                  .epsilon(1e-12));
        CHECK(parts.degree ==
              doctest::Approx(log_degree_prior(*changed, spec) - log_degree_prior(g, spec))
                  .epsilon(1e-12));
        CHECK(parts.motif ==
              doctest::Approx(log_motif_prior(*changed, spec) - log_motif_prior(g, spec))
                  .epsilon(1e-12));
        CHECK(parts.total() == doctest::Approx(delta).epsilon(1e-14));
        ++checked;
    }
}

TEST_CASE("delta rejects deterministic-edge changes and cyclic adds") {
    PriorSpec spec = PriorSpec::flat(3, 0.5);
    spec.bernoulli_p(0, 1) = 1.0;
    Graph g = make(3, {{0, 1}});
    CHECK_THROWS_AS((void)delta_log_prior(g, {0, 1, EdgeChange::Kind::Delete}, spec),
                    InconsistentGraph);

    const PriorSpec flat = PriorSpec::flat(2, 0.5);
    CHECK_THROWS_AS(
        (void)delta_log_prior(make(2, {{0, 1}}), {1, 0, EdgeChange::Kind::Add}, flat),
        CycleRejectionError);
}

TEST_CASE("prior spec validation") {
    PriorSpec bad_p = PriorSpec::flat(3, 0.5);
    bad_p.bernoulli_p(0, 1) = 1.5;
    CHECK_THROWS_AS(bad_p.validate(), ValidationError);

    PriorSpec bad_diag = PriorSpec::flat(3, 0.5);
    bad_diag.bernoulli_p(1, 1) = 0.5;
    CHECK_THROWS_AS(bad_diag.validate(), ValidationError);

    PriorSpec bad_e = PriorSpec::flat(3, 0.5);
    Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 3, -1.0);
    e.diagonal().setZero();
    e(0, 1) = 0.5;
    bad_e.concordance = e;
    CHECK_THROWS_AS(bad_e.validate(), ValidationError);

    PriorSpec bad_rho = PriorSpec::flat(3, 0.5);
    Eigen::MatrixXd ok = Eigen::MatrixXd::Constant(3, 3, 1.0);
    ok.diagonal().setZero();
    bad_rho.concordance = ok;
    bad_rho.rho = 0.0;
    CHECK_THROWS_AS(bad_rho.validate(), ValidationError);

    PriorSpec bad_gamma = PriorSpec::flat(3, 0.5);
    bad_gamma.degree_gamma = -1.0;
    CHECK_THROWS_AS(bad_gamma.validate(), ValidationError);
}
