#include "gsampler/priors.hpp"

#include <cmath>

namespace gsampler {

PriorSpec PriorSpec::flat(int n_nodes, double p) {
    PriorSpec spec;
    spec.bernoulli_p = Eigen::MatrixXd::Constant(n_nodes, n_nodes, p);
    spec.bernoulli_p.diagonal().setZero();
    return spec;
}

void PriorSpec::validate() const {
    const int n = n_nodes();
    if (bernoulli_p.cols() != n) throw ValidationError("bernoulli_p must be square");
    for (int i = 0; i < n; ++i) {
        if (bernoulli_p(i, i) != 0.0)
            throw ValidationError("bernoulli_p diagonal must be 0 (node " + std::to_string(i + 1) + ")");
        for (int j = 0; j < n; ++j) {
            double p = bernoulli_p(i, j);
            if (!(p >= 0.0 && p <= 1.0))
                throw ValidationError("bernoulli_p out of [0,1] at (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ")");
        }
    }
    if (concordance) {
        if (concordance->rows() != n || concordance->cols() != n)
            throw DimensionMismatch("concordance matrix must be " + std::to_string(n) + "x" +
                                    std::to_string(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double e = (*concordance)(i, j);
                if (i == j) {
                    if (e != 0.0)
                        throw ValidationError("concordance diagonal must be 0");
                } else if (e != 1.0 && e != -1.0) {
                    throw ValidationError("concordance entries must be -1 or +1 (row " +
                                          std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                          ")");
                }
            }
        if (!(rho > 0)) throw ValidationError("rho must be > 0");
    }
    if (degree_gamma && !(*degree_gamma > 0)) throw ValidationError("degree_gamma must be > 0");
}

double log_bernoulli_prior(const Graph& g, const PriorSpec& spec) {
    const int n = g.n_nodes();
    double lp = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = spec.bernoulli_p(i, j);
            const bool e = g.edge(i, j);
            if (p == 0.0 || p == 1.0) {
                // deterministic entry: probability-1 factor, 0*log0 = 0
                if (e != (p == 1.0))
                    throw InconsistentGraph("edge " + std::to_string(i + 1) + "->" +
                                            std::to_string(j + 1) + " violates deterministic prior p=" +
                                            std::to_string(p));
                continue;
            }
            lp += e ? std::log(p) : std::log1p(-p);
        }
    return lp;
}

double log_concordance_prior(const Graph& g, const PriorSpec& spec) {
    if (!spec.concordance) throw SpecMissing("concordance prior evaluated but not configured");
    const int n = g.n_nodes();
    const Eigen::MatrixXd& E = *spec.concordance;
    double disagreement = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double a = g.edge(i, j) ? 1.0 : 0.0;
            disagreement += std::abs(a - E(i, j));
        }
    return -spec.rho * disagreement;
}

double log_degree_prior(const Graph& g, const PriorSpec& spec) {
    if (!spec.degree_gamma) throw SpecMissing("degree prior evaluated but not configured");
    double sum = 0;
    for (int i = 0; i < g.n_nodes(); ++i) {
        const int d = g.out_degree(i);
        if (d > 0) sum += std::log(static_cast<double>(d));
    }
    return -*spec.degree_gamma * sum;
}

double log_motif_prior(const Graph& g, const PriorSpec& spec) {
    if (!spec.motif_log_weight) return 0.0;
    return spec.motif_log_weight(count_motifs(g));
}

double log_total_prior(const Graph& g, const PriorSpec& spec) {
    double lp = log_bernoulli_prior(g, spec);
    if (spec.concordance) lp += log_concordance_prior(g, spec);
    if (spec.degree_gamma) lp += log_degree_prior(g, spec);
    if (spec.motif_log_weight) lp += log_motif_prior(g, spec);
    return lp;
}

MotifCounts count_motifs(const Graph& g) {
    const int n = g.n_nodes();
    MotifCounts m;
    // cycles = trace(A^3)/3, ffl = sum(A .* A^2); A has zero diagonal so
    // the middle node is automatically distinct from the endpoints.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            std::int64_t paths2 = 0;
            for (int j = 0; j < n; ++j)
                if (g.edge(i, j) && g.edge(j, k)) ++paths2;
            if (paths2 == 0) continue;
            if (g.edge(i, k)) m.ffl += paths2;
            if (g.edge(k, i)) m.cycles += paths2;
        }
    m.cycles /= 3;
    return m;
}

MotifCounts motif_delta(const Graph& g, const EdgeChange& c) {
    // Triples affected by toggling (i,j); evaluated on the graph WITHOUT
    // the edge, so a Delete is the negated Add delta.
    const int n = g.n_nodes();
    const int i = c.i, j = c.j;
    MotifCounts d;
    for (int w = 0; w < n; ++w) {
        if (w == i || w == j) continue;
        if (g.edge(j, w) && g.edge(w, i)) ++d.cycles; // i->j->w->i
        if (g.edge(i, w) && g.edge(w, j)) ++d.ffl;    // i->j long edge of (i,w,j)
        if (g.edge(j, w) && g.edge(i, w)) ++d.ffl;    // i->j first leg of (i,j,w)
        if (g.edge(w, i) && g.edge(w, j)) ++d.ffl;    // i->j second leg of (w,i,j)
    }
    if (c.kind == EdgeChange::Kind::Delete) {
        d.cycles = -d.cycles;
        d.ffl = -d.ffl;
    }
    return d;
}

PriorDelta delta_log_prior_parts(const Graph& g, const EdgeChange& c, const PriorSpec& spec,
                                 const MotifCounts* motifs_before, bool check_cycles) {
    PriorDelta delta;
    const bool present = g.edge(c.i, c.j);
    const bool adding = c.kind == EdgeChange::Kind::Add;
    if (adding == present) return delta; // no-op change

    if (adding && check_cycles) {
        Graph trial = g;
        trial.set_edge(c.i, c.j, true);
        if (!is_dag(trial)) throw CycleRejectionError("adding the edge would close a cycle");
    }

    const double sign = adding ? 1.0 : -1.0;

    const double p = spec.bernoulli_p(c.i, c.j);
    if (p == 0.0 || p == 1.0)
        throw InconsistentGraph("deterministic edge " + std::to_string(c.i + 1) + "->" +
                                std::to_string(c.j + 1) + " must not change");
    delta.bernoulli = sign * (std::log(p) - std::log1p(-p));

    if (spec.concordance) {
        const double E = (*spec.concordance)(c.i, c.j);
        // |1-E| - |0-E| = -E for E in {-1,+1}
        delta.concordance = spec.rho * sign * E;
    }

    if (spec.degree_gamma) {
        const int d_old = g.out_degree(c.i);
        const int d_new = d_old + (adding ? 1 : -1);
        auto f = [](int d) { return d > 0 ? std::log(static_cast<double>(d)) : 0.0; };
        delta.degree = -*spec.degree_gamma * (f(d_new) - f(d_old));
    }

    if (spec.motif_log_weight) {
        MotifCounts before = motifs_before ? *motifs_before : count_motifs(g);
        MotifCounts d = motif_delta(g, c);
        MotifCounts after{before.cycles + d.cycles, before.ffl + d.ffl};
        delta.motif = spec.motif_log_weight(after) - spec.motif_log_weight(before);
    }
    return delta;
}

double delta_log_prior(const Graph& g, const EdgeChange& c, const PriorSpec& spec) {
    return delta_log_prior_parts(g, c, spec).total();
}

} // namespace gsampler
