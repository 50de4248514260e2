#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <sstream>

#include "gsampler/app.hpp"
#include "gsampler/data_sim.hpp"
#include "gsampler/diagnostics.hpp"
#include "gsampler/errors.hpp"
#include "gsampler/graph.hpp"
#include "gsampler/io.hpp"
#include "gsampler/likelihood.hpp"
#include "gsampler/mh.hpp"
#include "gsampler/priors.hpp"
#include "gsampler/script.hpp"

namespace py = pybind11;
using namespace gsampler;

namespace {

Graph graph_from(const Eigen::MatrixXi& a) {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n) throw ShapeError("adjacency matrix must be square");
    std::vector<std::uint8_t> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int v = a(i, j);
            if (v != 0 && v != 1) throw ShapeError("adjacency entries must be 0 or 1");
            flat[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(v);
        }
    return Graph::from_adjacency(n, flat);
}

Eigen::MatrixXi graph_to(const Graph& g) {
    const int n = g.n_nodes();
    Eigen::MatrixXi a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = g.edge(i, j) ? 1 : 0;
    return a;
}

Family family_from(const std::string& name) {
    if (name == "normal_gamma") return Family::NormalGamma;
    if (name == "zellner") return Family::ZellnerG;
    if (name == "dirichlet") return Family::DirichletMultinomial;
    throw ValidationError("likelihood must be normal_gamma, zellner, or dirichlet");
}

DataSet dataset_from(const Eigen::MatrixXd& values, bool discrete, int min_arity) {
    if (!discrete) return DataSet::continuous(values);
    Eigen::MatrixXi codes(values.rows(), values.cols());
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = values(r, c);
            if (v < 0.0 || v != std::floor(v))
                throw NonIntegerDiscrete("discrete data must be non-negative integers");
            codes(r, c) = static_cast<int>(v);
        }
    std::vector<int> arities(static_cast<std::size_t>(codes.cols()));
    for (Eigen::Index j = 0; j < codes.cols(); ++j)
        arities[static_cast<std::size_t>(j)] =
            std::max(codes.col(j).maxCoeff() + 1, min_arity);
    return DataSet::discrete(std::move(codes), std::move(arities));
}

PriorSpec priors_from(int n_nodes, const py::object& bernoulli_p,
                      const py::object& concordance, double rho,
                      const py::object& degree_gamma) {
    PriorSpec priors = PriorSpec::flat(n_nodes, 0.5);
    if (!bernoulli_p.is_none()) {
        try {
            priors = PriorSpec::flat(n_nodes, bernoulli_p.cast<double>());
        } catch (const py::cast_error&) {
            priors.bernoulli_p = bernoulli_p.cast<Eigen::MatrixXd>();
        }
    }
    if (!concordance.is_none()) priors.concordance = concordance.cast<Eigen::MatrixXd>();
    priors.rho = rho;
    if (!degree_gamma.is_none()) priors.degree_gamma = degree_gamma.cast<double>();
    priors.validate();
    return priors;
}

ModelSpec model_from(const std::string& likelihood, double alpha, double omega, double beta0,
                     double n0_scale, double g, double pseudo_count) {
    ModelSpec model;
    model.family = family_from(likelihood);
    model.normal_gamma = NormalGammaParams{alpha, omega, beta0, n0_scale};
    model.zellner_g = g;
    model.dirichlet_pseudo_count = pseudo_count;
    model.validate();
    return model;
}

py::dict result_to_dict(const RunResult& result) {
    py::dict out;
    out["edge_probability"] = result.edge_probability;
    out["best_graph"] = graph_to(result.best_graph);
    out["best_log_posterior"] = result.best_log_posterior;
    if (result.rhat)
        out["rhat"] = *result.rhat;
    else
        out["rhat"] = py::none();
    std::uint64_t accepted = 0, proposals = 0;
    double wall = 0.0;
    std::int64_t iters = 0;
    for (const auto& c : result.chains) {
        accepted += c.n_accepted;
        proposals += c.n_accepted + c.n_rejected + c.n_noop + c.n_cycle_rejected;
        wall = std::max(wall, c.wall_seconds);
        iters += c.n_iterations;
    }
    out["n_chains"] = result.chains.size();
    out["acceptance_rate"] =
        proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
    out["proposals_per_second"] = wall > 0.0 ? static_cast<double>(iters) / wall : 0.0;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "MCMC structure sampling for Bayesian networks";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "GraphSamplerError", PyExc_RuntimeError);

    m.def("count_dags", [](int n) {
        std::ostringstream os;
        os << count_dags(n);
        return py::module_::import("builtins").attr("int")(os.str());
    }, py::arg("n"), "Number of labeled DAGs on n nodes (exact).");

    m.def("is_dag", [](const Eigen::MatrixXi& a) { return is_dag(graph_from(a)); }, py::arg("adjacency"));

    m.def("enumerate_dags", [](int n) {
        std::vector<Eigen::MatrixXi> out;
        for (const Graph& g : enumerate_dags(n)) out.push_back(graph_to(g));
        return out;
    }, py::arg("n"), "All labeled DAGs on n nodes (n <= 5).");

    m.def("tree_network", [](int n) { return graph_to(gen_tree_network(n)); }, py::arg("n_nodes"));

    m.def("sim_continuous", [](const Eigen::MatrixXi& adj, int n_obs, double beta, double intercept,
                               double lam, std::uint64_t seed) {
        SimSpec spec;
        spec.n_obs = n_obs;
        spec.beta = beta;
        spec.intercept = intercept;
        spec.lambda = lam;
        spec.seed = seed;
        return sim_continuous(graph_from(adj), spec).values;
    }, py::arg("adjacency"), py::arg("n_obs") = 100, py::arg("beta") = 1.0,
       py::arg("intercept") = 0.0, py::arg("lam") = 1.0, py::arg("seed") = 0);

    m.def("sim_discrete", [](const Eigen::MatrixXi& adj, int n_obs, double p_root, double p_active,
                             double p_inactive, std::uint64_t seed) {
        SimSpec spec;
        spec.n_obs = n_obs;
        spec.p_root = p_root;
        spec.p_active = p_active;
        spec.p_inactive = p_inactive;
        spec.seed = seed;
        return sim_discrete(graph_from(adj), spec).codes;
    }, py::arg("adjacency"), py::arg("n_obs") = 100, py::arg("p_root") = 0.5,
       py::arg("p_active") = 0.8, py::arg("p_inactive") = 0.2, py::arg("seed") = 0);

    m.def("log_total_prior", [](const Eigen::MatrixXi& adj, const py::object& bernoulli_p,
                                const py::object& concordance, double rho,
                                const py::object& degree_gamma) {
        const Graph g = graph_from(adj);
        return log_total_prior(g, priors_from(g.n_nodes(), bernoulli_p, concordance, rho, degree_gamma));
    }, py::arg("adjacency"), py::arg("bernoulli_p") = py::none(),
       py::arg("concordance") = py::none(), py::arg("rho") = 1.0,
       py::arg("degree_gamma") = py::none());

    m.def("count_motifs", [](const Eigen::MatrixXi& adj) {
        const MotifCounts c = count_motifs(graph_from(adj));
        return py::make_tuple(c.cycles, c.ffl);
    }, py::arg("adjacency"), "Returns (directed 3-cycles, feed-forward loops).");

    m.def("graph_log_score", [](const Eigen::MatrixXi& adj, const Eigen::MatrixXd& data,
                                const std::string& likelihood, double alpha, double omega,
                                double beta0, double n0_scale, double g, double pseudo_count,
                                int data_arity) {
        const ModelSpec model = model_from(likelihood, alpha, omega, beta0, n0_scale, g, pseudo_count);
        const DataSet ds =
            dataset_from(data, model.family == Family::DirichletMultinomial, data_arity);
        return graph_log_score(graph_from(adj), ds, model);
    }, py::arg("adjacency"), py::arg("data"), py::arg("likelihood") = "normal_gamma",
       py::arg("alpha") = 1.0, py::arg("omega") = 1.0, py::arg("beta0") = 0.0,
       py::arg("n0_scale") = 1.0, py::arg("g") = 1.0, py::arg("pseudo_count") = 1.0,
       py::arg("data_arity") = 2);

    m.def("node_score_zellner", &node_score_zellner, py::arg("x"), py::arg("parents_data"),
          py::arg("g") = 1.0);

    m.def("node_score_normal_gamma", [](const Eigen::VectorXd& x, const Eigen::MatrixXd& parents,
                                        double alpha, double omega, double beta0, double n0_scale) {
        return node_score_normal_gamma(x, parents, NormalGammaParams{alpha, omega, beta0, n0_scale});
    }, py::arg("x"), py::arg("parents_data"), py::arg("alpha") = 1.0, py::arg("omega") = 1.0,
       py::arg("beta0") = 0.0, py::arg("n0_scale") = 1.0);

    m.def("node_score_dirichlet", [](const Eigen::VectorXi& x, const Eigen::MatrixXi& parents,
                                     int arity, const std::vector<int>& parent_arities,
                                     double pseudo_count) {
        return node_score_dirichlet(x, parents, arity, parent_arities, pseudo_count);
    }, py::arg("x"), py::arg("parents_data"), py::arg("arity"), py::arg("parent_arities"),
       py::arg("pseudo_count") = 1.0);

    m.def("accuracy_curve", [](const Eigen::MatrixXd& probs, const Eigen::MatrixXi& truth,
                               const std::vector<double>& thresholds) {
        return accuracy_curve(probs, graph_from(truth), thresholds);
    }, py::arg("edge_probability"), py::arg("truth"), py::arg("thresholds"));

    m.def("flip_gap_probe", [](const Eigen::MatrixXd& data, const Eigen::MatrixXi& base, int i,
                               int j, const std::string& likelihood, double alpha, double omega,
                               double beta0, double n0_scale, double g, double pseudo_count,
                               const py::object& bernoulli_p, const py::object& concordance,
                               double rho, const py::object& degree_gamma, int data_arity) {
        const Graph base_g = graph_from(base);
        const ModelSpec model = model_from(likelihood, alpha, omega, beta0, n0_scale, g, pseudo_count);
        const DataSet ds =
            dataset_from(data, model.family == Family::DirichletMultinomial, data_arity);
        const PriorSpec priors =
            priors_from(base_g.n_nodes(), bernoulli_p, concordance, rho, degree_gamma);
        const FlipGapResult r = flip_gap_probe(ds, model, priors, base_g, i, j);
        return py::make_tuple(r.with_ij, r.with_ji, r.neither);
    }, py::arg("data"), py::arg("base"), py::arg("i"), py::arg("j"),
       py::arg("likelihood") = "normal_gamma", py::arg("alpha") = 1.0, py::arg("omega") = 1.0,
       py::arg("beta0") = 0.0, py::arg("n0_scale") = 1.0, py::arg("g") = 1.0,
       py::arg("pseudo_count") = 1.0, py::arg("bernoulli_p") = py::none(),
       py::arg("concordance") = py::none(), py::arg("rho") = 1.0,
       py::arg("degree_gamma") = py::none(), py::arg("data_arity") = 2);

    m.def("run_mcmc", [](const py::object& data, int n_nodes, const std::string& likelihood,
                         bool prior_only, std::int64_t n_iterations, std::int64_t burn_in,
                         int n_chains, std::uint64_t seed, const py::object& bernoulli_p,
                         const py::object& concordance, double rho, const py::object& degree_gamma,
                         std::int64_t batch_length, bool random_scan, const py::object& rhat,
                         double alpha, double omega, double beta0, double n0_scale, double g,
                         double pseudo_count, int data_arity) {
        const PriorSpec priors = priors_from(n_nodes, bernoulli_p, concordance, rho, degree_gamma);
        const ModelSpec model = model_from(likelihood, alpha, omega, beta0, n0_scale, g, pseudo_count);
        std::optional<DataSet> ds;
        if (!prior_only) {
            if (data.is_none()) throw ValidationError("data is required unless prior_only=True");
            ds = dataset_from(data.cast<Eigen::MatrixXd>(),
                              model.family == Family::DirichletMultinomial, data_arity);
        }
        RunConfig rc;
        rc.n_iterations = n_iterations;
        rc.burn_in = burn_in;
        rc.n_chains = n_chains;
        rc.seed = seed;
        rc.prior_only = prior_only;
        rc.batch_length = batch_length;
        rc.random_scan = random_scan;
        rc.compute_rhat = rhat.is_none() ? n_chains >= 2 : rhat.cast<bool>();
        RunResult result;
        {
            py::gil_scoped_release release;
            result = run_chains(rc, priors, ds ? &*ds : nullptr, prior_only ? nullptr : &model);
        }
        return result_to_dict(result);
    }, py::arg("data") = py::none(), py::arg("n_nodes") = 0,
       py::arg("likelihood") = "normal_gamma", py::arg("prior_only") = false,
       py::arg("n_iterations") = 1000000, py::arg("burn_in") = -1, py::arg("n_chains") = 3,
       py::arg("seed") = 42, py::arg("bernoulli_p") = py::none(),
       py::arg("concordance") = py::none(), py::arg("rho") = 1.0,
       py::arg("degree_gamma") = py::none(), py::arg("batch_length") = 10000,
       py::arg("random_scan") = false, py::arg("rhat") = py::none(), py::arg("alpha") = 1.0,
       py::arg("omega") = 1.0, py::arg("beta0") = 0.0, py::arg("n0_scale") = 1.0,
       py::arg("g") = 1.0, py::arg("pseudo_count") = 1.0, py::arg("data_arity") = 2);

    m.def("run_script", [](const std::string& text, const std::string& prefix) {
        const ScriptConfig cfg = parse_script(text);
        RunResult result;
        {
            py::gil_scoped_release release;
            result = run_script(cfg, prefix);
        }
        return result_to_dict(result);
    }, py::arg("text"), py::arg("prefix") = "",
       "Parse a key = value; script, run it, and write the output file set.");
}
