#include "gsampler/app.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gsampler/data_sim.hpp"
#include "gsampler/diagnostics.hpp"
#include "gsampler/errors.hpp"
#include "gsampler/io.hpp"

namespace gsampler {

namespace {

PriorSpec build_priors(const ScriptConfig& cfg) {
    PriorSpec priors = PriorSpec::flat(cfg.n_nodes, cfg.bernoulli_p);
    if (!cfg.bernoulli_file.empty()) {
        priors.bernoulli_p = load_matrix(cfg.bernoulli_file);
        if (priors.bernoulli_p.rows() != cfg.n_nodes || priors.bernoulli_p.cols() != cfg.n_nodes)
            throw ShapeError(cfg.bernoulli_file + " does not match n_nodes = " +
                             std::to_string(cfg.n_nodes));
    }
    if (!cfg.concordance_file.empty()) {
        Eigen::MatrixXd e = load_matrix(cfg.concordance_file);
        if (e.rows() != cfg.n_nodes || e.cols() != cfg.n_nodes)
            throw ShapeError(cfg.concordance_file + " does not match n_nodes = " +
                             std::to_string(cfg.n_nodes));
        priors.concordance = std::move(e);
    }
    priors.rho = cfg.rho;
    priors.degree_gamma = cfg.degree_gamma;
    priors.validate();
    return priors;
}

ModelSpec build_model(const ScriptConfig& cfg) {
    ModelSpec model;
    model.family = cfg.likelihood;
    model.normal_gamma = NormalGammaParams{cfg.alpha, cfg.omega, cfg.beta0, cfg.n0_scale};
    model.zellner_g = cfg.g;
    model.dirichlet_pseudo_count = cfg.pseudo_count;
    model.validate();
    return model;
}

DataKind effective_kind(const ScriptConfig& cfg) {
    if (cfg.data_kind) return *cfg.data_kind;
    return cfg.likelihood == Family::DirichletMultinomial ? DataKind::Discrete
                                                          : DataKind::Continuous;
}

RunConfig build_run_config(const ScriptConfig& cfg) {
    RunConfig rc;
    rc.n_iterations = cfg.n_iterations;
    rc.burn_in = cfg.burn_in;
    rc.n_chains = cfg.n_chains;
    rc.seed = cfg.seed;
    rc.prior_only = cfg.prior_only;
    rc.sample_stride = cfg.sample_stride;
    rc.batch_length = cfg.batch_length;
    rc.random_scan = cfg.random_scan;
    rc.compute_rhat = cfg.rhat ? *cfg.rhat : cfg.n_chains >= 2;
    if (!cfg.initial_graph_file.empty()) rc.initial_graph = load_graph_file(cfg.initial_graph_file);
    rc.validate();
    return rc;
}

void require_nodes(const ScriptConfig& cfg) {
    if (cfg.n_nodes < 1) throw ValidationError("n_nodes is required");
}

std::optional<Graph> load_truth(const ScriptConfig& cfg) {
    if (cfg.true_graph_file.empty()) return std::nullopt;
    Graph truth = load_graph_file(cfg.true_graph_file);
    if (truth.n_nodes() != cfg.n_nodes)
        throw ShapeError(cfg.true_graph_file + " does not match n_nodes = " +
                         std::to_string(cfg.n_nodes));
    return truth;
}

} // namespace

RunResult run_script(const ScriptConfig& cfg, const std::string& prefix) {
    require_nodes(cfg);
    const PriorSpec priors = build_priors(cfg);
    const ModelSpec model = build_model(cfg);
    const RunConfig rc = build_run_config(cfg);

    std::optional<DataSet> data;
    if (!cfg.prior_only) {
        if (cfg.data_file.empty())
            throw ValidationError("data_file is required unless prior_only = true");
        const DataKind kind = effective_kind(cfg);
        if (cfg.likelihood == Family::DirichletMultinomial && kind != DataKind::Discrete)
            throw ValidationError("likelihood = dirichlet requires discrete data");
        data = load_data(cfg.data_file, kind, cfg.n_nodes, cfg.data_arity);
    }
    const std::optional<Graph> truth = load_truth(cfg);

    RunResult result = run_chains(rc, priors, data ? &*data : nullptr,
                                  cfg.prior_only ? nullptr : &model);
    write_outputs(result, prefix, truth);
    return result;
}

int run_command(const std::string& script_path, const std::string& prefix) {
    const ScriptConfig cfg = parse_script_file(script_path);
    const RunResult result = run_script(cfg, prefix);

    std::uint64_t accepted = 0, proposals = 0;
    for (const auto& c : result.chains) {
        accepted += c.n_accepted;
        proposals += c.n_accepted + c.n_rejected + c.n_noop + c.n_cycle_rejected;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "chains: %d x %lld iterations (burn-in %lld)",
                  static_cast<int>(result.chains.size()),
                  static_cast<long long>(cfg.n_iterations),
                  static_cast<long long>(result.chains.empty() ? 0 : result.chains[0].burn_in));
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "acceptance rate: %.4f",
                  proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0);
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "best log posterior: %.6f", result.best_log_posterior);
    std::cout << buf << '\n';
    if (result.rhat) {
        double mx = 0.0;
        for (Eigen::Index i = 0; i < result.rhat->rows(); ++i)
            for (Eigen::Index j = 0; j < result.rhat->cols(); ++j)
                if (i != j && (*result.rhat)(i, j) > mx) mx = (*result.rhat)(i, j);
        std::snprintf(buf, sizeof buf, "max rhat: %.4f (%s at %.2f)", mx,
                      converged(*result.rhat, cfg.rhat_threshold) ? "converged" : "not converged",
                      cfg.rhat_threshold);
        std::cout << buf << '\n';
    }
    std::cout << "outputs written with prefix \"" << prefix << "\"\n";
    return 0;
}

int simulate_command(const std::string& script_path, const std::string& prefix) {
    const ScriptConfig cfg = parse_script_file(script_path);
    Graph net(1);
    if (cfg.network == "tree") {
        require_nodes(cfg);
        net = gen_tree_network(cfg.n_nodes);
    } else {
        if (cfg.network_file.empty())
            throw ValidationError("network = file requires network_file");
        net = load_graph_file(cfg.network_file);
        if (cfg.n_nodes > 0 && net.n_nodes() != cfg.n_nodes)
            throw ShapeError(cfg.network_file + " does not match n_nodes = " +
                             std::to_string(cfg.n_nodes));
    }
    SimSpec spec;
    spec.n_obs = cfg.n_obs;
    spec.beta = cfg.beta;
    spec.intercept = cfg.intercept;
    spec.lambda = cfg.lambda;
    spec.p_root = cfg.p_root;
    spec.p_active = cfg.p_active;
    spec.p_inactive = cfg.p_inactive;
    spec.seed = cfg.seed;

    const DataKind kind = effective_kind(cfg);
    const DataSet data =
        kind == DataKind::Discrete ? sim_discrete(net, spec) : sim_continuous(net, spec);

    const std::string data_path =
        cfg.data_file.empty() ? prefix + "sim_data.txt" : cfg.data_file;
    const std::string graph_path =
        cfg.true_graph_file.empty() ? prefix + "sim_graph.txt" : cfg.true_graph_file;
    write_data(data_path, data);
    write_graph_file(graph_path, net);
    std::cout << "wrote " << data_path << " (" << data.n_obs() << " x " << data.n_nodes()
              << (kind == DataKind::Discrete ? ", discrete)" : ", continuous)") << '\n';
    std::cout << "wrote " << graph_path << " (" << net.n_edges() << " edges)\n";
    return 0;
}

int probe_command(const std::string& script_path, const std::string& prefix) {
    (void)prefix;
    const ScriptConfig cfg = parse_script_file(script_path);
    require_nodes(cfg);
    if (!cfg.probe_i || !cfg.probe_j)
        throw ValidationError("probe requires probe_i and probe_j");
    const int i = *cfg.probe_i - 1;
    const int j = *cfg.probe_j - 1;
    if (i >= cfg.n_nodes || j >= cfg.n_nodes || i == j)
        throw ValidationError("probe_i and probe_j must be distinct nodes in 1..n_nodes");
    if (cfg.data_file.empty()) throw ValidationError("probe requires data_file");

    const PriorSpec priors = build_priors(cfg);
    const ModelSpec model = build_model(cfg);
    const DataKind kind = effective_kind(cfg);
    const DataSet data = load_data(cfg.data_file, kind, cfg.n_nodes, cfg.data_arity);
    const Graph base = cfg.initial_graph_file.empty() ? Graph(cfg.n_nodes)
                                                      : load_graph_file(cfg.initial_graph_file);

    const FlipGapResult r = flip_gap_probe(data, model, priors, base, i, j);
    char buf[128];
    std::snprintf(buf, sizeof buf, "log posterior with %d->%d: %.6f", i + 1, j + 1, r.with_ij);
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "log posterior with %d->%d: %.6f", j + 1, i + 1, r.with_ji);
    std::cout << buf << '\n';
    std::snprintf(buf, sizeof buf, "log posterior with neither: %.6f", r.neither);
    std::cout << buf << '\n';
    return 0;
}

namespace {

void usage(std::ostream& out) {
    out << "usage: graph_sampler [input-file [output-prefix]]\n"
           "       graph_sampler run|simulate|probe [input-file [output-prefix]]\n"
           "       graph_sampler count-dags N\n"
           "default input file: script.txt\n";
}

} // namespace

int main_cli(int argc, char** argv) {
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        if (!args.empty() && (args[0] == "-h" || args[0] == "--help")) {
            usage(std::cout);
            return 0;
        }
        if (!args.empty() && args[0] == "count-dags") {
            if (args.size() != 2) {
                usage(std::cerr);
                return 2;
            }
            int n;
            try {
                std::size_t used = 0;
                n = std::stoi(args[1], &used);
                if (used != args[1].size()) throw std::invalid_argument(args[1]);
            } catch (const std::exception&) {
                std::cerr << "error: count-dags expects an integer node count\n";
                return 2;
            }
            std::ostringstream os;
            os << count_dags(n);
            std::cout << os.str() << '\n';
            return 0;
        }
        std::string cmd = "run";
        std::size_t at = 0;
        if (!args.empty() && (args[0] == "run" || args[0] == "simulate" || args[0] == "probe")) {
            cmd = args[0];
            at = 1;
        }
        if (args.size() > at + 2) {
            usage(std::cerr);
            return 2;
        }
        const std::string script = args.size() > at ? args[at] : "script.txt";
        const std::string prefix = args.size() > at + 1 ? args[at + 1] : "";
        if (cmd == "simulate") return simulate_command(script, prefix);
        if (cmd == "probe") return probe_command(script, prefix);
        return run_command(script, prefix);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace gsampler
