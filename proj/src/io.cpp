#include "gsampler/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "gsampler/diagnostics.hpp"
#include "gsampler/errors.hpp"
#include "gsampler/priors.hpp"

namespace gsampler {

namespace {

std::vector<std::vector<double>> load_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw IoError("invalid number \"" + tok + "\" at " + path + " line " +
                              std::to_string(lineno));
            }
            if (used != tok.size())
                throw IoError("invalid number \"" + tok + "\" at " + path + " line " +
                              std::to_string(lineno));
            row.push_back(v);
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyFile("no data rows in " + path);
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != rows[0].size())
            throw ShapeError("row " + std::to_string(r + 1) + " of " + path + " has " +
                             std::to_string(rows[r].size()) + " fields, expected " +
                             std::to_string(rows[0].size()));
    return rows;
}

void require_good(const std::ofstream& out, const std::string& path) {
    if (!out) throw IoError("failed writing " + path);
}

} // namespace

Eigen::MatrixXd load_matrix(const std::string& path) {
    const auto rows = load_rows(path);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[0].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

DataSet load_data(const std::string& path, DataKind kind, int n_nodes,
                  std::optional<int> min_arity) {
    const Eigen::MatrixXd m = load_matrix(path);
    if (m.cols() != n_nodes)
        throw ShapeError(path + " has " + std::to_string(m.cols()) + " columns, expected " +
                         std::to_string(n_nodes));
    if (kind == DataKind::Continuous) return DataSet::continuous(m);

    Eigen::MatrixXi codes(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            if (v < 0.0 || v != std::floor(v) || v > 1e9)
                throw NonIntegerDiscrete("discrete data must be non-negative integers; got " +
                                         std::to_string(v) + " at row " + std::to_string(r + 1) +
                                         ", column " + std::to_string(c + 1));
            codes(r, c) = static_cast<int>(v);
        }
    std::vector<int> arities(static_cast<std::size_t>(n_nodes));
    for (int j = 0; j < n_nodes; ++j) {
        int a = codes.col(j).maxCoeff() + 1;
        if (min_arity) a = std::max(a, *min_arity);
        if (a < 2)
            throw ShapeError("column " + std::to_string(j + 1) + " of " + path +
                             " is constant; set data_arity to score it");
        arities[static_cast<std::size_t>(j)] = a;
    }
    return DataSet::discrete(std::move(codes), std::move(arities));
}

Graph load_graph_file(const std::string& path) {
    const Eigen::MatrixXd m = load_matrix(path);
    if (m.rows() != m.cols())
        throw ShapeError(path + " is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected a square adjacency matrix");
    const int n = static_cast<int>(m.rows());
    std::vector<std::uint8_t> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (v != 0.0 && v != 1.0)
                throw ShapeError(path + " has a non-binary entry at row " + std::to_string(i + 1) +
                                 ", column " + std::to_string(j + 1));
            a[static_cast<std::size_t>(i) * n + j] = v == 1.0 ? 1 : 0;
        }
    return Graph::from_adjacency(n, a);
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m, int precision) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.*f", precision, m(i, j));
            if (j) out << ' ';
            out << buf;
        }
        out << '\n';
    }
    require_good(out, path);
}

void write_graph_file(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    const int n = g.n_nodes();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << (g.edge(i, j) ? 1 : 0);
        }
        out << '\n';
    }
    require_good(out, path);
}

void write_data(const std::string& path, const DataSet& data) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    char buf[64];
    for (int r = 0; r < data.n_obs(); ++r) {
        for (int c = 0; c < data.n_nodes(); ++c) {
            if (c) out << ' ';
            if (data.kind == DataKind::Discrete) {
                out << data.codes(r, c);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", data.values(r, c));
                out << buf;
            }
        }
        out << '\n';
    }
    require_good(out, path);
}

namespace {

void write_best_graph(const std::string& path, const Graph& g, double log_posterior) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    const int n = g.n_nodes();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << (g.edge(i, j) ? 1 : 0);
        }
        out << '\n';
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", log_posterior);
    out << "# log_posterior = " << buf << '\n';
    require_good(out, path);
}

void write_degree_count(const std::string& path, const Graph& best, const Graph& thresholded) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    const auto hb = degree_histogram(best);
    const auto ht = degree_histogram(thresholded);
    out << "# out-degree  best_graph  posterior_threshold_0.5\n";
    for (std::size_t d = 0; d < hb.size(); ++d)
        out << d << ' ' << hb[d] << ' ' << ht[d] << '\n';
    require_good(out, path);
}

void write_motifs_count(const std::string& path, const Graph& best, const Graph& thresholded) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    const MotifCounts mb = count_motifs(best);
    const MotifCounts mt = count_motifs(thresholded);
    out << "# graph  cycles  feed_forward_loops\n";
    out << "best " << mb.cycles << ' ' << mb.ffl << '\n';
    out << "posterior_threshold_0.5 " << mt.cycles << ' ' << mt.ffl << '\n';
    require_good(out, path);
}

void write_graph_samples(const std::string& path, const RunResult& result, int n) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    for (std::size_t c = 0; c < result.chains.size(); ++c) {
        for (const auto& [iter, adj] : result.chains[c].samples) {
            out << "# chain " << c + 1 << " iteration " << iter << '\n';
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (j) out << ' ';
                    out << static_cast<int>(adj[static_cast<std::size_t>(i) * n + j]);
                }
                out << '\n';
            }
        }
    }
    require_good(out, path);
}

void write_accuracy(const std::string& path, const Eigen::MatrixXd& probs, const Graph& truth) {
    std::vector<double> thresholds;
    for (int k = 0; k <= 20; ++k) thresholds.push_back(k * 0.05);
    const auto curve = accuracy_curve(probs, truth, thresholds);
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path);
    out << "# threshold  accuracy\n";
    char buf[64];
    for (const auto& [t, acc] : curve) {
        std::snprintf(buf, sizeof buf, "%.2f %.6f", t, acc);
        out << buf << '\n';
    }
    require_good(out, path);
}

template <typename T> void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T> void get(std::ifstream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw IoError("truncated results file: " + path);
}

constexpr char kMagic[4] = {'G', 'S', 'M', 'C'};
constexpr std::uint32_t kVersion = 1;

} // namespace

void write_results_bin(const std::string& path, const RunResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out.write(kMagic, 4);
    put(out, kVersion);
    const std::int32_t n = static_cast<std::int32_t>(result.edge_probability.rows());
    put(out, n);
    put(out, static_cast<std::int32_t>(result.chains.size()));
    put(out, result.chains.empty() ? std::int64_t(0) : result.chains[0].n_iterations);
    put(out, result.chains.empty() ? std::int64_t(0) : result.chains[0].burn_in);
    for (std::int32_t i = 0; i < n; ++i)
        for (std::int32_t j = 0; j < n; ++j) put(out, result.edge_probability(i, j));
    const auto& adj = result.best_graph.adjacency();
    out.write(reinterpret_cast<const char*>(adj.data()),
              static_cast<std::streamsize>(adj.size()));
    put(out, result.best_log_posterior);
    require_good(out, path);
}

BinRecord read_results_bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a results file: " + path);
    std::uint32_t version;
    get(in, version, path);
    if (version != kVersion)
        throw IoError("unsupported results version " + std::to_string(version) + " in " + path);
    BinRecord r;
    get(in, r.n_nodes, path);
    get(in, r.n_chains, path);
    get(in, r.n_iterations, path);
    get(in, r.burn_in, path);
    if (r.n_nodes < 1) throw IoError("corrupt results file: " + path);
    r.edge_probability.resize(r.n_nodes, r.n_nodes);
    for (std::int32_t i = 0; i < r.n_nodes; ++i)
        for (std::int32_t j = 0; j < r.n_nodes; ++j) get(in, r.edge_probability(i, j), path);
    r.best_adjacency.resize(static_cast<std::size_t>(r.n_nodes) * r.n_nodes);
    in.read(reinterpret_cast<char*>(r.best_adjacency.data()),
            static_cast<std::streamsize>(r.best_adjacency.size()));
    if (!in) throw IoError("truncated results file: " + path);
    get(in, r.best_log_posterior, path);
    return r;
}

void write_outputs(const RunResult& result, const std::string& prefix,
                   const std::optional<Graph>& true_graph) {
    const int n = static_cast<int>(result.edge_probability.rows());
    write_matrix(prefix + "edge_p.out", result.edge_probability, 6);
    write_best_graph(prefix + "best_graph.out", result.best_graph, result.best_log_posterior);

    const Graph thresholded = threshold_graph(result.edge_probability, 0.5);
    write_degree_count(prefix + "degree_count.out", result.best_graph, thresholded);
    write_motifs_count(prefix + "motifs_count.out", result.best_graph, thresholded);

    bool any_samples = false;
    for (const auto& c : result.chains) any_samples = any_samples || !c.samples.empty();
    if (any_samples) write_graph_samples(prefix + "graph_samples.out", result, n);

    if (result.rhat) write_matrix(prefix + "rhat.out", *result.rhat, 6);
    if (true_graph) write_accuracy(prefix + "accuracy.out", result.edge_probability, *true_graph);
    write_results_bin(prefix + "results_mcmc.bin", result);
}

} // namespace gsampler
