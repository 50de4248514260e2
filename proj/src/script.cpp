#include "gsampler/script.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gsampler/errors.hpp"

namespace gsampler {

namespace {

struct Token {
    enum Type { Ident, Number, String, Equals, Semicolon, End };
    Type type = End;
    std::string text;
    int line = 0;
    int col = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : s_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= s_.size()) {
            t.type = Token::End;
            return t;
        }
        const char c = s_[pos_];
        if (c == '=') {
            advance();
            t.type = Token::Equals;
            t.text = "=";
            return t;
        }
        if (c == ';') {
            advance();
            t.type = Token::Semicolon;
            t.text = ";";
            return t;
        }
        if (c == '"') {
            advance();
            std::string v;
            while (pos_ < s_.size() && s_[pos_] != '"') {
                if (s_[pos_] == '\n') throw ParseError(t.line, t.col, "unterminated string");
                v.push_back(s_[pos_]);
                advance();
            }
            if (pos_ >= s_.size()) throw ParseError(t.line, t.col, "unterminated string");
            advance(); // closing quote
            t.type = Token::String;
            t.text = std::move(v);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string v;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                v.push_back(s_[pos_]);
                advance();
            }
            t.type = Token::Ident;
            t.text = std::move(v);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            std::string v;
            while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
                   s_[pos_] != ';' && s_[pos_] != '=' && s_[pos_] != '#') {
                v.push_back(s_[pos_]);
                advance();
            }
            t.type = Token::Number;
            t.text = std::move(v);
            return t;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

  private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size()) {
            const char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

long long to_int(const std::string& key, const Token& t) {
    if (t.type != Token::Number)
        throw ValidationError(key + " expects an integer, got \"" + t.text + "\"");
    std::size_t used = 0;
    long long v;
    try {
        v = std::stoll(t.text, &used);
    } catch (const std::exception&) {
        throw ValidationError(key + " expects an integer, got \"" + t.text + "\"");
    }
    if (used != t.text.size())
        throw ValidationError(key + " expects an integer, got \"" + t.text + "\"");
    return v;
}

double to_real(const std::string& key, const Token& t) {
    if (t.type != Token::Number)
        throw ValidationError(key + " expects a number, got \"" + t.text + "\"");
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(t.text, &used);
    } catch (const std::exception&) {
        throw ValidationError(key + " expects a number, got \"" + t.text + "\"");
    }
    if (used != t.text.size())
        throw ValidationError(key + " expects a number, got \"" + t.text + "\"");
    return v;
}

bool to_bool(const std::string& key, const Token& t) {
    if (t.type == Token::Ident && t.text == "true") return true;
    if (t.type == Token::Ident && t.text == "false") return false;
    throw ValidationError(key + " expects true or false, got \"" + t.text + "\"");
}

std::string to_path(const std::string& key, const Token& t) {
    if (t.type != Token::String)
        throw ValidationError(key + " expects a quoted file path");
    return t.text;
}

void check(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

} // namespace

ScriptConfig parse_script(const std::string& text) {
    ScriptConfig cfg;
    Lexer lex(text);
    for (;;) {
        Token key = lex.next();
        if (key.type == Token::End) break;
        if (key.type != Token::Ident)
            throw ParseError(key.line, key.col, "expected a setting name");
        Token eq = lex.next();
        if (eq.type != Token::Equals)
            throw ParseError(eq.line, eq.col, "expected '=' after \"" + key.text + "\"");
        Token val = lex.next();
        if (val.type == Token::Equals || val.type == Token::Semicolon || val.type == Token::End)
            throw ParseError(val.line, val.col, "expected a value for \"" + key.text + "\"");
        Token semi = lex.next();
        if (semi.type != Token::Semicolon)
            throw ParseError(semi.line, semi.col, "expected ';' after the value of \"" + key.text + "\"");

        const std::string& k = key.text;
        if (k == "n_nodes") {
            const long long v = to_int(k, val);
            check(v >= 1, "n_nodes must be >= 1");
            cfg.n_nodes = static_cast<int>(v);
        } else if (k == "data_file") {
            cfg.data_file = to_path(k, val);
        } else if (k == "data_kind") {
            if (val.text == "continuous") cfg.data_kind = DataKind::Continuous;
            else if (val.text == "discrete") cfg.data_kind = DataKind::Discrete;
            else throw ValidationError("data_kind must be continuous or discrete");
        } else if (k == "likelihood") {
            if (val.text == "normal_gamma") cfg.likelihood = Family::NormalGamma;
            else if (val.text == "zellner") cfg.likelihood = Family::ZellnerG;
            else if (val.text == "dirichlet") cfg.likelihood = Family::DirichletMultinomial;
            else throw ValidationError("likelihood must be normal_gamma, zellner, or dirichlet");
        } else if (k == "prior_only") {
            cfg.prior_only = to_bool(k, val);
        } else if (k == "n_iterations") {
            const long long v = to_int(k, val);
            check(v >= 1, "n_iterations must be >= 1");
            cfg.n_iterations = v;
        } else if (k == "burn_in") {
            const long long v = to_int(k, val);
            check(v >= 0, "burn_in must be >= 0");
            cfg.burn_in = v;
        } else if (k == "n_chains") {
            const long long v = to_int(k, val);
            check(v >= 1, "n_chains must be >= 1");
            cfg.n_chains = static_cast<int>(v);
        } else if (k == "seed") {
            const long long v = to_int(k, val);
            check(v >= 0, "seed must be >= 0");
            cfg.seed = static_cast<std::uint64_t>(v);
        } else if (k == "sample_stride") {
            const long long v = to_int(k, val);
            check(v >= 0, "sample_stride must be >= 0");
            cfg.sample_stride = v;
        } else if (k == "batch_length") {
            const long long v = to_int(k, val);
            check(v >= 1, "batch_length must be >= 1");
            cfg.batch_length = v;
        } else if (k == "random_scan") {
            cfg.random_scan = to_bool(k, val);
        } else if (k == "rhat") {
            cfg.rhat = to_bool(k, val);
        } else if (k == "rhat_threshold") {
            const double v = to_real(k, val);
            check(v > 0.0, "rhat_threshold must be > 0");
            cfg.rhat_threshold = v;
        } else if (k == "initial_graph_file") {
            cfg.initial_graph_file = to_path(k, val);
        } else if (k == "alpha") {
            const double v = to_real(k, val);
            check(v > 0.0, "alpha must be > 0");
            cfg.alpha = v;
        } else if (k == "omega") {
            const double v = to_real(k, val);
            check(v > 0.0, "omega must be > 0");
            cfg.omega = v;
        } else if (k == "beta0") {
            cfg.beta0 = to_real(k, val);
        } else if (k == "n0_scale") {
            const double v = to_real(k, val);
            check(v > 0.0, "n0_scale must be > 0");
            cfg.n0_scale = v;
        } else if (k == "g") {
            const double v = to_real(k, val);
            check(v > 0.0, "g must be > 0");
            cfg.g = v;
        } else if (k == "pseudo_count") {
            const double v = to_real(k, val);
            check(v > 0.0, "pseudo_count must be > 0");
            cfg.pseudo_count = v;
        } else if (k == "bernoulli_p") {
            const double v = to_real(k, val);
            check(v >= 0.0 && v <= 1.0, "bernoulli_p must lie in [0,1]");
            cfg.bernoulli_p = v;
        } else if (k == "bernoulli_file") {
            cfg.bernoulli_file = to_path(k, val);
        } else if (k == "concordance_file") {
            cfg.concordance_file = to_path(k, val);
        } else if (k == "rho") {
            const double v = to_real(k, val);
            check(v > 0.0, "rho must be > 0");
            cfg.rho = v;
        } else if (k == "degree_gamma") {
            const double v = to_real(k, val);
            check(v > 0.0, "degree_gamma must be > 0");
            cfg.degree_gamma = v;
        } else if (k == "data_arity") {
            const long long v = to_int(k, val);
            check(v >= 2, "data_arity must be >= 2");
            cfg.data_arity = static_cast<int>(v);
        } else if (k == "true_graph_file") {
            cfg.true_graph_file = to_path(k, val);
        } else if (k == "network") {
            if (val.text != "tree" && val.text != "file")
                throw ValidationError("network must be tree or file");
            cfg.network = val.text;
        } else if (k == "network_file") {
            cfg.network_file = to_path(k, val);
        } else if (k == "n_obs") {
            const long long v = to_int(k, val);
            check(v >= 1, "n_obs must be >= 1");
            cfg.n_obs = static_cast<int>(v);
        } else if (k == "beta") {
            cfg.beta = to_real(k, val);
        } else if (k == "intercept") {
            cfg.intercept = to_real(k, val);
        } else if (k == "lambda") {
            const double v = to_real(k, val);
            check(v > 0.0, "lambda must be > 0");
            cfg.lambda = v;
        } else if (k == "p_root") {
            const double v = to_real(k, val);
            check(v >= 0.0 && v <= 1.0, "p_root must lie in [0,1]");
            cfg.p_root = v;
        } else if (k == "p_active") {
            const double v = to_real(k, val);
            check(v >= 0.0 && v <= 1.0, "p_active must lie in [0,1]");
            cfg.p_active = v;
        } else if (k == "p_inactive") {
            const double v = to_real(k, val);
            check(v >= 0.0 && v <= 1.0, "p_inactive must lie in [0,1]");
            cfg.p_inactive = v;
        } else if (k == "probe_i") {
            const long long v = to_int(k, val);
            check(v >= 1, "probe_i must be >= 1 (nodes are 1-based)");
            cfg.probe_i = static_cast<int>(v);
        } else if (k == "probe_j") {
            const long long v = to_int(k, val);
            check(v >= 1, "probe_j must be >= 1 (nodes are 1-based)");
            cfg.probe_j = static_cast<int>(v);
        } else {
            throw ParseError(key.line, key.col, "unknown setting \"" + k + "\"");
        }
    }
    if (cfg.burn_in >= 0 && cfg.burn_in >= cfg.n_iterations)
        throw ValidationError("burn_in must be smaller than n_iterations");
    return cfg;
}

ScriptConfig parse_script_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open script file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_script(buf.str());
}

} // namespace gsampler
