#ifndef GSAMPLER_TESTS_ORACLES_HPP
#define GSAMPLER_TESTS_ORACLES_HPP

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

// Independent reference implementations the library is validated against.
// None of them share code paths with the library: the Dirichlet oracle is a
// sequential product (no log-gamma), the Normal-Gamma oracles integrate the
// nuisance parameters numerically over a dense n x n covariance (no Woodbury
// reduction, no t-density), and the regression oracle is plain OLS.
namespace oracles {

// Composite Simpson with n_intervals panels (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int n_intervals);

// Dirichlet-multinomial marginal as the Polya-urn chain rule:
// prod_t (pc + c[q_t, x_t]) / (arity * pc + c[q_t, .]) with counts updated
// sequentially.
double log_polya_urn(const Eigen::VectorXi& x, const Eigen::MatrixXi& parents_data, int arity,
                     const std::vector<int>& parent_arities, double pseudo_count);

// Normal-Gamma regression marginal by quadrature over the noise precision;
// the coefficient integral is exact Gaussian algebra on the dense n x n
// covariance I + M n0^{-1} M'.
double log_ng_lambda_quadrature(const Eigen::VectorXd& x, const Eigen::MatrixXd& parents_data,
                                double alpha, double omega, double beta0, double n0_scale);

// Brute-force 2-D grid quadrature over (intercept, precision) for k = 0.
double log_ng_grid_quadrature_k0(const Eigen::VectorXd& x, double alpha, double omega,
                                 double beta0, double n0_scale);

struct Ols {
    double slope = 0;
    double intercept = 0;
    double slope_se = 0;
};
Ols ols(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Total variation distance between two distributions over graph codes.
double tv_distance(const std::unordered_map<std::uint64_t, double>& a,
                   const std::unordered_map<std::uint64_t, double>& b);

} // namespace oracles

#endif
