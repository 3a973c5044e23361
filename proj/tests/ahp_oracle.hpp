#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "sotp/ahp.hpp"

namespace sotp::testing {

/// Principal eigenvector via a dense eigensolve, independent of the power
/// iteration under test.
inline std::vector<double> eigen_priorities(const ReciprocalMatrix& m, double* lambda = nullptr) {
    const int n = m.size();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = m.at(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
    int principal = 0;
    for (int k = 1; k < n; ++k)
        if (solver.eigenvalues()[k].real() > solver.eigenvalues()[principal].real())
            principal = k;
    if (lambda != nullptr) *lambda = solver.eigenvalues()[principal].real();
    Eigen::VectorXd v = solver.eigenvectors().col(principal).real().cwiseAbs();
    v /= v.sum();
    return std::vector<double>(v.data(), v.data() + n);
}

/// Row geometric-mean method.
inline std::vector<double> geometric_mean_priorities(const ReciprocalMatrix& m) {
    const int n = m.size();
    std::vector<double> g(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double log_sum = 0.0;
        for (int j = 0; j < n; ++j) log_sum += std::log(m.at(i, j));
        g[i] = std::exp(log_sum / n);
        sum += g[i];
    }
    for (double& x : g) x /= sum;
    return g;
}

inline double oracle_consistency_ratio(const ReciprocalMatrix& m) {
    double lambda = 0.0;
    eigen_priorities(m, &lambda);
    const int n = m.size();
    if (n <= 2) return 0.0;
    double ci = (lambda - n) / (n - 1);
    double ri = random_index(n);
    return ri > 0.0 ? ci / ri : 0.0;
}

/// Perfectly consistent matrix of weight ratios.
inline ReciprocalMatrix ratio_matrix_from_weights(const std::vector<double>& weights) {
    ReciprocalMatrix m(static_cast<int>(weights.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) m.set(i, j, weights[i] / weights[j]);
    return m;
}

/// Consistent ratio matrix with multiplicative log-normal noise. Small
/// sigmas keep the matrix near-consistent (CR well below 0.1).
inline ReciprocalMatrix noised_ratio_matrix(const std::vector<double>& weights, double sigma,
                                            std::mt19937& rng) {
    std::normal_distribution<double> noise(0.0, sigma);
    ReciprocalMatrix m(static_cast<int>(weights.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j)
            m.set(i, j, weights[i] / weights[j] * std::exp(noise(rng)));
    return m;
}

inline std::vector<double> random_weights(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> log_weight(std::log(0.1), std::log(10.0));
    std::vector<double> weights(n);
    for (double& w : weights) w = std::exp(log_weight(rng));
    return weights;
}

/// Equal-weight ranking computed from scratch: judgment matrices built by
/// hand, dense eigensolve, manual sort. Shares nothing with rank_packages
/// beyond the mode definition.
inline std::vector<std::string> oracle_rank(const ScoreTable& table, AhpMode mode) {
    std::size_t packages = table.package_ids.size();
    std::vector<double> aggregate(packages, 0.0);
    for (const auto& row : table.scores) {
        int n = static_cast<int>(row.size());
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (mode == AhpMode::ratio) {
                    a(i, j) = row[i] / row[j];
                } else {
                    double diff = std::min(9.0, 1.0 + std::abs(row[i] - row[j]));
                    a(i, j) = row[i] >= row[j] ? diff : 1.0 / diff;
                }
            }
        }
        Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
        int principal = 0;
        for (int k = 1; k < n; ++k)
            if (solver.eigenvalues()[k].real() > solver.eigenvalues()[principal].real())
                principal = k;
        Eigen::VectorXd v = solver.eigenvectors().col(principal).real().cwiseAbs();
        v /= v.sum();
        for (std::size_t p = 0; p < packages; ++p)
            aggregate[p] += v[static_cast<int>(p)] / static_cast<double>(table.scores.size());
    }
    std::vector<std::size_t> index(packages);
    for (std::size_t i = 0; i < packages; ++i) index[i] = i;
    std::sort(index.begin(), index.end(), [&](std::size_t x, std::size_t y) {
        if (std::abs(aggregate[x] - aggregate[y]) > 1e-9) return aggregate[x] > aggregate[y];
        return table.package_ids[x] < table.package_ids[y];
    });
    std::vector<std::string> order;
    for (std::size_t i : index) order.push_back(table.package_ids[i]);
    return order;
}

struct OracleOutcome {
    std::vector<std::string> order;
    bool order_changed = false;
    bool rank1_changed = false;
};

using OracleKey = std::tuple<std::string, std::string, double>;  // package, quality, delta

/// Brute-force enumeration of every +/-delta perturbation.
inline std::map<OracleKey, OracleOutcome> oracle_sensitivity(const ScoreTable& table,
                                                             double delta, AhpMode mode) {
    std::map<OracleKey, OracleOutcome> outcomes;
    std::vector<std::string> baseline = oracle_rank(table, mode);
    for (std::size_t q = 0; q < table.quality_ids.size(); ++q) {
        for (std::size_t p = 0; p < table.package_ids.size(); ++p) {
            for (double signed_delta : {delta, -delta}) {
                ScoreTable perturbed = table;
                perturbed.scores[q][p] =
                    std::clamp(perturbed.scores[q][p] + signed_delta, 1.0, 10.0);
                OracleOutcome outcome;
                outcome.order = oracle_rank(perturbed, mode);
                outcome.order_changed = outcome.order != baseline;
                outcome.rank1_changed = outcome.order.front() != baseline.front();
                outcomes[{table.package_ids[p], table.quality_ids[q], signed_delta}] = outcome;
            }
        }
    }
    return outcomes;
}

}  // namespace sotp::testing
