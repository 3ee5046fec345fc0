// Jump-rate generators for finite-state continuous-time Markov chains.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace inswap {

using SparseRates = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Off-diagonal jump rates plus precomputed exit rates and the reversible
// stationary law. The diagonal of `rates` is kept at zero; the generator
// acts as (Lf)(x) = sum_y rates(x,y) (f(y) - f(x)).
struct Generator {
  SparseRates rates;
  Eigen::VectorXd exit;
  Eigen::VectorXd stationary;

  Eigen::Index size() const { return rates.rows(); }
};

// Builds a Generator from off-diagonal rates; exit rates are accumulated in
// storage order so that row sums reproduce them bitwise.
Generator make_generator(SparseRates rates, Eigen::VectorXd stationary);

// Max relative detailed-balance violation over stored edges,
// max |mu(x) r(x,y) - mu(y) r(y,x)| / max flux. Also detects asymmetric
// sparsity patterns (an edge without its reverse counts as a violation).
double reversibility_gap(const Generator& gen);

// True if the jump graph is connected (edges taken as undirected).
bool is_connected(const Generator& gen);

// Total variation distance between two probability vectors.
double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Scales a nonnegative vector to unit sum.
Eigen::VectorXd normalized(const Eigen::VectorXd& w);

}  // namespace inswap
