#pragma once

// Driving-chain types and structural checks: row-stochastic one-step kernels
// for discrete time, conservative rate matrices for continuous time, and the
// irreducibility / aperiodicity predicates the limit theory presumes.

#include <optional>

#include "mapllt/errors.hpp"
#include "mapllt/types.hpp"

namespace mapllt::markov {

// Row-stochastic one-step transition kernel on 2..64 states.
// Invariants: entries >= 0, each row sums to 1 within tol::kRowSum.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix p);
  const Matrix& mat() const { return p_; }
  int states() const { return static_cast<int>(p_.rows()); }

 private:
  Matrix p_;
};

// Conservative generator (rate matrix): off-diagonal entries >= 0, diagonal
// <= 0, rows sum to 0 within tol::kRowSum.
class Generator {
 public:
  explicit Generator(Matrix g);
  const Matrix& mat() const { return g_; }
  int states() const { return static_cast<int>(g_.rows()); }

 private:
  Matrix g_;
};

// Strictly positive probability row vector summing to 1.
struct StationaryDistribution {
  Vector pi;
  int states() const { return static_cast<int>(pi.size()); }
};

struct IpFlags {
  bool irreducible = false;
  // Unset when the chain is not irreducible (period is then state-dependent).
  std::optional<bool> aperiodic;
};

// Strong connectivity of the positive-entry digraph (diagonal ignored).
bool is_irreducible(const Matrix& weights);

// Irreducibility and aperiodicity of a one-step kernel. Aperiodicity is the
// cycle-length gcd test, equivalent to P^m > 0 for some m <= (n-1)^2 + 1.
IpFlags check_ip(const StochasticMatrix& p);

// Stationary distribution by direct linear solve of the balance equations
// augmented with normalization. Throws NotIrreducible first, SingularSystem
// if the solve degenerates. Residual ||pi^T P - pi^T|| stays within
// tol::kStationaryResidual.
StationaryDistribution stationary(const StochasticMatrix& p);
StationaryDistribution stationary(const Generator& g);

// Whether the sub-generator obtained by deleting state `removed` (0-based) is
// irreducible. A 1x1 block counts as irreducible iff its diagonal is < 0.
bool subgenerator_irreducible(const Generator& g, int removed);

// Fundamental matrix Z = (I - P + 1 pi^T)^{-1}, the discrete-time analog of
// the deviation matrix. Satisfies Z 1 = 1 and pi^T Z = pi^T within 1e-10.
Matrix fundamental_matrix(const StochasticMatrix& p);

}  // namespace mapllt::markov
