#include "mapllt/chain.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace mapllt::markov {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InvalidInput(std::string(what) + ": matrix must be square, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (m.rows() < tol::kMinStates || m.rows() > tol::kMaxStates) {
    throw InvalidInput(std::string(what) + ": state count " + std::to_string(m.rows()) +
                       " outside [2, 64]");
  }
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

// Forward BFS over edges with weight > 0, diagonal ignored.
std::vector<bool> reachable(const Matrix& w, int from, bool transpose) {
  const int n = static_cast<int>(w.rows());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (v == u || seen[v]) continue;
      const double edge = transpose ? w(v, u) : w(u, v);
      if (edge > 0.0) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

// BFS levels from state 0; -1 marks unreachable states.
std::vector<int> bfs_levels(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> level(n, -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int u = queue[q];
    for (int v = 0; v < n; ++v) {
      if (level[v] < 0 && w(u, v) > 0.0 && v != u) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return level;
}

StationaryDistribution solve_balance(const Matrix& lhs, const char* what) {
  // lhs is (P^T - I) or G^T; append the normalization row 1^T.
  const int n = static_cast<int>(lhs.rows());
  Matrix a(n + 1, n);
  a.topRows(n) = lhs;
  a.bottomRows(1).setOnes();
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0;
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < n) {
    throw SingularSystem(std::string(what) + ": balance system rank-deficient");
  }
  Vector pi = qr.solve(b);
  const double residual = (a * pi - b).cwiseAbs().maxCoeff();
  if (residual > tol::kStationaryResidual) {
    throw SingularSystem(std::string(what) + ": balance residual " + std::to_string(residual));
  }
  if ((pi.array() <= 0.0).any()) {
    throw SingularSystem(std::string(what) + ": nonpositive stationary weight");
  }
  return StationaryDistribution{pi};
}

}  // namespace

StochasticMatrix::StochasticMatrix(Matrix p) : p_(std::move(p)) {
  require_square(p_, "StochasticMatrix");
  for (int i = 0; i < p_.rows(); ++i) {
    for (int j = 0; j < p_.cols(); ++j) {
      if (p_(i, j) < 0.0) {
        throw InvalidInput("StochasticMatrix: negative entry at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
    }
    const double rowSum = p_.row(i).sum();
    if (std::abs(rowSum - 1.0) > tol::kRowSum) {
      throw InvalidInput("StochasticMatrix: row " + std::to_string(i) + " sums to " +
                         std::to_string(rowSum));
    }
  }
}

Generator::Generator(Matrix g) : g_(std::move(g)) {
  require_square(g_, "Generator");
  for (int i = 0; i < g_.rows(); ++i) {
    if (g_(i, i) > 0.0) {
      throw InvalidInput("Generator: positive diagonal at state " + std::to_string(i));
    }
    for (int j = 0; j < g_.cols(); ++j) {
      if (j != i && g_(i, j) < 0.0) {
        throw InvalidInput("Generator: negative rate at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      }
    }
    const double rowSum = g_.row(i).sum();
    if (std::abs(rowSum) > tol::kRowSum) {
      throw InvalidInput("Generator: row " + std::to_string(i) + " sums to " +
                         std::to_string(rowSum));
    }
  }
}

bool is_irreducible(const Matrix& weights) {
  const auto fwd = reachable(weights, 0, false);
  const auto bwd = reachable(weights, 0, true);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    if (!fwd[i] || !bwd[i]) return false;
  }
  return true;
}

IpFlags check_ip(const StochasticMatrix& p) {
  IpFlags flags;
  flags.irreducible = is_irreducible(p.mat());
  if (!flags.irreducible) return flags;

  // Period of an irreducible chain: gcd over edges (u,v) of level(u)+1-level(v).
  // Self-loops enter as cycles of length 1 and force aperiodicity.
  const auto level = bfs_levels(p.mat());
  const int n = p.states();
  int g = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (p.mat()(u, v) > 0.0) {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  flags.aperiodic = (g == 1);
  return flags;
}

StationaryDistribution stationary(const StochasticMatrix& p) {
  if (!is_irreducible(p.mat())) {
    throw NotIrreducible("stationary: one-step kernel is not irreducible");
  }
  const int n = p.states();
  return solve_balance(p.mat().transpose() - Matrix::Identity(n, n), "stationary(P)");
}

StationaryDistribution stationary(const Generator& g) {
  if (!is_irreducible(g.mat())) {
    throw NotIrreducible("stationary: generator is not irreducible");
  }
  return solve_balance(g.mat().transpose(), "stationary(G)");
}

bool subgenerator_irreducible(const Generator& g, int removed) {
  const int n = g.states();
  if (removed < 0 || removed >= n) {
    throw InvalidInput("subgenerator_irreducible: state index " + std::to_string(removed) +
                       " out of range");
  }
  std::vector<int> keep;
  keep.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i != removed) keep.push_back(i);
  }
  if (keep.size() == 1) {
    // Single surviving state: irreducible iff it still has outflow.
    return g.mat()(keep[0], keep[0]) < 0.0;
  }
  Matrix sub(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) {
      sub(a, b) = g.mat()(keep[a], keep[b]);
    }
  }
  return is_irreducible(sub);
}

Matrix fundamental_matrix(const StochasticMatrix& p) {
  const StationaryDistribution pi = stationary(p);
  const int n = p.states();
  const Matrix onePi = Vector::Ones(n) * pi.pi.transpose();
  const Matrix system = Matrix::Identity(n, n) - p.mat() + onePi;
  Eigen::PartialPivLU<Matrix> lu(system);
  const Matrix z = lu.solve(Matrix::Identity(n, n));
  if (max_abs(Matrix(system * z - Matrix::Identity(n, n))) > 1e-8) {
    throw SingularSystem("fundamental_matrix: inversion residual too large");
  }
  // Z 1 = 1 and pi^T Z = pi^T characterize the normalization.
  if (max_abs(Vector(z * Vector::Ones(n) - Vector::Ones(n))) > 1e-10 ||
      max_abs(Vector(z.transpose() * pi.pi - pi.pi)) > 1e-10) {
    throw NumericalInstability("fundamental_matrix: null-vector identities violated");
  }
  return z;
}

}  // namespace mapllt::markov
