#include "mapllt/models.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace mapllt::model {

// ---------------------------------------------------------------------------
// DiscreteMapModel
// ---------------------------------------------------------------------------

DiscreteMapModel::DiscreteMapModel(markov::StochasticMatrix chain,
                                   std::vector<std::optional<IncrementLaw>> laws, int dim)
    : chain_(std::move(chain)),
      laws_(std::move(laws)),
      dim_(dim),
      pi_(markov::stationary(chain_)) {
  const int n = chain_.states();
  if (dim_ < 1) throw InvalidInput("DiscreteMapModel: additive dimension must be >= 1");
  if (laws_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw InvalidInput("DiscreteMapModel: law table must have n*n entries");
  }
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const bool positive = chain_.mat()(k, l) > 0.0;
      const auto& entry = laws_[static_cast<std::size_t>(k) * n + l];
      if (positive != entry.has_value()) {
        throw InvalidInput("DiscreteMapModel: law table and transition (" + std::to_string(k + 1) +
                           "," + std::to_string(l + 1) + ") disagree on presence");
      }
      if (entry && entry->dim() != dim_) {
        throw InvalidInput("DiscreteMapModel: law at (" + std::to_string(k + 1) + "," +
                           std::to_string(l + 1) + ") has wrong dimension");
      }
    }
  }
  drift_ = Vector::Zero(dim_);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (chain_.mat()(k, l) > 0.0) {
        drift_ += pi_.pi(k) * chain_.mat()(k, l) * law(k, l).mean();
      }
    }
  }
}

bool DiscreteMapModel::hasLaw(int from, int to) const {
  const int n = states();
  if (from < 0 || from >= n || to < 0 || to >= n) {
    throw InvalidInput("DiscreteMapModel: state index out of range");
  }
  return laws_[static_cast<std::size_t>(from) * n + to].has_value();
}

const IncrementLaw& DiscreteMapModel::law(int from, int to) const {
  if (!hasLaw(from, to)) {
    throw InvalidInput("DiscreteMapModel: no law on zero-probability transition (" +
                       std::to_string(from + 1) + "," + std::to_string(to + 1) + ")");
  }
  return *laws_[static_cast<std::size_t>(from) * states() + to];
}

// ---------------------------------------------------------------------------
// LocalTimeMapModel
// ---------------------------------------------------------------------------

LocalTimeMapModel::LocalTimeMapModel(markov::Generator gen)
    : gen_(std::move(gen)), pi_(markov::stationary(gen_)) {}

// ---------------------------------------------------------------------------
// Centering and moments
// ---------------------------------------------------------------------------

DiscreteMapModel center(const DiscreteMapModel& m) {
  if (max_abs(m.drift()) <= tol::kCenteredDrift) return m;  // idempotence fixed point
  const int n = m.states();
  const Vector shift = -m.drift();
  std::vector<std::optional<IncrementLaw>> shiftedLaws(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (m.hasLaw(k, l)) {
        shiftedLaws[static_cast<std::size_t>(k) * n + l] = m.law(k, l).shifted(shift);
      }
    }
  }
  return DiscreteMapModel(m.chain(), std::move(shiftedLaws), m.dim());
}

Vector stationary_mean(const DiscreteMapModel& m) { return m.drift(); }

Vector stationary_mean(const LocalTimeMapModel& m) { return m.drift(); }

namespace {

void require_moment_order(int order) {
  if (order != 2 && order != 3) {
    throw InvalidInput("moment_bound: order must be 2 or 3");
  }
}

}  // namespace

double moment_bound(const DiscreteMapModel& m, int order) {
  require_moment_order(order);
  double bound = 0.0;
  for (int k = 0; k < m.states(); ++k) {
    double rowMoment = 0.0;
    for (int l = 0; l < m.states(); ++l) {
      if (m.hasLaw(k, l)) {
        const double lawMoment =
            order == 2 ? m.law(k, l).normMoment(2) : m.law(k, l).absMoment3();
        rowMoment += m.chain().mat()(k, l) * lawMoment;
      }
    }
    bound = std::max(bound, rowMoment);
  }
  return bound;
}

double moment_bound(const LocalTimeMapModel& m, int order) {
  require_moment_order(order);
  // Each coordinate of L_v - v pi lies in [-v, v], so ||Y_v|| <= v sqrt(n).
  return std::pow(static_cast<double>(m.states()), order / 2.0);
}

// ---------------------------------------------------------------------------
// Hyperplane coordinates
// ---------------------------------------------------------------------------

Vector project_local_times(const Vector& y) {
  if (y.size() < 2) throw InvalidInput("project_local_times: need dimension >= 2");
  const double total = y.sum();
  if (std::abs(total) > tol::kHyperplane) {
    throw NotInHyperplane("project_local_times: coordinate sum " + std::to_string(total));
  }
  return y.head(y.size() - 1);
}

Vector lift_local_times(const Vector& yProjected) {
  Vector y(yProjected.size() + 1);
  y.head(yProjected.size()) = yProjected;
  y(yProjected.size()) = -yProjected.sum();
  return y;
}

// ---------------------------------------------------------------------------
// Support region
// ---------------------------------------------------------------------------

SupportRegion::SupportRegion(std::vector<HalfSpace> faces) : faces_(std::move(faces)) {
  if (faces_.empty()) throw InvalidInput("SupportRegion: needs at least one face");
  for (const auto& f : faces_) {
    if (f.normal.size() == 0 || !f.normal.allFinite() || !std::isfinite(f.offset)) {
      throw InvalidInput("SupportRegion: non-finite face");
    }
  }
}

bool SupportRegion::contains(const Vector& y) const {
  for (const auto& f : faces_) {
    // Membership is strict: the region is open.
    if (!(f.normal.dot(y) < f.offset)) return false;
  }
  return true;
}

SupportRegion SupportRegion::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidInput("SupportRegion::scaled: factor must be > 0");
  std::vector<HalfSpace> scaledFaces = faces_;
  for (auto& f : scaledFaces) f.offset *= c;
  return SupportRegion(std::move(scaledFaces));
}

SupportRegion support_region(const LocalTimeMapModel& m, double t) {
  if (!(t > 0.0)) throw InvalidInput("support_region: horizon must be > 0");
  const int d = m.projectedDim();
  const Vector& pi = m.drift();
  std::vector<HalfSpace> faces;
  faces.reserve(2 * d + 1);
  for (int j = 0; j < d; ++j) {
    Vector up = Vector::Zero(d);
    up(j) = 1.0;
    faces.push_back({up, (1.0 - pi(j)) * t});  // sojourn in j below t
    Vector down = Vector::Zero(d);
    down(j) = -1.0;
    faces.push_back({down, pi(j) * t});  // sojourn in j above 0
  }
  // Positive sojourn in the dropped state: sum of the kept coordinates stays
  // below pi_n t.
  faces.push_back({Vector::Ones(d), pi(d) * t});
  return SupportRegion(std::move(faces));
}

// ---------------------------------------------------------------------------
// Exact asymptotic covariance (discrete)
// ---------------------------------------------------------------------------

markov::CovarianceMatrix asymptotic_covariance_exact(const DiscreteMapModel& m) {
  const int n = m.states();
  const int d = m.dim();
  const Vector& pi = m.stationary().pi;
  const Matrix& p = m.chain().mat();
  const Vector drift = m.drift();

  // Within-step conditional covariance and lag-zero scatter of the centered
  // edge means; edgeMeans holds mean(law_kl) - m.  secondMoment tracks the
  // pre-cancellation magnitude of the summands, the scale against which a
  // degenerate (all-dust) result is recognized.
  Matrix within = Matrix::Zero(d, d);
  Matrix scatter = Matrix::Zero(d, d);
  Matrix rowMean = Matrix::Zero(n, d);  // row k: E[edge mean | from k]
  std::vector<Vector> edgeMeans(static_cast<std::size_t>(n) * n);
  double secondMoment = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (!m.hasLaw(k, l)) continue;
      const double weight = pi(k) * p(k, l);
      const Vector g = m.law(k, l).mean() - drift;
      edgeMeans[static_cast<std::size_t>(k) * n + l] = g;
      within += weight * m.law(k, l).covariance();
      scatter += weight * g * g.transpose();
      rowMean.row(k) += p(k, l) * g.transpose();
      secondMoment += weight * (m.law(k, l).mean().squaredNorm() +
                                m.law(k, l).covariance().trace());
    }
  }

  // Cross-lag sum through the fundamental matrix: the conditional mean chain
  // started at the arrival state contributes Z * rowMean.
  const Matrix z = markov::fundamental_matrix(m.chain());
  const Matrix w = z * rowMean;  // n x d
  Matrix cross = Matrix::Zero(d, d);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (!m.hasLaw(k, l)) continue;
      const Vector& g = edgeMeans[static_cast<std::size_t>(k) * n + l];
      cross += pi(k) * p(k, l) * g * w.row(l);
    }
  }

  const double zNorm = z.cwiseAbs().rowwise().sum().maxCoeff();
  return markov::CovarianceMatrix(within + scatter + cross + cross.transpose(),
                                  secondMoment * (1.0 + 2.0 * zNorm));
}

}  // namespace mapllt::model
