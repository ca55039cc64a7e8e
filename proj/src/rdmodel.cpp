#include "tmac/rdmodel.hpp"

#include <algorithm>
#include <stdexcept>

#include "tmac/random.hpp"

namespace tmac {

BetaMap::BetaMap() : knots_{{0.0, 0.0}, {1.0, 1.0}} {}

BetaMap::BetaMap(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw DomainError("BetaMap: need at least two knots");
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (!std::isfinite(knots_[k].first) || !std::isfinite(knots_[k].second)) {
      throw DomainError("BetaMap: non-finite knot");
    }
    if (k > 0 && (knots_[k].first <= knots_[k - 1].first ||
                  knots_[k].second <= knots_[k - 1].second)) {
      throw DomainError("BetaMap: knots must be strictly increasing in rho and beta");
    }
  }
}

double BetaMap::operator()(double rho) const {
  if (!(rho >= min_rho() && rho <= max_rho())) {
    throw std::out_of_range("BetaMap: rho outside the calibration table");
  }
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), rho,
                             [](const auto& knot, double r) { return knot.first < r; });
  if (hi->first == rho) return hi->second;
  auto lo = hi - 1;
  const double t = (rho - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double beta_from_rho(const BetaMap& map, double rho) { return map(rho); }

RdOperatingSet::RdOperatingSet(std::vector<double> values) : betas(std::move(values)) {
  if (betas.empty()) throw DomainError("RdOperatingSet: empty trade-off set");
  for (std::size_t k = 1; k < betas.size(); ++k) {
    if (!(betas[k] > betas[k - 1])) {
      throw DomainError("RdOperatingSet: trade-off set must be strictly increasing");
    }
  }
}

double control_function(const RdOperatingSet& theta, double beta) {
  return std::find(theta.betas.begin(), theta.betas.end(), beta) != theta.betas.end() ? beta
                                                                                      : 0.0;
}

double select_operating_point(const RdOperatingSet& theta, double rho_star, const BetaMap& map) {
  if (theta.betas.empty()) throw DomainError("select_operating_point: empty trade-off set");
  const double target = map(rho_star);
  double best = theta.betas.front();
  for (double b : theta.betas) {
    // Ascending order plus strict comparison keeps the smaller beta on ties.
    if (std::abs(b - target) < std::abs(best - target)) best = b;
  }
  return best;
}

Eigen::MatrixXd scene_mixing(int dim, int rank, double noise, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int c = 0; c < rank; ++c) {
    for (int r = 0; r < dim; ++r) m(r, c) = rng.normal();
  }
  m.diagonal().array() += noise;
  return m;
}

Eigen::MatrixXd correlated_frames(const Eigen::MatrixXd& mixing, int count, double correlation,
                                  std::uint64_t seed) {
  if (!(correlation >= 0.0 && correlation < 1.0)) {
    throw DomainError("correlated_frames: correlation must lie in [0, 1)");
  }
  Rng rng(seed);
  const Eigen::Index dim = mixing.rows();
  const double innovation = std::sqrt(1.0 - correlation * correlation);
  Eigen::MatrixXd frames(dim, count);
  Eigen::VectorXd z(dim);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
  for (int t = 0; t < count; ++t) {
    for (Eigen::Index k = 0; k < dim; ++k) z(k) = rng.normal();
    state = t == 0 ? Eigen::VectorXd(mixing * z)
                   : Eigen::VectorXd(correlation * state + innovation * (mixing * z));
    frames.col(t) = state;
  }
  return frames;
}

LinearCodec<double> random_codec(int input, int bottleneck, double scale, std::uint64_t seed) {
  auto codec = LinearCodec<double>::zero(input, bottleneck);
  Rng rng(seed);
  for (Eigen::Index k = 0; k < codec.encoder.size(); ++k) codec.encoder.data()[k] = scale * rng.normal();
  for (Eigen::Index k = 0; k < codec.decoder.size(); ++k) codec.decoder.data()[k] = scale * rng.normal();
  return codec;
}

}  // namespace tmac
