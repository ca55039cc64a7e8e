#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tmac/errors.hpp"

namespace tmac {

// Monotone calibration rho -> beta, piecewise linear between knots.
class BetaMap {
 public:
  // Identity on [0, 1].
  BetaMap();
  // Knots must be strictly increasing in both coordinates; at least two.
  explicit BetaMap(std::vector<std::pair<double, double>> knots);

  double operator()(double rho) const;

  double min_rho() const { return knots_.front().first; }
  double max_rho() const { return knots_.back().first; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<std::pair<double, double>> knots_;
};

// Throws std::out_of_range outside the table domain.
double beta_from_rho(const BetaMap& map, double rho);

// Finite set of trade-off parameters, strictly increasing.
struct RdOperatingSet {
  std::vector<double> betas;
  int selected = 0;

  // Throws DomainError if empty or not strictly increasing.
  explicit RdOperatingSet(std::vector<double> values);
  RdOperatingSet() : RdOperatingSet({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {}
};

// Indicator weight: beta if beta is a member of the set, else 0.
double control_function(const RdOperatingSet& theta, double beta);

// Member of theta nearest to G(rho_star); ties go to the smaller beta.
double select_operating_point(const RdOperatingSet& theta, double rho_star, const BetaMap& map);

// Linear auto-encoder x_hat = decoder * encoder * x, a small stand-in for a
// learned codec whose parameters are updated by plain gradient descent.
template <typename Scalar>
struct LinearCodec {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix encoder;  // bottleneck x input
  Matrix decoder;  // input x bottleneck

  Eigen::Index input_dim() const { return encoder.cols(); }
  Eigen::Index bottleneck_dim() const { return encoder.rows(); }

  static LinearCodec zero(Eigen::Index input, Eigen::Index bottleneck) {
    if (bottleneck > input || bottleneck < 1) {
      throw DimensionError("LinearCodec: need 1 <= bottleneck <= input");
    }
    return {Matrix::Zero(bottleneck, input), Matrix::Zero(input, bottleneck)};
  }

  // Columns of `frames` are samples.
  Matrix reconstruct(const Matrix& frames) const { return decoder * (encoder * frames); }
};

template <typename Scalar>
struct CodecGradient {
  typename LinearCodec<Scalar>::Matrix encoder;
  typename LinearCodec<Scalar>::Matrix decoder;
};

namespace detail {

template <typename Scalar>
void check_frames(const LinearCodec<Scalar>& codec,
                  const typename LinearCodec<Scalar>::Matrix& frames) {
  if (codec.decoder.rows() != codec.encoder.cols() ||
      codec.decoder.cols() != codec.encoder.rows()) {
    throw DimensionError("LinearCodec: encoder and decoder shapes disagree");
  }
  if (frames.rows() != codec.input_dim()) {
    throw DimensionError("LinearCodec: frame dimension does not match the codec input");
  }
}

}  // namespace detail

// Mean over all entries of (x - x_hat)^2. Zero frames give zero.
template <typename Scalar>
Scalar reconstruction_mse(const LinearCodec<Scalar>& codec,
                          const typename LinearCodec<Scalar>::Matrix& frames) {
  detail::check_frames(codec, frames);
  if (frames.size() == 0) return Scalar(0);
  return (codec.reconstruct(frames) - frames).squaredNorm() / Scalar(frames.size());
}

// Exact gradient of reconstruction_mse. With R = W2 W1 X - X and c = 2/|X|:
//   dL/dW2 = c R (W1 X)^T,   dL/dW1 = c W2^T R X^T.
template <typename Scalar>
CodecGradient<Scalar> mse_gradient(const LinearCodec<Scalar>& codec,
                                   const typename LinearCodec<Scalar>::Matrix& frames) {
  detail::check_frames(codec, frames);
  using Matrix = typename LinearCodec<Scalar>::Matrix;
  if (frames.size() == 0) {
    return {Matrix::Zero(codec.encoder.rows(), codec.encoder.cols()),
            Matrix::Zero(codec.decoder.rows(), codec.decoder.cols())};
  }
  const Scalar c = Scalar(2) / Scalar(frames.size());
  const Matrix code = codec.encoder * frames;
  const Matrix residual = codec.decoder * code - frames;
  return {c * codec.decoder.transpose() * residual * frames.transpose(),
          c * residual * code.transpose()};
}

struct FinetuneReport {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double final_alpha = 0.0;
  std::vector<double> losses;  // loss after each accepted step
};

// Runs `steps` updates  params <- params - alpha * grad MSE(frames).
// A step that would raise the loss is rejected and alpha halved, so the
// recorded losses never increase. Throws DivergenceError on a non-finite
// loss and DimensionError on shape mismatch.
template <typename Scalar>
LinearCodec<Scalar> finetune_codec(const LinearCodec<Scalar>& pretrained,
                                   const typename LinearCodec<Scalar>::Matrix& frames,
                                   int steps, Scalar alpha, FinetuneReport* report = nullptr) {
  detail::check_frames(pretrained, frames);
  if (!(alpha >= 0)) throw DomainError("finetune_codec: alpha must be >= 0");
  LinearCodec<Scalar> codec = pretrained;
  Scalar loss = reconstruction_mse(codec, frames);
  if (!std::isfinite(static_cast<double>(loss))) {
    throw DivergenceError(0, "non-finite initial loss");
  }
  FinetuneReport local;
  local.initial_loss = static_cast<double>(loss);
  for (int step = 1; step <= steps && alpha > 0; ++step) {
    const CodecGradient<Scalar> g = mse_gradient(codec, frames);
    for (;;) {
      LinearCodec<Scalar> trial{codec.encoder - alpha * g.encoder,
                                codec.decoder - alpha * g.decoder};
      const Scalar trial_loss = reconstruction_mse(trial, frames);
      if (!std::isfinite(static_cast<double>(trial_loss))) {
        throw DivergenceError(step, "non-finite loss");
      }
      if (trial_loss <= loss) {
        codec = std::move(trial);
        loss = trial_loss;
        break;
      }
      alpha /= 2;
      if (alpha < std::numeric_limits<Scalar>::min()) break;
    }
    local.losses.push_back(static_cast<double>(loss));
  }
  local.final_loss = static_cast<double>(loss);
  local.final_alpha = static_cast<double>(alpha);
  if (report) *report = std::move(local);
  return codec;
}

// Worst discrepancy between the analytic gradient and central differences
// with step h, relative to the largest gradient magnitude. Returns 0 when
// both gradients vanish.
template <typename Scalar>
Scalar gradient_check(const LinearCodec<Scalar>& codec,
                      const typename LinearCodec<Scalar>::Matrix& frames, Scalar h = Scalar(1e-5)) {
  const CodecGradient<Scalar> analytic = mse_gradient(codec, frames);
  Scalar worst = 0;
  Scalar scale = 0;
  auto probe = [&](bool on_encoder) {
    const auto& target = on_encoder ? analytic.encoder : analytic.decoder;
    for (Eigen::Index r = 0; r < target.rows(); ++r) {
      for (Eigen::Index c = 0; c < target.cols(); ++c) {
        LinearCodec<Scalar> plus = codec;
        LinearCodec<Scalar> minus = codec;
        (on_encoder ? plus.encoder : plus.decoder)(r, c) += h;
        (on_encoder ? minus.encoder : minus.decoder)(r, c) -= h;
        const Scalar numeric =
            (reconstruction_mse(plus, frames) - reconstruction_mse(minus, frames)) / (2 * h);
        worst = std::max(worst, std::abs(numeric - target(r, c)));
        scale = std::max({scale, std::abs(numeric), std::abs(target(r, c))});
      }
    }
  };
  probe(true);
  probe(false);
  return scale > 0 ? worst / scale : Scalar(0);
}

// Joint probability table; rows index D_f, columns index D_p.
template <typename Scalar>
using EmpiricalJoint = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Derived>
void check_distribution(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.size() == 0) throw DomainError("distribution is empty");
  if (!p.allFinite() || (p.array() < Scalar(0)).any()) {
    throw DomainError("distribution has negative or non-finite mass");
  }
  if (std::abs(p.sum() - Scalar(1)) > Scalar(1e-12)) {
    throw DomainError("distribution does not sum to 1");
  }
}

template <typename Scalar>
Scalar plogp(Scalar p) {
  return p > Scalar(0) ? p * std::log2(p) : Scalar(0);
}

}  // namespace detail

// Shannon entropy in bits of a probability vector (or any table).
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p) {
  detail::check_distribution(p);
  using Scalar = typename Derived::Scalar;
  Scalar h = 0;
  for (Eigen::Index k = 0; k < p.size(); ++k) h -= detail::plogp(p.reshaped()(k));
  return h;
}

// I(D_f; D_p) = sum p(f,p) log2 [p(f,p) / (p(f) p(p))].
template <typename Scalar>
Scalar mutual_information(const EmpiricalJoint<Scalar>& joint) {
  detail::check_distribution(joint);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pf = joint.rowwise().sum();
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pp = joint.colwise().sum();
  Scalar mi = 0;
  for (Eigen::Index f = 0; f < joint.rows(); ++f) {
    for (Eigen::Index q = 0; q < joint.cols(); ++q) {
      const Scalar pj = joint(f, q);
      if (pj > Scalar(0)) mi += pj * std::log2(pj / (pf(f) * pp(q)));
    }
  }
  return std::max(mi, Scalar(0));
}

// H(D_f | D_p) from the joint directly: -sum p(f,p) log2 p(f | p).
template <typename Scalar>
Scalar conditional_entropy(const EmpiricalJoint<Scalar>& joint) {
  detail::check_distribution(joint);
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pp = joint.colwise().sum();
  Scalar h = 0;
  for (Eigen::Index f = 0; f < joint.rows(); ++f) {
    for (Eigen::Index q = 0; q < joint.cols(); ++q) {
      const Scalar pj = joint(f, q);
      if (pj > Scalar(0)) h -= pj * std::log2(pj / pp(q));
    }
  }
  return std::max(h, Scalar(0));
}

template <typename Scalar>
Scalar marginal_entropy_future(const EmpiricalJoint<Scalar>& joint) {
  return entropy(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(joint.rowwise().sum()));
}

// AR(1) frame sequence x_t = c x_{t-1} + sqrt(1 - c^2) M z_t with z_t
// standard normal; `mixing` (dim x dim) shapes the stationary covariance.
Eigen::MatrixXd correlated_frames(const Eigen::MatrixXd& mixing, int count, double correlation,
                                  std::uint64_t seed);

// Low-rank scene mixing: `rank` random directions plus isotropic noise.
Eigen::MatrixXd scene_mixing(int dim, int rank, double noise, std::uint64_t seed);

// Codec with small random weights.
LinearCodec<double> random_codec(int input, int bottleneck, double scale, std::uint64_t seed);

}  // namespace tmac
