#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "cptest/kernels.hpp"
#include "cptest/matrix.hpp"
#include "cptest/rng.hpp"

namespace cptest {

/// Spatial covariance V of the noise: identity, compound symmetry
/// V = load * J + diag * I, or autoregressive V_ij = rho^|i-j|.
struct CovarianceSpec {
  enum class Kind { Identity, Compound, AR };

  Kind kind = Kind::Identity;
  Index p = 1;
  double load = 0.8;
  double diag = 0.2;
  double rho = 0.8;

  static CovarianceSpec identity(Index p) {
    CovarianceSpec s;
    s.kind = Kind::Identity;
    s.p = p;
    return s;
  }
  static CovarianceSpec compound(Index p, double load = 0.8, double diag = 0.2) {
    CovarianceSpec s;
    s.kind = Kind::Compound;
    s.p = p;
    s.load = load;
    s.diag = diag;
    return s;
  }
  static CovarianceSpec ar(Index p, double rho = 0.8) {
    CovarianceSpec s;
    s.kind = Kind::AR;
    s.p = p;
    s.rho = rho;
    return s;
  }

  void validate() const {
    if (p < 1) throw InvalidParameter("covariance dimension p must be >= 1");
    if (kind == Kind::Compound && !(load >= 0.0 && diag > 0.0)) {
      throw InvalidParameter("compound covariance needs load >= 0 and diag > 0");
    }
    if (kind == Kind::AR && !(std::abs(rho) < 1.0)) {
      throw InvalidParameter("AR covariance needs |rho| < 1");
    }
  }

  Matrix dense() const {
    validate();
    switch (kind) {
      case Kind::Identity:
        return Matrix::Identity(p, p);
      case Kind::Compound:
        return Matrix(load * Matrix::Ones(p, p) + diag * Matrix::Identity(p, p));
      case Kind::AR: {
        Matrix v(p, p);
        for (Index i = 0; i < p; ++i) {
          for (Index j = 0; j < p; ++j) v(i, j) = std::pow(rho, std::abs(i - j));
        }
        return v;
      }
    }
    throw InvalidParameter("unknown covariance kind");
  }

  std::string name() const {
    switch (kind) {
      case Kind::Identity: return "identity";
      case Kind::Compound: return "compound";
      case Kind::AR: return "ar";
    }
    return "unknown";
  }
};

/// Lower-triangular L with L L^T = V.
inline Matrix cov_factor(const CovarianceSpec& spec) {
  spec.validate();
  if (spec.kind == CovarianceSpec::Kind::Identity) {
    return Matrix::Identity(spec.p, spec.p);
  }
  Eigen::LLT<Matrix> llt(spec.dense());
  if (llt.info() != Eigen::Success) {
    throw InvalidParameter("covariance parameterization is not positive definite");
  }
  return Matrix(llt.matrixL());
}

/// Noise family of the i.i.d. xi_i. Defaults match the shipped scenario
/// presets: t with nu = 6; contaminated Gaussian with eps = 0.2, scale 2.
struct NoiseSpec {
  enum class Kind { Gaussian, StudentT, ContaminatedGaussian, Cauchy };

  Kind kind = Kind::Gaussian;
  double nu = 6.0;   // StudentT: degrees of freedom; Contaminated: scale factor
  double eps = 0.2;  // Contaminated: mixing probability

  static NoiseSpec gaussian() { return NoiseSpec{}; }
  static NoiseSpec student_t(double nu = 6.0) {
    NoiseSpec s;
    s.kind = Kind::StudentT;
    s.nu = nu;
    return s;
  }
  static NoiseSpec contaminated_gaussian(double eps = 0.2, double nu = 2.0) {
    NoiseSpec s;
    s.kind = Kind::ContaminatedGaussian;
    s.eps = eps;
    s.nu = nu;
    return s;
  }
  static NoiseSpec cauchy() {
    NoiseSpec s;
    s.kind = Kind::Cauchy;
    return s;
  }

  void validate() const {
    if (kind == Kind::StudentT && !(nu > 2.0)) {
      throw InvalidParameter("elliptical t noise needs nu > 2");
    }
    if (kind == Kind::ContaminatedGaussian &&
        !(eps > 0.0 && eps < 1.0 && nu > 0.0)) {
      throw InvalidParameter("contaminated Gaussian needs eps in (0,1) and nu > 0");
    }
  }

  std::string name() const {
    switch (kind) {
      case Kind::Gaussian: return "gaussian";
      case Kind::StudentT: return "student_t";
      case Kind::ContaminatedGaussian: return "contaminated_gaussian";
      case Kind::Cauchy: return "cauchy";
    }
    return "unknown";
  }
};

/// Draws n noise rows with spatial factor L (L L^T = V):
///   Gaussian       L z,  z ~ N(0, I_p)
///   StudentT(nu)   L z * sqrt(nu / w), one w ~ chi^2_nu per observation
///                  (elliptical: the chi-square is shared across coordinates)
///   Contaminated   L z, scaled by nu with probability eps
///   Cauchy         L eta, eta_j i.i.d. standard Cauchy via tan(pi(u - 1/2))
/// Draw order is row-major with per-row auxiliaries drawn right after the
/// row, so a (spec, seed) pair always yields the same matrix.
inline Matrix sample_noise(const NoiseSpec& noise, const Matrix& factor, Index n,
                           std::mt19937_64& engine) {
  noise.validate();
  if (n < 1) throw InvalidParameter("sample size must be >= 1");
  if (factor.rows() != factor.cols() || factor.rows() < 1) {
    throw DimensionMismatch("covariance factor must be square");
  }
  const Index p = factor.rows();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix z(n, p);
  Vector row_scale = Vector::Ones(n);
  switch (noise.kind) {
    case NoiseSpec::Kind::Gaussian:
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) z(i, j) = normal(engine);
      }
      break;
    case NoiseSpec::Kind::StudentT: {
      std::gamma_distribution<double> chi2(noise.nu / 2.0, 2.0);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) z(i, j) = normal(engine);
        double w = std::max(chi2(engine), std::numeric_limits<double>::min());
        row_scale(i) = std::sqrt(noise.nu / w);
      }
      break;
    }
    case NoiseSpec::Kind::ContaminatedGaussian:
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) z(i, j) = normal(engine);
        if (uniform(engine) < noise.eps) row_scale(i) = noise.nu;
      }
      break;
    case NoiseSpec::Kind::Cauchy:
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < p; ++j) {
          z(i, j) = std::tan(std::numbers::pi * (uniform(engine) - 0.5));
        }
      }
      break;
  }

  Matrix x = z * factor.transpose();
  if (noise.kind == NoiseSpec::Kind::StudentT ||
      noise.kind == NoiseSpec::Kind::ContaminatedGaussian) {
    x.array().colwise() *= row_scale.array();
  }
  return x;
}

/// Location-shift model: rows with index i > m (1-based) get theta added.
inline DataMatrix apply_shift(Matrix noise, Index m, const Vector& theta) {
  const Index n = noise.rows();
  const Index p = noise.cols();
  if (theta.size() != p) {
    throw DimensionMismatch("shift vector dimension must equal p");
  }
  if (m < 1 || m > n - 1) {
    throw InvalidParameter("change location m must lie in [1, n-1]");
  }
  noise.bottomRows(n - m).rowwise() += theta.transpose();
  return DataMatrix{std::move(noise)};
}

/// One Monte Carlo scenario. m unset with a zero/empty theta is the null
/// configuration; setting exactly one of them is rejected.
struct ScenarioConfig {
  std::string id = "scenario";
  NoiseSpec noise;
  CovarianceSpec cov = CovarianceSpec::identity(20);
  Index n = 100;
  Index p = 20;
  std::optional<Index> m;
  Vector theta;  // empty means zero shift
  Index B = 200;
  Index reps = 500;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  KernelKind kernel = KernelKind::Linear;
  Index boundary = 40;  // cusum comparisons only

  bool theta_is_zero() const {
    return theta.size() == 0 || theta.cwiseAbs().maxCoeff() == 0.0;
  }
  bool is_null() const { return !m.has_value(); }
  double theta_max() const { return theta.size() == 0 ? 0.0 : theta.cwiseAbs().maxCoeff(); }

  void validate() const {
    noise.validate();
    cov.validate();
    if (n < 2) throw InvalidParameter("scenario needs n >= 2");
    if (p < 1) throw InvalidParameter("scenario needs p >= 1");
    if (cov.p != p) throw InvalidParameter("covariance dimension must equal p");
    if (theta.size() != 0 && theta.size() != p) {
      throw DimensionMismatch("theta must be empty or have dimension p");
    }
    if (theta.size() != 0 && !theta.allFinite()) {
      throw InvalidParameter("theta must be finite");
    }
    if (m.has_value() == theta_is_zero()) {
      throw InvalidParameter("m and a nonzero theta must be set together (H0 has neither)");
    }
    if (m && (*m < 1 || *m > n - 1)) {
      throw InvalidParameter("change location m must lie in [1, n-1]");
    }
    if (B < 1) throw InvalidParameter("scenario needs B >= 1");
    if (reps < 1) throw InvalidParameter("scenario needs reps >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0,1)");
  }
};

/// Binds a scenario to its (factored once) covariance; generate() is a pure
/// function of the data seed.
class ScenarioSampler {
 public:
  explicit ScenarioSampler(ScenarioConfig config) : config_(std::move(config)) {
    config_.validate();
    factor_ = cov_factor(config_.cov);
  }

  const ScenarioConfig& config() const { return config_; }

  DataMatrix generate(std::uint64_t data_seed) const {
    auto engine = make_engine(data_seed);
    Matrix noise = sample_noise(config_.noise, factor_, config_.n, engine);
    if (config_.m) {
      return apply_shift(std::move(noise), *config_.m, config_.theta);
    }
    return DataMatrix::checked(std::move(noise));
  }

 private:
  ScenarioConfig config_;
  Matrix factor_;
};

}  // namespace cptest
