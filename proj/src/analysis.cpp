#include "apnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apnet {

double weighted_average(const Matrix& k2, const Vector& c) {
  const double total = k2.sum();
  if (total < kActiveSensingFloor) throw NoActiveSensing();
  return (k2 * c).sum() / total;
}

Vector delta(const Vector& x, double epsilon) { return x.array() - epsilon; }

Matrix l_c(const Matrix& k1, const Matrix& k2) {
  const double total = k2.sum();
  if (total < kActiveSensingFloor) throw NoActiveSensing();
  const Eigen::Index n = k1.rows();
  const Vector k1_ones = k1 * Vector::Ones(n);
  return k1_ones * Vector::Ones(n).transpose() / total - Matrix::Identity(n, n);
}

Matrix k_c(const Matrix& k1, const Matrix& k2) { return l_c(k1, k2) * k2; }

Vector integral_error(const Vector& xi, double alpha, const Matrix& l_pinv, const Matrix& kc,
                      const Vector& c) {
  return xi - alpha * (l_pinv * (kc * c));
}

ErrorCoordinates error_coordinates(const NetworkState& s, const Matrix& k2, const Vector& c,
                                   const Matrix& l_pinv, double alpha) {
  const Matrix k1 = k2.rowwise().sum().asDiagonal();
  ErrorCoordinates ec;
  ec.epsilon = weighted_average(k2, c);
  ec.delta = delta(s.x, ec.epsilon);
  ec.e = integral_error(s.xi, alpha, l_pinv, k_c(k1, k2), c);
  return ec;
}

double lyapunov(const Vector& delta, const Vector& e, const Gains& gains) {
  return delta.squaredNorm() / (2.0 * gains.alpha) +
         e.squaredNorm() / (2.0 * gains.alpha * gains.gamma);
}

double lyapunov_rate(const Matrix& L, const Matrix& k1, const Vector& delta, const Vector& e,
                     const Vector& s1, const Vector& s2, const Gains& gains) {
  const double a = gains.alpha;
  return -delta.dot((L + k1) * delta) - (gains.sigma / a) * e.squaredNorm() + delta.dot(s1) / a +
         e.dot(s2) / (a * gains.gamma);
}

namespace {

Matrix kc_at(const SensingModel& model, double t) {
  const Matrix k2 = model.k2(t);
  const Matrix k1 = k2.rowwise().sum().asDiagonal();
  return k_c(k1, k2);
}

}  // namespace

Perturbations perturbations(const SensingModel& model, const Gains& gains, const Matrix& l_pinv,
                            double t, double h_fd, Horizon horizon) {
  const auto n = static_cast<Eigen::Index>(model.agents());
  auto eps_of = [&](double tt) { return weighted_average(model.k2(tt), model.inputs_at(tt)); };
  auto kc_of = [&](double tt) { return kc_at(model, tt); };
  auto c_of = [&](double tt) { return model.inputs_at(tt); };

  const Vector c = model.inputs_at(t);
  const Matrix kc = kc_at(model, t);
  const Matrix kc_dot = finite_difference(kc_of, t, h_fd, horizon);
  const Vector c_dot = finite_difference(c_of, t, h_fd, horizon);

  const Vector drive = l_pinv * (kc * c);
  const Vector drive_rate = l_pinv * (kc_dot * c + kc * c_dot);

  Perturbations p;
  p.eps_dot = finite_difference(eps_of, t, h_fd, horizon);
  p.s1 = Vector::Constant(n, -p.eps_dot);
  p.s2 = -gains.alpha * gains.gamma * gains.sigma * drive - gains.alpha * drive_rate;
  p.p1 = drive.norm();
  p.p2 = drive_rate.norm();
  return p;
}

Decomposition decompose_k1(std::span<const Vector> k1_diagonals) {
  if (k1_diagonals.empty()) throw DecompositionInfeasible("no K1 samples to decompose");
  const Eigen::Index n = k1_diagonals.front().size();
  Vector infimum = k1_diagonals.front();
  for (const Vector& d : k1_diagonals) infimum = infimum.cwiseMin(d);

  Decomposition out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (infimum(i) > 0.0 && infimum(i) > out.phi) {
      out.phi = infimum(i);
      out.index = static_cast<int>(i);
    }
  }
  if (out.index < 0) {
    throw DecompositionInfeasible("no agent keeps a positive total weight over the horizon");
  }
  out.k0 = Vector::Zero(n);
  out.k0(out.index) = out.phi;
  out.k_tilde.reserve(k1_diagonals.size());
  for (const Vector& d : k1_diagonals) out.k_tilde.push_back(d - out.k0);
  return out;
}

std::vector<Vector> sample_k1(const SensingModel& model, std::span<const double> times) {
  std::vector<Vector> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(model.k2(t).rowwise().sum());
  return out;
}

SignalSuprema signal_suprema(const SensingModel& model, const Gains& gains, const Matrix& l_pinv,
                             std::span<const double> times, double h_fd, Horizon horizon) {
  SignalSuprema sup;
  for (double t : times) {
    try {
      const Perturbations p = perturbations(model, gains, l_pinv, t, h_fd, horizon);
      sup.eps_dot = std::max(sup.eps_dot, std::abs(p.eps_dot));
      sup.p1 = std::max(sup.p1, p.p1);
      sup.p2 = std::max(sup.p2, p.p2);
      sup.s2 = std::max(sup.s2, p.s2.norm());
    } catch (const NoActiveSensing&) {
      ++sup.skipped;
    }
  }
  return sup;
}

double bound_expression(std::size_t n, const Gains& gains, double lambda_min_f, double eps_dot,
                        double p1, double p2) {
  const double a = gains.alpha;
  const double g = gains.gamma;
  const double nn = static_cast<double>(n);
  const double consensus = nn * nn * eps_dot * eps_dot / (a * a * lambda_min_f * lambda_min_f);
  if (gains.sigma == 0.0) {
    if (p1 > kNegligibleSignal || p2 > kNegligibleSignal) {
      throw BoundUndefined("ultimate bound undefined: sigma = 0 with nonzero drive terms (p1*=" +
                           std::to_string(p1) + ", p2*=" + std::to_string(p2) + ")");
    }
    return consensus;
  }
  const double gs = g * gains.sigma;
  return consensus + (a * a / g) * (p1 * p1 + 2.0 * p1 * p2 / gs + p2 * p2 / (gs * gs));
}

BoundEstimate ultimate_bound(const Matrix& L, const Gains& gains, const Decomposition& decomposition,
                             const SignalSuprema& suprema) {
  const auto n = static_cast<std::size_t>(L.rows());
  BoundEstimate b;
  b.eps_dot_star = suprema.eps_dot;
  b.p1_star = suprema.p1;
  b.p2_star = suprema.p2;
  b.s1_star = std::sqrt(static_cast<double>(n)) * suprema.eps_dot;
  b.s2_star = suprema.s2;
  b.lambda_min_f = f_matrix_min_eig(L, decomposition.k0);
  if (!(b.lambda_min_f > 0.0)) {
    throw DecompositionInfeasible("lambda_min(L + K0) is not positive");
  }
  b.bound = bound_expression(n, gains, b.lambda_min_f, b.eps_dot_star, b.p1_star, b.p2_star);
  return b;
}

ClosedFormSuprema closed_form_suprema(SignalRegime which, const SensingModel& model,
                                   const Matrix& l_pinv, std::span<const double> times, double h_fd,
                                   Horizon horizon, double constancy_tol) {
  if (times.empty()) throw std::invalid_argument("closed_form_suprema: no sample times");
  const auto n = static_cast<Eigen::Index>(model.agents());
  const Vector ones = Vector::Ones(n);
  auto c_of = [&](double tt) { return model.inputs_at(tt); };
  auto k2_of = [&](double tt) { return model.k2(tt); };
  auto kc_of = [&](double tt) { return kc_at(model, tt); };

  ClosedFormSuprema out;
  if (which == SignalRegime::VaryingInputsConstantWeights) {
    const Matrix k2 = model.k2(times.front());
    for (double t : times) {
      if ((model.k2(t) - k2).cwiseAbs().maxCoeff() > constancy_tol) {
        throw std::invalid_argument("weights vary at t=" + std::to_string(t) +
                                    "; constant-weight closed form does not apply");
      }
      out.c_star = std::max(out.c_star, model.inputs_at(t).norm());
      out.c_dot_star = std::max(out.c_dot_star, finite_difference(c_of, t, h_fd, horizon).norm());
    }
    const double total = k2.sum();
    if (total < kActiveSensingFloor) throw NoActiveSensing();
    const Matrix k1 = k2.rowwise().sum().asDiagonal();
    const Matrix kc = k_c(k1, k2);
    const double drive_norm = (l_pinv * kc).norm();  // Frobenius
    out.k_star = kc.norm();
    out.eps_dot = out.c_dot_star * (ones.transpose() * k2).norm() / total;
    out.p1 = out.c_star * drive_norm;
    out.p2 = out.c_dot_star * drive_norm;
    return out;
  }

  const Vector c = model.inputs_at(times.front());
  for (double t : times) {
    if ((model.inputs_at(t) - c).cwiseAbs().maxCoeff() > constancy_tol) {
      throw std::invalid_argument("inputs vary at t=" + std::to_string(t) +
                                  "; constant-input closed form does not apply");
    }
    const Matrix k2 = model.k2(t);
    const double total = k2.sum();
    if (total < kActiveSensingFloor) throw NoActiveSensing();
    const Matrix k2_dot = finite_difference(k2_of, t, h_fd, horizon);
    const double num = (ones.transpose() * k2).dot(ones * ones.dot(k2_dot * c) - c * ones.dot(k2_dot * ones));
    out.eps_dot = std::max(out.eps_dot, std::abs(num) / (total * total));
    out.k_star = std::max(out.k_star, kc_at(model, t).norm());
    out.k_dot_star = std::max(out.k_dot_star, finite_difference(kc_of, t, h_fd, horizon).norm());
  }
  out.c_star = c.norm();
  const double scale = l_pinv.norm() * c.norm();
  out.p1 = scale * out.k_star;
  out.p2 = scale * out.k_dot_star;
  return out;
}

Settling empirical_settling(std::span<const double> times, std::span<const double> delta_sq,
                            std::span<const char> valid) {
  Settling s;
  if (times.empty()) return s;
  const double midpoint = times.front() + 0.5 * (times.back() - times.front());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (valid[k] && times[k] >= midpoint) s.level = std::max(s.level, delta_sq[k]);
  }
  std::size_t start = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (valid[k] && delta_sq[k] > s.level) start = k + 1;
  }
  start = std::min(start, times.size() - 1);
  s.time = times[start];
  for (std::size_t k = start; k < times.size(); ++k) {
    if (valid[k]) s.sup_after = std::max(s.sup_after, delta_sq[k]);
  }
  return s;
}

}  // namespace apnet
