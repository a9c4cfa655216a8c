#include "risac/fp_core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace risac {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_user(const CMat& composite, int k) {
  if (k < 0 || k >= composite.cols())
    throw std::out_of_range("user index out of range");
}

}  // namespace

double sinr(const CMat& composite, const CMat& W, int k, double noise_k) {
  check_user(composite, k);
  CVec gains = W.transpose() * composite.col(k);  // h_k^T w_j for all j
  double num = std::norm(gains(k));
  double den = noise_k + gains.squaredNorm() - num;
  return num / den;
}

double sinr(const ChannelSet& cs, const CVec& phi, const CMat& W, int k,
            double noise_k) {
  return sinr(composite_user_channels(cs, phi), W, k, noise_k);
}

double sum_rate(const CMat& composite, const CMat& W,
                const std::vector<double>& user_noise) {
  double total = 0.0;
  for (int k = 0; k < composite.cols(); ++k)
    total += std::log2(1.0 + sinr(composite, W, k, user_noise.at(k)));
  return total;
}

double sum_rate(const ChannelSet& cs, const CVec& phi, const CMat& W,
                const std::vector<double>& user_noise) {
  return sum_rate(composite_user_channels(cs, phi), W, user_noise);
}

RVec optimal_ratios(const CMat& composite, const CMat& W,
                    const std::vector<double>& user_noise) {
  RVec r(composite.cols());
  for (int k = 0; k < composite.cols(); ++k)
    r(k) = sinr(composite, W, k, user_noise.at(k));
  return r;
}

CVec optimal_scales(const CMat& composite, const CMat& W, const RVec& ratios,
                    const std::vector<double>& user_noise) {
  CVec c(composite.cols());
  for (int k = 0; k < composite.cols(); ++k) {
    CVec gains = W.transpose() * composite.col(k);
    double den = user_noise.at(k) + gains.squaredNorm();
    c(k) = std::sqrt(1.0 + ratios(k)) * gains(k) / den;
  }
  return c;
}

double transformed_objective(const CMat& composite, const CMat& W,
                             const AuxiliaryState& aux,
                             const std::vector<double>& user_noise) {
  double logs = 0.0;
  double rest = 0.0;
  for (int k = 0; k < composite.cols(); ++k) {
    CVec gains = W.transpose() * composite.col(k);
    double r = aux.ratios(k);
    Complex c = aux.scales(k);
    logs += std::log2(1.0 + r);
    rest -= r;
    rest -= std::norm(c) * user_noise.at(k);
    rest += 2.0 * std::sqrt(1.0 + r) * (std::conj(c) * gains(k)).real();
    rest -= std::norm(c) * gains.squaredNorm();
  }
  return logs + rest / kLn2;
}

CompactForms assemble_compact(const ChannelSet& cs, const CVec& phi,
                              const CMat& W, const AuxiliaryState& aux,
                              const std::vector<double>& user_noise) {
  const int m = cs.antennas;
  const int k_users = cs.users;
  const int cols = static_cast<int>(W.cols());
  const int n = cs.ris_elements;
  const CMat composite = composite_user_channels(cs, phi);

  CompactForms cf;
  cf.w_linear = CVec::Zero(m * cols);
  cf.w_rows = CMat::Zero(k_users * cols, m * cols);
  cf.phi_linear = CVec::Zero(n);
  cf.phi_quad = CMat::Zero(n, n);

  double logs = 0.0;
  double base = 0.0;    // terms shared by both constants
  double direct = 0.0;  // extra direct-link terms entering phi_const

  for (int k = 0; k < k_users; ++k) {
    double r = aux.ratios(k);
    Complex c = aux.scales(k);
    double root = std::sqrt(1.0 + r);
    double c2 = std::norm(c);

    logs += std::log2(1.0 + r);
    base -= r + c2 * user_noise.at(k);

    cf.w_linear.segment(k * m, m) = 2.0 * root * c * composite.col(k).conjugate();
    for (int j = 0; j < cols; ++j)
      cf.w_rows.block(k * cols + j, j * m, 1, m) =
          std::abs(c) * composite.col(k).transpose();

    // Reflection-side pieces built from the split h_k^T w_j =
    // alpha_kj + q_kj^T phi with q_kj = diag(G w_j) h_rk.
    for (int j = 0; j < cols; ++j) {
      CVec q = (cs.bs_ris * W.col(j)).cwiseProduct(cs.ris_user[k]);
      Complex alpha = tdot(cs.bs_user[k], W.col(j));
      if (j == k) cf.phi_linear += 2.0 * root * c * q.conjugate();
      cf.phi_linear -= 2.0 * c2 * alpha * q.conjugate();
      cf.phi_quad.noalias() += c2 * (q.conjugate() * q.transpose());
      direct -= c2 * std::norm(alpha);
      if (j == k) direct += 2.0 * root * (std::conj(c) * alpha).real();
    }
  }

  cf.w_const = logs + base / kLn2;
  cf.phi_const = cf.w_const + direct / kLn2;
  return cf;
}

double w_form_value(const CompactForms& cf, const CVec& w) {
  double lin = (cf.w_linear.dot(w)).real();
  double quad = (cf.w_rows * w).squaredNorm();
  return (lin - quad) / kLn2 + cf.w_const;
}

double phi_form_value(const CompactForms& cf, const CVec& phi) {
  double lin = (cf.phi_linear.dot(phi)).real();
  double quad = (phi.adjoint() * cf.phi_quad * phi).value().real();
  return (lin - quad) / kLn2 + cf.phi_const;
}

}  // namespace risac
