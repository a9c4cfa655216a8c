#pragma once

#include "risac/channels.hpp"
#include "risac/types.hpp"

namespace risac {

/// Per-user auxiliaries of the fractional-programming transform.
struct AuxiliaryState {
  RVec ratios;   // one per user, equals the SINR at the optimum
  CVec scales;   // complex quadratic-transform multipliers
};

/// Quadratic surrogate of the transformed objective in each block variable.
/// The beamformer sees  value = (Re{a^H w} - |Bw|^2) / ln2 + w_const  and the
/// reflection sees      value = (Re{g^H phi} - phi^H D phi) / ln2 + phi_const,
/// where a = w_linear, B = w_rows, g = phi_linear, D = phi_quad. The 1/ln2
/// keeps both equal to the bits-scaled objective; scaling does not move the
/// block minimizers.
struct CompactForms {
  CVec w_linear;    // length antennas * columns, zero on radar columns
  CMat w_rows;      // users*columns rows, stacked |c_k| h_k^T per column slot
  double w_const = 0.0;
  CVec phi_linear;  // length ris_elements
  CMat phi_quad;    // Hermitian PSD
  double phi_const = 0.0;
};

/// W carries one column per stream (users first, then radar); extra or fewer
/// columns are allowed so the kernels stay testable in isolation.
double sinr(const CMat& composite, const CMat& W, int k, double noise_k);
double sinr(const ChannelSet& cs, const CVec& phi, const CMat& W, int k,
            double noise_k);

double sum_rate(const CMat& composite, const CMat& W,
                const std::vector<double>& user_noise);
double sum_rate(const ChannelSet& cs, const CVec& phi, const CMat& W,
                const std::vector<double>& user_noise);

/// Ratio auxiliaries at their block optimum (the current SINRs).
RVec optimal_ratios(const CMat& composite, const CMat& W,
                    const std::vector<double>& user_noise);

/// Quadratic-transform auxiliaries at their block optimum. The denominator
/// sums over every column including the user's own.
CVec optimal_scales(const CMat& composite, const CMat& W, const RVec& ratios,
                    const std::vector<double>& user_noise);

/// Transformed objective; coincides with sum_rate when both auxiliaries sit
/// at their block optimum and lower-bounds it otherwise.
double transformed_objective(const CMat& composite, const CMat& W,
                             const AuxiliaryState& aux,
                             const std::vector<double>& user_noise);

CompactForms assemble_compact(const ChannelSet& cs, const CVec& phi,
                              const CMat& W, const AuxiliaryState& aux,
                              const std::vector<double>& user_noise);

double w_form_value(const CompactForms& cf, const CVec& w);
double phi_form_value(const CompactForms& cf, const CVec& phi);

}  // namespace risac
