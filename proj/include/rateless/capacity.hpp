#pragma once

#include <vector>

#include "rateless/gain_matrix.hpp"
#include "rateless/types.hpp"

namespace rateless {

/// SNR seen through a channel of squared gain |alpha|^2: P |alpha|^2 / sigma^2.
double snr_from_gain(double gain_sq, const CodeSpec& spec);

/// Smallest |alpha_m|^2 allowing decoding from exactly m blocks with an
/// unconstrained code: solves R = m log2(1 + |alpha_m|^2 P / sigma^2).
double ideal_threshold_gain_sq(int m, const CodeSpec& spec);

/// Threshold forced by combining only L layers: equals the ideal value for
/// m <= L and (2^{R/L} - 1) (L/m) sigma^2 / P beyond.
double layered_threshold_gain_sq(int m, const CodeSpec& spec);

/// 10 log10(|alpha'_m|^2 / |alpha_m|^2); zero for m <= layers.
double layering_loss_db(int m, int layers, double rate);

/// Limit of the threshold ratio as m grows: (2^{R/L} - 1) / ((R/L) ln 2).
double asymptotic_layering_loss(double rate, double layers);

/// log2 det(I + a G_{m,l} G_{m,l}^H) with a = gain_sq / noise_var.
double gaussian_mi_bits(const GainMatrix& g, int m, int l, double gain_sq,
                        double noise_var);

/// Mutual information accumulated by layer l after m blocks under successive
/// decoding: the log-det ratio between the (m,l) and (m,l-1) submatrices.
double accumulated_layer_mi(const GainMatrix& g, int m, int l, double gain_sq,
                            double noise_var);

/// Decodable-rate thresholds R, R k/(k+1), ..., R k/M when a rate-kR design
/// is decoded starting from k accumulated blocks.
std::vector<double> kappa_rate_schedule(double rate, double kappa, int blocks);

}  // namespace rateless
