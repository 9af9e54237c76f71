#pragma once

#include <vector>

#include "ilsuite/approx/params.hpp"

namespace ilsuite {

/// Fully connected network: tanh after every hidden layer, identity at the output.
/// weights[k] maps layer k activations (rows = outputs, cols = inputs).
struct MlpParams {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  double dropout_rate = 0.0;  ///< in [0, 1); applied after each hidden tanh

  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t hidden_count() const { return weights.size() - 1; }
};

/// Inverted-dropout keep masks, one (hidden_size x batch) matrix per hidden layer.
/// Entries are 0 or 1 / (1 - rate).
struct DropoutMask {
  std::vector<Matrix> keep;
};

/// Values cached by a forward pass. activations[0] is the input batch;
/// activations[k] for k >= 1 are hidden outputs after masking; tanh_out[k] the
/// pre-mask tanh values (tanh_out[0] unused).
struct MlpTape {
  std::vector<Matrix> activations;
  std::vector<Matrix> tanh_out;
  Matrix output;
};

/// Orthogonally initialised network. `hidden` lists hidden layer widths.
MlpParams make_mlp(int input_dim, int output_dim, const std::vector<int>& hidden, Rng& rng,
                   double hidden_gain, double output_gain, double dropout_rate = 0.0);

/// Same shapes as `params`, every entry zero. Used as a gradient accumulator.
MlpParams zeros_like(const MlpParams& params);

ParamViews param_views(MlpParams& params);

/// Throws ConfigError when layer shapes do not chain or rates are out of range,
/// NumericalError when an entry is not finite.
void validate(const MlpParams& params);

DropoutMask draw_dropout_mask(const MlpParams& params, Eigen::Index batch, Rng& rng);

/// Batched forward pass; inputs are (input_dim x batch). A mask is required
/// exactly when it is supplied; passing none evaluates the network without dropout.
MlpTape mlp_forward_tape(const MlpParams& params, const Matrix& inputs, const DropoutMask* mask = nullptr);
Matrix mlp_forward(const MlpParams& params, const Matrix& inputs, const DropoutMask* mask = nullptr);
Vector mlp_forward_one(const MlpParams& params, const Vector& input);

/// Reverse-mode gradient of sum(upstream .* outputs). Parameter gradients are
/// added into `grads`; input gradients are written to `input_grad` when given.
void mlp_backward(const MlpParams& params, const MlpTape& tape, const Matrix& upstream, MlpParams& grads,
                  const DropoutMask* mask = nullptr, Matrix* input_grad = nullptr);

/// Convenience wrapper returning a fresh gradient set.
MlpParams mlp_gradients(const MlpParams& params, const Matrix& inputs, const Matrix& upstream,
                        const DropoutMask* mask = nullptr);

/// d output / d input for a single-output network, one column per sample.
Matrix mlp_input_gradient(const MlpParams& params, const Matrix& inputs);

/// Second-order pass for gradient penalties on a single-output network without
/// dropout. Given adjoints of the per-sample input gradient (input_dim x batch)
/// and of the output (1 x batch), accumulates d/dparams of
///   sum(grad_adjoint .* input_gradient) + sum(output_adjoint .* output)
/// into `grads`.
void mlp_input_gradient_backward(const MlpParams& params, const Matrix& inputs, const Matrix& grad_adjoint,
                                 const Eigen::RowVectorXd& output_adjoint, MlpParams& grads);

}  // namespace ilsuite
