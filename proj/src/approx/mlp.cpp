#include "ilsuite/approx/mlp.hpp"

#include <cmath>
#include <string>

#include "ilsuite/approx/init.hpp"
#include "ilsuite/error.hpp"

namespace ilsuite {

MlpParams make_mlp(int input_dim, int output_dim, const std::vector<int>& hidden, Rng& rng, double hidden_gain,
                   double output_gain, double dropout_rate) {
  if (input_dim < 1 || output_dim < 1) throw ConfigError("make_mlp: dimensions must be positive");
  MlpParams params;
  params.dropout_rate = dropout_rate;
  int fan_in = input_dim;
  for (int width : hidden) {
    if (width < 1) throw ConfigError("make_mlp: hidden widths must be positive");
    params.weights.push_back(init_orthogonal(width, fan_in, hidden_gain, rng));
    params.biases.push_back(Vector::Zero(width));
    fan_in = width;
  }
  params.weights.push_back(init_orthogonal(output_dim, fan_in, output_gain, rng));
  params.biases.push_back(Vector::Zero(output_dim));
  validate(params);
  return params;
}

MlpParams zeros_like(const MlpParams& params) {
  MlpParams zero;
  zero.dropout_rate = params.dropout_rate;
  for (const auto& w : params.weights) zero.weights.push_back(Matrix::Zero(w.rows(), w.cols()));
  for (const auto& b : params.biases) zero.biases.push_back(Vector::Zero(b.size()));
  return zero;
}

ParamViews param_views(MlpParams& params) {
  ParamViews views;
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    views.push_back(view_of(params.weights[k]));
    views.push_back(view_of(params.biases[k]));
  }
  return views;
}

void validate(const MlpParams& params) {
  if (params.weights.empty() || params.weights.size() != params.biases.size())
    throw ConfigError("mlp: weights and biases must be non-empty and paired");
  if (!(params.dropout_rate >= 0.0 && params.dropout_rate < 1.0))
    throw ConfigError("mlp: dropout rate must lie in [0, 1)");
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    if (params.weights[k].rows() != params.biases[k].size())
      throw ConfigError("mlp: bias length mismatch at layer " + std::to_string(k));
    if (k > 0 && params.weights[k].cols() != params.weights[k - 1].rows())
      throw ConfigError("mlp: layer shapes do not chain at layer " + std::to_string(k));
    if (!params.weights[k].allFinite() || !params.biases[k].allFinite())
      throw NumericalError("mlp: non-finite parameter at layer " + std::to_string(k));
  }
}

DropoutMask draw_dropout_mask(const MlpParams& params, Eigen::Index batch, Rng& rng) {
  DropoutMask mask;
  const double rate = params.dropout_rate;
  const double scale = 1.0 / (1.0 - rate);
  std::bernoulli_distribution drop(rate);
  for (std::size_t k = 0; k + 1 < params.weights.size(); ++k) {
    Matrix keep(params.weights[k].rows(), batch);
    for (Eigen::Index j = 0; j < keep.cols(); ++j)
      for (Eigen::Index i = 0; i < keep.rows(); ++i) keep(i, j) = (rate > 0.0 && drop(rng)) ? 0.0 : scale;
    mask.keep.push_back(std::move(keep));
  }
  return mask;
}

namespace {

void check_mask(const MlpParams& params, const DropoutMask& mask, Eigen::Index batch) {
  if (mask.keep.size() != params.hidden_count()) throw ConfigError("mlp: dropout mask layer count mismatch");
  for (std::size_t k = 0; k < mask.keep.size(); ++k) {
    if (mask.keep[k].rows() != params.weights[k].rows() || mask.keep[k].cols() != batch)
      throw ConfigError("mlp: dropout mask shape mismatch");
  }
}

}  // namespace

MlpTape mlp_forward_tape(const MlpParams& params, const Matrix& inputs, const DropoutMask* mask) {
  if (inputs.rows() != params.input_dim())
    throw ConfigError("mlp_forward: input dimension " + std::to_string(inputs.rows()) + " != " +
                      std::to_string(params.input_dim()));
  if (mask) check_mask(params, *mask, inputs.cols());

  const std::size_t layers = params.layer_count();
  MlpTape tape;
  tape.activations.reserve(layers);
  tape.tanh_out.reserve(layers);
  tape.activations.push_back(inputs);
  tape.tanh_out.emplace_back();
  for (std::size_t k = 0; k + 1 < layers; ++k) {
    Matrix z = params.weights[k] * tape.activations.back();
    z.colwise() += params.biases[k];
    Matrix h = z.array().tanh().matrix();
    if (mask) {
      tape.activations.push_back(h.cwiseProduct(mask->keep[k]));
    } else {
      tape.activations.push_back(h);
    }
    tape.tanh_out.push_back(std::move(h));
  }
  tape.output = params.weights.back() * tape.activations.back();
  tape.output.colwise() += params.biases.back();
  return tape;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& inputs, const DropoutMask* mask) {
  return mlp_forward_tape(params, inputs, mask).output;
}

Vector mlp_forward_one(const MlpParams& params, const Vector& input) {
  if (input.size() != params.input_dim()) throw ConfigError("mlp_forward: input dimension mismatch");
  Vector a = input;
  for (std::size_t k = 0; k + 1 < params.layer_count(); ++k) {
    a = (params.weights[k] * a + params.biases[k]).array().tanh().matrix();
  }
  return params.weights.back() * a + params.biases.back();
}

void mlp_backward(const MlpParams& params, const MlpTape& tape, const Matrix& upstream, MlpParams& grads,
                  const DropoutMask* mask, Matrix* input_grad) {
  if (upstream.rows() != tape.output.rows() || upstream.cols() != tape.output.cols())
    throw ConfigError("mlp_backward: upstream shape mismatch");
  Matrix delta = upstream;
  for (std::size_t k = params.layer_count(); k-- > 0;) {
    grads.weights[k].noalias() += delta * tape.activations[k].transpose();
    grads.biases[k] += delta.rowwise().sum();
    if (k == 0 && input_grad == nullptr) break;
    Matrix back = params.weights[k].transpose() * delta;
    if (k == 0) {
      *input_grad = std::move(back);
      break;
    }
    const Matrix& h = tape.tanh_out[k];
    delta = back.cwiseProduct((1.0 - h.array().square()).matrix());
    if (mask) delta = delta.cwiseProduct(mask->keep[k - 1]);
  }
}

MlpParams mlp_gradients(const MlpParams& params, const Matrix& inputs, const Matrix& upstream,
                        const DropoutMask* mask) {
  MlpTape tape = mlp_forward_tape(params, inputs, mask);
  MlpParams grads = zeros_like(params);
  mlp_backward(params, tape, upstream, grads, mask, nullptr);
  return grads;
}

Matrix mlp_input_gradient(const MlpParams& params, const Matrix& inputs) {
  if (params.output_dim() != 1) throw ConfigError("mlp_input_gradient: network must have one output");
  MlpTape tape = mlp_forward_tape(params, inputs);
  Matrix delta = Matrix::Ones(1, inputs.cols());
  for (std::size_t k = params.layer_count(); k-- > 1;) {
    const Matrix& h = tape.tanh_out[k];
    delta = (params.weights[k].transpose() * delta).cwiseProduct((1.0 - h.array().square()).matrix());
  }
  return params.weights[0].transpose() * delta;
}

void mlp_input_gradient_backward(const MlpParams& params, const Matrix& inputs, const Matrix& grad_adjoint,
                                 const Eigen::RowVectorXd& output_adjoint, MlpParams& grads) {
  if (params.output_dim() != 1) throw ConfigError("mlp_input_gradient_backward: network must have one output");
  if (params.dropout_rate != 0.0) throw ConfigError("mlp_input_gradient_backward: dropout is not supported");
  const Eigen::Index batch = inputs.cols();
  if (grad_adjoint.rows() != inputs.rows() || grad_adjoint.cols() != batch || output_adjoint.size() != batch)
    throw ConfigError("mlp_input_gradient_backward: adjoint shape mismatch");

  const std::size_t layers = params.layer_count();
  MlpTape tape = mlp_forward_tape(params, inputs);

  // slope[k] = 1 - a_k^2 for hidden layer k (1-based); delta[k] is the
  // first-order backward signal arriving at z_k, delta[layers] = 1.
  std::vector<Matrix> slope(layers), delta(layers + 1), pre(layers);
  for (std::size_t k = 1; k < layers; ++k) slope[k] = (1.0 - tape.tanh_out[k].array().square()).matrix();
  delta[layers] = Matrix::Ones(1, batch);
  for (std::size_t k = layers - 1; k >= 1; --k) {
    pre[k] = params.weights[k].transpose() * delta[k + 1];
    delta[k] = pre[k].cwiseProduct(slope[k]);
  }

  // Reverse through the input-gradient computation g = W_0^T delta_1.
  std::vector<Matrix> extra_act(layers);
  grads.weights[0].noalias() += delta[1] * grad_adjoint.transpose();
  Matrix delta_bar = params.weights[0] * grad_adjoint;
  for (std::size_t k = 1; k < layers; ++k) {
    Matrix pre_bar = delta_bar.cwiseProduct(slope[k]);
    Matrix slope_bar = delta_bar.cwiseProduct(pre[k]);
    extra_act[k] = -2.0 * slope_bar.cwiseProduct(tape.tanh_out[k]);
    grads.weights[k].noalias() += delta[k + 1] * pre_bar.transpose();
    if (k + 1 < layers) delta_bar = params.weights[k] * pre_bar;
  }

  // Ordinary backward pass with output adjoint plus the activation adjoints above.
  Matrix z_bar = output_adjoint;
  for (std::size_t k = layers; k-- > 0;) {
    grads.weights[k].noalias() += z_bar * tape.activations[k].transpose();
    grads.biases[k] += z_bar.rowwise().sum();
    if (k == 0) break;
    Matrix a_bar = params.weights[k].transpose() * z_bar + extra_act[k];
    z_bar = a_bar.cwiseProduct(slope[k]);
  }
}

}  // namespace ilsuite
