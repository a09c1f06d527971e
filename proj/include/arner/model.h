// Copyright 2026 The arner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARNER_MODEL_H_
#define ARNER_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arner/numerics.h"

namespace arner {

enum class CellKind { kLstm, kGru };

std::string_view CellKindName(CellKind kind);
// Accepts "lstm" or "gru"; throws std::invalid_argument otherwise.
CellKind ParseCellKind(std::string_view s);

struct ModelConfig {
  CellKind cell = CellKind::kLstm;
  int vocab_size = 2;
  int embed_dim = 50;
  int hidden_dim = 50;
  int num_classes = 37;
  uint64_t seed = 0;
  // ReLU on the class logits before LogSoftmax.
  bool relu_head = true;

  // Throws std::invalid_argument on V < 2, or E, H, K < 1.
  void Validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// One gate: input weights [H x E], recurrent weights [H x H], bias [H].
struct GateParams {
  Matrix input;
  Matrix recurrent;
  Vector bias;
};

struct LstmParams {
  GateParams input_gate;
  GateParams forget_gate;
  GateParams output_gate;
  GateParams candidate;
};

// The reset gate scales the previous state before the candidate's recurrent
// matrix is applied.
struct GruParams {
  GateParams reset_gate;
  GateParams update_gate;
  GateParams candidate;
};

// Non-owning view of one parameter tensor, in row-major order.
struct TensorView {
  std::string name;
  size_t rows;
  size_t cols;
  std::span<double> data;
};

struct ConstTensorView {
  std::string name;
  size_t rows;
  size_t cols;
  std::span<const double> data;
};

// All trainable tensors. Gradients and Adam moments use the same type.
struct ModelParams {
  ModelConfig config;
  Matrix embedding;  // [V x E]; row 0 is PAD
  std::variant<LstmParams, GruParams> cell;
  Matrix dense_w;  // [K x H]
  Vector dense_b;  // [K]

  // Correctly shaped, all zero.
  static ModelParams Zeros(const ModelConfig& config);

  const LstmParams& lstm() const { return std::get<LstmParams>(cell); }
  const GruParams& gru() const { return std::get<GruParams>(cell); }
  LstmParams& lstm() { return std::get<LstmParams>(cell); }
  GruParams& gru() { return std::get<GruParams>(cell); }

  // Fixed order: embedding, gates (input, recurrent, bias per gate in
  // declaration order), dense.W, dense.b.
  std::vector<TensorView> Tensors();
  std::vector<ConstTensorView> Tensors() const;

  void SetZero();
};

// V*E + G*(H*E + H*H + H) + K*H + K, with G = 4 for LSTM and 3 for GRU.
int64_t CountParams(const ModelConfig& config);

// Glorot-uniform weights, bound sqrt(6 / (rows + cols)) per matrix; zero
// biases; zero PAD embedding row. Bit-identical for identical configs.
ModelParams InitParams(const ModelConfig& config);

// Cell state after one step plus the gate activations the backward pass
// needs. Gate vectors are empty for an initial state.
struct LstmCellState {
  Vector h;
  Vector c;
  Vector input_gate;
  Vector forget_gate;
  Vector output_gate;
  Vector candidate;
  Vector tanh_c;

  static LstmCellState Zero(size_t hidden);
};

struct GruCellState {
  Vector c;
  Vector reset_gate;
  Vector update_gate;
  Vector candidate;
  Vector reset_state;  // reset_gate * c_prev

  static GruCellState Zero(size_t hidden);
};

LstmCellState LstmStep(const LstmParams& p, std::span<const double> x,
                       const LstmCellState& prev);

GruCellState GruStep(const GruParams& p, std::span<const double> x,
                     const GruCellState& prev);

struct ForwardCache {
  ModelConfig config;
  std::vector<int> token_ids;
  std::vector<uint8_t> mask;
  std::vector<LstmCellState> lstm_states;  // one per position
  std::vector<GruCellState> gru_states;
  Matrix head_pre;   // [T x K], dense output before ReLU
  Matrix log_probs;  // [T x K]

  const Vector& Output(size_t t) const;
};

// Runs the sequence from a zero initial state. An empty mask means every
// position is real. Throws std::out_of_range for token ids >= V and
// ShapeError if the mask length differs from the sequence length.
ForwardCache ModelForward(const ModelParams& params,
                          std::span<const int> token_ids,
                          std::span<const uint8_t> mask = {});

// Backpropagation through time. Adds dL/dtheta into `grads`, which must have
// the shape of `params`. Rows of d_log_probs at mask-0 positions are
// ignored. Throws std::invalid_argument on cache/params mismatch.
void AccumulateGradients(const ModelParams& params, const ForwardCache& cache,
                         const Matrix& d_log_probs, ModelParams* grads);

ModelParams ModelBackward(const ModelParams& params, const ForwardCache& cache,
                          const Matrix& d_log_probs);

}  // namespace arner

#endif  // ARNER_MODEL_H_
