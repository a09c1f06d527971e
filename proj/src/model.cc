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

#include "arner/model.h"

#include <cmath>
#include <stdexcept>

#include "arner/kernels.h"
#include "arner/random.h"

namespace arner {

namespace {

GateParams ZeroGate(size_t hidden, size_t embed) {
  return GateParams{Matrix(hidden, embed), Matrix(hidden, hidden),
                    Vector(hidden)};
}

void AppendGate(const std::string& prefix, GateParams& g,
                const char* recurrent_name, std::vector<TensorView>* out) {
  out->push_back({prefix + ".W", g.input.rows(), g.input.cols(), g.input.span()});
  out->push_back({prefix + "." + recurrent_name, g.recurrent.rows(),
                  g.recurrent.cols(), g.recurrent.span()});
  out->push_back({prefix + ".b", g.bias.size(), 1, g.bias.span()});
}

void Mul(const Vector& a, const Vector& b, Vector* out) {
  for (size_t i = 0; i < a.size(); ++i) (*out)[i] = a[i] * b[i];
}

}  // namespace

std::string_view CellKindName(CellKind kind) {
  return kind == CellKind::kLstm ? "lstm" : "gru";
}

CellKind ParseCellKind(std::string_view s) {
  if (s == "lstm") return CellKind::kLstm;
  if (s == "gru") return CellKind::kGru;
  throw std::invalid_argument("unknown cell kind '" + std::string(s) +
                              "' (expected lstm or gru)");
}

void ModelConfig::Validate() const {
  if (vocab_size < 2) {
    throw std::invalid_argument("vocab_size must be >= 2 (PAD and UNK)");
  }
  if (embed_dim < 1 || hidden_dim < 1 || num_classes < 1) {
    throw std::invalid_argument(
        "embed_dim, hidden_dim and num_classes must be >= 1");
  }
}

ModelParams ModelParams::Zeros(const ModelConfig& config) {
  config.Validate();
  const size_t v = config.vocab_size, e = config.embed_dim,
               h = config.hidden_dim, k = config.num_classes;
  ModelParams p;
  p.config = config;
  p.embedding = Matrix(v, e);
  if (config.cell == CellKind::kLstm) {
    p.cell = LstmParams{ZeroGate(h, e), ZeroGate(h, e), ZeroGate(h, e),
                        ZeroGate(h, e)};
  } else {
    p.cell = GruParams{ZeroGate(h, e), ZeroGate(h, e), ZeroGate(h, e)};
  }
  p.dense_w = Matrix(k, h);
  p.dense_b = Vector(k);
  return p;
}

std::vector<TensorView> ModelParams::Tensors() {
  std::vector<TensorView> out;
  out.push_back({"embedding", embedding.rows(), embedding.cols(),
                 embedding.span()});
  if (auto* l = std::get_if<LstmParams>(&cell)) {
    AppendGate("lstm.input", l->input_gate, "R", &out);
    AppendGate("lstm.forget", l->forget_gate, "R", &out);
    AppendGate("lstm.output", l->output_gate, "R", &out);
    AppendGate("lstm.candidate", l->candidate, "R", &out);
  } else {
    GruParams& g = std::get<GruParams>(cell);
    AppendGate("gru.reset", g.reset_gate, "U", &out);
    AppendGate("gru.update", g.update_gate, "U", &out);
    AppendGate("gru.candidate", g.candidate, "U", &out);
  }
  out.push_back({"dense.W", dense_w.rows(), dense_w.cols(), dense_w.span()});
  out.push_back({"dense.b", dense_b.size(), 1, dense_b.span()});
  return out;
}

std::vector<ConstTensorView> ModelParams::Tensors() const {
  std::vector<ConstTensorView> out;
  for (TensorView& t : const_cast<ModelParams*>(this)->Tensors()) {
    out.push_back({std::move(t.name), t.rows, t.cols, t.data});
  }
  return out;
}

void ModelParams::SetZero() {
  for (TensorView& t : Tensors()) std::fill(t.data.begin(), t.data.end(), 0.0);
}

int64_t CountParams(const ModelConfig& config) {
  config.Validate();
  const int64_t v = config.vocab_size, e = config.embed_dim,
                h = config.hidden_dim, k = config.num_classes;
  const int64_t gates = config.cell == CellKind::kLstm ? 4 : 3;
  return v * e + gates * (h * e + h * h + h) + (k * h + k);
}

ModelParams InitParams(const ModelConfig& config) {
  ModelParams p = ModelParams::Zeros(config);
  Rng rng(config.seed);
  // Every matrix-shaped tensor is a weight; vectors (biases) stay zero.
  for (TensorView& t : p.Tensors()) {
    if (t.cols == 1) continue;
    const double bound =
        std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
    for (double& w : t.data) w = rng.Uniform(-bound, bound);
  }
  for (double& w : p.embedding.row(0)) w = 0.0;
  return p;
}

LstmCellState LstmCellState::Zero(size_t hidden) {
  LstmCellState s;
  s.h = Vector(hidden);
  s.c = Vector(hidden);
  return s;
}

GruCellState GruCellState::Zero(size_t hidden) {
  GruCellState s;
  s.c = Vector(hidden);
  return s;
}

LstmCellState LstmStep(const LstmParams& p, std::span<const double> x,
                       const LstmCellState& prev) {
  auto gate = [&](const GateParams& g) {
    return Affine(g.input, x, g.recurrent, prev.h, g.bias);
  };
  LstmCellState s;
  s.input_gate = Sigmoid(gate(p.input_gate));
  s.forget_gate = Sigmoid(gate(p.forget_gate));
  s.output_gate = Sigmoid(gate(p.output_gate));
  s.candidate = Tanh(gate(p.candidate));
  if (prev.c.size() != s.candidate.size()) {
    throw ShapeError("lstm step: previous cell state " +
                     ShapeString(prev.c.size(), 1) + " vs hidden size " +
                     ShapeString(s.candidate.size(), 1));
  }
  const size_t h = s.candidate.size();
  s.c = Vector(h);
  s.h = Vector(h);
  for (size_t j = 0; j < h; ++j) {
    s.c[j] = s.forget_gate[j] * prev.c[j] + s.input_gate[j] * s.candidate[j];
  }
  s.tanh_c = Tanh(s.c);
  Mul(s.output_gate, s.tanh_c, &s.h);
  return s;
}

GruCellState GruStep(const GruParams& p, std::span<const double> x,
                     const GruCellState& prev) {
  GruCellState s;
  s.reset_gate = Sigmoid(Affine(p.reset_gate.input, x, p.reset_gate.recurrent,
                                prev.c, p.reset_gate.bias));
  s.update_gate =
      Sigmoid(Affine(p.update_gate.input, x, p.update_gate.recurrent, prev.c,
                     p.update_gate.bias));
  const size_t h = s.reset_gate.size();
  s.reset_state = Vector(h);
  Mul(s.reset_gate, prev.c, &s.reset_state);
  s.candidate = Tanh(Affine(p.candidate.input, x, p.candidate.recurrent,
                            s.reset_state, p.candidate.bias));
  s.c = Vector(h);
  for (size_t j = 0; j < h; ++j) {
    s.c[j] = (1.0 - s.update_gate[j]) * s.candidate[j] +
             s.update_gate[j] * prev.c[j];
  }
  return s;
}

const Vector& ForwardCache::Output(size_t t) const {
  return config.cell == CellKind::kLstm ? lstm_states[t].h : gru_states[t].c;
}

ForwardCache ModelForward(const ModelParams& params,
                          std::span<const int> token_ids,
                          std::span<const uint8_t> mask) {
  const ModelConfig& cfg = params.config;
  const size_t steps = token_ids.size();
  if (!mask.empty() && mask.size() != steps) {
    throw ShapeError("mask length " + std::to_string(mask.size()) +
                     " differs from sequence length " + std::to_string(steps));
  }
  ForwardCache cache;
  cache.config = cfg;
  cache.token_ids.assign(token_ids.begin(), token_ids.end());
  if (mask.empty()) {
    cache.mask.assign(steps, 1);
  } else {
    cache.mask.assign(mask.begin(), mask.end());
  }
  const size_t hidden = cfg.hidden_dim, classes = cfg.num_classes;
  cache.head_pre = Matrix(steps, classes);
  cache.log_probs = Matrix(steps, classes);

  LstmCellState lstm_state = LstmCellState::Zero(hidden);
  GruCellState gru_state = GruCellState::Zero(hidden);
  const simd::KernelTable& k = simd::Kernels();
  for (size_t t = 0; t < steps; ++t) {
    const int id = token_ids[t];
    if (id < 0 || id >= cfg.vocab_size) {
      throw std::out_of_range("token id " + std::to_string(id) +
                              " outside vocabulary of size " +
                              std::to_string(cfg.vocab_size));
    }
    const std::span<const double> x = params.embedding.row(id);
    if (cfg.cell == CellKind::kLstm) {
      lstm_state = LstmStep(params.lstm(), x, lstm_state);
      cache.lstm_states.push_back(lstm_state);
    } else {
      gru_state = GruStep(params.gru(), x, gru_state);
      cache.gru_states.push_back(gru_state);
    }
    const Vector& out = cache.Output(t);
    std::span<double> pre = cache.head_pre.row(t);
    std::copy(params.dense_b.begin(), params.dense_b.end(), pre.begin());
    k.gemv_acc(params.dense_w.data(), classes, hidden, out.data(), pre.data());
    const Vector logits = cfg.relu_head ? Relu(pre) : Vector(pre);
    const Vector lp = LogSoftmax(logits);
    std::copy(lp.begin(), lp.end(), cache.log_probs.row(t).begin());
  }
  return cache;
}

namespace {

// Adds one gate's parameter gradients for pre-activation gradient `da`, and
// propagates da through the input and recurrent matrices.
void GateBackward(const GateParams& p, GateParams& g, const Vector& da,
                  std::span<const double> x, std::span<const double> h_prev,
                  Vector* dx, Vector* dh_prev) {
  const simd::KernelTable& k = simd::Kernels();
  const size_t hidden = da.size(), embed = x.size();
  k.ger_acc(da.data(), hidden, x.data(), embed, g.input.data());
  k.ger_acc(da.data(), hidden, h_prev.data(), hidden, g.recurrent.data());
  k.axpy(1.0, da.data(), g.bias.data(), hidden);
  k.gemv_t_acc(p.input.data(), hidden, embed, da.data(), dx->data());
  k.gemv_t_acc(p.recurrent.data(), hidden, hidden, da.data(), dh_prev->data());
}

void CheckCompatible(const ModelParams& params, const ForwardCache& cache,
                     const Matrix& d_log_probs, const ModelParams& grads) {
  const ModelConfig& a = params.config;
  const ModelConfig& b = cache.config;
  if (a.cell != b.cell || a.vocab_size != b.vocab_size ||
      a.embed_dim != b.embed_dim || a.hidden_dim != b.hidden_dim ||
      a.num_classes != b.num_classes || a.relu_head != b.relu_head) {
    throw std::invalid_argument("forward cache was built for a different model");
  }
  const ModelConfig& c = grads.config;
  if (a.cell != c.cell || a.vocab_size != c.vocab_size ||
      a.embed_dim != c.embed_dim || a.hidden_dim != c.hidden_dim ||
      a.num_classes != c.num_classes) {
    throw std::invalid_argument("gradient buffer shape differs from params");
  }
  if (d_log_probs.rows() != cache.token_ids.size() ||
      d_log_probs.cols() != static_cast<size_t>(a.num_classes)) {
    throw ShapeError("d_log_probs " +
                     ShapeString(d_log_probs.rows(), d_log_probs.cols()) +
                     " vs expected " +
                     ShapeString(cache.token_ids.size(), a.num_classes));
  }
}

}  // namespace

void AccumulateGradients(const ModelParams& params, const ForwardCache& cache,
                         const Matrix& d_log_probs, ModelParams* grads) {
  CheckCompatible(params, cache, d_log_probs, *grads);
  const ModelConfig& cfg = params.config;
  const size_t hidden = cfg.hidden_dim, embed = cfg.embed_dim,
               classes = cfg.num_classes;
  const simd::KernelTable& k = simd::Kernels();
  const bool is_lstm = cfg.cell == CellKind::kLstm;

  Vector dh_next(hidden);  // dL/dh_t (LSTM) or dL/dC_t (GRU) from step t+1
  Vector dc_next(hidden);  // LSTM only: dL/dC_t from step t+1
  const LstmCellState lstm_zero = LstmCellState::Zero(hidden);
  const GruCellState gru_zero = GruCellState::Zero(hidden);
  Vector dz(classes);

  for (size_t t = cache.token_ids.size(); t-- > 0;) {
    Vector dout = dh_next;
    if (cache.mask[t]) {
      std::span<const double> dlp = d_log_probs.row(t);
      std::span<const double> lp = cache.log_probs.row(t);
      double dlp_sum = 0.0;
      for (double d : dlp) dlp_sum += d;
      for (size_t j = 0; j < classes; ++j) {
        dz[j] = dlp[j] - std::exp(lp[j]) * dlp_sum;
        if (cfg.relu_head && !(cache.head_pre(t, j) > 0.0)) dz[j] = 0.0;
      }
      const Vector& out = cache.Output(t);
      k.axpy(1.0, dz.data(), grads->dense_b.data(), classes);
      k.ger_acc(dz.data(), classes, out.data(), hidden,
                grads->dense_w.data());
      k.gemv_t_acc(params.dense_w.data(), classes, hidden, dz.data(),
                   dout.data());
    }

    const int id = cache.token_ids[t];
    const std::span<const double> x = params.embedding.row(id);
    Vector dx(embed);
    Vector dprev(hidden);

    if (is_lstm) {
      const LstmParams& p = params.lstm();
      LstmParams& g = grads->lstm();
      const LstmCellState& s = cache.lstm_states[t];
      const LstmCellState& prev = t > 0 ? cache.lstm_states[t - 1] : lstm_zero;
      Vector da_i(hidden), da_f(hidden), da_o(hidden), da_c(hidden);
      Vector dc_prev(hidden);
      for (size_t j = 0; j < hidden; ++j) {
        const double i = s.input_gate[j], f = s.forget_gate[j],
                     o = s.output_gate[j], cand = s.candidate[j],
                     tc = s.tanh_c[j];
        const double d_o = dout[j] * tc;
        const double dc = dc_next[j] + dout[j] * o * (1.0 - tc * tc);
        da_i[j] = dc * cand * i * (1.0 - i);
        da_f[j] = dc * prev.c[j] * f * (1.0 - f);
        da_o[j] = d_o * o * (1.0 - o);
        da_c[j] = dc * i * (1.0 - cand * cand);
        dc_prev[j] = dc * f;
      }
      GateBackward(p.input_gate, g.input_gate, da_i, x, prev.h, &dx, &dprev);
      GateBackward(p.forget_gate, g.forget_gate, da_f, x, prev.h, &dx, &dprev);
      GateBackward(p.output_gate, g.output_gate, da_o, x, prev.h, &dx, &dprev);
      GateBackward(p.candidate, g.candidate, da_c, x, prev.h, &dx, &dprev);
      dc_next = std::move(dc_prev);
    } else {
      const GruParams& p = params.gru();
      GruParams& g = grads->gru();
      const GruCellState& s = cache.gru_states[t];
      const GruCellState& prev = t > 0 ? cache.gru_states[t - 1] : gru_zero;
      Vector da_n(hidden), da_z(hidden), da_r(hidden);
      for (size_t j = 0; j < hidden; ++j) {
        const double z = s.update_gate[j], n = s.candidate[j];
        dprev[j] = dout[j] * z;
        da_z[j] = dout[j] * (prev.c[j] - n) * z * (1.0 - z);
        da_n[j] = dout[j] * (1.0 - z) * (1.0 - n * n);
      }
      Vector d_reset_state(hidden);
      GateBackward(p.candidate, g.candidate, da_n, x, s.reset_state, &dx,
                   &d_reset_state);
      for (size_t j = 0; j < hidden; ++j) {
        const double r = s.reset_gate[j];
        dprev[j] += d_reset_state[j] * r;
        da_r[j] = d_reset_state[j] * prev.c[j] * r * (1.0 - r);
      }
      GateBackward(p.reset_gate, g.reset_gate, da_r, x, prev.c, &dx, &dprev);
      GateBackward(p.update_gate, g.update_gate, da_z, x, prev.c, &dx, &dprev);
    }

    if (cache.mask[t]) {
      k.axpy(1.0, dx.data(), grads->embedding.row(id).data(), embed);
    }
    dh_next = std::move(dprev);
  }
}

ModelParams ModelBackward(const ModelParams& params, const ForwardCache& cache,
                          const Matrix& d_log_probs) {
  ModelParams grads = ModelParams::Zeros(params.config);
  grads.config = params.config;
  AccumulateGradients(params, cache, d_log_probs, &grads);
  return grads;
}

}  // namespace arner
