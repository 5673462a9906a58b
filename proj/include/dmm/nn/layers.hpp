#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dmm/core/error.hpp"

namespace dmm::nn {

using Mat = Eigen::MatrixXf;

// Batched sequences are packed as (T*B) x D with row index t*B + b, so one
// timestep is a contiguous middleRows block and time-distributed ops are
// single GEMMs.

struct Param {
  Mat value;
  Mat grad;
  std::string name;

  Param() = default;
  Param(Eigen::Index rows, Eigen::Index cols, std::string n)
      : value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)), name(std::move(n)) {}

  void zero_grad() { grad.setZero(); }
  Eigen::Index count() const { return value.size(); }
};

using ParamRefs = std::vector<Param*>;

std::int64_t param_count(const ParamRefs& params);
void zero_grads(const ParamRefs& params);
float global_grad_norm(const ParamRefs& params);
void clip_grad_norm(const ParamRefs& params, float max_norm);

void glorot_uniform(Mat& m, std::mt19937_64& rng);
void orthogonal_init(Eigen::Ref<Mat> m, std::mt19937_64& rng);

inline Mat sigmoid(const Mat& x) {
  return ((-x.array()).exp() + 1.0f).inverse().matrix();
}

enum class Activation { kLinear, kTanh, kRelu, kSigmoid };

struct DenseCache {
  Mat x;  // saved input
  Mat y;  // post-activation output
};

// Fully connected y = act(x W + b); rows are independent, so the same layer
// serves both vectors and time-distributed sequences.
class Dense {
 public:
  Dense() = default;
  Dense(int in, int out, Activation act, const std::string& name);

  void init(std::mt19937_64& rng);
  Mat forward(const Mat& x) const;
  Mat forward_train(const Mat& x, DenseCache& cache) const;
  Mat backward(const DenseCache& cache, const Mat& dy);

  ParamRefs params() { return {&w, &b}; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  Activation activation() const { return act_; }

  Param w;  // in x out
  Param b;  // 1 x out

 private:
  int in_dim_ = 0, out_dim_ = 0;
  Activation act_ = Activation::kLinear;
};

struct LstmCache {
  int T = 0, B = 0;
  Mat x;       // (T*B) x D
  Mat gates;   // (T*B) x 4H, post-activation [i f g o]
  Mat cells;   // (T*B) x H
  Mat tanh_c;  // (T*B) x H
  Mat hs;      // (T*B) x H
};

// Standard LSTM, gate order [i f g o], forget bias 1.
class Lstm {
 public:
  Lstm() = default;
  Lstm(int in, int hidden, const std::string& name);

  void init(std::mt19937_64& rng);
  // Full hidden-state sequence h_1..h_T as (T*B) x H.
  Mat forward(const Mat& x, int T, int B) const;
  Mat forward_train(const Mat& x, int T, int B, LstmCache& cache) const;
  // dh_seq carries the gradient on every h_t; returns dx.
  Mat backward(const LstmCache& cache, const Mat& dh_seq);

  // Single streaming step; h and c are 1 x H state rows.
  void step(const Eigen::Ref<const Eigen::RowVectorXf>& x_t, Eigen::RowVectorXf& h,
            Eigen::RowVectorXf& c) const;

  ParamRefs params() { return {&wx, &wh, &b}; }
  int in_dim() const { return in_dim_; }
  int hidden_dim() const { return hidden_; }

  Param wx;  // D x 4H
  Param wh;  // H x 4H
  Param b;   // 1 x 4H

 private:
  int in_dim_ = 0, hidden_ = 0;
};

struct ConvCache {
  int T = 0, B = 0;
  Mat x;
};

// Causal 1D convolution: output frame t sees input frames t-kernel+1 .. t
// (zero-padded before the sequence start). Tap k multiplies x_{t-k} and
// occupies rows [k*D, (k+1)*D) of w.
class CausalConv1d {
 public:
  CausalConv1d() = default;
  CausalConv1d(int in, int filters, int kernel, const std::string& name);

  void init(std::mt19937_64& rng);
  Mat forward(const Mat& x, int T, int B) const;
  Mat forward_train(const Mat& x, int T, int B, ConvCache& cache) const;
  Mat backward(const ConvCache& cache, const Mat& dy);

  // Streaming step over the most recent kernel frames; recent.row(kernel-1)
  // is the current frame, recent.row(kernel-1-k) is k steps back.
  Eigen::RowVectorXf step(const Eigen::Ref<const Mat>& recent) const;

  ParamRefs params() { return {&w, &b}; }
  int in_dim() const { return in_dim_; }
  int filters() const { return filters_; }
  int kernel() const { return kernel_; }

  Param w;  // (kernel*D) x filters
  Param b;  // 1 x filters

 private:
  int in_dim_ = 0, filters_ = 0, kernel_ = 0;
};

// Mean over fixed-length time chunks: (T*B) x D -> ((T/chunk)*B) x D.
class ChunkMeanPool {
 public:
  static Mat forward(const Mat& x, int T, int B, int chunk);
  static Mat backward(const Mat& dy, int T, int B, int chunk);
};

struct SoftmaxCeResult {
  float loss = 0.0f;  // mean over rows
  Mat probs;
  Mat dlogits;  // d(mean loss)/dlogits
};

SoftmaxCeResult softmax_cross_entropy(const Mat& logits, const std::vector<int>& targets);
Mat softmax(const Mat& logits);

// Numerically stable binary cross-entropy on a logit.
// Returns the loss; *dlogit (if given) receives sigmoid(logit) - target.
float bce_with_logits(float logit, float target, float* dlogit = nullptr);

struct MseResult {
  float loss = 0.0f;
  Mat dpred;
};

MseResult mse_loss(const Mat& pred, const Mat& target);

}  // namespace dmm::nn
