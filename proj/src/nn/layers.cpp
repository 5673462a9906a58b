#include "dmm/nn/layers.hpp"

#include <cmath>

namespace dmm::nn {

std::int64_t param_count(const ParamRefs& params) {
  std::int64_t n = 0;
  for (const auto* p : params) n += p->count();
  return n;
}

void zero_grads(const ParamRefs& params) {
  for (auto* p : params) p->zero_grad();
}

float global_grad_norm(const ParamRefs& params) {
  double sq = 0.0;
  for (const auto* p : params) sq += p->grad.cast<double>().squaredNorm();
  return static_cast<float>(std::sqrt(sq));
}

void clip_grad_norm(const ParamRefs& params, float max_norm) {
  if (max_norm <= 0.0f) return;
  const float norm = global_grad_norm(params);
  if (norm <= max_norm) return;
  const float scale = max_norm / norm;
  for (auto* p : params) p->grad *= scale;
}

void glorot_uniform(Mat& m, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  std::uniform_real_distribution<double> u(-limit, limit);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = static_cast<float>(u(rng));
  }
}

void orthogonal_init(Eigen::Ref<Mat> m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = g(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  // Fix the sign convention so the result is unique given the RNG stream.
  Eigen::VectorXd d = qr.matrixQR().diagonal().array().sign();
  for (Eigen::Index c = 0; c < q.cols() && c < d.size(); ++c) {
    if (d(c) < 0) q.col(c) = -q.col(c);
  }
  m = q.cast<float>();
}

Dense::Dense(int in, int out, Activation act, const std::string& name)
    : w(in, out, name + ".w"), b(1, out, name + ".b"), in_dim_(in), out_dim_(out), act_(act) {}

void Dense::init(std::mt19937_64& rng) {
  glorot_uniform(w.value, rng);
  b.value.setZero();
}

namespace {

void apply_activation(Mat& y, Activation act) {
  switch (act) {
    case Activation::kLinear: break;
    case Activation::kTanh: y = y.array().tanh().matrix(); break;
    case Activation::kRelu: y = y.cwiseMax(0.0f); break;
    case Activation::kSigmoid: y = sigmoid(y); break;
  }
}

// Derivative through the post-activation value.
Mat activation_backward(const Mat& y, const Mat& dy, Activation act) {
  switch (act) {
    case Activation::kLinear: return dy;
    case Activation::kTanh: return (dy.array() * (1.0f - y.array().square())).matrix();
    case Activation::kRelu: return (dy.array() * (y.array() > 0.0f).cast<float>()).matrix();
    case Activation::kSigmoid: return (dy.array() * y.array() * (1.0f - y.array())).matrix();
  }
  return dy;
}

}  // namespace

Mat Dense::forward(const Mat& x) const {
  if (x.cols() != in_dim_) throw InvalidInputError("dense input width mismatch");
  Mat y = x * w.value;
  y.rowwise() += b.value.row(0);
  apply_activation(y, act_);
  return y;
}

Mat Dense::forward_train(const Mat& x, DenseCache& cache) const {
  cache.x = x;
  cache.y = forward(x);
  return cache.y;
}

Mat Dense::backward(const DenseCache& cache, const Mat& dy) {
  Mat dz = activation_backward(cache.y, dy, act_);
  w.grad.noalias() += cache.x.transpose() * dz;
  b.grad.row(0) += dz.colwise().sum();
  return dz * w.value.transpose();
}

Lstm::Lstm(int in, int hidden, const std::string& name)
    : wx(in, 4 * hidden, name + ".wx"),
      wh(hidden, 4 * hidden, name + ".wh"),
      b(1, 4 * hidden, name + ".b"),
      in_dim_(in),
      hidden_(hidden) {}

void Lstm::init(std::mt19937_64& rng) {
  glorot_uniform(wx.value, rng);
  for (int gate = 0; gate < 4; ++gate) {
    orthogonal_init(wh.value.middleCols(gate * hidden_, hidden_), rng);
  }
  b.value.setZero();
  b.value.row(0).segment(hidden_, hidden_).setOnes();  // forget gate bias 1
}

namespace {

inline void lstm_nonlinear(Mat& gt, int H) {
  gt.leftCols(H) = sigmoid(gt.leftCols(H));
  gt.middleCols(H, H) = sigmoid(gt.middleCols(H, H));
  gt.middleCols(2 * H, H) = gt.middleCols(2 * H, H).array().tanh().matrix();
  gt.rightCols(H) = sigmoid(gt.rightCols(H));
}

}  // namespace

Mat Lstm::forward(const Mat& x, int T, int B) const {
  LstmCache scratch;
  return forward_train(x, T, B, scratch);
}

Mat Lstm::forward_train(const Mat& x, int T, int B, LstmCache& cache) const {
  if (x.rows() != static_cast<Eigen::Index>(T) * B || x.cols() != in_dim_) {
    throw InvalidInputError("lstm input shape mismatch");
  }
  const int H = hidden_;
  cache.T = T;
  cache.B = B;
  cache.x = x;
  cache.gates.resize(x.rows(), 4 * H);
  cache.cells.resize(x.rows(), H);
  cache.tanh_c.resize(x.rows(), H);
  cache.hs.resize(x.rows(), H);

  // Input projection for all timesteps in one GEMM.
  Mat g = x * wx.value;
  g.rowwise() += b.value.row(0);

  Mat h = Mat::Zero(B, H);
  Mat c = Mat::Zero(B, H);
  for (int t = 0; t < T; ++t) {
    auto gt = g.middleRows(static_cast<Eigen::Index>(t) * B, B);
    gt.noalias() += h * wh.value;
    Mat gates_t = gt;
    lstm_nonlinear(gates_t, H);
    const auto i = gates_t.leftCols(H).array();
    const auto f = gates_t.middleCols(H, H).array();
    const auto gg = gates_t.middleCols(2 * H, H).array();
    const auto o = gates_t.rightCols(H).array();
    c = (f * c.array() + i * gg).matrix();
    Mat tc = c.array().tanh().matrix();
    h = (o * tc.array()).matrix();

    const Eigen::Index row = static_cast<Eigen::Index>(t) * B;
    cache.gates.middleRows(row, B) = gates_t;
    cache.cells.middleRows(row, B) = c;
    cache.tanh_c.middleRows(row, B) = tc;
    cache.hs.middleRows(row, B) = h;
  }
  return cache.hs;
}

Mat Lstm::backward(const LstmCache& cache, const Mat& dh_seq) {
  const int T = cache.T, B = cache.B, H = hidden_;
  if (dh_seq.rows() != cache.hs.rows() || dh_seq.cols() != H) {
    throw InvalidInputError("lstm backward shape mismatch");
  }

  Mat dx(cache.x.rows(), in_dim_);
  Mat dh_carry = Mat::Zero(B, H);
  Mat dc_carry = Mat::Zero(B, H);
  Mat dgates(B, 4 * H);

  for (int t = T - 1; t >= 0; --t) {
    const Eigen::Index row = static_cast<Eigen::Index>(t) * B;
    const auto gates_t = cache.gates.middleRows(row, B);
    const auto i = gates_t.leftCols(H).array();
    const auto f = gates_t.middleCols(H, H).array();
    const auto gg = gates_t.middleCols(2 * H, H).array();
    const auto o = gates_t.rightCols(H).array();
    const auto tc = cache.tanh_c.middleRows(row, B).array();

    Mat dh = dh_seq.middleRows(row, B) + dh_carry;
    Mat dc = dc_carry;
    dc.array() += dh.array() * o * (1.0f - tc.square());

    dgates.leftCols(H) = (dc.array() * gg * i * (1.0f - i)).matrix();
    if (t > 0) {
      const auto c_prev = cache.cells.middleRows(row - B, B).array();
      dgates.middleCols(H, H) = (dc.array() * c_prev * f * (1.0f - f)).matrix();
    } else {
      dgates.middleCols(H, H).setZero();  // c_{-1} = 0
    }
    dgates.middleCols(2 * H, H) = (dc.array() * i * (1.0f - gg.square())).matrix();
    dgates.rightCols(H) = (dh.array() * tc * o * (1.0f - o)).matrix();

    dx.middleRows(row, B).noalias() = dgates * wx.value.transpose();
    wx.grad.noalias() += cache.x.middleRows(row, B).transpose() * dgates;
    if (t > 0) {
      wh.grad.noalias() += cache.hs.middleRows(row - B, B).transpose() * dgates;
    }
    b.grad.row(0) += dgates.colwise().sum();

    dh_carry.noalias() = dgates * wh.value.transpose();
    dc_carry = (dc.array() * f).matrix();
  }
  return dx;
}

void Lstm::step(const Eigen::Ref<const Eigen::RowVectorXf>& x_t, Eigen::RowVectorXf& h,
                Eigen::RowVectorXf& c) const {
  const int H = hidden_;
  Eigen::RowVectorXf g = x_t * wx.value + b.value.row(0);
  g.noalias() += h * wh.value;
  Mat gm = g;
  lstm_nonlinear(gm, H);
  const auto i = gm.leftCols(H).array();
  const auto f = gm.middleCols(H, H).array();
  const auto gg = gm.middleCols(2 * H, H).array();
  const auto o = gm.rightCols(H).array();
  c = (f * c.array() + i * gg).matrix();
  h = (o * c.array().tanh()).matrix();
}

CausalConv1d::CausalConv1d(int in, int filters, int kernel, const std::string& name)
    : w(static_cast<Eigen::Index>(kernel) * in, filters, name + ".w"),
      b(1, filters, name + ".b"),
      in_dim_(in),
      filters_(filters),
      kernel_(kernel) {}

void CausalConv1d::init(std::mt19937_64& rng) {
  glorot_uniform(w.value, rng);
  b.value.setZero();
}

Mat CausalConv1d::forward(const Mat& x, int T, int B) const {
  if (x.rows() != static_cast<Eigen::Index>(T) * B || x.cols() != in_dim_) {
    throw InvalidInputError("conv input shape mismatch");
  }
  Mat y = b.value.row(0).replicate(x.rows(), 1);
  for (int k = 0; k < kernel_; ++k) {
    const Eigen::Index rows = static_cast<Eigen::Index>(T - k) * B;
    if (rows <= 0) break;
    y.bottomRows(rows).noalias() += x.topRows(rows) * w.value.middleRows(static_cast<Eigen::Index>(k) * in_dim_, in_dim_);
  }
  return y;
}

Mat CausalConv1d::forward_train(const Mat& x, int T, int B, ConvCache& cache) const {
  cache.T = T;
  cache.B = B;
  cache.x = x;
  return forward(x, T, B);
}

Mat CausalConv1d::backward(const ConvCache& cache, const Mat& dy) {
  const int T = cache.T, B = cache.B;
  Mat dx = Mat::Zero(cache.x.rows(), in_dim_);
  for (int k = 0; k < kernel_; ++k) {
    const Eigen::Index rows = static_cast<Eigen::Index>(T - k) * B;
    if (rows <= 0) break;
    const auto wk = w.value.middleRows(static_cast<Eigen::Index>(k) * in_dim_, in_dim_);
    w.grad.middleRows(static_cast<Eigen::Index>(k) * in_dim_, in_dim_).noalias() +=
        cache.x.topRows(rows).transpose() * dy.bottomRows(rows);
    dx.topRows(rows).noalias() += dy.bottomRows(rows) * wk.transpose();
  }
  b.grad.row(0) += dy.colwise().sum();
  return dx;
}

Eigen::RowVectorXf CausalConv1d::step(const Eigen::Ref<const Mat>& recent) const {
  if (recent.rows() != kernel_ || recent.cols() != in_dim_) {
    throw InvalidInputError("conv step expects kernel x in_dim history");
  }
  Eigen::RowVectorXf y = b.value.row(0);
  for (int k = 0; k < kernel_; ++k) {
    y.noalias() += recent.row(kernel_ - 1 - k) *
                   w.value.middleRows(static_cast<Eigen::Index>(k) * in_dim_, in_dim_);
  }
  return y;
}

Mat ChunkMeanPool::forward(const Mat& x, int T, int B, int chunk) {
  if (T % chunk != 0) throw InvalidInputError("sequence length must divide into chunks");
  const int C = T / chunk;
  Mat y = Mat::Zero(static_cast<Eigen::Index>(C) * B, x.cols());
  for (int c = 0; c < C; ++c) {
    for (int s = 0; s < chunk; ++s) {
      y.middleRows(static_cast<Eigen::Index>(c) * B, B) +=
          x.middleRows(static_cast<Eigen::Index>(c * chunk + s) * B, B);
    }
  }
  return y / static_cast<float>(chunk);
}

Mat ChunkMeanPool::backward(const Mat& dy, int T, int B, int chunk) {
  const int C = T / chunk;
  Mat dx(static_cast<Eigen::Index>(T) * B, dy.cols());
  for (int c = 0; c < C; ++c) {
    const Mat share = dy.middleRows(static_cast<Eigen::Index>(c) * B, B) / static_cast<float>(chunk);
    for (int s = 0; s < chunk; ++s) {
      dx.middleRows(static_cast<Eigen::Index>(c * chunk + s) * B, B) = share;
    }
  }
  return dx;
}

Mat softmax(const Mat& logits) {
  Mat p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const float mx = logits.row(r).maxCoeff();
    Eigen::RowVectorXf e = (logits.row(r).array() - mx).exp();
    p.row(r) = e / e.sum();
  }
  return p;
}

SoftmaxCeResult softmax_cross_entropy(const Mat& logits, const std::vector<int>& targets) {
  if (logits.rows() != static_cast<Eigen::Index>(targets.size())) {
    throw InvalidInputError("softmax targets must match logit rows");
  }
  SoftmaxCeResult out;
  out.probs = softmax(logits);
  out.dlogits = out.probs;
  double loss = 0.0;
  const float inv_n = 1.0f / static_cast<float>(logits.rows());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int t = targets[static_cast<std::size_t>(r)];
    if (t < 0 || t >= logits.cols()) throw InvalidInputError("softmax target out of range");
    loss -= std::log(std::max(out.probs(r, t), 1e-12f));
    out.dlogits(r, t) -= 1.0f;
  }
  out.dlogits *= inv_n;
  out.loss = static_cast<float>(loss / static_cast<double>(logits.rows()));
  return out;
}

float bce_with_logits(float logit, float target, float* dlogit) {
  const float p = 1.0f / (1.0f + std::exp(-logit));
  if (dlogit != nullptr) *dlogit = p - target;
  // max(z,0) - z*y + log(1 + exp(-|z|))
  return std::max(logit, 0.0f) - logit * target + std::log1p(std::exp(-std::abs(logit)));
}

MseResult mse_loss(const Mat& pred, const Mat& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
    throw InvalidInputError("mse shape mismatch");
  }
  MseResult out;
  Mat diff = pred - target;
  const float inv_n = 1.0f / static_cast<float>(pred.size());
  out.loss = diff.squaredNorm() * inv_n;
  out.dpred = 2.0f * inv_n * diff;
  return out;
}

}  // namespace dmm::nn
