#include "dmm/nn/adam.hpp"

#include <cmath>

namespace dmm::nn {

Adam::Adam(ParamRefs params, float lr, float beta1, float beta2, float eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  state_.reserve(params_.size());
  for (const auto* p : params_) {
    state_.push_back({Mat::Zero(p->value.rows(), p->value.cols()),
                      Mat::Zero(p->value.rows(), p->value.cols())});
  }
}

void Adam::step() {
  ++t_;
  const float bc1 = 1.0f - std::pow(beta1_, static_cast<float>(t_));
  const float bc2 = 1.0f - std::pow(beta2_, static_cast<float>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Param& p = *params_[i];
    State& s = state_[i];
    s.m = beta1_ * s.m + (1.0f - beta1_) * p.grad;
    s.v = (beta2_ * s.v.array() + (1.0f - beta2_) * p.grad.array().square()).matrix();
    const auto m_hat = s.m.array() / bc1;
    const auto v_hat = s.v.array() / bc2;
    p.value.array() -= lr_ * m_hat / (v_hat.sqrt() + eps_);
  }
}

}  // namespace dmm::nn
