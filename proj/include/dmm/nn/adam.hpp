#pragma once

#include "dmm/nn/layers.hpp"

namespace dmm::nn {

// Adam with bias correction; one state pair per parameter tensor.
class Adam {
 public:
  explicit Adam(ParamRefs params, float lr = 1e-3f, float beta1 = 0.9f, float beta2 = 0.999f,
                float eps = 1e-7f);

  void step();
  void zero_grad() { zero_grads(params_); }
  void set_lr(float lr) { lr_ = lr; }
  float lr() const { return lr_; }

 private:
  struct State {
    Mat m, v;
  };
  ParamRefs params_;
  std::vector<State> state_;
  float lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

}  // namespace dmm::nn
