#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "nuqrom/errors.hpp"

namespace nuqrom {

using i64 = std::int64_t;

struct Subsystem {
  std::string label;
  i64 dim = 1;
};

// Labeled registers over a product space. The first subsystem is the most
// significant digit of a basis index; advice and work labels partition the
// subsystem list and the answer label's computational-basis value is the
// adversary's answer.
class RegisterLayout {
public:
  RegisterLayout() = default;

  RegisterLayout(std::vector<Subsystem> subsystems,
                 std::vector<std::string> advice_labels,
                 std::vector<std::string> work_labels,
                 std::string answer_label)
      : subsystems_(std::move(subsystems)),
        advice_labels_(std::move(advice_labels)),
        work_labels_(std::move(work_labels)),
        answer_label_(std::move(answer_label)) {
    if (subsystems_.empty()) throw DimensionMismatch("layout has no subsystems");
    strides_.assign(subsystems_.size(), 1);
    for (int j = static_cast<int>(subsystems_.size()) - 2; j >= 0; --j)
      strides_[j] = strides_[j + 1] * subsystems_[j + 1].dim;
    dim_ = strides_[0] * subsystems_[0].dim;

    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
      if (subsystems_[i].dim < 1)
        throw DimensionMismatch("subsystem dimension must be >= 1");
      for (std::size_t j = i + 1; j < subsystems_.size(); ++j)
        if (subsystems_[i].label == subsystems_[j].label)
          throw DimensionMismatch("duplicate subsystem label: " + subsystems_[i].label);
    }
    if (advice_labels_.size() + work_labels_.size() != subsystems_.size())
      throw DimensionMismatch("advice and work labels must partition the subsystems");
    for (const auto& l : advice_labels_) (void)index_of(l);
    for (const auto& l : work_labels_) {
      (void)index_of(l);
      if (std::find(advice_labels_.begin(), advice_labels_.end(), l) != advice_labels_.end())
        throw DimensionMismatch("label in both advice and work sets: " + l);
    }
    (void)index_of(answer_label_);

    advice_dim_ = 1;
    for (const auto& s : subsystems_)
      if (is_advice(s.label)) advice_dim_ *= s.dim;
    work_dim_ = dim_ / advice_dim_;
  }

  i64 dim() const { return dim_; }
  i64 advice_dim() const { return advice_dim_; }
  i64 work_dim() const { return work_dim_; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  const std::vector<std::string>& advice_labels() const { return advice_labels_; }
  const std::vector<std::string>& work_labels() const { return work_labels_; }
  const std::string& answer_label() const { return answer_label_; }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
      if (subsystems_[i].label == label) return i;
    throw DimensionMismatch("unknown register label: " + label);
  }

  i64 subsystem_dim(const std::string& label) const {
    return subsystems_[index_of(label)].dim;
  }

  i64 stride(const std::string& label) const { return strides_[index_of(label)]; }

  i64 digit(i64 index, std::size_t subsystem) const {
    return (index / strides_[subsystem]) % subsystems_[subsystem].dim;
  }

  i64 digit(i64 index, const std::string& label) const {
    return digit(index, index_of(label));
  }

  i64 answer_of(i64 index) const { return digit(index, answer_label_); }
  i64 answer_dim() const { return subsystem_dim(answer_label_); }

  // Global basis index with the advice registers set to the digits of `a`
  // (mixed radix, layout order) and all work registers set to 0.
  i64 embed_advice(i64 a) const {
    i64 index = 0;
    for (int j = static_cast<int>(subsystems_.size()) - 1; j >= 0; --j) {
      if (!is_advice(subsystems_[j].label)) continue;
      index += (a % subsystems_[j].dim) * strides_[j];
      a /= subsystems_[j].dim;
    }
    return index;
  }

  bool is_advice(const std::string& label) const {
    return std::find(advice_labels_.begin(), advice_labels_.end(), label) !=
           advice_labels_.end();
  }

private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::string> advice_labels_;
  std::vector<std::string> work_labels_;
  std::string answer_label_;
  std::vector<i64> strides_;
  i64 dim_ = 1;
  i64 advice_dim_ = 1;
  i64 work_dim_ = 1;
};

}  // namespace nuqrom
