#pragma once

#include <cmath>
#include <concepts>

namespace datalimit {

/// Neumaier's variant of Kahan summation.
template <std::floating_point Real>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }

  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0;
  Real comp_ = 0;
};

/// Relative difference |a - b| / max(|a|, |b|); 0 when both are 0.
template <std::floating_point Real>
Real relative_difference(Real a, Real b) {
  const Real scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? Real(0) : std::abs(a - b) / scale;
}

}  // namespace datalimit
