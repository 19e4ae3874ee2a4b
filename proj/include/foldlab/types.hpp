#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>

namespace foldlab {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Append a trailing zero: a point of the hyperplane H = {x_{n+1} = 0}.
template <typename Derived>
VectorX<typename Derived::Scalar> embed_in_H(const Eigen::MatrixBase<Derived>& x) {
  VectorX<typename Derived::Scalar> out(x.size() + 1);
  out.head(x.size()) = x;
  out(x.size()) = 0;
  return out;
}

/// Drop the last coordinate.
template <typename Derived>
VectorX<typename Derived::Scalar> project_to_H(const Eigen::MatrixBase<Derived>& q) {
  return q.head(q.size() - 1);
}

enum class Verdict { Pass, Fail, Certified, Violated, Inconclusive };

constexpr const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Certified: return "certified";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

template <typename Scalar>
constexpr Scalar pi_v = Scalar(3.141592653589793238462643383279502884L);

}  // namespace foldlab
