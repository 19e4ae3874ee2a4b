#pragma once

#include "foldlab/errors.hpp"
#include "foldlab/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace foldlab {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;
};

/// Multivariate polynomial with analytic first and second derivatives.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int dim, std::vector<Monomial> terms) : dim_(dim), terms_(std::move(terms)) {
    require(dim_ > 0, ErrorKind::InvalidInput, "polynomial dimension must be positive");
    for (const auto& t : terms_) {
      require(static_cast<int>(t.powers.size()) == dim_, ErrorKind::InvalidInput,
              "monomial exponent list does not match polynomial dimension");
      for (int p : t.powers) require(p >= 0, ErrorKind::InvalidInput, "negative monomial exponent");
    }
  }

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  template <typename Derived>
  typename Derived::Scalar value(const Eigen::MatrixBase<Derived>& x) const {
    using Scalar = typename Derived::Scalar;
    Scalar sum = 0;
    for (const auto& t : terms_) sum += Scalar(t.coeff) * monomial(x, t.powers, -1, -1);
    return sum;
  }

  template <typename Derived>
  VectorX<typename Derived::Scalar> gradient(const Eigen::MatrixBase<Derived>& x) const {
    using Scalar = typename Derived::Scalar;
    VectorX<Scalar> g = VectorX<Scalar>::Zero(dim_);
    for (const auto& t : terms_)
      for (int i = 0; i < dim_; ++i)
        if (t.powers[i] > 0) g(i) += Scalar(t.coeff) * Scalar(t.powers[i]) * monomial(x, t.powers, i, -1);
    return g;
  }

  template <typename Derived>
  MatrixX<typename Derived::Scalar> hessian(const Eigen::MatrixBase<Derived>& x) const {
    using Scalar = typename Derived::Scalar;
    MatrixX<Scalar> h = MatrixX<Scalar>::Zero(dim_, dim_);
    for (const auto& t : terms_)
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
          Scalar factor;
          if (i == j) {
            if (t.powers[i] < 2) continue;
            factor = Scalar(t.powers[i]) * Scalar(t.powers[i] - 1);
          } else {
            if (t.powers[i] < 1 || t.powers[j] < 1) continue;
            factor = Scalar(t.powers[i]) * Scalar(t.powers[j]);
          }
          const Scalar value = Scalar(t.coeff) * factor * monomial(x, t.powers, i, j);
          h(i, j) += value;
          if (i != j) h(j, i) += value;
        }
    return h;
  }

 private:
  // Product of x_k^{p_k} with the exponents at `di` and `dj` each lowered by one.
  template <typename Derived>
  static typename Derived::Scalar monomial(const Eigen::MatrixBase<Derived>& x, const std::vector<int>& powers,
                                           int di, int dj) {
    using Scalar = typename Derived::Scalar;
    Scalar prod = 1;
    for (int k = 0; k < static_cast<int>(powers.size()); ++k) {
      int p = powers[k];
      if (k == di) --p;
      if (k == dj) --p;
      for (int e = 0; e < p; ++e) prod *= x(k);
    }
    return prod;
  }

  int dim_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace foldlab
