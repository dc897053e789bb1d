// Polynomials in the four base coordinates, stored as monomial term lists.
// Covers linear gauge potentials and simple test fields without an
// expression parser; differentiation is exact.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sublorentz/linalg.hpp"

namespace sublorentz {

struct MonomialTerm {
  double coef = 0.0;
  std::array<int, 4> exps{};  // exponents of x0..x3
};

class Polynomial4 {
 public:
  Polynomial4() = default;
  explicit Polynomial4(std::vector<MonomialTerm> terms)
      : terms_(std::move(terms)) {}
  static Polynomial4 constant(double c);
  static Polynomial4 coordinate(int axis);  // the monomial x^axis

  double operator()(const Vec4& x) const;
  Polynomial4 derivative(int axis) const;
  Vec4 gradient_at(const Vec4& x) const;

  bool empty() const { return terms_.empty(); }
  const std::vector<MonomialTerm>& terms() const { return terms_; }

  Polynomial4& operator+=(const Polynomial4& other);

  // Term list format: "coef e0 e1 e2 e3" with ';' between terms, e.g.
  // "1.0 0 0 0 1; -0.5 2 0 0 0" is x3 - 0.5*(x0)^2. Throws SpecError.
  static Polynomial4 parse(std::string_view text);
  std::string to_string() const;

 private:
  std::vector<MonomialTerm> terms_;
};

}  // namespace sublorentz
