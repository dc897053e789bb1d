#include "sublorentz/polynomial.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sublorentz/errors.hpp"

namespace sublorentz {

Polynomial4 Polynomial4::constant(double c) {
  if (c == 0.0) return Polynomial4{};
  return Polynomial4{{MonomialTerm{c, {0, 0, 0, 0}}}};
}

Polynomial4 Polynomial4::coordinate(int axis) {
  MonomialTerm t{1.0, {0, 0, 0, 0}};
  t.exps[axis] = 1;
  return Polynomial4{{t}};
}

double Polynomial4::operator()(const Vec4& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (int a = 0; a < 4; ++a)
      for (int e = 0; e < t.exps[a]; ++e) v *= x[a];
    sum += v;
  }
  return sum;
}

Polynomial4 Polynomial4::derivative(int axis) const {
  std::vector<MonomialTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.exps[axis] == 0) continue;
    MonomialTerm d = t;
    d.coef *= t.exps[axis];
    d.exps[axis] -= 1;
    out.push_back(d);
  }
  return Polynomial4{std::move(out)};
}

Vec4 Polynomial4::gradient_at(const Vec4& x) const {
  Vec4 g{};
  for (int a = 0; a < 4; ++a) g[a] = derivative(a)(x);
  return g;
}

Polynomial4& Polynomial4::operator+=(const Polynomial4& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Polynomial4 Polynomial4::parse(std::string_view text) {
  std::vector<MonomialTerm> terms;
  std::string buf(text);
  std::stringstream all(buf);
  std::string piece;
  int term_index = 0;
  while (std::getline(all, piece, ';')) {
    ++term_index;
    std::stringstream ts(piece);
    MonomialTerm t;
    if (!(ts >> t.coef)) {
      // Allow empty pieces from trailing semicolons.
      std::string rest;
      ts.clear();
      ts >> rest;
      if (rest.empty()) continue;
      throw SpecError("polynomial term " + std::to_string(term_index) +
                      ": cannot read coefficient from '" + piece + "'");
    }
    for (int a = 0; a < 4; ++a) {
      if (!(ts >> t.exps[a]) || t.exps[a] < 0)
        throw SpecError("polynomial term " + std::to_string(term_index) +
                        ": expected 4 non-negative exponents in '" + piece +
                        "'");
    }
    std::string extra;
    if (ts >> extra)
      throw SpecError("polynomial term " + std::to_string(term_index) +
                      ": trailing token '" + extra + "'");
    if (!std::isfinite(t.coef))
      throw SpecError("polynomial term " + std::to_string(term_index) +
                      ": non-finite coefficient");
    terms.push_back(t);
  }
  return Polynomial4{std::move(terms)};
}

std::string Polynomial4::to_string() const {
  std::string out;
  char buf[128];
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    std::snprintf(buf, sizeof buf, "%.17g %d %d %d %d", t.coef, t.exps[0],
                  t.exps[1], t.exps[2], t.exps[3]);
    if (i) out += "; ";
    out += buf;
  }
  return out;
}

}  // namespace sublorentz
