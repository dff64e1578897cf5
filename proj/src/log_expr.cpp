#include "paritylab/log_expr.hpp"

#include <cmath>

#include "paritylab/errors.hpp"

namespace paritylab {

namespace {

constexpr unsigned long kTrialLimit = 10000;

// Adds sign * log2(n) for a positive integer n into e. Cofactors without a
// prime factor below kTrialLimit stay as a single (possibly composite) atom.
void add_log_integer(LogExpr& e, Integer n, int sign) {
  while (mpz_even_p(n.get_mpz_t())) {
    n /= 2;
    e.constant += sign;
  }
  for (unsigned long p = 3; p <= kTrialLimit && Integer(p) * p <= n; p += 2) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      e.terms[Integer(p)] += sign;
    }
  }
  if (n > 1) e.terms[n] += sign;
}

void prune(LogExpr& e) {
  for (auto it = e.terms.begin(); it != e.terms.end();) {
    it = it->second == 0 ? e.terms.erase(it) : std::next(it);
  }
}

}  // namespace

LogExpr LogExpr::log2_of(const Rational& positive) {
  if (positive <= 0) throw DomainError("log2 of a non-positive value");
  LogExpr e;
  e.constant = 0;
  add_log_integer(e, positive.get_num(), 1);
  add_log_integer(e, positive.get_den(), -1);
  prune(e);
  return e;
}

LogExpr LogExpr::rational(const Rational& r) {
  LogExpr e;
  e.constant = r;
  return e;
}

LogExpr LogExpr::operator+(const LogExpr& o) const {
  LogExpr e = *this;
  e.constant += o.constant;
  for (const auto& [p, c] : o.terms) e.terms[p] += c;
  prune(e);
  return e;
}

LogExpr LogExpr::operator-(const LogExpr& o) const { return *this + o * Rational(-1); }

LogExpr LogExpr::operator*(const Rational& k) const {
  LogExpr e;
  e.constant = constant * k;
  for (const auto& [p, c] : terms) e.terms[p] = c * k;
  prune(e);
  return e;
}

double LogExpr::to_double() const {
  double v = constant.get_d();
  for (const auto& [p, c] : terms) v += c.get_d() * std::log2(p.get_d());
  return v;
}

std::string LogExpr::str() const {
  std::string out;
  if (constant != 0 || terms.empty()) out = to_string(constant);
  for (const auto& [p, c] : terms) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (mag != 1) out += to_string(mag) + "*";
    out += "log2(" + p.get_str() + ")";
  }
  return out;
}

}  // namespace paritylab
