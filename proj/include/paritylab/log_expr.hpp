#pragma once

#include <map>
#include <string>

#include "paritylab/rational.hpp"

namespace paritylab {

/// Exact real of the form constant + Σ coeff_p · log2(p) over odd atoms p.
/// Atoms are primes below a trial-division limit or unfactored cofactors;
/// powers of two fold into the constant.
struct LogExpr {
  Rational constant;
  std::map<Integer, Rational> terms;  // prime -> coefficient, zero coefficients dropped

  static LogExpr log2_of(const Rational& positive);
  static LogExpr rational(const Rational& r);

  LogExpr operator+(const LogExpr& o) const;
  LogExpr operator-(const LogExpr& o) const;
  LogExpr operator*(const Rational& k) const;
  bool operator==(const LogExpr& o) const = default;

  bool is_rational() const { return terms.empty(); }
  double to_double() const;
  std::string str() const;
};

}  // namespace paritylab
