#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace paritylab {

using Rational = mpq_class;
using Integer = mpz_class;

// Capital is a non-negative exact rational; the alias documents intent.
using Capital = Rational;

/// Parses "p/q" or "p" (optional sign) into a canonical rational.
/// Throws StructuralError on anything else, including a zero denominator.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// num/den in lowest terms (the two-argument mpq_class constructor does not reduce).
Rational frac(const Integer& num, const Integer& den);

/// 2^e for any integer e.
Rational pow2(long e);

Rational pow(const Rational& base, unsigned long e);

Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);

bool is_integer(const Rational& r);

/// Smallest integer >= r.
Integer ceil(const Rational& r);

double to_double(const Rational& r);

}  // namespace paritylab
