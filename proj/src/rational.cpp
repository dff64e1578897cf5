#include "paritylab/rational.hpp"

#include <cctype>

#include "paritylab/errors.hpp"
#include "paritylab/tags.hpp"

namespace paritylab {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!is_digits(num) || !is_digits(den)) {
    throw StructuralError("malformed rational \"" + std::string(text) + "\"");
  }
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw StructuralError("zero denominator in \"" + std::string(text) + "\"");
  Rational r(negative ? Integer(-n) : n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational frac(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational pow2(long e) {
  Integer p;
  const unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_ui_pow_ui(p.get_mpz_t(), 2, a);
  if (e >= 0) return Rational(p);
  Rational r(Integer(1), p);
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, unsigned long e) {
  Integer n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_string(Kind k) {
  return k == Kind::Martingale ? "martingale" : "supermartingale";
}

std::string to_string(ParityTag t) {
  switch (t) {
    case ParityTag::BetsOnEven: return "bets_on_even";
    case ParityTag::BetsOnOdd: return "bets_on_odd";
    case ParityTag::Unrestricted: return "unrestricted";
  }
  return "unrestricted";
}

std::string to_string(SidedTag t) {
  switch (t) {
    case SidedTag::ZeroSided: return "zero_sided";
    case SidedTag::OneSided: return "one_sided";
    case SidedTag::Unrestricted: return "unrestricted";
  }
  return "unrestricted";
}

Kind parse_kind(std::string_view s) {
  if (s == "martingale") return Kind::Martingale;
  if (s == "supermartingale") return Kind::Supermartingale;
  throw StructuralError("unknown kind \"" + std::string(s) + "\"");
}

ParityTag parse_parity(std::string_view s) {
  if (s == "bets_on_even") return ParityTag::BetsOnEven;
  if (s == "bets_on_odd") return ParityTag::BetsOnOdd;
  if (s == "unrestricted") return ParityTag::Unrestricted;
  throw StructuralError("unknown parity tag \"" + std::string(s) + "\"");
}

SidedTag parse_sided(std::string_view s) {
  if (s == "zero_sided") return SidedTag::ZeroSided;
  if (s == "one_sided") return SidedTag::OneSided;
  if (s == "unrestricted") return SidedTag::Unrestricted;
  throw StructuralError("unknown sided tag \"" + std::string(s) + "\"");
}

}  // namespace paritylab
