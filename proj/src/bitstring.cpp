#include "paritylab/bitstring.hpp"

#include "paritylab/errors.hpp"

namespace paritylab {

BitString::BitString(std::string_view bits) : bits_(bits) {
  for (char c : bits_) {
    if (c != '0' && c != '1') {
      throw StructuralError("not a bit string: \"" + std::string(bits) + "\"");
    }
  }
}

BitString BitString::repeat(int bit, std::size_t count) {
  BitString b;
  b.bits_.assign(count, bit ? '1' : '0');
  return b;
}

BitString BitString::from_index(std::size_t length, std::uint64_t index) {
  BitString b;
  b.bits_.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    b.bits_[length - 1 - i] = ((index >> i) & 1U) ? '1' : '0';
  }
  return b;
}

BitString BitString::child(int bit) const {
  BitString b = *this;
  b.bits_.push_back(bit ? '1' : '0');
  return b;
}

BitString BitString::parent() const {
  if (empty()) throw DomainError("the empty string has no parent");
  BitString b = *this;
  b.bits_.pop_back();
  return b;
}

BitString BitString::prefix(std::size_t n) const {
  BitString b;
  b.bits_ = bits_.substr(0, n);
  return b;
}

BitString BitString::operator+(const BitString& tail) const {
  BitString b = *this;
  b.bits_ += tail.bits_;
  return b;
}

BitString& BitString::push_back(int bit) {
  bits_.push_back(bit ? '1' : '0');
  return *this;
}

bool BitString::is_prefix_of(const BitString& other) const {
  return size() <= other.size() && other.bits_.compare(0, size(), bits_) == 0;
}

std::uint64_t BitString::index() const {
  std::uint64_t v = 0;
  for (char c : bits_) v = (v << 1) | (c == '1' ? 1U : 0U);
  return v;
}

std::string BitString::display() const { return empty() ? "λ" : bits_; }

}  // namespace paritylab
