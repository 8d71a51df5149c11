#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nhlab::ff {

inline constexpr int kMaxDegree = 32;

/// Parameters of F_{p^k}. The modulus is the first monic irreducible of
/// degree k when candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are ordered by
/// the integer c_0 + c_1 p + ... + c_{k-1} p^{k-1}. Instances are owned by a
/// process-wide registry (see field()) and never destroyed, so elements may
/// hold a plain pointer to them.
struct FieldParams {
  long p = 0;
  int k = 0;
  std::uint64_t size = 0;           // p^k
  std::vector<std::uint32_t> modulus;  // k+1 coefficients, modulus[k] = 1
  std::vector<std::uint32_t> trace_of_basis;  // Tr(x^i), i < k
};

/// Registry lookup; builds the field on first use. Thread-safe.
const FieldParams& field(long p, int k);

/// Degree-k monic irreducible selection, exposed for tests.
std::vector<std::uint32_t> smallest_irreducible(long p, int k);
bool is_irreducible(long p, const std::vector<std::uint32_t>& monic);

class FFElem {
 public:
  FFElem() = default;
  explicit FFElem(const FieldParams& f) : f_(&f) {}
  FFElem(const FieldParams& f, long constant);

  static FFElem zero(const FieldParams& f) { return FFElem(f); }
  static FFElem one(const FieldParams& f) { return FFElem(f, 1); }
  /// Class of x, the root of the modulus.
  static FFElem generator(const FieldParams& f);
  /// Element whose coefficient vector is the base-p expansion of index.
  static FFElem from_index(const FieldParams& f, std::uint64_t index);
  static FFElem from_coeffs(const FieldParams& f, const std::vector<long>& coeffs);

  const FieldParams& field() const { return *f_; }
  bool has_field() const { return f_ != nullptr; }
  std::uint32_t coeff(int i) const { return c_[i]; }
  std::uint64_t index() const;

  bool is_zero() const;
  bool is_one() const;
  /// True iff the element lies in the prime field.
  bool is_prime_field() const;

  FFElem operator-() const;
  FFElem& operator+=(const FFElem& o);
  FFElem& operator-=(const FFElem& o);
  FFElem& operator*=(const FFElem& o);
  friend FFElem operator+(FFElem a, const FFElem& b) { return a += b; }
  friend FFElem operator-(FFElem a, const FFElem& b) { return a -= b; }
  friend FFElem operator*(FFElem a, const FFElem& b) { return a *= b; }

  FFElem pow(std::uint64_t e) const;
  FFElem inverse() const;
  FFElem frobenius() const { return pow(static_cast<std::uint64_t>(f_->p)); }
  FFElem scaled(long s) const;

  friend bool operator==(const FFElem& a, const FFElem& b) {
    return a.f_ == b.f_ && a.c_ == b.c_;
  }
  /// Enumeration order (by index).
  friend bool operator<(const FFElem& a, const FFElem& b) { return a.index() < b.index(); }

  std::string str() const;

 private:
  const FieldParams* f_ = nullptr;
  std::array<std::uint32_t, kMaxDegree> c_{};
};

/// Tr_{F_{p^k}/F_p}(x) as a residue in [0, p).
long absolute_trace(const FFElem& x);

/// Direct sum x + x^p + ... + x^{p^{k-1}}; the reference route for absolute_trace.
FFElem frobenius_trace_sum(const FFElem& x);

/// Half-open index range [begin, end) of an enumeration chunk.
struct IndexRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

/// Splits [0, p^k) into at most `parts` contiguous non-empty chunks.
std::vector<IndexRange> enumeration_chunks(const FieldParams& f, unsigned parts);

/// Calls fn(elem) for each element with index in range, in increasing order.
template <class Fn>
void for_each_element(const FieldParams& f, IndexRange range, Fn&& fn) {
  if (range.begin >= range.end) return;
  FFElem x = FFElem::from_index(f, range.begin);
  for (std::uint64_t i = range.begin; i < range.end; ++i) {
    fn(static_cast<const FFElem&>(x));
    if (i + 1 < range.end) x = FFElem::from_index(f, i + 1);
  }
}

/// All p^k elements in enumeration order.
std::vector<FFElem> enumerate(const FieldParams& f);

/// Fixed embedding F_{p^a} -> F_{p^{ab}} sending the source generator to the
/// smallest (in enumeration order) root of the source modulus in the target.
class Embedding {
 public:
  Embedding(const FieldParams& source, const FieldParams& target);
  const FieldParams& source() const { return *src_; }
  const FieldParams& target() const { return *dst_; }
  FFElem operator()(const FFElem& x) const;
  const FFElem& image_of_generator() const { return powers_.at(1 % powers_.size()); }

 private:
  const FieldParams* src_;
  const FieldParams* dst_;
  std::vector<FFElem> powers_;  // images of x^i, i < a
};

/// Cached embedding lookup. Throws std::invalid_argument unless a | k.
const Embedding& embedding(const FieldParams& source, const FieldParams& target);

FFElem embed(const FFElem& x, const FieldParams& target);

}  // namespace nhlab::ff
