#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "nhlab/cyclotomic.hpp"
#include "nhlab/rational.hpp"

namespace nhlab {

/// Normalization of the valuation a polygon is measured in.
struct PolygonUnit {
  enum class Kind { abstract, pi_adic, q_adic };
  Kind kind = Kind::abstract;
  long p = 0;
  int n = 0;        // pi-adic: level of zeta_{p^n}
  mpz_class q = 0;  // q-adic

  static PolygonUnit abstract_unit() { return {}; }
  static PolygonUnit pi_adic(long p, int n) { return {Kind::pi_adic, p, n, 0}; }
  static PolygonUnit q_adic(const mpz_class& q) { return {Kind::q_adic, 0, 0, q}; }

  friend bool operator==(const PolygonUnit& a, const PolygonUnit& b) {
    return a.kind == b.kind && a.p == b.p && a.n == b.n && a.q == b.q;
  }
  std::string str() const;
};

struct Vertex {
  long x = 0;
  Rational y;
};

/// Convex polygon starting at (0,0), stored as its sorted multiset of slopes.
class SlopePolygon {
 public:
  SlopePolygon() = default;
  static SlopePolygon from_slopes(std::vector<Rational> slopes, PolygonUnit unit = {});

  const std::vector<Rational>& slopes() const { return slopes_; }
  const PolygonUnit& unit() const { return unit_; }
  long length() const { return static_cast<long>(slopes_.size()); }
  bool empty() const { return slopes_.empty(); }

  /// Height at integer abscissa 0 <= x <= length().
  Rational value_at(long x) const;
  /// (length, total height).
  Vertex terminal() const;
  /// All points (i, y_i), i = 0..length().
  std::vector<Vertex> points() const;
  /// Break points only (where the slope changes), including both ends.
  std::vector<Vertex> vertices() const;

  friend bool operator==(const SlopePolygon& a, const SlopePolygon& b) {
    return a.unit_ == b.unit_ && a.slopes_ == b.slopes_;
  }

  std::string str() const;

 private:
  std::vector<Rational> slopes_;
  PolygonUnit unit_;
};

/// Multiset union; throws std::invalid_argument on unit mismatch.
SlopePolygon concat(const SlopePolygon& a, const SlopePolygon& b);

/// Keeps exactly the slopes < r.
SlopePolygon truncate_below(const SlopePolygon& a, const Rational& r);

/// Multiplies every slope by factor (> 0) and retags the unit.
SlopePolygon scale(const SlopePolygon& a, const Rational& factor, const PolygonUnit& new_unit);

/// Pointwise comparison of a against b on the common x-range [0, min length].
bool lies_on_or_above(const SlopePolygon& a, const SlopePolygon& b);

bool shares_terminal_point(const SlopePolygon& a, const SlopePolygon& b);

/// Slopes of the lower convex hull of the points, which need not be sorted; x
/// values must be distinct. The hull spans from the smallest to the largest x.
std::vector<Rational> lower_hull_slopes(std::vector<Vertex> points);

/// Lower hull of (i, v(c_i)) over the finite-valuation coefficients.
/// valuations[0] must be 0 (constant term 1).
SlopePolygon np_of_valuations(const std::vector<Valuation>& valuations, PolygonUnit unit);

/// Newton polygon of 1 + c_1 s + ... in the given unit (pi-adic for the ring of
/// the coefficients, or q-adic). Throws unless coeffs[0] == 1.
SlopePolygon np_of_polynomial(const std::vector<CyclotomicInteger>& coeffs, const PolygonUnit& unit);

/// CSV with header index,x,y_num,y_den over all integer points.
std::string to_csv(const SlopePolygon& a);

struct NamedPolygon {
  std::string name;
  SlopePolygon polygon;
};

/// Static SVG drawing of the polygons on shared axes with vertex labels.
std::string to_svg(const std::vector<NamedPolygon>& polys, const std::string& title = "");

}  // namespace nhlab
