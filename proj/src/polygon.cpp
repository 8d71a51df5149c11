#include "nhlab/polygon.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace nhlab {

std::string PolygonUnit::str() const {
  switch (kind) {
    case Kind::pi_adic: return "pi-adic(p=" + std::to_string(p) + ",n=" + std::to_string(n) + ")";
    case Kind::q_adic: return "q-adic(q=" + q.get_str() + ")";
    default: return "abstract";
  }
}

SlopePolygon SlopePolygon::from_slopes(std::vector<Rational> slopes, PolygonUnit unit) {
  SlopePolygon r;
  std::sort(slopes.begin(), slopes.end());
  r.slopes_ = std::move(slopes);
  r.unit_ = std::move(unit);
  return r;
}

Rational SlopePolygon::value_at(long x) const {
  if (x < 0 || x > length()) throw std::out_of_range("SlopePolygon::value_at outside [0, length]");
  Rational y;
  for (long i = 0; i < x; ++i) y += slopes_[i];
  return y;
}

Vertex SlopePolygon::terminal() const { return {length(), value_at(length())}; }

std::vector<Vertex> SlopePolygon::points() const {
  std::vector<Vertex> out{{0, Rational()}};
  Rational y;
  for (long i = 0; i < length(); ++i) {
    y += slopes_[i];
    out.push_back({i + 1, y});
  }
  return out;
}

std::vector<Vertex> SlopePolygon::vertices() const {
  const auto pts = points();
  std::vector<Vertex> out{pts.front()};
  for (long i = 1; i < length(); ++i)
    if (slopes_[i] != slopes_[i - 1]) out.push_back(pts[i]);
  if (length() > 0) out.push_back(pts.back());
  return out;
}

std::string SlopePolygon::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < slopes_.size(); ++i) os << (i ? ", " : "") << slopes_[i];
  os << "}";
  return os.str();
}

namespace {

void require_same_unit(const SlopePolygon& a, const SlopePolygon& b) {
  if (!(a.unit() == b.unit()))
    throw std::invalid_argument("polygon unit mismatch: " + a.unit().str() + " vs " + b.unit().str());
}

}  // namespace

SlopePolygon concat(const SlopePolygon& a, const SlopePolygon& b) {
  require_same_unit(a, b);
  std::vector<Rational> s = a.slopes();
  s.insert(s.end(), b.slopes().begin(), b.slopes().end());
  return SlopePolygon::from_slopes(std::move(s), a.unit());
}

SlopePolygon truncate_below(const SlopePolygon& a, const Rational& r) {
  std::vector<Rational> s;
  for (const auto& x : a.slopes())
    if (x < r) s.push_back(x);
  return SlopePolygon::from_slopes(std::move(s), a.unit());
}

SlopePolygon scale(const SlopePolygon& a, const Rational& factor, const PolygonUnit& new_unit) {
  if (factor.sign() <= 0) throw std::invalid_argument("scale: factor must be positive");
  std::vector<Rational> s;
  for (const auto& x : a.slopes()) s.push_back(x * factor);
  return SlopePolygon::from_slopes(std::move(s), new_unit);
}

bool lies_on_or_above(const SlopePolygon& a, const SlopePolygon& b) {
  require_same_unit(a, b);
  const long len = std::min(a.length(), b.length());
  Rational ya, yb;
  for (long i = 0; i < len; ++i) {
    ya += a.slopes()[i];
    yb += b.slopes()[i];
    if (ya < yb) return false;
  }
  return true;
}

bool shares_terminal_point(const SlopePolygon& a, const SlopePolygon& b) {
  require_same_unit(a, b);
  const Vertex ta = a.terminal();
  const Vertex tb = b.terminal();
  return ta.x == tb.x && ta.y == tb.y;
}

std::vector<Rational> lower_hull_slopes(std::vector<Vertex> points) {
  std::sort(points.begin(), points.end(), [](const Vertex& l, const Vertex& r) { return l.x < r.x; });
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].x == points[i - 1].x) throw std::invalid_argument("lower_hull_slopes: repeated abscissa");
  // Monotone chain, lower part.
  std::vector<Vertex> hull;
  for (const auto& pt : points) {
    while (hull.size() >= 2) {
      const Vertex& o = hull[hull.size() - 2];
      const Vertex& a = hull.back();
      // Drop a if it lies on or above the segment o -> pt.
      const Rational lhs = (a.y - o.y) * Rational(pt.x - o.x);
      const Rational rhs = (pt.y - o.y) * Rational(a.x - o.x);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  std::vector<Rational> slopes;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const long dx = hull[i].x - hull[i - 1].x;
    const Rational s = (hull[i].y - hull[i - 1].y) / Rational(dx);
    for (long k = 0; k < dx; ++k) slopes.push_back(s);
  }
  return slopes;
}

SlopePolygon np_of_valuations(const std::vector<Valuation>& valuations, PolygonUnit unit) {
  if (valuations.empty() || !valuations[0].is_finite() || !valuations[0].value().is_zero())
    throw std::invalid_argument("np_of_valuations: constant term must have valuation 0");
  std::vector<Vertex> pts;
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    if (valuations[i].is_infinite()) continue;
    if (valuations[i].is_bound())
      throw std::invalid_argument("np_of_valuations: coefficient " + std::to_string(i) +
                                  " is only known to be at least " + valuations[i].value().str());
    pts.push_back({static_cast<long>(i), valuations[i].value()});
  }
  return SlopePolygon::from_slopes(lower_hull_slopes(std::move(pts)), std::move(unit));
}

SlopePolygon np_of_polynomial(const std::vector<CyclotomicInteger>& coeffs, const PolygonUnit& unit) {
  if (coeffs.empty() || !coeffs[0].is_one()) throw std::invalid_argument("np_of_polynomial: constant term must be 1");
  std::vector<Valuation> vals;
  for (const auto& c : coeffs) {
    switch (unit.kind) {
      case PolygonUnit::Kind::q_adic: vals.push_back(q_valuation(c, unit.q)); break;
      case PolygonUnit::Kind::pi_adic: vals.push_back(pi_valuation(c)); break;
      default: throw std::invalid_argument("np_of_polynomial: needs a pi-adic or q-adic unit");
    }
  }
  return np_of_valuations(vals, unit);
}

std::string to_csv(const SlopePolygon& a) {
  std::ostringstream os;
  os << "index,x,y_num,y_den\n";
  long idx = 0;
  for (const auto& v : a.points()) os << idx++ << "," << v.x << "," << v.y.num() << "," << v.y.den() << "\n";
  return os.str();
}

std::string to_svg(const std::vector<NamedPolygon>& polys, const std::string& title) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  long max_x = 1;
  double max_y = 1.0;
  for (const auto& np : polys) {
    max_x = std::max(max_x, np.polygon.length());
    for (const auto& v : np.polygon.points()) max_y = std::max(max_y, v.y.to_double());
  }
  const double w = 640, h = 480, margin = 50;
  const double sx = (w - 2 * margin) / static_cast<double>(max_x);
  const double sy = (h - 2 * margin) / max_y;
  auto px = [&](double x) { return margin + x * sx; };
  auto py = [&](double y) { return h - margin - y * sy; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    os << "<text x=\"" << margin << "\" y=\"24\" font-family=\"monospace\" font-size=\"14\">" << title << "</text>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(static_cast<double>(max_x)) << "\" y2=\""
     << py(0) << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\"" << py(max_y)
     << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const char* col = colors[i % (sizeof(colors) / sizeof(colors[0]))];
    const auto verts = polys[i].polygon.vertices();
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (const auto& v : verts) os << px(static_cast<double>(v.x)) << "," << py(v.y.to_double()) << " ";
    os << "\"/>\n";
    for (const auto& v : verts) {
      os << "<circle cx=\"" << px(static_cast<double>(v.x)) << "\" cy=\"" << py(v.y.to_double())
         << "\" r=\"3\" fill=\"" << col << "\"/>\n";
      os << "<text x=\"" << px(static_cast<double>(v.x)) + 4 << "\" y=\"" << py(v.y.to_double()) - 4 - 12.0 * i
         << "\" font-family=\"monospace\" font-size=\"10\" fill=\"" << col << "\">(" << v.x << "," << v.y
         << ")</text>\n";
    }
    os << "<text x=\"" << w - margin - 120 << "\" y=\"" << margin + 16.0 * i << "\" font-family=\"monospace\""
       << " font-size=\"12\" fill=\"" << col << "\">" << polys[i].name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nhlab
