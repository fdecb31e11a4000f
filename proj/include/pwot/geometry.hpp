#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

namespace pwot {

/// Width x height of a pixel grid.
struct Shape {
  int width = 0;
  int height = 0;

  std::size_t area() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

/// Axis-aligned pixel rectangle, top-left inclusive, extents w x h.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }  // exclusive
  int bottom() const { return y + h; }  // exclusive
  Shape shape() const { return {w, h}; }
  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  bool empty() const { return w <= 0 || h <= 0; }

  /// Center pixel; for even extents the lower-right of the four middle pixels.
  Point center() const { return {x + w / 2, y + h / 2}; }

  bool contains(const Rect& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  bool contains(Point p) const {
    return p.x >= x && p.y >= y && p.x < right() && p.y < bottom();
  }

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Rectangle of the given size whose center() is `c`.
inline Rect rect_centered_at(Point c, Shape s) {
  return {c.x - s.width / 2, c.y - s.height / 2, s.width, s.height};
}

inline Rect intersect(const Rect& a, const Rect& b) {
  const int x0 = std::max(a.x, b.x);
  const int y0 = std::max(a.y, b.y);
  const int x1 = std::min(a.right(), b.right());
  const int y1 = std::min(a.bottom(), b.bottom());
  if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
  return {x0, y0, x1 - x0, y1 - y0};
}

inline Rect bounding_union(const Rect& a, const Rect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

/// Translate `r` by the smallest amount that puts it inside `bounds`.
/// Rectangles larger than `bounds` are aligned to its top-left.
inline Rect shift_inside(Rect r, const Rect& bounds) {
  if (r.right() > bounds.right()) r.x = bounds.right() - r.w;
  if (r.bottom() > bounds.bottom()) r.y = bounds.bottom() - r.h;
  if (r.x < bounds.x) r.x = bounds.x;
  if (r.y < bounds.y) r.y = bounds.y;
  return r;
}

std::string to_string(const Rect& r);

}  // namespace pwot
