#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadocc/image.hpp"

namespace roadocc {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// Closed polygon in pixel coordinates; at least three vertices.
struct PolygonPath {
  std::vector<Point2> vertices;

  bool operator==(const PolygonPath&) const = default;
};

/// A labelled object drawn by one user, possibly as several blobs.
struct LabeledObject {
  std::string name;
  std::string user;
  std::vector<PolygonPath> polygons;

  bool operator==(const LabeledObject&) const = default;
};

struct AnnotationDocument {
  std::string filename;
  int width = 0;
  int height = 0;
  std::vector<LabeledObject> objects;

  bool operator==(const AnnotationDocument&) const = default;

  /// Throws Error describing the first invariant violation.
  void validate() const;
  /// Distinct users of objects named label, in document order.
  std::vector<std::string> users_for(std::string_view label) const;
};

struct ParsedAnnotation {
  AnnotationDocument document;
  /// Unknown elements and attributes, with line numbers.
  std::vector<std::string> warnings;
};

/// Parses the annotation XML schema:
///   <annotation><filename/><size width= height=/>
///     <object><name/><user/><polygon><pt x= y=/>...</polygon>...</object>...
///   </annotation>
/// Throws ParseError with a line number.
ParsedAnnotation parse_annotation(std::string_view xml);
ParsedAnnotation load_annotation(const std::string& path);

/// Canonical serialization: fixed element order, two-space indentation and
/// shortest round-trip decimal coordinates.
std::string write_annotation(const AnnotationDocument& doc);

/// Which users' polygons contribute to a mask.
struct UserFilter {
  /// Only this user's objects; std::nullopt takes every user.
  std::optional<std::string> user;
};

/// Union of every polygon of objects named label. A pixel is set when its
/// center (x+0.5, y+0.5) is inside a polygon by the even-odd rule.
BinaryMask rasterize(const AnnotationDocument& doc, std::string_view label,
                     const UserFilter& filter = {});

/// Even-odd fill of a single polygon onto mask (set bits are OR-ed in).
void fill_polygon(BinaryMask& mask, const PolygonPath& polygon);

struct OccupancyBin {
  double lo;
  double hi;
  std::size_t count;
};

/// Histogram of per-mask road fractions with bins [k w, (k+1) w). A fully
/// covered mask falls into the last bin. 1/bin_width must be an integer.
std::vector<OccupancyBin> occupancy_histogram(const std::vector<BinaryMask>& masks,
                                              double bin_width = 0.05);

}  // namespace roadocc
