#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "circlelab/sphere.hpp"

namespace circlelab {

// Metric used by the packing functionals. Spherical is the default; the
// Euclidean chart metric is available for shapes bounded in the chart.
enum class Metric { spherical, euclidean };

struct PointShape {
  SpherePoint location;
};

struct DiskShape {
  Cap cap;
};

// Simple polygon with straight chart edges, stored counterclockwise.
struct PolygonShape {
  std::vector<Complex> vertices;
};

using Shape = std::variant<PointShape, DiskShape, PolygonShape>;

class PeripheralContinuum {
 public:
  static PeripheralContinuum point(int id, const SpherePoint& p);
  static PeripheralContinuum disk(int id, const Cap& cap);
  static PeripheralContinuum chart_disk(int id, Complex center, double radius);
  static PeripheralContinuum polygon(int id, std::vector<Complex> vertices);

  int id() const { return id_; }
  const Shape& shape() const { return shape_; }
  bool is_point() const { return std::holds_alternative<PointShape>(shape_); }
  bool is_disk() const { return std::holds_alternative<DiskShape>(shape_); }
  bool is_polygon() const { return std::holds_alternative<PolygonShape>(shape_); }
  const SpherePoint& point_location() const { return std::get<PointShape>(shape_).location; }
  const Cap& disk_cap() const { return std::get<DiskShape>(shape_).cap; }
  const std::vector<Complex>& polygon_vertices() const { return std::get<PolygonShape>(shape_).vertices; }

  // Closed membership test.
  bool contains(const SpherePoint& p) const;

  // Boundary parametrized by t in [0, boundary_pieces()]: polygon edge k for
  // t in [k, k+1], the circle by angle for disks.
  int boundary_pieces() const;
  SpherePoint boundary_at(double t) const;

  // `count` boundary points in order. Polygon samples contain the vertices
  // and cluster toward them when grading > 1.
  std::vector<SpherePoint> boundary_points(int count, double grading = 1.0) const;

  // A cap containing the continuum.
  Cap enclosing_cap() const;

  // Chart circle of a disk; throws DomainError if the disk contains infinity.
  Circle chart_circle() const;

 private:
  PeripheralContinuum(int id, Shape shape) : id_(id), shape_(std::move(shape)) {}
  int id_ = 0;
  Shape shape_;
};

struct Packing {
  std::string label;
  std::vector<PeripheralContinuum> continua;

  std::size_t size() const { return continua.size(); }
  Packing prefix(std::size_t n) const;
  // Throws DomainError unless ids are unique and continua pairwise disjoint.
  void validate() const;
};

// Metric distance between points; Euclidean needs finite points.
double point_distance(const SpherePoint& a, const SpherePoint& b, Metric metric);
double point_distance(const SpherePoint& p, const PeripheralContinuum& k, Metric metric);
// Largest metric distance from p to a point of k.
double max_point_distance(const SpherePoint& p, const PeripheralContinuum& k, Metric metric);

bool intersects(const PeripheralContinuum& a, const PeripheralContinuum& b);

double diameter(const PeripheralContinuum& k, Metric metric = Metric::spherical);
double set_distance(const PeripheralContinuum& a, const PeripheralContinuum& b, Metric metric = Metric::spherical);
double hausdorff_distance(const PeripheralContinuum& a, const PeripheralContinuum& b,
                          Metric metric = Metric::spherical);
// dist(A, B) / min(diam A, diam B); +inf when the smaller set is a point
// at positive distance.
double relative_distance(const PeripheralContinuum& a, const PeripheralContinuum& b,
                         Metric metric = Metric::spherical);
// Same functional for finite point samples.
double relative_distance(std::span<const SpherePoint> e, std::span<const SpherePoint> f,
                         Metric metric = Metric::spherical);

// (sum diam(p_i)^2)^(1/2).
double l2_diameters(const Packing& packing, Metric metric = Metric::spherical);

// Number of continua meeting `e` with diam >= a * diam(e).
int count_large_intersecting(const Packing& packing, const PeripheralContinuum& e, double a,
                             Metric metric = Metric::spherical);

// Image of k under a Mobius map. Disks map to disks exactly; polygon edges
// are sampled with `pieces_per_edge` chords. Throws DomainError if the image
// of a polygon contains infinity.
PeripheralContinuum mobius_image(const PeripheralContinuum& k, const MobiusTransform& t, int pieces_per_edge = 32);

}  // namespace circlelab
