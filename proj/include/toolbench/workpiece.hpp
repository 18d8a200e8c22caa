#pragma once

#include "toolbench/types.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace toolbench {

struct Plane {
  Vec3 origin = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // points out of the material
};

/// Bore wall: material lies outside `radius`, the tool works inside.
struct InnerCylinder {
  Vec3 axis_point = Vec3::Zero();
  Vec3 axis_dir = Vec3::UnitZ();
  double radius = 0.15;
};

using Geometry = std::variant<Plane, InnerCylinder>;

/// Regular grid of bead heights over surface coordinates (u, v).
///
/// Heights live on nodes u = u0 + i*du, v = v0 + j*dv and are bilinearly
/// interpolated in between. Outside the grid the height is zero, except along
/// u when the grid is periodic (cylinder circumference).
class BeadField {
 public:
  BeadField() = default;
  BeadField(double u0, double v0, double du, double dv, std::size_t nu, std::size_t nv,
            bool periodic_u = false);

  double height(double u, double v) const;

  double node(std::size_t i, std::size_t j) const { return h_[j * nu_ + i]; }
  void set_node(std::size_t i, std::size_t j, double value);

  std::size_t nu() const { return nu_; }
  std::size_t nv() const { return nv_; }
  double u0() const { return u0_; }
  double v0() const { return v0_; }
  double du() const { return du_; }
  double dv() const { return dv_; }
  bool periodic_u() const { return periodic_u_; }
  bool empty() const { return h_.empty(); }

  double cell_area() const { return du_ * dv_; }
  double volume() const;

  const std::vector<double>& heights() const { return h_; }

  /// Lowers every node within `radius` of (u, v) by `depth`, flooring at zero.
  /// Returns the removed volume; appends touched flat indices to `changed` if given.
  double lower_disk(double u, double v, double radius, double depth,
                    std::vector<std::size_t>* changed = nullptr);

 private:
  double u0_ = 0.0, v0_ = 0.0, du_ = 1e-3, dv_ = 1e-3;
  std::size_t nu_ = 0, nv_ = 0;
  bool periodic_u_ = false;
  std::vector<double> h_;
};

struct ContactModel {
  double stiffness = 2e4;  // N/m
  double damping = 50.0;   // N*s/m
  double friction = 0.3;   // Coulomb coefficient
  double deadband = 1e-4;  // m/s, tangential speed below which friction is off
};

struct Workpiece {
  Geometry geometry = Plane{};
  BeadField beads;
  ContactModel contact;
  double preston_k = 0.0;    // m^2/N
  double tool_radius = 0.01; // m, grinding footprint

  double tool_area() const;
  /// Throws InvalidInput when an invariant does not hold.
  void validate() const;
};

struct SurfaceSample {
  double u = 0.0;
  double v = 0.0;
  double height = 0.0;          // bead height above the nominal surface
  Vec3 normal = Vec3::UnitZ();  // outward from material
  double gap = 0.0;             // signed distance from the beaded surface along normal
};

SurfaceSample surface_eval(const Workpiece& wp, const Vec3& point);

/// Outward normal of the nominal surface nearest to `point` (no bead lookup).
Vec3 surface_normal(const Geometry& geometry, const Vec3& point);

/// Signed distance from the nominal (bead-free) surface, positive on the free side.
double nominal_gap(const Geometry& geometry, const Vec3& point);

}  // namespace toolbench
