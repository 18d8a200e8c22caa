#include "toolbench/workpiece.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace toolbench {

namespace {

// Orthonormal pair spanning the plane perpendicular to `axis`. The first
// vector is the projection of the least-aligned world axis, so a +z normal
// yields (x, y).
std::pair<Vec3, Vec3> tangent_basis(const Vec3& axis) {
  Vec3 ref = Vec3::UnitX();
  if (std::abs(axis.x()) > 0.9) ref = Vec3::UnitY();
  Vec3 e1 = ref - axis * axis.dot(ref);
  e1.normalize();
  Vec3 e2 = axis.cross(e1);
  return {e1, e2};
}

struct CylinderRadial {
  Vec3 radial;  // component of (p - axis_point) perpendicular to the axis
  double rho;
  double axial;
};

CylinderRadial radial_of(const InnerCylinder& c, const Vec3& p) {
  const Vec3 rel = p - c.axis_point;
  const double axial = rel.dot(c.axis_dir);
  const Vec3 radial = rel - c.axis_dir * axial;
  return {radial, radial.norm(), axial};
}

void check_plane(const Plane& pl) {
  if (!is_finite(pl.origin) || !is_finite(pl.normal)) throw InvalidInput("plane: non-finite geometry");
  if (std::abs(pl.normal.norm() - 1.0) > 1e-9) throw InvalidInput("plane: normal must be unit length");
}

void check_cylinder(const InnerCylinder& c) {
  if (!is_finite(c.axis_point) || !is_finite(c.axis_dir)) throw InvalidInput("cylinder: non-finite geometry");
  if (std::abs(c.axis_dir.norm() - 1.0) > 1e-9) throw InvalidInput("cylinder: axis direction must be unit length");
  if (!(c.radius > 0.0) || !std::isfinite(c.radius)) throw InvalidInput("cylinder: radius must be > 0");
}

}  // namespace

BeadField::BeadField(double u0, double v0, double du, double dv, std::size_t nu, std::size_t nv,
                     bool periodic_u)
    : u0_(u0), v0_(v0), du_(du), dv_(dv), nu_(nu), nv_(nv), periodic_u_(periodic_u), h_(nu * nv, 0.0) {
  if (!(du > 0.0) || !(dv > 0.0)) throw InvalidInput("bead grid pitch must be > 0");
}

void BeadField::set_node(std::size_t i, std::size_t j, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw InvalidInput("bead height must be finite and >= 0");
  h_[j * nu_ + i] = value;
}

double BeadField::height(double u, double v) const {
  if (h_.empty()) return 0.0;
  const double fv = (v - v0_) / dv_;
  if (fv < 0.0 || fv > static_cast<double>(nv_ - 1)) return 0.0;
  double fu = (u - u0_) / du_;
  if (periodic_u_) {
    const double n = static_cast<double>(nu_);
    fu = std::fmod(fu, n);
    if (fu < 0.0) fu += n;
  } else if (fu < 0.0 || fu > static_cast<double>(nu_ - 1)) {
    return 0.0;
  }

  auto i0 = static_cast<std::size_t>(std::floor(fu));
  auto j0 = static_cast<std::size_t>(std::floor(fv));
  i0 = std::min(i0, nu_ - 1);
  j0 = std::min(j0, nv_ - 1);
  const double a = fu - static_cast<double>(i0);
  const double b = fv - static_cast<double>(j0);
  std::size_t i1 = i0 + 1;
  const std::size_t j1 = std::min(j0 + 1, nv_ - 1);
  if (i1 >= nu_) i1 = periodic_u_ ? 0 : nu_ - 1;

  const double h00 = node(i0, j0), h10 = node(i1, j0);
  const double h01 = node(i0, j1), h11 = node(i1, j1);
  return (1.0 - a) * (1.0 - b) * h00 + a * (1.0 - b) * h10 + (1.0 - a) * b * h01 + a * b * h11;
}

double BeadField::volume() const {
  double sum = 0.0;
  for (double h : h_) sum += h;
  return sum * cell_area();
}

double BeadField::lower_disk(double u, double v, double radius, double depth,
                             std::vector<std::size_t>* changed) {
  if (h_.empty() || !(depth > 0.0)) return 0.0;
  const double r2 = radius * radius;
  const long ju_lo = static_cast<long>(std::ceil((v - radius - v0_) / dv_));
  const long ju_hi = static_cast<long>(std::floor((v + radius - v0_) / dv_));
  const long iu_lo = static_cast<long>(std::ceil((u - radius - u0_) / du_));
  const long iu_hi = static_cast<long>(std::floor((u + radius - u0_) / du_));
  const long nu = static_cast<long>(nu_);
  const long nv = static_cast<long>(nv_);

  double removed_height = 0.0;
  for (long j = std::max(0L, ju_lo); j <= std::min(nv - 1, ju_hi); ++j) {
    const double dvv = v0_ + static_cast<double>(j) * dv_ - v;
    for (long i = iu_lo; i <= iu_hi; ++i) {
      long ii = i;
      if (periodic_u_) {
        ii = ((i % nu) + nu) % nu;
      } else if (i < 0 || i >= nu) {
        continue;
      }
      const double duu = u0_ + static_cast<double>(i) * du_ - u;
      if (duu * duu + dvv * dvv > r2) continue;
      const std::size_t idx = static_cast<std::size_t>(j) * nu_ + static_cast<std::size_t>(ii);
      const double before = h_[idx];
      if (before <= 0.0) continue;
      const double after = std::max(0.0, before - depth);
      h_[idx] = after;
      removed_height += before - after;
      if (changed) changed->push_back(idx);
    }
  }
  return removed_height * cell_area();
}

double Workpiece::tool_area() const { return std::numbers::pi * tool_radius * tool_radius; }

void Workpiece::validate() const {
  std::visit([](const auto& g) {
    using G = std::decay_t<decltype(g)>;
    if constexpr (std::is_same_v<G, Plane>) check_plane(g);
    else check_cylinder(g);
  }, geometry);
  if (!(contact.stiffness > 0.0)) throw InvalidInput("workpiece: stiffness must be > 0");
  if (!(contact.damping >= 0.0)) throw InvalidInput("workpiece: damping must be >= 0");
  if (!(contact.friction >= 0.0)) throw InvalidInput("workpiece: friction must be >= 0");
  if (!(preston_k >= 0.0)) throw InvalidInput("workpiece: preston_k must be >= 0");
  if (!(tool_radius > 0.0)) throw InvalidInput("workpiece: tool radius must be > 0");
}

SurfaceSample surface_eval(const Workpiece& wp, const Vec3& point) {
  if (!is_finite(point)) throw InvalidInput("surface_eval: non-finite point");
  SurfaceSample s;
  if (const auto* pl = std::get_if<Plane>(&wp.geometry)) {
    check_plane(*pl);
    const auto [e1, e2] = tangent_basis(pl->normal);
    const Vec3 rel = point - pl->origin;
    s.u = rel.dot(e1);
    s.v = rel.dot(e2);
    s.normal = pl->normal;
    s.height = wp.beads.height(s.u, s.v);
    s.gap = rel.dot(pl->normal) - s.height;
    return s;
  }
  const auto& cyl = std::get<InnerCylinder>(wp.geometry);
  check_cylinder(cyl);
  const auto r = radial_of(cyl, point);
  if (r.rho < 1e-12) throw InvalidInput("surface_eval: point lies on the cylinder axis");
  const auto [e1, e2] = tangent_basis(cyl.axis_dir);
  const double theta = std::atan2(r.radial.dot(e2), r.radial.dot(e1));
  s.u = cyl.radius * theta;
  s.v = r.axial;
  s.normal = -r.radial / r.rho;
  s.height = wp.beads.height(s.u, s.v);
  s.gap = (cyl.radius - s.height) - r.rho;
  return s;
}

Vec3 surface_normal(const Geometry& geometry, const Vec3& point) {
  if (const auto* pl = std::get_if<Plane>(&geometry)) return pl->normal;
  const auto& cyl = std::get<InnerCylinder>(geometry);
  const auto r = radial_of(cyl, point);
  if (r.rho < 1e-12) throw InvalidInput("surface_normal: point lies on the cylinder axis");
  return -r.radial / r.rho;
}

double nominal_gap(const Geometry& geometry, const Vec3& point) {
  if (const auto* pl = std::get_if<Plane>(&geometry)) return (point - pl->origin).dot(pl->normal);
  const auto& cyl = std::get<InnerCylinder>(geometry);
  return cyl.radius - radial_of(cyl, point).rho;
}

}  // namespace toolbench
