#include "ysurf/generators.hpp"

#include <cmath>
#include <numbers>

namespace ysurf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be positive and finite");
  }
}

// Surface of revolution from a profile. `normal_sign` orients (-z' cos t, -z' sin t, r').
FacePatch revolve(const std::vector<ProfileSample>& samples, int angular, double normal_sign,
                  ProfileEnd start_kind, ProfileEnd end_kind, Topology topology) {
  FacePatch face;
  face.topology = topology;
  ProfileCurve profile;
  profile.samples = samples;
  profile.start_kind = start_kind;
  profile.end_kind = end_kind;

  const int m = static_cast<int>(samples.size());
  for (int j = 0; j < m; ++j) {
    const auto& p = samples[j];
    profile.ring_start.push_back(face.num_nodes());
    const bool apex = p.r == 0.0;
    const int count = apex ? 1 : angular;
    profile.ring_size.push_back(count);
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * k / angular;
      const double c = std::cos(t), s = std::sin(t);
      face.nodes.emplace_back(p.r * c, p.r * s, p.z);
      Vec3 n(-p.dz_ds * c, -p.dz_ds * s, p.dr_ds);
      if (apex) n = Vec3(0.0, 0.0, p.dr_ds > 0 ? 1.0 : -1.0);
      face.normal.push_back(normal_sign * n.normalized());
      face.a_norm_sq.push_back(p.a_norm_sq);
    }
  }

  for (int j = 0; j + 1 < m; ++j) {
    const int s0 = profile.ring_start[j], s1 = profile.ring_start[j + 1];
    const int n0 = profile.ring_size[j], n1 = profile.ring_size[j + 1];
    for (int k = 0; k < angular; ++k) {
      const int kn = (k + 1) % angular;
      if (n0 == 1) {
        face.elements.push_back({s0, s1 + k, s1 + kn});
      } else if (n1 == 1) {
        face.elements.push_back({s0 + k, s1, s0 + kn});
      } else {
        face.elements.push_back({s0 + k, s1 + k, s1 + kn});
        face.elements.push_back({s0 + k, s1 + kn, s0 + kn});
      }
    }
  }

  auto ring_loop = [&](int j, LoopTag tag) {
    BoundaryLoop loop;
    loop.tag = tag;
    for (int k = 0; k < profile.ring_size[j]; ++k) loop.node_ids.push_back(profile.ring_start[j] + k);
    face.boundary_loops.push_back(std::move(loop));
  };
  auto end_loop = [&](ProfileEnd kind, int j) {
    if (kind == ProfileEnd::Junction) ring_loop(j, LoopTag::Junction);
    if (kind == ProfileEnd::Truncation) ring_loop(j, LoopTag::Truncation);
  };
  end_loop(start_kind, 0);
  end_loop(end_kind, m - 1);

  face.profile = std::move(profile);
  face.area_weights = lumped_areas(face.nodes, face.elements);
  return face;
}

std::vector<ProfileSample> catenary_samples(const std::vector<double>& us, double a, double u_shift,
                                            double z_sign) {
  std::vector<ProfileSample> out;
  out.reserve(us.size());
  for (double u : us) {
    const double ch = std::cosh(u);
    ProfileSample p;
    p.s = a * (std::sinh(u) - std::sinh(u_shift));
    p.r = a * ch;
    p.z = z_sign * a * (u - u_shift);
    p.dr_ds = std::tanh(u);
    p.dz_ds = z_sign / ch;
    p.a_norm_sq = 2.0 / (a * a * ch * ch * ch * ch);
    out.push_back(p);
  }
  return out;
}

// Flat disk profile from the rim (radius r0) to the axis.
std::vector<ProfileSample> disk_samples(double r0, double h) {
  const int rings = std::max(2, static_cast<int>(std::ceil(1.0 / h - 1e-9)));
  std::vector<ProfileSample> out;
  for (int j = 0; j <= rings; ++j) {
    ProfileSample p;
    p.r = j == rings ? 0.0 : r0 * (1.0 - static_cast<double>(j) / rings);
    p.s = r0 - p.r;
    p.z = 0.0;
    p.dr_ds = -1.0;
    p.dz_ds = 0.0;
    p.a_norm_sq = 0.0;
    out.push_back(p);
  }
  return out;
}

}  // namespace

int Resolution::angular_samples() const {
  if (angular > 0) return angular;
  return std::max(24, static_cast<int>(std::lround(2.0 * kPi / h)));
}

std::vector<double> aligned_grid(double lo, double hi, double h, double anchor) {
  std::vector<double> g{lo};
  const long k0 = static_cast<long>(std::ceil((lo + 0.5 * h - anchor) / h));
  for (long k = k0;; ++k) {
    const double v = anchor + static_cast<double>(k) * h;
    if (v >= hi - 0.5 * h) break;
    if (v > lo + 0.5 * h - 1e-12 * h) g.push_back(v);
  }
  g.push_back(hi);
  return g;
}

YCatenoidProfile ycatenoid_profile(double neck_radius) {
  require_positive(neck_radius, "neck_radius");
  YCatenoidProfile p;
  // Catenary slope dr/dz = sinh(u0) equals tan(30 deg) at the junction.
  p.u0 = std::asinh(1.0 / std::sqrt(3.0));
  p.a = neck_radius / std::cosh(p.u0);
  p.z_offset = -p.a * p.u0;
  return p;
}

YSurface make_catenoid(double neck_radius, double half_height, const Resolution& res) {
  require_positive(neck_radius, "neck_radius");
  require_positive(half_height, "half_height");
  require_positive(res.h, "h");
  const double a = neck_radius;
  const double umax = half_height / a;
  const auto us = aligned_grid(-umax, umax, res.h, 0.0);
  const int angular = res.angular_samples();
  if (us.size() < 16 || angular < 24) {
    throw ArgumentError("catenoid resolution needs >= 16 profile and >= 24 angular samples");
  }
  YSurface surface;
  surface.name = "catenoid";
  auto samples = catenary_samples(us, a, 0.0, 1.0);
  FacePatch face = revolve(samples, angular, -1.0, ProfileEnd::Truncation, ProfileEnd::Truncation,
                           Topology{0, 2, 2});
  face.mean_curvature.assign(face.nodes.size(), 0.0);
  surface.faces.push_back(std::move(face));
  return surface;
}

YSurface make_ycatenoid(double neck_radius, double truncation_u, const Resolution& res) {
  require_positive(res.h, "h");
  const YCatenoidProfile prof = ycatenoid_profile(neck_radius);
  if (!(truncation_u > prof.u0)) {
    throw ArgumentError("truncation_u must exceed the junction parameter u0 = " +
                        std::to_string(prof.u0));
  }
  const int angular = res.angular_samples();
  const auto us = aligned_grid(prof.u0, truncation_u, res.h, prof.u0);

  YSurface surface;
  surface.name = "ycatenoid";
  for (double z_sign : {1.0, -1.0}) {
    auto samples = catenary_samples(us, prof.a, prof.u0, z_sign);
    FacePatch face = revolve(samples, angular, 1.0, ProfileEnd::Junction, ProfileEnd::Truncation,
                             Topology{0, 1, 1});
    face.mean_curvature.assign(face.nodes.size(), 0.0);
    surface.faces.push_back(std::move(face));
  }
  FacePatch disk = revolve(disk_samples(neck_radius, res.h), angular, 1.0, ProfileEnd::Junction,
                           ProfileEnd::Axis, Topology{0, 0, 0});
  disk.mean_curvature.assign(disk.nodes.size(), 0.0);
  surface.faces.push_back(std::move(disk));

  JunctionCurve j;
  j.closed = true;
  j.incident_faces = {0, 1, 2};
  j.loop_ids = {0, 0, 0};
  j.conormals.assign(3, {});
  const double t0 = std::tanh(prof.u0);           // 1/2
  const double n0 = 1.0 / std::cosh(prof.u0);     // sqrt(3)/2
  for (int k = 0; k < angular; ++k) {
    const double t = 2.0 * kPi * k / angular;
    const Vec3 er(std::cos(t), std::sin(t), 0.0);
    const Vec3 et(-std::sin(t), std::cos(t), 0.0);
    const Vec3 ez(0.0, 0.0, 1.0);
    j.samples.push_back(neck_radius * er);
    j.tangent.push_back(et);
    j.curvature_vector.push_back(-er / neck_radius);
    // Outward conormals: minus the direction entering each face.
    j.conormals[0].push_back(-(t0 * er + n0 * ez));
    j.conormals[1].push_back(-(t0 * er - n0 * ez));
    j.conormals[2].push_back(er);
  }
  surface.junctions.push_back(std::move(j));
  finalize_surface(surface);
  return surface;
}

YSurface make_flat_ycone(double extent, double junction_length, const Resolution& res) {
  require_positive(extent, "extent");
  require_positive(junction_length, "junction_length");
  require_positive(res.h, "h");
  const int ns = std::max(2, static_cast<int>(std::ceil(extent / res.h - 1e-9))) + 1;
  const int nt = std::max(2, static_cast<int>(std::ceil(junction_length / res.h - 1e-9))) + 1;
  const Vec3 ez(0.0, 0.0, 1.0);

  YSurface surface;
  surface.name = "flat_ycone";
  JunctionCurve j;
  j.closed = false;
  j.incident_faces = {0, 1, 2};
  j.loop_ids = {0, 0, 0};
  j.conormals.assign(3, {});
  for (int b = 0; b < nt; ++b) {
    const double t = -0.5 * junction_length + junction_length * b / (nt - 1);
    j.samples.emplace_back(0.0, 0.0, t);
    j.tangent.push_back(ez);
    j.curvature_vector.push_back(Vec3::Zero());
  }

  for (int i = 0; i < 3; ++i) {
    const double phi = 2.0 * kPi * i / 3.0;
    const Vec3 d(std::cos(phi), std::sin(phi), 0.0);
    const Vec3 conormal = -d;
    const Vec3 normal = ez.cross(conormal);
    FacePatch face;
    face.topology = Topology{0, 0, 0};
    auto id = [ns](int a, int b) { return b * ns + a; };
    for (int b = 0; b < nt; ++b) {
      const double t = -0.5 * junction_length + junction_length * b / (nt - 1);
      for (int a = 0; a < ns; ++a) {
        const double s = extent * a / (ns - 1);
        face.nodes.push_back(s * d + t * ez);
        face.normal.push_back(normal);
        face.a_norm_sq.push_back(0.0);
      }
    }
    for (int b = 0; b + 1 < nt; ++b) {
      for (int a = 0; a + 1 < ns; ++a) {
        face.elements.push_back({id(a, b), id(a + 1, b), id(a + 1, b + 1)});
        face.elements.push_back({id(a, b), id(a + 1, b + 1), id(a, b + 1)});
      }
    }
    BoundaryLoop junction{LoopTag::Junction, {}, false};
    for (int b = 0; b < nt; ++b) junction.node_ids.push_back(id(0, b));
    BoundaryLoop outer{LoopTag::Truncation, {}, false};
    for (int a = 0; a < ns; ++a) outer.node_ids.push_back(id(a, 0));
    for (int b = 1; b < nt; ++b) outer.node_ids.push_back(id(ns - 1, b));
    for (int a = ns - 2; a >= 0; --a) outer.node_ids.push_back(id(a, nt - 1));
    face.boundary_loops = {junction, outer};
    face.mean_curvature.assign(face.nodes.size(), 0.0);
    surface.faces.push_back(std::move(face));
    j.conormals[i].assign(nt, conormal);
  }
  surface.junctions.push_back(std::move(j));
  finalize_surface(surface);
  return surface;
}

YSurface make_plane(double extent, const Resolution& res) {
  require_positive(extent, "extent");
  require_positive(res.h, "h");
  auto samples = disk_samples(extent, res.h / extent);
  YSurface surface;
  surface.name = "plane";
  FacePatch face = revolve(samples, res.angular_samples(), 1.0, ProfileEnd::Truncation,
                           ProfileEnd::Axis, Topology{0, 1, 1});
  face.mean_curvature.assign(face.nodes.size(), 0.0);
  surface.faces.push_back(std::move(face));
  return surface;
}

YSurface make_sphere_cap(double rho, double polar_max, const Resolution& res) {
  require_positive(rho, "rho");
  require_positive(polar_max, "polar_max");
  if (polar_max >= kPi) throw ArgumentError("polar_max must be below pi");
  const auto phis = aligned_grid(0.0, polar_max, res.h, 0.0);
  std::vector<ProfileSample> samples;
  for (double phi : phis) {
    ProfileSample p;
    p.s = rho * phi;
    p.r = phi == 0.0 ? 0.0 : rho * std::sin(phi);
    p.z = rho * std::cos(phi);
    p.dr_ds = std::cos(phi);
    p.dz_ds = -std::sin(phi);
    p.a_norm_sq = 2.0 / (rho * rho);
    samples.push_back(p);
  }
  YSurface surface;
  surface.name = "sphere_cap";
  FacePatch face = revolve(samples, res.angular_samples(), 1.0, ProfileEnd::Axis,
                           ProfileEnd::Truncation, Topology{0, 0, 0});
  face.mean_curvature.assign(face.nodes.size(), 2.0 / rho);
  surface.faces.push_back(std::move(face));
  return surface;
}

}  // namespace ysurf
