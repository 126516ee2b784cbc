#pragma once

#include "ysurf/types.hpp"

namespace ysurf {

/// Mesh resolution. `h` is the step of the generating parameter: the catenary
/// parameter u on catenoidal faces, radius / r0 on disks, Euclidean length on
/// flat strips. `angular` = 0 picks round(2*pi/h) samples (conformally square
/// cells on catenoids), never fewer than 24.
struct Resolution {
  double h = 0.05;
  int angular = 0;

  int angular_samples() const;
};

/// Catenary parameters of the rotationally symmetric Y-catenoid with junction radius r0.
/// Upper face: r = a cosh((z - z_offset)/a), z >= 0; the lower face is its mirror image.
struct YCatenoidProfile {
  double a = 0.0;
  double u0 = 0.0;
  double z_offset = 0.0;
};

YCatenoidProfile ycatenoid_profile(double neck_radius);

/// Catenoid r = a cosh(z/a), |z| <= half_height. One face, two truncation loops.
YSurface make_catenoid(double neck_radius, double half_height, const Resolution& res);

/// Three flat strips [0, extent] x [-L/2, L/2] meeting at 120 degrees along the z axis.
YSurface make_flat_ycone(double extent, double junction_length, const Resolution& res);

/// Flat disk of radius r0 in z = 0 glued to two catenoidal annuli truncated at
/// catenary parameter truncation_u. Faces are ordered (upper, lower, disk).
YSurface make_ycatenoid(double neck_radius, double truncation_u, const Resolution& res);

/// Flat disk of radius `extent` in z = 0, declared as a plane (one end).
YSurface make_plane(double extent, const Resolution& res);

/// Spherical cap of radius rho, polar angle in [0, polar_max]. Not minimal; used
/// as a negative fixture for minimality checks.
YSurface make_sphere_cap(double rho, double polar_max, const Resolution& res);

/// Parameter grid on [lo, hi] whose interior points are anchor + k*h, with the
/// endpoints added exactly; interior points closer than h/2 to an end are dropped.
std::vector<double> aligned_grid(double lo, double hi, double h, double anchor);

}  // namespace ysurf
