#include "qhall/berry.hpp"

#include <cmath>

#include "qhall/error.hpp"

namespace qhall {
namespace {

using vec3 = Eigen::Vector3d;

vec3 sphere_point(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth),
          std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

// Levi-Civita transport of tangent vector v along the great-circle arc a -> b:
// the rotation about a x b that carries a onto b.
vec3 transport(const vec3& v, const vec3& a, const vec3& b) {
  vec3 axis = a.cross(b);
  const double s = axis.norm();
  if (s < 1e-300) return v;
  axis /= s;
  const double c = a.dot(b);
  return v * c + axis.cross(v) * s + axis * axis.dot(v) * (1.0 - c);
}

// Rotation from `from` to `to`, counterclockwise about the outward normal n.
double signed_angle(const vec3& from, const vec3& to, const vec3& n) {
  return std::atan2(from.cross(to).dot(n), from.dot(to));
}

vec3 any_tangent(const vec3& n) {
  const vec3 seed = std::abs(n.z()) < 0.9 ? vec3::UnitZ() : vec3::UnitX();
  return (seed - n * n.dot(seed)).normalized();
}

// Holonomy of a closed geodesic polygon, in (-pi, pi].
double polygon_holonomy(const std::vector<vec3>& vertices) {
  const vec3& start = vertices.front();
  const vec3 v0 = any_tangent(start);
  vec3 v = v0;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    v = transport(v, vertices[k], vertices[(k + 1) % vertices.size()]);
  }
  return signed_angle(v0, v, start);
}

double wrap_positive(double angle) {
  double a = std::fmod(angle, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

}  // namespace

double latitude_holonomy(double latitude, int steps) {
  if (!(std::abs(latitude) < 0.5 * M_PI)) {
    throw invalid_argument("latitude must lie strictly between the poles");
  }
  if (steps < 100) throw invalid_argument("latitude_holonomy: steps < 100");
  const double polar = 0.5 * M_PI - latitude;

  const vec3 start = sphere_point(polar, 0.0);
  const vec3 v0 = sphere_point(polar - 0.5 * M_PI, 0.0);  // due north
  vec3 v = v0;
  vec3 prev = start;
  for (int k = 1; k <= steps; ++k) {
    const vec3 next =
        k == steps ? start : sphere_point(polar, two_pi * k / steps);
    v = transport(v, prev, next);
    prev = next;
  }
  return wrap_positive(signed_angle(v0, v, start));
}

double cap_curvature_integral(double latitude, int n_polar, int n_azimuth) {
  if (!(std::abs(latitude) < 0.5 * M_PI)) {
    throw invalid_argument("latitude must lie strictly between the poles");
  }
  if (n_polar < 1 || n_azimuth < 3) {
    throw invalid_argument("cap_curvature_integral: grid too small");
  }
  const double cap = 0.5 * M_PI - latitude;
  double sum = 0.0;
  for (int i = 0; i < n_polar; ++i) {
    const double t0 = cap * i / n_polar;
    const double t1 = cap * (i + 1) / n_polar;
    for (int j = 0; j < n_azimuth; ++j) {
      const double f0 = two_pi * j / n_azimuth;
      const double f1 = two_pi * (j + 1) / n_azimuth;
      std::vector<vec3> cell;
      if (i == 0) {
        cell = {sphere_point(0.0, 0.0), sphere_point(t1, f0),
                sphere_point(t1, f1)};
      } else {
        cell = {sphere_point(t0, f0), sphere_point(t1, f0),
                sphere_point(t1, f1), sphere_point(t0, f1)};
      }
      sum += polygon_holonomy(cell);
    }
  }
  return wrap_positive(sum);
}

}  // namespace qhall
