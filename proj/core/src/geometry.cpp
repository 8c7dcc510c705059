#include <cmath>
#include <string>

#include "fosc/errors.hpp"
#include "fosc/geometry.hpp"

namespace fosc
{

double planeValue(const Vec3& up, const Vec3& rho)
{
  return up.dot(rho);
}

double planeRate(const Vec3& up, const Vec3& omega, const Vec3& rho, const Vec3& v)
{
  return up.dot(omega.cross(rho)) + up.dot(v);
}

double planeAccel(const Vec3& up, const Vec3& omega, const Vec3& omegaDot, const Vec3& rho,
                  const Vec3& v, const Vec3& a)
{
  // d/dt [u·(ω×ρ) + u·v] with u̇ = −ω×u.
  const Vec3 upDot = -omega.cross(up);
  return upDot.dot(omega.cross(rho)) + up.dot(omegaDot.cross(rho)) + up.dot(omega.cross(v)) +
         upDot.dot(v) + up.dot(a);
}

double planeF(double t, const Vec3& rho, const FrameOrientation& frame)
{
  return planeValue(frame.up(t), rho);
}

double planeFDot(double t, const Vec3& rho, const Vec3& v, const FrameOrientation& frame)
{
  return planeRate(frame.up(t), frame.omega(t), rho, v);
}

SurfaceChart::SurfaceChart(Surface surface, const Vec3& anchor, double minNormalAlignment)
  : surface_{std::move(surface)}, minAlignment_{minNormalAlignment}
{
  anchor_ = surface_.projectPosition(anchor);
  normal_ = surface_.gradient(anchor_).normalized();
  std::tie(t1_, t2_) = tangentBasis(normal_);
}

bool SurfaceChart::valid(const Vec3& rho) const
{
  const Vec3 g = surface_.gradient(rho);
  return g.normalized().dot(normal_) >= minAlignment_;
}

Vec3 SurfaceChart::toAmbient(const Vec2& x) const
{
  const Vec3 base = anchor_ + x.x() * t1_ + x.y() * t2_;
  // Newton on z ↦ s(base + z n₀) starting from the anchor's tangent plane.
  double z = 0.0;
  for (int it = 0; it < 60; ++it)
  {
    const Vec3 p = base + z * normal_;
    const double s = surface_.value(p);
    const double ds = surface_.gradient(p).dot(normal_);
    if (!(ds < 0.0) && !(ds > 0.0))
    {
      throw ChartError{"chart projection hit a tangent normal line"};
    }
    const double dz = s / ds;
    z -= dz;
    if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z)))
    {
      const Vec3 out = base + z * normal_;
      if (!valid(out))
      {
        throw ChartError{"point is outside the chart validity region"};
      }
      return out;
    }
    if (!std::isfinite(z))
    {
      break;
    }
  }
  throw ChartError{"chart projection diverged at (" + std::to_string(x.x()) + ", " +
                   std::to_string(x.y()) + ")"};
}

Vec2 SurfaceChart::fromAmbient(const Vec3& rho) const
{
  const Vec3 d = rho - anchor_;
  return {d.dot(t1_), d.dot(t2_)};
}

Vec3 SurfaceChart::velocityToAmbient(const Vec3& rho, const Vec2& w) const
{
  const Vec3 g = surface_.gradient(rho);
  const Vec3 planar = w.x() * t1_ + w.y() * t2_;
  const double gn = g.dot(normal_);
  if (gn == 0.0)
  {
    throw ChartError{"velocity lift undefined where the normal is orthogonal to the anchor normal"};
  }
  return planar - (g.dot(planar) / gn) * normal_;
}

Vec2 SurfaceChart::velocityFromAmbient(const Vec3& v) const
{
  return {v.dot(t1_), v.dot(t2_)};
}

}  // namespace fosc
