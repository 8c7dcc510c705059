#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fosc/errors.hpp"
#include "fosc/geometry.hpp"

namespace fosc
{

Surface Surface::sphere()
{
  Surface s;
  s.kind_ = Kind::sphere;
  s.axes_ = Vec3::Ones();
  s.extent_ = 1.0;
  return s;
}

Surface Surface::ellipsoid(const Vec3& semiAxes)
{
  if (!(semiAxes.minCoeff() > 0.0) || !semiAxes.allFinite())
  {
    throw std::invalid_argument{"ellipsoid semi-axes must be positive"};
  }
  Surface s;
  s.kind_ = Kind::ellipsoid;
  s.axes_ = semiAxes;
  s.extent_ = semiAxes.maxCoeff();
  return s;
}

Surface Surface::levelSet(ScalarFn value, VectorFn gradient, MatrixFn hessian)
{
  if (!value || !gradient || !hessian)
  {
    throw std::invalid_argument{"level-set surface needs value, gradient and Hessian"};
  }
  Surface s;
  s.kind_ = Kind::levelSet;
  s.s_ = std::make_shared<const ScalarFn>(std::move(value));
  s.grad_ = std::make_shared<const VectorFn>(std::move(gradient));
  s.hess_ = std::make_shared<const MatrixFn>(std::move(hessian));
  s.validate();
  return s;
}

void Surface::validate()
{
  if (!(value(Vec3::Zero()) < 0.0))
  {
    throw std::invalid_argument{"surface must enclose the origin: s(0) < 0 required"};
  }
  extent_ = 0.0;
  for (const Vec3& d : fibonacciDirections(256))
  {
    const Vec3 p = rayPoint(d);
    extent_ = std::max(extent_, p.norm());
    const Vec3 g = gradient(p);
    if (!(g.norm() > 0.0))
    {
      throw std::invalid_argument{"surface gradient vanishes on the surface"};
    }
    const auto [t1, t2] = tangentBasis(g.normalized());
    const Mat3 h = hessian(p);
    Eigen::Matrix2d ht;
    ht << t1.dot(h * t1), t1.dot(h * t2), t2.dot(h * t1), t2.dot(h * t2);
    const double minEig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>{ht}.eigenvalues().minCoeff();
    if (!(minEig > 0.0))
    {
      throw std::invalid_argument{"surface is not strictly convex near " + std::to_string(p.x()) +
                                  "," + std::to_string(p.y()) + "," + std::to_string(p.z())};
    }
  }
}

double Surface::value(const Vec3& p) const
{
  switch (kind_)
  {
    case Kind::sphere:
      return p.squaredNorm() - 1.0;
    case Kind::ellipsoid:
      return p.cwiseQuotient(axes_).squaredNorm() - 1.0;
    case Kind::levelSet:
      return (*s_)(p);
  }
  return 0.0;
}

Vec3 Surface::gradient(const Vec3& p) const
{
  switch (kind_)
  {
    case Kind::sphere:
      return 2.0 * p;
    case Kind::ellipsoid:
      return 2.0 * p.cwiseQuotient(axes_.cwiseProduct(axes_));
    case Kind::levelSet:
      return (*grad_)(p);
  }
  return Vec3::Zero();
}

Mat3 Surface::hessian(const Vec3& p) const
{
  switch (kind_)
  {
    case Kind::sphere:
      return 2.0 * Mat3::Identity();
    case Kind::ellipsoid:
      return (2.0 * axes_.cwiseProduct(axes_).cwiseInverse()).asDiagonal();
    case Kind::levelSet:
      return (*hess_)(p);
  }
  return Mat3::Zero();
}

Vec3 Surface::rayPoint(const Vec3& direction) const
{
  const double len = direction.norm();
  if (!(len > 0.0))
  {
    throw std::invalid_argument{"rayPoint: zero direction"};
  }
  const Vec3 d = direction / len;
  switch (kind_)
  {
    case Kind::sphere:
      return d;
    case Kind::ellipsoid:
      return d / d.cwiseQuotient(axes_).norm();
    case Kind::levelSet:
      break;
  }

  // s(r d) is negative at r = 0 and convex along the ray; bracket the root
  // and run safeguarded Newton.
  double lo = 0.0;
  double hi = 1.0;
  int guard = 0;
  while (value(hi * d) < 0.0)
  {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200)
    {
      throw std::invalid_argument{"rayPoint: surface is unbounded along the ray"};
    }
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it)
  {
    const Vec3 p = r * d;
    const double f = value(p);
    if (f == 0.0)
    {
      return p;
    }
    (f < 0.0 ? lo : hi) = r;
    const double df = gradient(p).dot(d);
    double next = df != 0.0 ? r - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi))
    {
      next = 0.5 * (lo + hi);
    }
    r = next;
  }
  return r * d;
}

Vec3 Surface::projectPosition(const Vec3& p, double tol, int maxIter) const
{
  Vec3 q = p;
  for (int it = 0; it <= maxIter; ++it)
  {
    const double s = value(q);
    if (std::abs(s) <= tol)
    {
      return q;
    }
    const Vec3 g = gradient(q);
    const double g2 = g.squaredNorm();
    if (!(g2 > 0.0))
    {
      throw ProjectionError{"projection hit a point with vanishing gradient"};
    }
    const Vec3 delta = (s / g2) * g;
    q -= delta;
    if (delta.norm() <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, q.norm()))
    {
      return q;
    }
  }
  throw ProjectionError{"Newton projection onto s = 0 did not converge"};
}

Vec3 Surface::projectVelocity(const Vec3& rho, const Vec3& v) const
{
  const Vec3 g = gradient(rho);
  return v - (g.dot(v) / g.squaredNorm()) * g;
}

std::pair<Vec3, Vec3> tangentBasis(const Vec3& n)
{
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  const Vec3 t1 = (e - e.dot(n) * n).normalized();
  const Vec3 t2 = n.cross(t1);
  return {t1, t2};
}

std::vector<Vec3> fibonacciDirections(int count)
{
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i)
  {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

}  // namespace fosc
