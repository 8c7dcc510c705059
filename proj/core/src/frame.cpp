#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fosc/geometry.hpp"

namespace fosc
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kKnotsPerPeriod = 1024;

Quat rateOf(const Quat& q, const Vec3& w)
{
  // q̇ = ½ q ⊗ (0, ω)
  const Quat p = q * Quat{0.0, w.x(), w.y(), w.z()};
  return Quat{0.5 * p.w(), 0.5 * p.x(), 0.5 * p.y(), 0.5 * p.z()};
}

Quat axpy(const Quat& q, double h, const Quat& d)
{
  return Quat{q.w() + h * d.w(), q.x() + h * d.x(), q.y() + h * d.y(), q.z() + h * d.z()};
}

Quat rk4(const PeriodicSignal& omega, const Quat& q, double t, double h)
{
  const Quat k1 = rateOf(q, omega.value(t));
  const Quat k2 = rateOf(axpy(q, 0.5 * h, k1), omega.value(t + 0.5 * h));
  const Quat k3 = rateOf(axpy(q, 0.5 * h, k2), omega.value(t + 0.5 * h));
  const Quat k4 = rateOf(axpy(q, h, k3), omega.value(t + h));
  Quat out{q.w() + h / 6.0 * (k1.w() + 2.0 * k2.w() + 2.0 * k3.w() + k4.w()),
           q.x() + h / 6.0 * (k1.x() + 2.0 * k2.x() + 2.0 * k3.x() + k4.x()),
           q.y() + h / 6.0 * (k1.y() + 2.0 * k2.y() + 2.0 * k3.y() + k4.y()),
           q.z() + h / 6.0 * (k1.z() + 2.0 * k2.z() + 2.0 * k3.z() + k4.z())};
  out.normalize();
  return out;
}

PeriodicSignal precessionOmega(double cone, double period)
{
  // ω_body = φ̇ (−sinβ sinφ, sinβ cosφ, cosβ − 1), φ = 2πt/τ.
  const double rate = kTwoPi / period;
  std::array<FourierComponent, 3> c;
  c[0].harmonics.push_back({1, 0.0, -rate * std::sin(cone)});
  c[1].harmonics.push_back({1, rate * std::sin(cone), 0.0});
  c[2].constant = rate * (std::cos(cone) - 1.0);
  return PeriodicSignal{period, std::move(c)};
}

}  // namespace

FrameOrientation::FrameOrientation(Law law, PeriodicSignal omega)
  : law_{law}, omega_{std::move(omega)}, omegaDot_{omega_.differentiated()}
{
}

FrameOrientation FrameOrientation::fixed(double period)
{
  return FrameOrientation{Law::fixed, PeriodicSignal{period}};
}

FrameOrientation FrameOrientation::spin(const Vec3& axis, double rate, double period)
{
  if (!(axis.norm() > 0.0))
  {
    throw std::invalid_argument{"spin axis must be non-zero"};
  }
  const Vec3 a = axis.normalized();
  FrameOrientation f{Law::spin, PeriodicSignal::constant(period, rate * a)};
  f.axis_ = a;
  f.amplitude_ = rate;
  // up(t) is constant for spin about e_z; otherwise it returns after one
  // period only when the rotation angle is a multiple of 2π.
  const double turns = rate * period / kTwoPi;
  f.periodic_ = a.head<2>().norm() < 1e-15 || std::abs(turns - std::round(turns)) < 1e-12;
  return f;
}

FrameOrientation FrameOrientation::precession(double coneAngle, double period)
{
  FrameOrientation f{Law::precession, precessionOmega(coneAngle, period)};
  f.amplitude_ = coneAngle;
  return f;
}

FrameOrientation FrameOrientation::integrated(PeriodicSignal omegaBody, double horizon)
{
  const double tau = omegaBody.period();
  FrameOrientation f{Law::integrated, std::move(omegaBody)};
  f.amplitude_ = 1.0;
  f.unitOmega_ = f.omega_;
  f.horizon_ = std::max(horizon, tau);
  f.knotSpacing_ = tau / kKnotsPerPeriod;
  const auto count = static_cast<std::size_t>(std::ceil(f.horizon_ / f.knotSpacing_)) + 1;
  auto knots = std::make_shared<std::vector<Quat>>();
  knots->reserve(count);
  knots->push_back(Quat::Identity());
  for (std::size_t k = 1; k < count; ++k)
  {
    const double t = static_cast<double>(k - 1) * f.knotSpacing_;
    knots->push_back(rk4(f.omega_, knots->back(), t, f.knotSpacing_));
  }
  const Vec3 up0 = Vec3::UnitZ();
  const Vec3 upTau = (*knots)[kKnotsPerPeriod].conjugate() * Vec3::UnitZ();
  f.periodic_ = (upTau - up0).norm() < 1e-9;
  f.knots_ = std::move(knots);
  return f;
}

Quat FrameOrientation::orientation(double t) const
{
  switch (law_)
  {
    case Law::fixed:
      return Quat::Identity();
    case Law::spin:
      return Quat{Eigen::AngleAxisd{amplitude_ * t, axis_}};
    case Law::precession:
    {
      const double phi = kTwoPi * t / period();
      const Quat rz{Eigen::AngleAxisd{phi, Vec3::UnitZ()}};
      const Quat rx{Eigen::AngleAxisd{amplitude_, Vec3::UnitX()}};
      return rz * rx * rz.conjugate();
    }
    case Law::integrated:
      break;
  }

  if (t < 0.0)
  {
    throw std::domain_error{"integrated frame orientation is defined for t >= 0 only"};
  }
  const auto& knots = *knots_;
  const auto last = knots.size() - 1;
  auto k = static_cast<std::size_t>(std::floor(t / knotSpacing_));
  if (k >= last)
  {
    k = last;
  }
  Quat q = knots[k];
  double tk = static_cast<double>(k) * knotSpacing_;
  while (t - tk > knotSpacing_)
  {
    q = rk4(omega_, q, tk, knotSpacing_);
    tk += knotSpacing_;
  }
  if (t > tk)
  {
    q = rk4(omega_, q, tk, t - tk);
  }
  return q;
}

Vec3 FrameOrientation::up(double t) const
{
  if (law_ == Law::fixed)
  {
    return Vec3::UnitZ();
  }
  if (law_ == Law::precession)
  {
    const double phi = kTwoPi * t / period();
    const double sb = std::sin(amplitude_);
    return {-std::sin(phi) * sb, std::cos(phi) * sb, std::cos(amplitude_)};
  }
  return orientation(t).conjugate() * Vec3::UnitZ();
}

FrameOrientation FrameOrientation::withAmplitude(double amplitude) const
{
  switch (law_)
  {
    case Law::fixed:
      return *this;
    case Law::spin:
      return spin(axis_, amplitude, period());
    case Law::precession:
      return precession(amplitude, period());
    case Law::integrated:
    {
      auto f = integrated(unitOmega_.scaled(amplitude), horizon_);
      f.amplitude_ = amplitude;
      f.unitOmega_ = unitOmega_;
      return f;
    }
  }
  return *this;
}

double FrameOrientation::omegaSup() const
{
  return supNorm(omega_).value;
}

double FrameOrientation::omegaDotSup() const
{
  return supNorm(omegaDot_).value;
}

double FrameOrientation::bound() const
{
  return std::max(omegaSup(), omegaDotSup());
}

}  // namespace fosc
