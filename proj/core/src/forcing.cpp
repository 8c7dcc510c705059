#include "fosc/forcing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fosc
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double reduce(double t, double period)
{
  return t - period * std::floor(t / period);
}

template <class Norm>
SupNorm maximize(const PeriodicSignal& signal, int samples, Norm norm)
{
  if (samples < 1)
  {
    throw std::invalid_argument{"supNorm: samples must be positive"};
  }
  SupNorm result;
  result.samples = samples;
  if (signal.isZero())
  {
    return result;
  }
  const double tau = signal.period();
  const double dt = tau / samples;
  int best = 0;
  for (int i = 0; i < samples; ++i)
  {
    const double v = norm(signal.value(i * dt));
    if (v > result.gridMax)
    {
      result.gridMax = v;
      best = i;
    }
  }

  // Golden-section refinement of the local maximum bracketed by the
  // neighbouring grid samples.
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * dt;
  double hi = (best + 1) * dt;
  double x1 = hi - invPhi * (hi - lo);
  double x2 = lo + invPhi * (hi - lo);
  double f1 = norm(signal.value(x1));
  double f2 = norm(signal.value(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-14 * tau; ++it)
  {
    if (f1 < f2)
    {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invPhi * (hi - lo);
      f2 = norm(signal.value(x2));
    }
    else
    {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invPhi * (hi - lo);
      f1 = norm(signal.value(x1));
    }
  }
  const double refinedT = f1 > f2 ? x1 : x2;
  const double refined = std::max(f1, f2);
  if (refined > result.gridMax)
  {
    result.value = refined;
    result.argmax = reduce(refinedT, tau);
  }
  else
  {
    result.value = result.gridMax;
    result.argmax = best * dt;
  }
  return result;
}

}  // namespace

bool FourierComponent::isZero() const
{
  if (constant != 0.0)
  {
    return false;
  }
  for (const auto& h : harmonics)
  {
    if (h.cosCoeff != 0.0 || h.sinCoeff != 0.0)
    {
      return false;
    }
  }
  return true;
}

PeriodicSignal::PeriodicSignal(double period)
  : PeriodicSignal(period, {})
{
}

PeriodicSignal::PeriodicSignal(double period, std::array<FourierComponent, 3> components)
  : period_{period}, components_{std::move(components)}
{
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw std::invalid_argument{"PeriodicSignal: period must be positive and finite"};
  }
  for (std::size_t i = 0; i < 3; ++i)
  {
    active_[i] = !components_[i].isZero();
    for (const auto& h : components_[i].harmonics)
    {
      if (h.k < 1)
      {
        throw std::invalid_argument{"PeriodicSignal: harmonic index must be >= 1"};
      }
    }
  }
}

PeriodicSignal PeriodicSignal::constant(double period, const Vec3& value)
{
  std::array<FourierComponent, 3> c;
  for (std::size_t i = 0; i < 3; ++i)
  {
    c[i].constant = value[static_cast<Eigen::Index>(i)];
  }
  return PeriodicSignal{period, std::move(c)};
}

bool PeriodicSignal::isZero() const
{
  return !active_[0] && !active_[1] && !active_[2];
}

Vec3 PeriodicSignal::value(double t) const
{
  Vec3 out = Vec3::Zero();
  if (isZero())
  {
    return out;
  }
  const double phase = kTwoPi * reduce(t, period_) / period_;
  for (std::size_t i = 0; i < 3; ++i)
  {
    if (!active_[i])
    {
      continue;
    }
    double sum = components_[i].constant;
    for (const auto& h : components_[i].harmonics)
    {
      const double arg = h.k * phase;
      sum += h.cosCoeff * std::cos(arg) + h.sinCoeff * std::sin(arg);
    }
    out[static_cast<Eigen::Index>(i)] = sum;
  }
  return out;
}

Vec3 PeriodicSignal::derivative(double t) const
{
  Vec3 out = Vec3::Zero();
  if (isZero())
  {
    return out;
  }
  const double omega = kTwoPi / period_;
  const double phase = omega * reduce(t, period_);
  for (std::size_t i = 0; i < 3; ++i)
  {
    if (!active_[i])
    {
      continue;
    }
    double sum = 0.0;
    for (const auto& h : components_[i].harmonics)
    {
      const double arg = h.k * phase;
      sum += h.k * omega * (h.sinCoeff * std::cos(arg) - h.cosCoeff * std::sin(arg));
    }
    out[static_cast<Eigen::Index>(i)] = sum;
  }
  return out;
}

PeriodicSignal PeriodicSignal::differentiated() const
{
  const double omega = kTwoPi / period_;
  std::array<FourierComponent, 3> c;
  for (std::size_t i = 0; i < 3; ++i)
  {
    for (const auto& h : components_[i].harmonics)
    {
      const double w = h.k * omega;
      c[i].harmonics.push_back({h.k, w * h.sinCoeff, -w * h.cosCoeff});
    }
  }
  return PeriodicSignal{period_, std::move(c)};
}

PeriodicSignal PeriodicSignal::scaled(double factor) const
{
  auto c = components_;
  for (auto& comp : c)
  {
    comp.constant *= factor;
    for (auto& h : comp.harmonics)
    {
      h.cosCoeff *= factor;
      h.sinCoeff *= factor;
    }
  }
  return PeriodicSignal{period_, std::move(c)};
}

SupNorm supNorm(const PeriodicSignal& signal, int samples)
{
  return maximize(signal, samples, [](const Vec3& v) { return v.norm(); });
}

SupNorm supNormHorizontal(const PeriodicSignal& signal, int samples)
{
  return maximize(signal, samples, [](const Vec3& v) { return std::hypot(v.x(), v.y()); });
}

ForcingBundle::ForcingBundle(double period)
  : force_{period}, field_{period}
{
}

ForcingBundle::ForcingBundle(PeriodicSignal force, PeriodicSignal field)
  : force_{std::move(force)}, field_{std::move(field)}
{
  if (!force_.component(2).isZero())
  {
    throw std::invalid_argument{"F must be horizontal"};
  }
  if (force_.period() != field_.period())
  {
    throw std::invalid_argument{"ForcingBundle: F and B must share one period"};
  }
}

}  // namespace fosc
