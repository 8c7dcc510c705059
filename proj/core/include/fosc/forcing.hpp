#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace fosc
{

using Vec3 = Eigen::Vector3d;

/// One term a·cos(2πkt/τ) + b·sin(2πkt/τ) of a Fourier series.
struct Harmonic
{
  int k = 1;
  double cosCoeff = 0.0;
  double sinCoeff = 0.0;
};

/// Truncated Fourier series of one scalar component.
struct FourierComponent
{
  double constant = 0.0;
  std::vector<Harmonic> harmonics;

  [[nodiscard]] bool isZero() const;
};

/// τ-periodic 3-vector signal given by a Fourier series per component.
///
/// Evaluation reduces t modulo τ before forming phases, so value(t + τ)
/// agrees with value(t) to round-off. Immutable after construction.
class PeriodicSignal
{
public:
  /// Identically zero signal.
  explicit PeriodicSignal(double period = 1.0);
  PeriodicSignal(double period, std::array<FourierComponent, 3> components);

  static PeriodicSignal constant(double period, const Vec3& value);

  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] const FourierComponent& component(int i) const { return components_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] bool isZero() const;

  [[nodiscard]] Vec3 value(double t) const;
  [[nodiscard]] Vec3 derivative(double t) const;

  /// Term-wise differentiated series.
  [[nodiscard]] PeriodicSignal differentiated() const;
  [[nodiscard]] PeriodicSignal scaled(double factor) const;

private:
  double period_;
  std::array<FourierComponent, 3> components_;
  // Indices of non-zero components, so zero components cost nothing.
  std::array<bool, 3> active_{};
};

/// Period-wide maximum of |value(t)|.
struct SupNorm
{
  /// Grid maximum refined by golden-section search around the best sample.
  double value = 0.0;
  /// Plain grid maximum; a lower bound for the true supremum.
  double gridMax = 0.0;
  double argmax = 0.0;
  int samples = 0;
};

inline constexpr int kDefaultSupNormSamples = 4096;

[[nodiscard]] SupNorm supNorm(const PeriodicSignal& signal,
                              int samples = kDefaultSupNormSamples);

/// Same as supNorm, restricted to the horizontal (x, y) part of the signal.
[[nodiscard]] SupNorm supNormHorizontal(const PeriodicSignal& signal,
                                        int samples = kDefaultSupNormSamples);

/// External horizontal force F(t) and magnetic field B(t) of the pendulum.
class ForcingBundle
{
public:
  explicit ForcingBundle(double period = 1.0);
  /// Throws std::invalid_argument when the force has a vertical component or
  /// the periods differ.
  ForcingBundle(PeriodicSignal force, PeriodicSignal field);

  [[nodiscard]] double period() const { return force_.period(); }
  [[nodiscard]] const PeriodicSignal& force() const { return force_; }
  [[nodiscard]] const PeriodicSignal& field() const { return field_; }

private:
  PeriodicSignal force_;
  PeriodicSignal field_;
};

}  // namespace fosc
