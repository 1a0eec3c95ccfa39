#pragma once

#include <cmath>
#include <numbers>
#include <type_traits>
#include <stdexcept>

#include <Eigen/Core>

namespace inharm {

/// 12-TET conversions with A4 = 440 Hz. Scalar overloads validate their
/// input; the array overloads return Eigen expressions and leave checking
/// to the caller.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar hz_to_midi(Scalar hz) {
  if (!(hz > Scalar(0))) throw std::invalid_argument("hz_to_midi: frequency must be positive");
  return Scalar(69) + Scalar(12) * std::log2(hz / Scalar(440));
}

template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar midi_to_hz(Scalar midi) {
  return Scalar(440) * std::exp2((midi - Scalar(69)) / Scalar(12));
}

template <typename Derived>
auto hz_to_midi(const Eigen::ArrayBase<Derived>& hz) {
  using Scalar = typename Derived::Scalar;
  return Scalar(69) + (Scalar(12) / std::numbers::ln2_v<Scalar>) * (hz.derived() / Scalar(440)).log();
}

/// Interval from `ref` to `f` in cents.
template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar cents(Scalar f, Scalar ref) {
  return Scalar(1200) * std::log2(f / ref);
}

template <typename Derived>
auto cents(const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar ref) {
  using Scalar = typename Derived::Scalar;
  return (Scalar(1200) / std::numbers::ln2_v<Scalar>) * (f.derived() / ref).log();
}

template <typename DerivedF, typename DerivedR>
auto cents(const Eigen::ArrayBase<DerivedF>& f, const Eigen::ArrayBase<DerivedR>& ref) {
  using Scalar = typename DerivedF::Scalar;
  return (Scalar(1200) / std::numbers::ln2_v<Scalar>) * (f.derived() / ref.derived()).log();
}

/// Signed distance in cents from the nearest integer MIDI note.
template <typename Scalar>
Scalar cents_from_nearest_note(Scalar midi) {
  return Scalar(100) * (midi - std::round(midi));
}

}  // namespace inharm
