#pragma once

#include "ddmpc/sim/image.hpp"

namespace ddmpc::sim {

/// Angle convention: 0 is hanging down, +-pi is upright; positive angles
/// swing toward +x (image right). Angle is kept wrapped to (-pi, pi].
struct PendulumState {
  double angle = 0.0;
  double velocity = 0.0;
};

struct PendulumConfig {
  double mass = 1.0;          // kg, point mass at the rod tip
  double length = 1.0;        // m
  double friction = 1.0;      // N*m*s/rad
  double gravity = 9.81;      // m/s^2
  double torque_limit = 5.0;  // N*m, applied torque is clamped to +-limit
  double dt = 0.2;            // s, control sample time
  int substeps = 10;          // RK4 sub-intervals per sample

  void validate() const;
};

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Angular distance to the upright position (nearer of +-pi), in [0, pi].
double upright_error(double angle);

/// One zero-order-hold control step: clamps the torque, integrates
/// phi_dd = (u - b*w - m*g*l*sin(phi)) / (m*l^2) with RK4 substeps,
/// re-wraps the angle.
PendulumState pendulum_step(const PendulumState& state, double torque,
                            const PendulumConfig& cfg);

/// Total mechanical energy, zero datum at the pivot height.
double pendulum_energy(const PendulumState& state, const PendulumConfig& cfg);

/// 51x51 render: dark rod of width 3px from the image center toward
/// center + R*(sin phi, cos phi) (y down), bilinear anti-aliasing,
/// background exactly 1.0. Mirror symmetric: render(phi) is the exact
/// horizontal mirror of render(-phi).
ImageFrame render_pendulum(const PendulumState& state, const PendulumConfig& cfg);

}  // namespace ddmpc::sim
