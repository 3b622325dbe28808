#include "ddmpc/sim/pendulum.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddmpc::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRodLengthPx = 20.0;
constexpr double kRodHalfWidthPx = 1.5;

struct Deriv {
  double dphi, domega;
};

Deriv dynamics(double /*phi*/, double omega, double sin_phi, double u,
               const PendulumConfig& c) {
  const double inertia = c.mass * c.length * c.length;
  return {omega, (u - c.friction * omega - c.mass * c.gravity * c.length * sin_phi) / inertia};
}

Deriv dynamics(double phi, double omega, double u, const PendulumConfig& c) {
  return dynamics(phi, omega, std::sin(phi), u, c);
}

}  // namespace

void PendulumConfig::validate() const {
  if (!(mass > 0 && length > 0 && friction > 0 && gravity > 0 && torque_limit > 0 &&
        dt > 0 && substeps > 0)) {
    throw std::invalid_argument("PendulumConfig: all parameters must be positive");
  }
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double upright_error(double angle) { return kPi - std::abs(wrap_angle(angle)); }

PendulumState pendulum_step(const PendulumState& state, double torque,
                            const PendulumConfig& cfg) {
  const double u = std::clamp(torque, -cfg.torque_limit, cfg.torque_limit);
  const double h = cfg.dt / cfg.substeps;
  double phi = state.angle;
  double omega = state.velocity;
  for (int i = 0; i < cfg.substeps; ++i) {
    const Deriv k1 = dynamics(phi, omega, u, cfg);
    const Deriv k2 = dynamics(phi + 0.5 * h * k1.dphi, omega + 0.5 * h * k1.domega, u, cfg);
    const Deriv k3 = dynamics(phi + 0.5 * h * k2.dphi, omega + 0.5 * h * k2.domega, u, cfg);
    const Deriv k4 = dynamics(phi + h * k3.dphi, omega + h * k3.domega, u, cfg);
    phi += h / 6.0 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    omega += h / 6.0 * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);
  }
  return {wrap_angle(phi), omega};
}

double pendulum_energy(const PendulumState& s, const PendulumConfig& c) {
  const double inertia = c.mass * c.length * c.length;
  return 0.5 * inertia * s.velocity * s.velocity -
         c.mass * c.gravity * c.length * std::cos(s.angle);
}

ImageFrame render_pendulum(const PendulumState& state, const PendulumConfig& /*cfg*/) {
  // sin/cos computed from |phi| so that the mirror symmetry
  // render(phi) <-> render(-phi) holds bit-exactly.
  const double sa = std::sin(std::abs(state.angle));
  const double s = state.angle < 0 ? -sa : sa;
  const double c = std::cos(std::abs(state.angle));

  auto ramp = [](double v) { return std::clamp(v, 0.0, 1.0); };

  ImageFrame f = ImageFrame::blank(kImageSize, kImageSize);
  const int mid = kImageSize / 2;
  for (int row = 0; row < kImageSize; ++row) {
    const double dy = row - mid;  // pixel centers, origin at the pivot
    for (int col = 0; col < kImageSize; ++col) {
      const double dx = col - mid;
      const double axial = dx * s + dy * c;
      const double perp = std::abs(dx * c - dy * s);
      const double cov = ramp(kRodHalfWidthPx + 0.5 - perp) * ramp(axial + 0.5) *
                         ramp(kRodLengthPx - axial + 0.5);
      if (cov > 0.0) f.at(row, col) = 1.0 - cov;
    }
  }
  return f;
}

}  // namespace ddmpc::sim
