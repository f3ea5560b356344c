#pragma once

#include <Eigen/Dense>

#include "sphereosc/background.hpp"

namespace sphereosc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Point of the tangent-plane (gnomonic) chart. hemisphere = +1 selects the
/// upper half of the sphere, -1 the lower.
struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
  int hemisphere = +1;
};

/// Lambda = sqrt(1 + lambda (x^2 + y^2)).
double chart_stretch(const ChartPoint& p, double lambda);

/// r = (x/Lambda, y/Lambda, +-1/(sqrt(lambda) Lambda)); |r|^2 = 1/lambda. Requires lambda > 0.
Vec3 embed(const ChartPoint& p, double lambda);

/// Partial derivatives of the embedding at fixed chart coordinates.
struct EmbeddingDerivatives {
  Vec3 rx;
  Vec3 ry;
  Vec3 rt;
};

/// Derivatives for a sphere of radius `radius` changing at rate `radius_rate`.
/// r_t = (d lambda/dt) dr/d lambda with lambda = 1/radius^2.
EmbeddingDerivatives geometry_derivatives(const ChartPoint& p, double radius, double radius_rate);
EmbeddingDerivatives geometry_derivatives(const ChartPoint& p, const BackgroundModel& model,
                                          double t);

/// A = (r_t . r_x, r_t . r_y), evaluated with the exact curvature.
Vec2 exact_vector_potential(const ChartPoint& p, double radius, double radius_rate);
Vec2 exact_vector_potential(const ChartPoint& p, const BackgroundModel& model, double t);

/// phi = -(r_t . r_t); never positive.
double exact_phi(const ChartPoint& p, double radius, double radius_rate);
double exact_phi(const ChartPoint& p, const BackgroundModel& model, double t);

/// m(x) = x / (1 + lambda0 |x|^2)^2.
Vec2 curvature_direction(const ChartPoint& p, double lambda0);

/// First-order vector potential f(t) m(x), f(t) = -sqrt(lambda0) sum alpha_n omega_n cos(omega_n t).
Vec2 first_order_vector_potential(const ChartPoint& p, const BackgroundModel& model, double t);

}  // namespace sphereosc
