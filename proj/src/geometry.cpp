#include "sphereosc/geometry.hpp"

#include <cmath>

#include "sphereosc/errors.hpp"

namespace sphereosc {

double chart_stretch(const ChartPoint& p, double lambda) {
  return std::sqrt(1.0 + lambda * (p.x * p.x + p.y * p.y));
}

Vec3 embed(const ChartPoint& p, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("embed: curvature must be > 0");
  const double big = chart_stretch(p, lambda);
  return {p.x / big, p.y / big, p.hemisphere / (std::sqrt(lambda) * big)};
}

EmbeddingDerivatives geometry_derivatives(const ChartPoint& p, double radius, double radius_rate) {
  EmbeddingDerivatives d;
  if (std::isinf(radius)) {
    // Flat plane: r = (x, y, const).
    d.rx = {1.0, 0.0, 0.0};
    d.ry = {0.0, 1.0, 0.0};
    d.rt = Vec3::Zero();
    return d;
  }
  const double lambda = 1.0 / (radius * radius);
  const double sigma = p.hemisphere;
  const double x = p.x;
  const double y = p.y;
  const double r2 = x * x + y * y;
  const double big = std::sqrt(1.0 + lambda * r2);
  const double big3 = big * big * big;
  const double sl = std::sqrt(lambda);

  d.rx = {(1.0 + lambda * y * y) / big3, -lambda * x * y / big3, -sigma * sl * x / big3};
  d.ry = {-lambda * x * y / big3, (1.0 + lambda * x * x) / big3, -sigma * sl * y / big3};

  const Vec3 d_lambda{-x * r2 / (2.0 * big3), -y * r2 / (2.0 * big3),
                      -sigma * (1.0 + 2.0 * lambda * r2) / (2.0 * lambda * sl * big3)};
  const double lambda_rate = -2.0 * radius_rate / (radius * radius * radius);
  d.rt = lambda_rate * d_lambda;
  return d;
}

EmbeddingDerivatives geometry_derivatives(const ChartPoint& p, const BackgroundModel& model,
                                          double t) {
  return geometry_derivatives(p, model.radius_at(t), model.radius_rate(t));
}

Vec2 exact_vector_potential(const ChartPoint& p, double radius, double radius_rate) {
  const auto d = geometry_derivatives(p, radius, radius_rate);
  return {d.rt.dot(d.rx), d.rt.dot(d.ry)};
}

Vec2 exact_vector_potential(const ChartPoint& p, const BackgroundModel& model, double t) {
  return exact_vector_potential(p, model.radius_at(t), model.radius_rate(t));
}

double exact_phi(const ChartPoint& p, double radius, double radius_rate) {
  const auto d = geometry_derivatives(p, radius, radius_rate);
  return -d.rt.squaredNorm();
}

double exact_phi(const ChartPoint& p, const BackgroundModel& model, double t) {
  return exact_phi(p, model.radius_at(t), model.radius_rate(t));
}

Vec2 curvature_direction(const ChartPoint& p, double lambda0) {
  const double s = 1.0 + lambda0 * (p.x * p.x + p.y * p.y);
  return Vec2{p.x, p.y} / (s * s);
}

Vec2 first_order_vector_potential(const ChartPoint& p, const BackgroundModel& model, double t) {
  return model.vector_potential_amplitude(t) * curvature_direction(p, model.lambda0());
}

}  // namespace sphereosc
