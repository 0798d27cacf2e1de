#include "projrecon/counterexample.hpp"

#include <cmath>
#include <numbers>

#include "projrecon/error.hpp"

namespace projrecon {

PolygonInstance polygon_counterexample(std::uint32_t n) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidOrder,
                "polygon counter-example needs n >= 3, got " +
                    std::to_string(n));
  }
  const double pi = std::numbers::pi;
  const double nd = static_cast<double>(n);
  Eigen::MatrixXd z(2, n);
  Eigen::MatrixXd y(2, n);
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(n);
  for (std::uint32_t l = 1; l <= n; ++l) {
    const double odd = static_cast<double>(2 * l + 1);
    const double angle = odd * pi / nd;
    const double rotated = angle + pi / nd;
    const double bisector = odd * pi / (2.0 * nd);
    z.col(l - 1) << std::cos(angle), std::sin(angle);
    y.col(l - 1) << std::cos(rotated), std::sin(rotated);
    Eigen::MatrixXd row(1, 2);
    row << std::cos(bisector), std::sin(bisector);
    blocks.push_back(std::move(row));
  }
  return PolygonInstance{n, uniform_measure(std::move(z)),
                         uniform_measure(std::move(y)),
                         ProjectionStack(2, std::move(blocks), Law::Explicit,
                                         0)};
}

}  // namespace projrecon
