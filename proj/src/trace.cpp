#include "gmf/trace.hpp"

#include "gmf/errors.hpp"

namespace gmf {

void Series::push(int iteration, double v) {
  if (!k.empty() && iteration <= k.back()) throw InvalidArgument("series iterations must increase");
  k.push_back(iteration);
  value.push_back(v);
}

double relative_error(const VectorRef& y, const VectorRef& ref) {
  if (y.size() != ref.size()) throw DimensionMismatch("relative_error: length mismatch");
  const double scale = ref.norm();
  const double diff = (y - ref).norm();
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace gmf
