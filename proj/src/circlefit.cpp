#include "circlefit/circlefit.hpp"

namespace circlefit {

PointFit fit_points(const PointSet& points, const SolverConfig& cfg) {
  const NormalizedPointSet data = normalize(points);
  PointFit out;
  out.transform = data.transform;
  try {
    out.report = fit(data, kasa_fit(data).center(), cfg);
  } catch (const DegenerateInput&) {
    out.report.result = line_fit(data);
    out.report.termination = Termination::line_fallback;
  }
  out.result = denormalize(out.report.result, data.transform);
  return out;
}

}  // namespace circlefit
