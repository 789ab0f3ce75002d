#pragma once

#include <set>

#include "videocot/model.hpp"

namespace videocot {

/// Intersection-over-union of two axis-aligned boxes. Both boxes must carry
/// the same coordinate space; mixing spaces throws DomainError.
double box_iou(const BoundingBox& a, const BoundingBox& b);

/// IoU over closed frame intervals: lengths are end - start + 1, the union is
/// the size of the set union. 0 when disjoint.
double temporal_iou(TemporalSpan predicted, TemporalSpan gold);

/// Fraction of key frames covered by the predicted window. Throws DomainError
/// on an empty key set.
double keyframe_recall(TemporalSpan predicted, const std::set<NormFrame>& keys);

}  // namespace videocot
