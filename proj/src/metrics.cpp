#include "videocot/metrics.hpp"

#include <algorithm>

namespace videocot {

double box_iou(const BoundingBox& a, const BoundingBox& b) {
    if (a.space != b.space)
        throw DomainError("box_iou on mixed coordinate spaces (" + to_string(a.space) +
                          " vs " + to_string(b.space) + ")");
    if (!a.geometry_valid() || !b.geometry_valid())
        throw DomainError("box_iou on a degenerate or non-finite box");
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

double temporal_iou(TemporalSpan predicted, TemporalSpan gold) {
    const int inter = span_overlap(predicted, gold);
    if (inter == 0) return 0.0;
    const int uni = predicted.length() + gold.length() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double keyframe_recall(TemporalSpan predicted, const std::set<NormFrame>& keys) {
    if (keys.empty()) throw DomainError("keyframe_recall with an empty key set");
    int hit = 0;
    for (const auto& k : keys)
        if (predicted.contains(k)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(keys.size());
}

}  // namespace videocot
