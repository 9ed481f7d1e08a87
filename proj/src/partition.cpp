#include "elastica/partition.hpp"

#include <algorithm>
#include <cmath>

namespace elastica {

Partition::Partition(std::vector<double> pts)
    : pts_(std::make_shared<const std::vector<double>>(std::move(pts))) {
    const auto& v = *pts_;
    if (v.size() < 2) throw InvalidArgument("partition needs at least one edge");
    if (v.front() != 0.0) throw InvalidArgument("partition must start at 0");
    const double L = v.back();
    if (!(L > 0) || !std::isfinite(L)) throw InvalidArgument("partition length must be positive");
    const double min_gap = 1e-12 * L;
    double h = 0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double gap = v[i + 1] - v[i];
        if (!(gap > min_gap)) throw InvalidArgument("partition breakpoints must be strictly increasing");
        h = std::max(h, gap);
    }
    h_ = h;
}

Partition Partition::uniform(double length, Index edge_count) {
    if (!(length > 0)) throw InvalidArgument("length must be positive");
    if (edge_count < 1) throw InvalidArgument("edge count must be at least 1");
    std::vector<double> pts(static_cast<std::size_t>(edge_count) + 1);
    for (Index i = 0; i <= edge_count; ++i)
        pts[static_cast<std::size_t>(i)] = length * static_cast<double>(i) / static_cast<double>(edge_count);
    pts.front() = 0.0;
    pts.back() = length;
    return Partition(std::move(pts));
}

Partition Partition::from_breakpoints(std::vector<double> vertex_params) {
    return Partition(std::move(vertex_params));
}

Partition Partition::refined(int levels) const {
    if (levels < 0) throw InvalidArgument("refinement level must be nonnegative");
    if (levels == 0) return *this;
    const auto& v = *pts_;
    const Index sub = Index{1} << levels;
    std::vector<double> pts;
    pts.reserve((v.size() - 1) * static_cast<std::size_t>(sub) + 1);
    for (std::size_t I = 0; I + 1 < v.size(); ++I) {
        for (Index k = 0; k < sub; ++k)
            pts.push_back(v[I] + (v[I + 1] - v[I]) * static_cast<double>(k) / static_cast<double>(sub));
    }
    pts.push_back(v.back());
    return Partition(std::move(pts));
}

double Partition::dual_length(Index i) const {
    if (i <= 0 || i >= edge_count()) throw InvalidArgument("dual length is defined at interior vertices");
    return 0.5 * (edge_length(i - 1) + edge_length(i));
}

double Partition::almost_uniformity_defect() const {
    if (interior_vertex_count() < 1)
        throw UndefinedRequest("almost-uniformity defect needs an interior vertex");
    double worst = 0;
    for (Index i = 1; i < edge_count(); ++i) {
        const double prev = edge_length(i - 1);
        const double next = edge_length(i);
        const double d = std::abs(std::log(next / prev)) / std::min(prev, next);
        worst = std::max(worst, d);
    }
    return worst;
}

bool Partition::same_as(const Partition& o) const {
    return pts_ == o.pts_ || *pts_ == *o.pts_;
}

}  // namespace elastica
