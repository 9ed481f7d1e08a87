#pragma once

#include <memory>
#include <vector>

#include "elastica/common.hpp"

namespace elastica {

// Partition of [0, L] into compact intervals. Vertices are the breakpoints
// 0 = t_0 < ... < t_n = L; edge I joins vertices I and I+1; vertices
// 1..n-1 are interior. Immutable value type, cheap to copy and share.
class Partition {
  public:
    static Partition uniform(double length, Index edge_count);
    static Partition from_breakpoints(std::vector<double> vertex_params);

    // Splits every edge into 2^levels equal sub-edges.
    Partition refined(int levels) const;

    double length() const { return pts_->back(); }
    Index vertex_count() const { return static_cast<Index>(pts_->size()); }
    Index edge_count() const { return vertex_count() - 1; }
    Index interior_vertex_count() const { return vertex_count() - 2; }

    double vertex(Index i) const { return (*pts_)[static_cast<std::size_t>(i)]; }
    const std::vector<double>& vertices() const { return *pts_; }

    // Edge length l0(I).
    double edge_length(Index I) const { return vertex(I + 1) - vertex(I); }
    // Dual length around an interior vertex: (l0(I-) + l0(I+))/2.
    double dual_length(Index i) const;
    // Edge midpoint m(I).
    double midpoint(Index I) const { return 0.5 * (vertex(I) + vertex(I + 1)); }
    // Mesh size h(T) = max edge length.
    double mesh_size() const { return h_; }

    // max over interior vertices of |log(l0(next)/l0(prev))| / min(prev, next);
    // zero for uniform meshes.
    double almost_uniformity_defect() const;

    // True when both handles describe the same breakpoints.
    bool same_as(const Partition& o) const;

  private:
    explicit Partition(std::vector<double> pts);

    std::shared_ptr<const std::vector<double>> pts_;
    double h_ = 0;
};

}  // namespace elastica
