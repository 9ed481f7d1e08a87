#pragma once

#include <functional>
#include <vector>

#include "elastica/partition.hpp"
#include "elastica/vec.hpp"

namespace elastica {

// Where a field lives. Differencing alternates between vertex and edge
// entities and trims one entity per step, tracked by `margin`.
enum class Support { Vertex, Edge };

// Vertex- or edge-indexed field of R^dim values on a partition. `margin`
// entities are cut from each end of the full entity range, so entry j of the
// data corresponds to global entity margin + j.
struct Field {
    Partition part;
    Support support = Support::Vertex;
    Index margin = 0;
    int dim = 1;
    std::vector<double> data;

    Index full_count() const {
        return support == Support::Vertex ? part.vertex_count() : part.edge_count();
    }
    Index count() const { return full_count() - 2 * margin; }
    Index first() const { return margin; }

    double& at(Index entity, int c = 0) {
        return data[static_cast<std::size_t>((entity - margin) * dim + c)];
    }
    double at(Index entity, int c = 0) const {
        return data[static_cast<std::size_t>((entity - margin) * dim + c)];
    }
    Vec vec_at(Index entity) const;
    void set_vec(Index entity, const Vec& v);
};

Field make_field(Partition part, Support support, int dim, Index margin = 0);
Field vertex_field_from(const Partition& part, int dim,
                        const std::function<Vec(double)>& f);
Field scalar_vertex_field_from(const Partition& part,
                               const std::function<double(double)>& f);

// Edge and dual lengths used by the difference operators and norms: either
// the reference lengths of the partition or the lengths induced by a polygon.
// dual[i] is the mean of the adjacent edge lengths at interior vertices and
// the half length of the single adjacent edge at the two boundary vertices,
// so vertex weights sum to the total length.
struct MetricWeights {
    std::vector<double> edge;
    std::vector<double> dual;
    double total() const;
};

MetricWeights reference_weights(const Partition& part);
MetricWeights weights_from_edge_lengths(const Partition& part, std::vector<double> edge_lengths);

// Per-edge difference of a vertex field: (f(I+1) - f(I)) / edge length.
Field diff_v2e(const Field& f, const MetricWeights& w);
// Per-interior-vertex difference of an edge field: (g(i) - g(i-1)) / dual length.
Field diff_e2v(const Field& g, const MetricWeights& w);
// k-fold difference, alternating the two operators.
Field diff_k(const Field& f, const MetricWeights& w, int k);

struct NormSpec {
    enum class Kind { Lp, SobolevSemi, TvSemi } kind = Kind::Lp;
    int k = 0;
    double p = 2;

    static NormSpec lp(double p);
    static NormSpec sobolev_semi(int k, double p);
    static NormSpec tv_semi(int k);
};

// Discrete norm of a field: entity weights are edge lengths on edge support
// and dual lengths on vertex support; p = infinity is the unweighted max of
// per-entity Euclidean norms. Sobolev seminorms difference k times first;
// tv_semi(k) = sobolev_semi(k, 1).
double discrete_norm(const Field& f, const NormSpec& spec, const MetricWeights& w);

}  // namespace elastica
