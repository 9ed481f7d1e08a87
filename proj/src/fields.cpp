#include "elastica/fields.hpp"

#include <cmath>
#include <limits>

#include "elastica/parallel.hpp"

namespace elastica {

Vec Field::vec_at(Index entity) const {
    Vec v(0.0, 0.0);
    v.n = dim;
    for (int c = 0; c < dim; ++c) v.a[static_cast<std::size_t>(c)] = at(entity, c);
    return v;
}

void Field::set_vec(Index entity, const Vec& v) {
    if (v.n != dim) throw InvalidArgument("field entry dimension mismatch");
    for (int c = 0; c < dim; ++c) at(entity, c) = v.a[static_cast<std::size_t>(c)];
}

Field make_field(Partition part, Support support, int dim, Index margin) {
    if (dim < 1 || dim > 3) throw UnsupportedDimension("field entries must have 1 to 3 components");
    Field f{std::move(part), support, margin, dim, {}};
    if (margin < 0 || f.count() < 0) throw InvalidArgument("field margin exceeds entity range");
    f.data.assign(static_cast<std::size_t>(f.count() * dim), 0.0);
    return f;
}

Field vertex_field_from(const Partition& part, int dim, const std::function<Vec(double)>& f) {
    Field out = make_field(part, Support::Vertex, dim);
    for (Index i = 0; i < part.vertex_count(); ++i) {
        Vec v = f(part.vertex(i));
        if (v.n != dim) throw InvalidArgument("sample dimension mismatch");
        out.set_vec(i, v);
    }
    return out;
}

Field scalar_vertex_field_from(const Partition& part, const std::function<double(double)>& f) {
    Field out = make_field(part, Support::Vertex, 1);
    for (Index i = 0; i < part.vertex_count(); ++i) out.at(i) = f(part.vertex(i));
    return out;
}

double MetricWeights::total() const {
    KahanSum s;
    for (double l : edge) s.add(l);
    return s.value();
}

MetricWeights reference_weights(const Partition& part) {
    std::vector<double> edge(static_cast<std::size_t>(part.edge_count()));
    for (Index I = 0; I < part.edge_count(); ++I)
        edge[static_cast<std::size_t>(I)] = part.edge_length(I);
    return weights_from_edge_lengths(part, std::move(edge));
}

MetricWeights weights_from_edge_lengths(const Partition& part, std::vector<double> edge_lengths) {
    if (static_cast<Index>(edge_lengths.size()) != part.edge_count())
        throw InvalidArgument("edge length count mismatch");
    MetricWeights w;
    w.edge = std::move(edge_lengths);
    const Index n = part.edge_count();
    w.dual.assign(static_cast<std::size_t>(n) + 1, 0.0);
    w.dual.front() = 0.5 * w.edge.front();
    w.dual.back() = 0.5 * w.edge.back();
    for (Index i = 1; i < n; ++i)
        w.dual[static_cast<std::size_t>(i)] =
            0.5 * (w.edge[static_cast<std::size_t>(i - 1)] + w.edge[static_cast<std::size_t>(i)]);
    for (double l : w.edge)
        if (!(l > 0)) throw InvalidArgument("edge weights must be positive");
    return w;
}

static void check_weights(const Field& f, const MetricWeights& w) {
    if (static_cast<Index>(w.edge.size()) != f.part.edge_count())
        throw InvalidArgument("weights do not match the field's partition");
}

Field diff_v2e(const Field& f, const MetricWeights& w) {
    if (f.support != Support::Vertex) throw InvalidArgument("diff_v2e needs a vertex field");
    check_weights(f, w);
    if (f.count() < 2) throw UndefinedRequest("not enough vertices to difference");
    Field out = make_field(f.part, Support::Edge, f.dim, f.margin);
    for (Index I = out.first(); I < out.first() + out.count(); ++I)
        for (int c = 0; c < f.dim; ++c)
            out.at(I, c) = (f.at(I + 1, c) - f.at(I, c)) / w.edge[static_cast<std::size_t>(I)];
    return out;
}

Field diff_e2v(const Field& g, const MetricWeights& w) {
    if (g.support != Support::Edge) throw InvalidArgument("diff_e2v needs an edge field");
    check_weights(g, w);
    if (g.count() < 2) throw UndefinedRequest("not enough edges to difference");
    Field out = make_field(g.part, Support::Vertex, g.dim, g.margin + 1);
    for (Index i = out.first(); i < out.first() + out.count(); ++i)
        for (int c = 0; c < g.dim; ++c)
            out.at(i, c) = (g.at(i, c) - g.at(i - 1, c)) / w.dual[static_cast<std::size_t>(i)];
    return out;
}

Field diff_k(const Field& f, const MetricWeights& w, int k) {
    if (k < 0) throw InvalidArgument("difference order must be nonnegative");
    Field cur = f;
    for (int j = 0; j < k; ++j)
        cur = cur.support == Support::Vertex ? diff_v2e(cur, w) : diff_e2v(cur, w);
    return cur;
}

NormSpec NormSpec::lp(double p) { return NormSpec{Kind::Lp, 0, p}; }
NormSpec NormSpec::sobolev_semi(int k, double p) { return NormSpec{Kind::SobolevSemi, k, p}; }
NormSpec NormSpec::tv_semi(int k) { return NormSpec{Kind::TvSemi, k, 1.0}; }

static double entry_norm(const Field& f, Index entity) {
    if (f.dim == 1) return std::abs(f.at(entity));
    double s = 0;
    for (int c = 0; c < f.dim; ++c) s += f.at(entity, c) * f.at(entity, c);
    return std::sqrt(s);
}

double discrete_norm(const Field& f, const NormSpec& spec, const MetricWeights& w) {
    const double p = spec.kind == NormSpec::Kind::TvSemi ? 1.0 : spec.p;
    if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be at least 1");
    const int k = spec.kind == NormSpec::Kind::Lp ? 0 : spec.k;
    Field g = diff_k(f, w, k);
    if (g.count() < 1) throw UndefinedRequest("difference order too large for this mesh");

    if (std::isinf(p)) {
        return par::min_chunked(g.count(), [&](Index j) { return -entry_norm(g, g.first() + j); }) * -1.0;
    }
    const auto* wts = g.support == Support::Edge ? &w.edge : &w.dual;
    const double total = par::sum_chunked(g.count(), [&](Index j) {
        const Index e = g.first() + j;
        return std::pow(entry_norm(g, e), p) * (*wts)[static_cast<std::size_t>(e)];
    });
    return std::pow(total, 1.0 / p);
}

}  // namespace elastica
