// k-means++ seeding, Lloyd k-means and X-means with BIC-driven splits,
// used for dominant-color extraction. All randomness flows from the caller
// seed through a private engine, so results are reproducible bit for bit.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chromatone {

// Flat row-major storage for n points of fixed dimension.
struct PointSet {
    std::size_t dim = 0;
    std::vector<double> values; // size = n * dim

    std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
    std::span<const double> point(std::size_t i) const {
        return {values.data() + i * dim, dim};
    }
    void push_back(std::span<const double> p) {
        values.insert(values.end(), p.begin(), p.end());
    }
};

struct ClusterConfig {
    std::size_t initial_k = 2;
    std::size_t max_k = 8;
    std::uint64_t seed = 42;
    std::size_t max_iterations = 100;
    double tolerance = 1e-4; // stop when no center moves further than this
};

struct ClusterModel {
    std::vector<std::vector<double>> centers;
    std::vector<std::uint32_t> assignments; // one center index per point
    std::vector<std::size_t> counts;        // points per cluster, no zeros
    double inertia = 0.0;                   // sum of squared point-center distances
};

// k-means++ D^2 seeding. Throws PipelineError if k exceeds the number of
// distinct points (the message names both values).
std::vector<std::vector<double>> kmeans_pp_init(const PointSet& points,
                                                std::size_t k,
                                                std::uint64_t seed);

// Lloyd iterations until center movement < tolerance or max_iterations.
// Empty clusters are repaired by reseeding to the farthest point.
ClusterModel kmeans(const PointSet& points, std::size_t k, const ClusterConfig& cfg);

// Greedy X-means: start at initial_k, try 2-way splits per cluster and keep
// those whose children score a higher BIC than the parent; stop at max_k or
// when no split is accepted.
ClusterModel xmeans(const PointSet& points, const ClusterConfig& cfg);

struct DominantCluster {
    std::vector<double> center;
    double share = 0.0; // fraction of points in the cluster
    std::size_t index = 0;
};

// Largest cluster by count; ties break to the lowest center index.
DominantCluster dominant_cluster(const ClusterModel& model);

// BIC of a hard-assignment spherical-Gaussian model (shared variance, free
// means, weights n_j/N). Exposed so split decisions and model comparison use
// the one scoring function.
double spherical_bic(const PointSet& points, const ClusterModel& model);

} // namespace chromatone
