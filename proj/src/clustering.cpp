#include "chromatone/clustering.hpp"
#include "chromatone/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace chromatone {

namespace {

// Canonical [0,1) double from the engine; avoids std::uniform_real_distribution
// so sequences are identical across standard library implementations.
double canonical_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// splitmix64, used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

std::size_t count_distinct(const PointSet& points) {
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto p = points.point(i);
        seen.emplace(p.begin(), p.end());
    }
    return seen.size();
}

// Assign every point to its nearest center; returns inertia.
double assign_points(const PointSet& points, ClusterModel& model) {
    std::size_t n = points.size();
    std::size_t k = model.centers.size();
    model.counts.assign(k, 0);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::max();
        std::uint32_t arg = 0;
        for (std::size_t c = 0; c < k; ++c) {
            double dist = sq_dist(points.point(i), model.centers[c]);
            if (dist < best) {
                best = dist;
                arg = static_cast<std::uint32_t>(c);
            }
        }
        model.assignments[i] = arg;
        model.counts[arg]++;
        inertia += best;
    }
    return inertia;
}

// Give every empty cluster the point currently farthest from its own center.
void repair_empty(const PointSet& points, ClusterModel& model) {
    for (std::size_t c = 0; c < model.centers.size(); ++c) {
        if (model.counts[c] > 0) continue;
        double worst = -1.0;
        std::size_t far = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (model.counts[model.assignments[i]] <= 1) continue;
            double dist = sq_dist(points.point(i), model.centers[model.assignments[i]]);
            if (dist > worst) {
                worst = dist;
                far = i;
            }
        }
        model.counts[model.assignments[far]]--;
        auto p = points.point(far);
        model.centers[c].assign(p.begin(), p.end());
        model.assignments[far] = static_cast<std::uint32_t>(c);
        model.counts[c] = 1;
    }
}

// Lloyd iterations starting from model.centers; leaves the model with final
// assignments, counts and inertia against the converged centers.
void lloyd(const PointSet& points, ClusterModel& model, const ClusterConfig& cfg) {
    std::size_t n = points.size();
    std::size_t d = points.dim;
    std::size_t k = model.centers.size();
    model.assignments.assign(n, 0);

#ifndef NDEBUG
    double prev_inertia = std::numeric_limits<double>::max();
#endif
    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        double inertia = assign_points(points, model);
        repair_empty(points, model);
#ifndef NDEBUG
        assert(inertia <= prev_inertia + 1e-9 && "Lloyd inertia must not increase");
        prev_inertia = inertia;
#else
        (void)inertia;
#endif
        std::vector<double> sums(k * d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto p = points.point(i);
            double* row = sums.data() + model.assignments[i] * d;
            for (std::size_t j = 0; j < d; ++j) row[j] += p[j];
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                double mean = sums[c * d + j] / static_cast<double>(model.counts[c]);
                movement = std::max(movement, std::fabs(mean - model.centers[c][j]));
                model.centers[c][j] = mean;
            }
        }
        if (movement < cfg.tolerance) break;
    }
    model.inertia = assign_points(points, model);
    repair_empty(points, model);
}

// Extract one cluster's points into a fresh set, remembering source rows.
PointSet subset(const PointSet& points, const ClusterModel& model,
                std::uint32_t cluster, std::vector<std::size_t>& rows) {
    PointSet out;
    out.dim = points.dim;
    rows.clear();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (model.assignments[i] == cluster) {
            out.push_back(points.point(i));
            rows.push_back(i);
        }
    }
    return out;
}

} // namespace

std::vector<std::vector<double>> kmeans_pp_init(const PointSet& points,
                                                std::size_t k,
                                                std::uint64_t seed) {
    std::size_t n = points.size();
    if (n == 0) throw PipelineError("k-means++ requires a nonempty point set");
    std::size_t distinct = count_distinct(points);
    if (k > distinct)
        throw PipelineError("k-means++ requested k=" + std::to_string(k) +
                            " but only " + std::to_string(distinct) +
                            " distinct points are available");

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> centers;
    centers.reserve(k);

    std::size_t first = static_cast<std::size_t>(canonical_u01(rng) * static_cast<double>(n));
    if (first >= n) first = n - 1;
    auto p0 = points.point(first);
    centers.emplace_back(p0.begin(), p0.end());

    std::vector<double> d2(n);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centers)
                best = std::min(best, sq_dist(points.point(i), c));
            d2[i] = best;
            total += best;
        }
        // D^2 sampling; points already chosen have weight zero.
        std::size_t chosen = n;
        double target = canonical_u01(rng) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc >= target && d2[i] > 0.0) {
                chosen = i;
                break;
            }
        }
        if (chosen == n) {
            for (std::size_t i = n; i-- > 0;) {
                if (d2[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        }
        auto p = points.point(chosen);
        centers.emplace_back(p.begin(), p.end());
    }
    return centers;
}

ClusterModel kmeans(const PointSet& points, std::size_t k, const ClusterConfig& cfg) {
    if (points.size() == 0) throw PipelineError("k-means requires a nonempty point set");
    ClusterModel model;
    model.centers = kmeans_pp_init(points, k, cfg.seed);
    lloyd(points, model, cfg);
    return model;
}

double spherical_bic(const PointSet& points, const ClusterModel& model) {
    std::size_t n = points.size();
    std::size_t d = points.dim;
    std::size_t k = model.centers.size();
    if (n == 0) return -std::numeric_limits<double>::infinity();

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rss += sq_dist(points.point(i), model.centers[model.assignments[i]]);
    double variance = rss / (static_cast<double>(n) * static_cast<double>(d));
    variance = std::max(variance, 1e-12); // identical points would zero it out

    double loglik = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double nc = static_cast<double>(model.counts[c]);
        loglik += nc * std::log(nc / static_cast<double>(n));
    }
    double nd = static_cast<double>(n) * static_cast<double>(d);
    loglik += -0.5 * nd * std::log(2.0 * 3.14159265358979323846 * variance) - 0.5 * nd;

    // Free parameters: k*d means, k-1 weights, one shared variance.
    double free_params = static_cast<double>(k * d + k);
    return loglik - 0.5 * free_params * std::log(static_cast<double>(n));
}

ClusterModel xmeans(const PointSet& points, const ClusterConfig& cfg) {
    std::size_t n = points.size();
    if (n == 0) throw PipelineError("x-means requires a nonempty point set");

    std::size_t distinct = count_distinct(points);
    std::size_t k = std::clamp<std::size_t>(std::min(cfg.initial_k, distinct), 1, cfg.max_k);

    ClusterModel model = kmeans(points, k, cfg);

    for (std::size_t round = 0; k < cfg.max_k; ++round) {
        struct Split {
            std::uint32_t cluster;
            double gain;
            ClusterModel local;
            std::vector<std::size_t> rows;
        };
        std::vector<Split> accepted;

        for (std::uint32_t c = 0; c < model.centers.size(); ++c) {
            std::vector<std::size_t> rows;
            PointSet members = subset(points, model, c, rows);
            if (members.size() < 2) continue;

            // Parent score: the cluster as a single Gaussian.
            ClusterModel parent;
            parent.centers = {model.centers[c]};
            parent.assignments.assign(members.size(), 0);
            parent.counts = {members.size()};
            double parent_bic = spherical_bic(members, parent);

            ClusterConfig child_cfg = cfg;
            child_cfg.seed = mix_seed(cfg.seed, round * 1024 + c);
            ClusterModel split;
            try {
                split = kmeans(members, 2, child_cfg);
            } catch (const PipelineError&) {
                continue; // fewer than 2 distinct member points
            }
            double child_bic = spherical_bic(members, split);
            if (child_bic > parent_bic)
                accepted.push_back({c, child_bic - parent_bic, std::move(split), std::move(rows)});
        }

        if (accepted.empty()) break;

        // Apply the best-improving splits first so max_k caps deterministically.
        std::stable_sort(accepted.begin(), accepted.end(),
                         [](const Split& a, const Split& b) { return a.gain > b.gain; });
        for (const auto& s : accepted) {
            if (k >= cfg.max_k) break;
            std::uint32_t new_index = static_cast<std::uint32_t>(model.centers.size());
            model.centers[s.cluster] = s.local.centers[0];
            model.centers.push_back(s.local.centers[1]);
            for (std::size_t m = 0; m < s.rows.size(); ++m) {
                if (s.local.assignments[m] == 1)
                    model.assignments[s.rows[m]] = new_index;
            }
            ++k;
        }

        // Global refinement at the new k from the split centers.
        lloyd(points, model, cfg);
    }
    return model;
}

DominantCluster dominant_cluster(const ClusterModel& model) {
    std::size_t total = 0;
    for (std::size_t c : model.counts) total += c;
    std::size_t best = 0;
    for (std::size_t c = 1; c < model.counts.size(); ++c)
        if (model.counts[c] > model.counts[best]) best = c;
    DominantCluster out;
    out.center = model.centers[best];
    out.share = static_cast<double>(model.counts[best]) / static_cast<double>(total);
    out.index = best;
    return out;
}

} // namespace chromatone
