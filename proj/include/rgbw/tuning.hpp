#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rgbw/cfa.hpp"
#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/metrics.hpp"
#include "rgbw/parallel.hpp"
#include "rgbw/solver.hpp"

namespace rgbw {

struct LambdaScore {
    double lambda = 0.0;
    double mean_mse = 0.0;
    std::vector<double> image_mse;  // one per dataset image, in dataset order
};

struct LambdaSearchResult {
    double best_lambda = 0.0;
    std::vector<LambdaScore> table;  // in grid order
};

/// Simulated acquisition of a reference scene: forward model plus optional noise.
inline RawImage acquire(const SpectralImage& scene, const CfaMask& mask, const NoiseSpec& noise) {
    RawImage y = forward(scene, mask);
    return noise.std_dev > 0.0 ? add_noise(y, noise) : y;
}

/**
 * Deterministic grid search over the regularization weight. Every image is
 * mosaicked once (image i draws noise from derive_seed(noise.seed, i)),
 * reconstructed with each lambda, and scored by MSE against its RGB planes.
 * The smallest mean MSE wins; ties go to the earlier grid entry.
 */
inline LambdaSearchResult grid_search_lambda(const std::vector<SpectralImage>& dataset, const CfaPattern& pattern,
                                             const std::vector<double>& lambda_grid, const SolverConfig& base_cfg,
                                             const NoiseSpec& noise = {}, unsigned jobs = 1) {
    if (dataset.empty()) throw InvalidArgument("grid search needs at least one image");
    if (lambda_grid.empty()) throw InvalidArgument("grid search needs at least one lambda");

    std::vector<RawImage> raws;
    std::vector<CfaMask> masks;
    raws.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        masks.push_back(expand_mask(pattern, dataset[i].height(), dataset[i].width()));
        raws.push_back(acquire(dataset[i], masks.back(), {noise.std_dev, derive_seed(noise.seed, i)}));
    }

    LambdaSearchResult result;
    for (double lambda : lambda_grid) {
        const SolverConfig cfg = base_cfg.with_lambda(lambda).with_trace(false);
        LambdaScore score{lambda, 0.0, std::vector<double>(dataset.size())};
        parallel_for(dataset.size(), jobs, [&](std::size_t i) {
            const SolveResult r = chambolle_pock(raws[i], masks[i], cfg);
            score.image_mse[i] = mse(r.estimate, drop_white(dataset[i]));
        });
        score.mean_mse = aggregate(score.image_mse).mean;
        result.table.push_back(std::move(score));
    }

    std::size_t best = 0;
    for (std::size_t n = 1; n < result.table.size(); ++n)
        if (result.table[n].mean_mse < result.table[best].mean_mse) best = n;
    result.best_lambda = result.table[best].lambda;
    return result;
}

}  // namespace rgbw
