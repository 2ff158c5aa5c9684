#pragma once

// Dataset-level benchmark: every (pattern, noise level, image) is mosaicked
// once, reconstructed by each method and scored against the reference RGB.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "rgbw/baseline.hpp"
#include "rgbw/cfa.hpp"
#include "rgbw/image.hpp"
#include "rgbw/io/raster.hpp"
#include "rgbw/metrics.hpp"
#include "rgbw/parallel.hpp"
#include "rgbw/solver.hpp"
#include "rgbw/tuning.hpp"

namespace rgbw {

enum class Method { Proposed, Baseline };

inline const char* to_string(Method m) { return m == Method::Proposed ? "proposed" : "baseline"; }

inline std::optional<Method> parse_method(const std::string& s) {
    if (s == "proposed") return Method::Proposed;
    if (s == "baseline") return Method::Baseline;
    return std::nullopt;
}

struct DatasetImage {
    std::string id;
    SpectralImage reference;
};

/**
 * Loads every raster in `dir` (sorted by file name). A sibling named
 * `<stem>_pan.<ext>` supplies the W plane; otherwise W is synthesized.
 */
inline std::vector<DatasetImage> load_dataset(const std::filesystem::path& dir, const WhiteWeights& weights = {}) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("dataset directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = io::detail::lower_extension(entry.path());
        if (ext != ".png" && ext != ".ppm" && ext != ".pgm" && ext != ".pnm") continue;
        const std::string stem = entry.path().stem().string();
        if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, "_pan") == 0) continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<DatasetImage> out;
    for (const auto& f : files) {
        RgbImage rgb = io::load_image(f);
        const fs::path pan = f.parent_path() / (f.stem().string() + "_pan" + f.extension().string());
        if (fs::exists(pan))
            out.push_back({f.stem().string(), attach_white(rgb, io::load_plane(pan))});
        else
            out.push_back({f.stem().string(), synthesize_white(rgb, weights)});
    }
    return out;
}

struct EvalOptions {
    std::vector<CfaPattern> patterns;
    std::vector<Method> methods{Method::Proposed, Method::Baseline};
    std::vector<double> noise_levels{0.0};
    std::uint64_t seed = 0;
    SolverConfig solver;
    std::optional<InterpolationKernel> kernel;  // default: tent sized to the pattern
    double fusion_epsilon = kDefaultFusionEpsilon;
    std::vector<double> lambda_grid;  // non-empty: tune lambda per (pattern, noise) cell first
    unsigned jobs = 1;
};

struct EvalRow {
    std::string pattern;
    Method method = Method::Proposed;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    std::string image_id;
    double mse = std::numeric_limits<double>::quiet_NaN();
    Psnr psnr{std::numeric_limits<double>::quiet_NaN(), false};
    std::string error;  // empty on success
};

struct EvalCell {
    std::string pattern;
    Method method = Method::Proposed;
    double noise_std = 0.0;
    std::optional<double> lambda;  // proposed method only
    std::size_t count = 0;
    std::size_t failures = 0;
    Summary mse;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    std::vector<EvalCell> cells;
    std::vector<LambdaSearchResult> searches;  // one per (pattern, noise) when tuning

    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const EvalRow& r) { return !r.error.empty(); }));
    }
};

/// Seed of the noise drawn for image `image` at noise level `level`.
inline std::uint64_t noise_seed(std::uint64_t seed, std::size_t level, std::size_t image) {
    return derive_seed(derive_seed(seed, level), image);
}

inline EvalReport evaluate(const std::vector<DatasetImage>& dataset, const EvalOptions& opt) {
    if (dataset.empty()) throw InvalidArgument("evaluation dataset is empty");
    if (opt.patterns.empty() || opt.methods.empty() || opt.noise_levels.empty())
        throw InvalidArgument("evaluation needs at least one pattern, method and noise level");

    EvalReport report;
    std::vector<SpectralImage> references;
    for (const auto& d : dataset) references.push_back(d.reference);

    for (const CfaPattern& pattern : opt.patterns) {
        const InterpolationKernel kernel = opt.kernel.value_or(InterpolationKernel::for_pattern(pattern));
        for (std::size_t level = 0; level < opt.noise_levels.size(); ++level) {
            const double sd = opt.noise_levels[level];
            SolverConfig cfg = opt.solver.with_trace(false);
            const bool wants_proposed =
                std::find(opt.methods.begin(), opt.methods.end(), Method::Proposed) != opt.methods.end();
            if (!opt.lambda_grid.empty() && wants_proposed) {
                report.searches.push_back(grid_search_lambda(references, pattern, opt.lambda_grid, cfg,
                                                             {sd, derive_seed(opt.seed, level)}, opt.jobs));
                cfg = cfg.with_lambda(report.searches.back().best_lambda);
            }

            // rows[image][method]
            std::vector<std::vector<EvalRow>> rows(dataset.size());
            parallel_for(dataset.size(), opt.jobs, [&](std::size_t i) {
                const std::uint64_t seed = noise_seed(opt.seed, level, i);
                const RgbImage truth = drop_white(dataset[i].reference);
                std::optional<RawImage> raw;
                std::optional<CfaMask> mask;
                std::string acquire_error;
                try {
                    mask = expand_mask(pattern, truth.height(), truth.width());
                    raw = acquire(dataset[i].reference, *mask, {sd, seed});
                } catch (const std::exception& e) {
                    acquire_error = e.what();
                }
                for (Method m : opt.methods) {
                    EvalRow row;
                    row.pattern = pattern.name();
                    row.method = m;
                    row.noise_std = sd;
                    row.seed = seed;
                    row.image_id = dataset[i].id;
                    try {
                        if (!raw) throw Error(acquire_error);
                        const RgbImage est = m == Method::Proposed
                                                 ? chambolle_pock(*raw, *mask, cfg).estimate
                                                 : baseline_demosaic(*raw, pattern, kernel, opt.fusion_epsilon);
                        row.mse = mse(est, truth);
                        row.psnr = psnr_from_mse(row.mse);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                    }
                    rows[i].push_back(std::move(row));
                }
            });

            for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
                EvalCell cell;
                cell.pattern = pattern.name();
                cell.method = opt.methods[mi];
                cell.noise_std = sd;
                if (opt.methods[mi] == Method::Proposed) cell.lambda = cfg.lambda();
                std::vector<double> values;
                for (auto& per_image : rows) {
                    const EvalRow& r = per_image[mi];
                    if (r.error.empty())
                        values.push_back(r.mse);
                    else
                        ++cell.failures;
                }
                cell.count = values.size();
                if (!values.empty()) cell.mse = aggregate(values);
                report.cells.push_back(cell);
            }
            for (auto& per_image : rows)
                for (auto& r : per_image) report.rows.push_back(std::move(r));
        }
    }
    return report;
}

/// Shortest round-trip decimal form; "inf" / "nan" for non-finite values.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Per-image rows: pattern,method,noise_std,seed,image_id,mse,psnr.
inline void write_rows_csv(std::ostream& os, const std::vector<EvalRow>& rows) {
    os << "pattern,method,noise_std,seed,image_id,mse,psnr\n";
    for (const auto& r : rows)
        os << r.pattern << ',' << to_string(r.method) << ',' << format_number(r.noise_std) << ',' << r.seed << ','
           << r.image_id << ',' << format_number(r.mse) << ',' << format_number(r.psnr.db) << '\n';
}

inline void write_summary_csv(std::ostream& os, const std::vector<EvalCell>& cells) {
    os << "pattern,method,noise_std,lambda,n,failures,mean_mse,std_mse\n";
    for (const auto& c : cells)
        os << c.pattern << ',' << to_string(c.method) << ',' << format_number(c.noise_std) << ','
           << (c.lambda ? format_number(*c.lambda) : "") << ',' << c.count << ',' << c.failures << ','
           << (c.count ? format_number(c.mse.mean) : "nan") << ',' << (c.count ? format_number(c.mse.std_dev) : "nan")
           << '\n';
}

/// Human-readable table: one line per pattern, "mean +- std" per (method, noise) column.
inline void print_table(std::ostream& os, const std::vector<EvalCell>& cells) {
    std::vector<std::string> patterns;
    std::vector<std::pair<Method, double>> columns;
    for (const auto& c : cells) {
        if (std::find(patterns.begin(), patterns.end(), c.pattern) == patterns.end()) patterns.push_back(c.pattern);
        const auto col = std::make_pair(c.method, c.noise_std);
        if (std::find(columns.begin(), columns.end(), col) == columns.end()) columns.push_back(col);
    }
    std::stable_sort(columns.begin(), columns.end(),
                     [](const auto& a, const auto& b) { return static_cast<int>(a.first) > static_cast<int>(b.first); });

    os << std::left << std::setw(10) << "pattern";
    for (const auto& [m, sd] : columns) {
        std::ostringstream h;
        h << to_string(m) << " s=" << format_number(sd);
        os << " | " << std::setw(22) << h.str();
    }
    os << '\n';
    for (const auto& p : patterns) {
        os << std::left << std::setw(10) << p;
        for (const auto& [m, sd] : columns) {
            std::ostringstream v;
            for (const auto& c : cells)
                if (c.pattern == p && c.method == m && c.noise_std == sd) {
                    if (c.count)
                        v << std::scientific << std::setprecision(2) << c.mse.mean << " +- " << c.mse.std_dev;
                    else
                        v << "n/a";
                }
            os << " | " << std::setw(22) << v.str();
        }
        os << '\n';
    }
}

}  // namespace rgbw
