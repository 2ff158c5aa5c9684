#pragma once

// Command-line front end: mosaic, demosaic and evaluate subcommands.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rgbw/rgbw.hpp"

namespace rgbw::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Thrown for bad flag values that CLI11 cannot validate on its own.
class UsageError : public Error {
public:
    using Error::Error;
};

inline InterpolationKernel parse_kernel(const std::string& spec, const CfaPattern& pattern) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    try {
        if (!parts.empty() && parts[0] == "tent" && parts.size() <= 2) {
            return parts.size() == 1 ? InterpolationKernel::for_pattern(pattern)
                                     : InterpolationKernel::tent(std::stoi(parts[1]));
        }
        if (!parts.empty() && parts[0] == "gaussian" && parts.size() == 3)
            return InterpolationKernel::gaussian(std::stoi(parts[1]), std::stod(parts[2]));
    } catch (const std::exception&) {
    }
    throw UsageError("bad kernel '" + spec + "' (expected tent, tent:<radius> or gaussian:<radius>:<sigma>)");
}

/// Colour-coded view of a mosaic: each sample drawn in the colour of its filter.
inline Tensor mosaic_preview(const RawImage& y, const CfaMask& mask) {
    Tensor out(y.height(), y.width(), 3);
    for (std::size_t i = 0; i < y.height(); ++i)
        for (std::size_t j = 0; j < y.width(); ++j) {
            const double v = y(i, j);
            const Channel c = mask.label(i, j);
            if (c == Channel::W) {
                for (std::size_t k = 0; k < 3; ++k) out(i, j, k) = v;
            } else {
                out(i, j, index_of(c)) = v;
            }
        }
    return out;
}

struct MosaicArgs {
    std::string input;
    std::string pattern = "kodak";
    double noise_std = 0.0;
    std::uint64_t seed = 0;
    std::string white = "mean";
    std::string output;
    std::string preview;
    bool no_preview = false;
};

inline int cmd_mosaic(const MosaicArgs& a, std::ostream& out) {
    namespace fs = std::filesystem;
    const CfaPattern pattern = io::resolve_pattern(a.pattern);
    const RgbImage rgb = io::load_image(a.input);

    std::optional<SpectralImage> scene;
    if (a.white == "mean") {
        scene = synthesize_white(rgb);
    } else {
        fs::path pan = a.white;
        if (a.white == "pan") {
            const fs::path in = a.input;
            pan = in.parent_path() / (in.stem().string() + "_pan" + in.extension().string());
        }
        scene = attach_white(rgb, io::load_plane(pan));
    }

    const CfaMask mask = expand_mask(pattern, rgb.height(), rgb.width());
    const RawImage y = acquire(*scene, mask, {a.noise_std, a.seed});
    io::write_tensor(a.output, y.tensor());
    if (!a.no_preview) {
        const std::string preview = a.preview.empty() ? a.output + ".preview.png" : a.preview;
        io::save_raster(mosaic_preview(y, mask), preview, 8);
    }
    out << "mosaic " << pattern.name() << " " << y.height() << "x" << y.width() << " -> " << a.output << "\n";
    return kOk;
}

struct DemosaicArgs {
    std::string input;
    std::string pattern = "kodak";
    std::string method = "proposed";
    double lambda = SolverConfig::kDefaultLambda;
    double tau = SolverConfig::kDefaultTau;
    double sigma = SolverConfig::kDefaultSigma;
    int iterations = SolverConfig::kDefaultIterations;
    std::string init = "channel-mean";
    double tolerance = 0.0;
    std::string kernel = "tent";
    double epsilon = kDefaultFusionEpsilon;
    std::string output;
    int bit_depth = 8;
    std::string trace;
    std::string full_output;
};

inline int cmd_demosaic(const DemosaicArgs& a, std::ostream& out) {
    const auto method = parse_method(a.method);
    if (!method) throw UsageError("unknown method '" + a.method + "'");
    const auto init = parse_init(a.init);
    if (!init) throw UsageError("unknown init '" + a.init + "'");
    // Validated before any file is touched.
    const SolverConfig cfg(a.lambda, a.tau, a.sigma, a.iterations, *init, !a.trace.empty(), a.tolerance);
    const CfaPattern pattern = io::resolve_pattern(a.pattern);
    const InterpolationKernel kernel = parse_kernel(a.kernel, pattern);

    Tensor t = io::read_tensor(a.input);
    if (t.channels() != 1) throw ShapeError("input tensor has " + std::to_string(t.channels()) + " channels, expected a mosaic");
    const RawImage y(std::move(t));

    if (*method == Method::Baseline) {
        io::save_image(baseline_demosaic(y, pattern, kernel, a.epsilon), a.output, a.bit_depth);
        out << "baseline " << pattern.name() << " -> " << a.output << "\n";
        return kOk;
    }

    const CfaMask mask = expand_mask(pattern, y.height(), y.width());
    const SolveResult r = chambolle_pock(y, mask, cfg);
    io::save_image(r.estimate, a.output, a.bit_depth);
    if (!a.full_output.empty()) io::write_tensor(a.full_output, r.full_estimate.tensor());
    if (!a.trace.empty()) {
        std::ofstream tr(a.trace);
        if (!tr) throw IoError("cannot open " + a.trace + " for writing");
        tr << "iteration,objective,relative_change\n";
        for (std::size_t q = 0; q < r.objective_trace.size(); ++q)
            tr << q + 1 << ',' << format_number(r.objective_trace[q]) << ','
               << format_number(r.iterate_change_trace[q]) << '\n';
    }
    out << "proposed " << pattern.name() << " lambda=" << cfg.lambda() << " iterations=" << r.iterations_run
        << " objective=" << objective(r.full_estimate, y, mask, cfg.lambda()) << " -> " << a.output << "\n";
    return kOk;
}

struct EvaluateArgs {
    std::string dataset;
    std::vector<std::string> patterns{"sparse3", "kodak", "sony"};
    std::vector<std::string> methods{"proposed", "baseline"};
    std::vector<double> noise{0.0, 0.05};
    std::uint64_t seed = 0;
    std::string out;
    std::string summary;
    std::vector<double> lambda_grid;
    double lambda = SolverConfig::kDefaultLambda;
    double tau = SolverConfig::kDefaultTau;
    double sigma = SolverConfig::kDefaultSigma;
    int iterations = SolverConfig::kDefaultIterations;
    double epsilon = kDefaultFusionEpsilon;
    unsigned jobs = 1;
};

inline std::string default_summary_path(const std::string& out) {
    std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + "_summary" + p.extension().string())).string();
}

inline int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    EvalOptions opt;
    opt.solver = SolverConfig(a.lambda, a.tau, a.sigma, a.iterations);
    opt.methods.clear();
    for (const auto& m : a.methods) {
        const auto method = parse_method(m);
        if (!method) throw UsageError("unknown method '" + m + "'");
        opt.methods.push_back(*method);
    }
    for (const auto& p : a.patterns) opt.patterns.push_back(io::resolve_pattern(p));
    for (double sd : a.noise)
        if (!(sd >= 0.0)) throw UsageError("noise levels must be non-negative");
    for (double l : a.lambda_grid)
        if (!(l >= 0.0)) throw UsageError("lambda grid values must be non-negative");
    opt.noise_levels = a.noise;
    opt.seed = a.seed;
    opt.lambda_grid = a.lambda_grid;
    opt.fusion_epsilon = a.epsilon;
    opt.jobs = a.jobs;

    const auto dataset = load_dataset(a.dataset);
    if (dataset.empty()) throw IoError("dataset " + a.dataset + " contains no images");
    const EvalReport report = evaluate(dataset, opt);

    {
        std::ofstream csv(a.out, std::ios::binary | std::ios::trunc);
        if (!csv) throw IoError("cannot open " + a.out + " for writing");
        write_rows_csv(csv, report.rows);
    }
    {
        const std::string path = a.summary.empty() ? default_summary_path(a.out) : a.summary;
        std::ofstream csv(path, std::ios::binary | std::ios::trunc);
        if (!csv) throw IoError("cannot open " + path + " for writing");
        write_summary_csv(csv, report.cells);
    }
    print_table(out, report.cells);
    for (const auto& r : report.rows)
        if (!r.error.empty())
            err << "error: " << r.pattern << "/" << to_string(r.method) << "/" << r.image_id << ": " << r.error << "\n";
    return report.failures() ? kData : kOk;
}

/// Parses argv and dispatches; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"RGBW colour-filter-array simulation and demosaicking"};
    app.require_subcommand(1);

    MosaicArgs ma;
    auto* mosaic = app.add_subcommand("mosaic", "simulate a raw RGBW acquisition of an RGB raster");
    mosaic->add_option("--input", ma.input, "reference RGB raster")->required();
    mosaic->add_option("--pattern", ma.pattern, "built-in pattern name or pattern file")->capture_default_str();
    mosaic->add_option("--noise-std", ma.noise_std, "additive Gaussian noise std")->capture_default_str();
    mosaic->add_option("--seed", ma.seed, "noise seed")->capture_default_str();
    mosaic->add_option("--white", ma.white, "W plane: mean, pan (sibling <stem>_pan raster) or a raster path")
        ->capture_default_str();
    mosaic->add_option("--output", ma.output, "output tensor container")->required();
    mosaic->add_option("--preview", ma.preview, "preview raster (default <output>.preview.png)");
    mosaic->add_flag("--no-preview", ma.no_preview, "skip the preview raster");

    DemosaicArgs da;
    auto* demosaic = app.add_subcommand("demosaic", "reconstruct an RGB image from a raw mosaic");
    demosaic->add_option("--input", da.input, "raw mosaic tensor container")->required();
    demosaic->add_option("--pattern", da.pattern, "built-in pattern name or pattern file")->capture_default_str();
    demosaic->add_option("--method", da.method, "proposed or baseline")->capture_default_str();
    demosaic->add_option("--lambda", da.lambda, "TV weight")->capture_default_str();
    demosaic->add_option("--tau", da.tau, "primal step")->capture_default_str();
    demosaic->add_option("--sigma", da.sigma, "dual step")->capture_default_str();
    demosaic->add_option("--iters", da.iterations, "iteration count")->capture_default_str();
    demosaic->add_option("--init", da.init, "zeros, adjoint or channel-mean")->capture_default_str();
    demosaic->add_option("--tol", da.tolerance, "stop early below this relative change (0 = off)")
        ->capture_default_str();
    demosaic->add_option("--kernel", da.kernel, "baseline kernel: tent, tent:<r> or gaussian:<r>:<sigma>")
        ->capture_default_str();
    demosaic->add_option("--epsilon", da.epsilon, "baseline fusion guard")->capture_default_str();
    demosaic->add_option("--output", da.output, "output RGB raster")->required();
    demosaic->add_option("--bit-depth", da.bit_depth, "8 or 16")->check(CLI::IsMember({8, 16}))->capture_default_str();
    demosaic->add_option("--trace", da.trace, "per-iteration objective CSV");
    demosaic->add_option("--full-output", da.full_output, "tensor container for the 4-channel estimate");

    EvaluateArgs ea;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "benchmark both methods over a dataset directory");
    evaluate_cmd->add_option("--dataset", ea.dataset, "directory of RGB rasters")->required();
    evaluate_cmd->add_option("--patterns", ea.patterns, "patterns")->delimiter(',')->capture_default_str();
    evaluate_cmd->add_option("--methods", ea.methods, "methods")->delimiter(',')->capture_default_str();
    evaluate_cmd->add_option("--noise-std", ea.noise, "noise levels")->delimiter(',')->capture_default_str();
    evaluate_cmd->add_option("--seed", ea.seed, "base noise seed")->capture_default_str();
    evaluate_cmd->add_option("--out", ea.out, "per-image CSV")->required();
    evaluate_cmd->add_option("--summary", ea.summary, "aggregate CSV (default <out>_summary.csv)");
    evaluate_cmd->add_option("--lambda-grid", ea.lambda_grid, "tune lambda per pattern and noise level")
        ->delimiter(',');
    evaluate_cmd->add_option("--lambda", ea.lambda, "TV weight when not tuning")->capture_default_str();
    evaluate_cmd->add_option("--tau", ea.tau, "primal step")->capture_default_str();
    evaluate_cmd->add_option("--sigma", ea.sigma, "dual step")->capture_default_str();
    evaluate_cmd->add_option("--iters", ea.iterations, "iteration count")->capture_default_str();
    evaluate_cmd->add_option("--epsilon", ea.epsilon, "baseline fusion guard")->capture_default_str();
    evaluate_cmd->add_option("--jobs", ea.jobs, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*mosaic) return cmd_mosaic(ma, out);
        if (*demosaic) return cmd_demosaic(da, out);
        return cmd_evaluate(ea, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const DivergenceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
}

}  // namespace rgbw::cli
