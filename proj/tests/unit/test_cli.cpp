#include <gtest/gtest.h>

#include <sstream>

#include "rgbw_cli.hpp"
#include "test_support.hpp"

using namespace rgbw;
using namespace rgbw::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rgbw");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(CliMosaic, ConstantBayerInput) {
    ScratchDir dir("cli_mosaic");
    io::save_raster(Tensor(8, 8, 3, 128.0 / 255.0), dir / "grey.png");
    const auto r = run_cli({"mosaic", "--input", (dir / "grey.png").string(), "--pattern", "bayer", "--output",
                            (dir / "y.rgbwt").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Tensor y = io::read_tensor(dir / "y.rgbwt");
    EXPECT_EQ(y.channels(), 1u);
    for (double v : y.values()) EXPECT_EQ(v, 128.0 / 255.0);
    EXPECT_TRUE(std::filesystem::exists(dir / "y.rgbwt.preview.png"));
}

TEST(CliMosaic, KodakWhiteCount) {
    ScratchDir dir("cli_kodak");
    io::save_raster(Tensor(64, 64, 3, 0.5), dir / "in.png");
    const auto r = run_cli({"mosaic", "--input", (dir / "in.png").string(), "--pattern", "kodak", "--output",
                            (dir / "y.rgbwt").string(), "--no-preview"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(expand_mask(patterns::kodak(), 64, 64).count(Channel::W), 2048u);
    EXPECT_FALSE(std::filesystem::exists(dir / "y.rgbwt.preview.png"));
}

TEST(CliMosaic, SameSeedIsByteIdentical) {
    ScratchDir dir("cli_seed");
    io::save_raster(Tensor(16, 16, 3, 0.4), dir / "in.png");
    for (const char* name : {"a.rgbwt", "b.rgbwt"})
        ASSERT_EQ(run_cli({"mosaic", "--input", (dir / "in.png").string(), "--noise-std", "0.05", "--seed", "9",
                           "--output", (dir / name).string(), "--no-preview"})
                      .code,
                  0);
    EXPECT_EQ(read_file(dir / "a.rgbwt"), read_file(dir / "b.rgbwt"));
}

TEST(CliMosaic, PanSibling) {
    ScratchDir dir("cli_pan");
    io::save_raster(Tensor(8, 8, 3, 0.2), dir / "in.png");
    io::save_raster(Tensor(8, 8, 1, 1.0), dir / "in_pan.png");
    ASSERT_EQ(run_cli({"mosaic", "--input", (dir / "in.png").string(), "--pattern", "sparse3", "--white", "pan",
                       "--output", (dir / "y.rgbwt").string(), "--no-preview"})
                  .code,
              0);
    const Tensor y = io::read_tensor(dir / "y.rgbwt");
    EXPECT_EQ(y(0, 1, 0), 1.0);  // sparse3 has W at (0, 1)
    EXPECT_NEAR(y(0, 0, 0), 51.0 / 255.0, 1e-15);
}

TEST(CliDemosaic, ConstantSceneBothMethods) {
    ScratchDir dir("cli_demosaic");
    io::save_raster(Tensor(32, 32, 3, 0.6), dir / "in.png");
    ASSERT_EQ(run_cli({"mosaic", "--input", (dir / "in.png").string(), "--output", (dir / "y.rgbwt").string(),
                       "--no-preview"})
                  .code,
              0);
    const double c = io::load_image(dir / "in.png").tensor()(0, 0, 0);

    auto r = run_cli({"demosaic", "--input", (dir / "y.rgbwt").string(), "--output", (dir / "p.png").string(),
                      "--bit-depth", "16", "--full-output", (dir / "full.rgbwt").string(), "--trace",
                      (dir / "trace.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (double v : io::read_tensor(dir / "full.rgbwt").values()) EXPECT_NEAR(v, c, 1e-3);
    for (double v : io::load_image(dir / "p.png").tensor().values()) EXPECT_NEAR(v, c, 1e-3);
    const std::string trace = read_file(dir / "trace.csv");
    EXPECT_EQ(trace.rfind("iteration,objective,relative_change\n", 0), 0u);
    EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), 401);

    r = run_cli({"demosaic", "--input", (dir / "y.rgbwt").string(), "--method", "baseline", "--output",
                 (dir / "b.pgm").string()});
    EXPECT_NE(r.code, 0);  // RGB output needs .ppm or .png
    r = run_cli({"demosaic", "--input", (dir / "y.rgbwt").string(), "--method", "baseline", "--bit-depth", "16",
                 "--output", (dir / "b.ppm").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (double v : io::load_image(dir / "b.ppm").tensor().values()) EXPECT_NEAR(v, c, 1e-9);
}

TEST(CliDemosaic, StepSizesRejectedBeforeRunning) {
    const auto r = run_cli({"demosaic", "--input", "/nonexistent/y.rgbwt", "--tau", "1", "--sigma", "1", "--output",
                            "/nonexistent/out.png"});
    EXPECT_EQ(r.code, cli::kUsage);
    EXPECT_NE(r.err.find("tau"), std::string::npos);
}

TEST(CliDemosaic, ErrorCodes) {
    ScratchDir dir("cli_errors");
    EXPECT_EQ(run_cli({"demosaic", "--output", "x.png"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"demosaic", "--input", (dir / "missing").string(), "--output", "x.png"}).code, cli::kData);
    EXPECT_EQ(run_cli({"demosaic", "--input", "x", "--method", "magic", "--output", "x.png"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"demosaic", "--input", "x", "--kernel", "box", "--output", "x.png"}).code, cli::kUsage);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);

    io::write_tensor(dir / "big.rgbwt", Tensor(8, 8, 1, 1e308));
    EXPECT_EQ(run_cli({"demosaic", "--input", (dir / "big.rgbwt").string(), "--init", "zeros", "--output",
                       (dir / "o.png").string()})
                  .code,
              cli::kNumerical);
    io::write_tensor(dir / "rgb.rgbwt", Tensor(8, 8, 3));
    EXPECT_EQ(run_cli({"demosaic", "--input", (dir / "rgb.rgbwt").string(), "--output", (dir / "o.png").string()}).code,
              cli::kData);
}

TEST(CliDemosaic, PatternFile) {
    ScratchDir dir("cli_patfile");
    write_file(dir / "mine.cfa", io::serialize_pattern(patterns::sony()));
    io::save_raster(Tensor(16, 16, 3, 0.5), dir / "in.png");
    const std::string pat = (dir / "mine.cfa").string();
    ASSERT_EQ(run_cli({"mosaic", "--input", (dir / "in.png").string(), "--pattern", pat, "--output",
                       (dir / "y.rgbwt").string(), "--no-preview"})
                  .code,
              0);
    const auto r = run_cli({"demosaic", "--input", (dir / "y.rgbwt").string(), "--pattern", pat, "--iters", "10",
                            "--output", (dir / "o.png").string()});
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliEvaluate, RerunIsByteIdentical) {
    ScratchDir dir("cli_eval");
    fs::create_directories(dir / "data");
    io::save_image(drop_white(disc_scene(20, 20)), dir / "data" / "disc.png");
    io::save_raster(Tensor(20, 20, 3, 0.3), dir / "data" / "flat.png");
    for (const char* name : {"a.csv", "b.csv"}) {
        const auto r = run_cli({"evaluate", "--dataset", (dir / "data").string(), "--noise-std", "0,0.05", "--seed",
                                "5", "--iters", "20", "--out", (dir / name).string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
    EXPECT_EQ(read_file(dir / "a_summary.csv"), read_file(dir / "b_summary.csv"));
    const std::string summary = read_file(dir / "a_summary.csv");
    EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1 + 3 * 2 * 2);
}

TEST(CliEvaluate, SingleImageHasZeroStd) {
    ScratchDir dir("cli_eval1");
    fs::create_directories(dir / "data");
    io::save_image(drop_white(disc_scene(16, 16)), dir / "data" / "disc.png");
    const auto r = run_cli({"evaluate", "--dataset", (dir / "data").string(), "--patterns", "kodak", "--noise-std",
                            "0", "--iters", "10", "--out", (dir / "r.csv").string(), "--summary",
                            (dir / "s.csv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string s = read_file(dir / "s.csv");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
    std::istringstream lines(s);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
}

TEST(CliEvaluate, FailuresGiveDataExitCode) {
    ScratchDir dir("cli_evalfail");
    fs::create_directories(dir / "data");
    io::save_raster(Tensor(8, 8, 3, 0.3), dir / "data" / "flat.png");
    const auto r = run_cli({"evaluate", "--dataset", (dir / "data").string(), "--patterns", "bayer", "--methods",
                            "baseline", "--out", (dir / "r.csv").string()});
    EXPECT_EQ(r.code, cli::kData);
    EXPECT_NE(r.err.find("flat"), std::string::npos);
    EXPECT_EQ(run_cli({"evaluate", "--dataset", (dir / "data").string(), "--methods", "best", "--out",
                       (dir / "r.csv").string()})
                  .code,
              cli::kUsage);
}

TEST(CliHelp, PrintsUsage) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("demosaic"), std::string::npos);
}
