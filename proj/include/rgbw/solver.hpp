#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rgbw/cfa.hpp"
#include "rgbw/error.hpp"
#include "rgbw/image.hpp"
#include "rgbw/tensor.hpp"
#include "rgbw/tv.hpp"

namespace rgbw {

/// Starting point of the primal variable.
enum class Init {
    Zeros,
    Adjoint,      // A^T(Y): observed entries, zeros elsewhere
    ChannelMean,  // observed entries, unobserved ones set to the mean of that channel's samples
};

inline const char* to_string(Init init) {
    switch (init) {
        case Init::Zeros: return "zeros";
        case Init::Adjoint: return "adjoint";
        case Init::ChannelMean: return "channel-mean";
    }
    return "?";
}

inline std::optional<Init> parse_init(const std::string& s) {
    if (s == "zeros") return Init::Zeros;
    if (s == "adjoint") return Init::Adjoint;
    if (s == "channel-mean") return Init::ChannelMean;
    return std::nullopt;
}

/**
 * Parameters of the primal-dual solver. Construction validates them; in
 * particular tau * sigma * 8 <= 1, where 8 bounds the squared norm of the
 * forward-difference gradient.
 */
class SolverConfig {
public:
    static constexpr double kDefaultLambda = 0.005;
    static constexpr double kDefaultTau = 4.0;
    static constexpr double kDefaultSigma = 1.0 / 32.0;
    static constexpr int kDefaultIterations = 400;
    static constexpr double kGradientNormSquaredBound = 8.0;

    SolverConfig() : SolverConfig(kDefaultLambda, kDefaultTau, kDefaultSigma, kDefaultIterations) {}

    SolverConfig(double lambda, double tau, double sigma, int iterations, Init init = Init::ChannelMean,
                 bool record_trace = false, double tolerance = 0.0)
        : lambda_(lambda), tau_(tau), sigma_(sigma), iterations_(iterations), init_(init),
          record_trace_(record_trace), tolerance_(tolerance) {
        if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("lambda must be finite and >= 0");
        if (!std::isfinite(tau) || tau <= 0.0) throw InvalidArgument("tau must be finite and > 0");
        if (!std::isfinite(sigma) || sigma <= 0.0) throw InvalidArgument("sigma must be finite and > 0");
        if (iterations < 1) throw InvalidArgument("iteration count must be positive");
        if (!std::isfinite(tolerance) || tolerance < 0.0) throw InvalidArgument("tolerance must be >= 0");
        if (tau * sigma * kGradientNormSquaredBound > 1.0 + 1e-12)
            throw InvalidArgument("step sizes violate tau * sigma * 8 <= 1 (tau=" + std::to_string(tau) +
                                  ", sigma=" + std::to_string(sigma) + ")");
    }

    double lambda() const noexcept { return lambda_; }
    double tau() const noexcept { return tau_; }
    double sigma() const noexcept { return sigma_; }
    int iterations() const noexcept { return iterations_; }
    Init init() const noexcept { return init_; }
    bool record_trace() const noexcept { return record_trace_; }
    /// Stop once the relative iterate change drops below this; 0 runs all iterations.
    double tolerance() const noexcept { return tolerance_; }

    SolverConfig with_lambda(double v) const { return {v, tau_, sigma_, iterations_, init_, record_trace_, tolerance_}; }
    SolverConfig with_steps(double tau, double sigma) const {
        return {lambda_, tau, sigma, iterations_, init_, record_trace_, tolerance_};
    }
    SolverConfig with_iterations(int q) const { return {lambda_, tau_, sigma_, q, init_, record_trace_, tolerance_}; }
    SolverConfig with_init(Init v) const { return {lambda_, tau_, sigma_, iterations_, v, record_trace_, tolerance_}; }
    SolverConfig with_trace(bool v) const { return {lambda_, tau_, sigma_, iterations_, init_, v, tolerance_}; }
    SolverConfig with_tolerance(double v) const { return {lambda_, tau_, sigma_, iterations_, init_, record_trace_, v}; }

private:
    double lambda_;
    double tau_;
    double sigma_;
    int iterations_;
    Init init_;
    bool record_trace_;
    double tolerance_;
};

struct SolveResult {
    RgbImage estimate;
    SpectralImage full_estimate;
    int iterations_run = 0;
    std::vector<double> objective_trace;       // objective after each iteration
    std::vector<double> iterate_change_trace;  // |X^{q+1} - X^q| / |X^q|
};

namespace detail {

inline void require_problem_shape(const Tensor& x, const Tensor& y, const CfaMask& h, const char* op) {
    if (x.channels() != kSpectralChannels) throw ShapeError(std::string(op) + ": primal needs 4 channels");
    if (y.channels() != 1) throw ShapeError(std::string(op) + ": raw image needs 1 channel");
    require_mask_shape(x.shape(), h, op);
    require_mask_shape(y.shape(), h, op);
}

/// In-place prox of tau * |A(.) - y|^2 at every pixel.
inline void prox_data_fidelity_inplace(Tensor& v, const Tensor& y, const CfaMask& h, double tau) {
    const double two_tau = 2.0 * tau;
    for (std::size_t i = 0; i < v.rows(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j) {
            auto px = v.pixel(i, j);
            double ata = 0.0, atv = 0.0;
            for (std::size_t k = 0; k < kSpectralChannels; ++k) {
                const double a = h(i, j, k);
                ata += a * a;
                atv += a * px[k];
            }
            const double scale = two_tau * (atv - y(i, j, 0)) / (1.0 + two_tau * ata);
            for (std::size_t k = 0; k < kSpectralChannels; ++k) px[k] -= scale * h(i, j, k);
        }
}

inline void project_dual_ball_inplace(GradientField& g, double lambda) {
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            auto grp = g.group(i, j);
            double sq = 0.0;
            for (double v : grp) sq += v * v;
            const double norm = std::sqrt(sq);
            if (norm > lambda) {
                const double s = lambda / norm;
                for (double& v : grp) v *= s;
            }
        }
}

inline Tensor initial_primal(const Tensor& y, const CfaMask& h, Init init) {
    switch (init) {
        case Init::Zeros: return Tensor(y.rows(), y.cols(), kSpectralChannels);
        case Init::Adjoint: return adjoint(y, h);
        case Init::ChannelMean: {
            double sums[kSpectralChannels] = {};
            std::size_t counts[kSpectralChannels] = {};
            double total = 0.0;
            for (std::size_t i = 0; i < y.rows(); ++i)
                for (std::size_t j = 0; j < y.cols(); ++j) {
                    sums[h.active(i, j)] += y(i, j, 0);
                    ++counts[h.active(i, j)];
                    total += y(i, j, 0);
                }
            // A channel with no samples starts from the mean of the whole mosaic.
            const double overall = total / static_cast<double>(y.size());
            double fill[kSpectralChannels];
            for (std::size_t k = 0; k < kSpectralChannels; ++k)
                fill[k] = counts[k] ? sums[k] / static_cast<double>(counts[k]) : overall;
            Tensor x(y.rows(), y.cols(), kSpectralChannels);
            for (std::size_t i = 0; i < y.rows(); ++i)
                for (std::size_t j = 0; j < y.cols(); ++j)
                    for (std::size_t k = 0; k < kSpectralChannels; ++k)
                        x(i, j, k) = h.active(i, j) == k ? y(i, j, 0) : fill[k];
            return x;
        }
    }
    throw InvalidArgument("unknown initialization");
}

}  // namespace detail

/**
 * Proximal operator of f = |A(.) - y|_F^2 with step tau:
 *   argmin_x |A(x) - y|^2 + |x - v|^2 / (2 tau).
 * Per pixel with mask vector a the minimizer is
 *   x = v - 2 tau a (a.v - y) / (1 + 2 tau a.a),
 * so on a one-hot mask only the observed channel moves.
 */
inline Tensor prox_data_fidelity(const Tensor& v, const Tensor& y, const CfaMask& h, double tau) {
    if (!(tau > 0.0)) throw InvalidArgument("prox step tau must be positive");
    detail::require_problem_shape(v, y, h, "prox_data_fidelity");
    Tensor out = v;
    detail::prox_data_fidelity_inplace(out, y, h, tau);
    return out;
}

inline SpectralImage prox_data_fidelity(const SpectralImage& v, const RawImage& y, const CfaMask& h, double tau) {
    return SpectralImage(prox_data_fidelity(v.tensor(), y.tensor(), h, tau));
}

/// Prox of the conjugate of lambda*|.|_221: per-pixel projection of each
/// group onto the l2 ball of radius lambda. The dual step sigma plays no
/// role because the conjugate is an indicator function.
inline GradientField project_dual_ball(GradientField g, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
    detail::project_dual_ball_inplace(g, lambda);
    return g;
}

/// Data misfit |A(x) - y|_F^2.
inline double data_fidelity(const Tensor& x, const Tensor& y, const CfaMask& h) {
    detail::require_problem_shape(x, y, h, "data_fidelity");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const double r = x(i, j, h.active(i, j)) - y(i, j, 0);
            acc += r * r;
        }
    return acc;
}

/// |A(x) - y|_F^2 + lambda |L(x)|_221.
inline double objective(const Tensor& x, const Tensor& y, const CfaMask& h, double lambda) {
    const double fit = data_fidelity(x, y, h);
    return lambda == 0.0 ? fit : fit + lambda * norm_221(gradient(x));
}

inline double objective(const SpectralImage& x, const RawImage& y, const CfaMask& h, double lambda) {
    return objective(x.tensor(), y.tensor(), h, lambda);
}

/**
 * Chambolle-Pock iterations for min_X |A(X) - Y|^2 + lambda |L(X)|_221:
 *
 *   X+ = prox_{tau f}(X - tau L^T Z)
 *   Z+ = proj_{|.| <= lambda}(Z + sigma L(2 X+ - X))
 *
 * The dual variable starts at zero. Throws DivergenceError as soon as an
 * iterate stops being finite.
 */
inline SolveResult chambolle_pock(const RawImage& raw, const CfaMask& h, const SolverConfig& cfg) {
    const Tensor& y = raw.tensor();
    detail::require_mask_shape(y.shape(), h, "chambolle_pock");

    const double tau = cfg.tau(), sigma = cfg.sigma(), lambda = cfg.lambda();
    Tensor x = detail::initial_primal(y, h, cfg.init());
    Tensor next(x.rows(), x.cols(), kSpectralChannels);
    Tensor lt_z(x.rows(), x.cols(), kSpectralChannels);
    GradientField z(x.shape());
    GradientField step(x.shape());

    int iterations_run = 0;
    std::vector<double> objective_trace, change_trace;
    if (cfg.record_trace()) {
        objective_trace.reserve(static_cast<std::size_t>(cfg.iterations()));
        change_trace.reserve(static_cast<std::size_t>(cfg.iterations()));
    }

    for (int q = 0; q < cfg.iterations(); ++q) {
        transpose_gradient_into(z, lt_z);
        {
            auto xv = x.values();
            auto lv = lt_z.values();
            auto nv = next.values();
            for (std::size_t n = 0; n < nv.size(); ++n) nv[n] = xv[n] - tau * lv[n];
        }
        detail::prox_data_fidelity_inplace(next, y, h, tau);

        // Over-relaxed point 2 X+ - X, reusing lt_z as scratch.
        double diff_sq = 0.0, prev_sq = 0.0;
        {
            auto xv = x.values();
            auto nv = next.values();
            auto bar = lt_z.values();
            for (std::size_t n = 0; n < nv.size(); ++n) {
                const double d = nv[n] - xv[n];
                diff_sq += d * d;
                prev_sq += xv[n] * xv[n];
                bar[n] = nv[n] + d;
            }
        }
        if (!std::isfinite(diff_sq))
            throw DivergenceError("primal iterate became non-finite at iteration " + std::to_string(q + 1), q + 1);

        gradient_into(lt_z, step);
        {
            auto zv = z.values();
            auto sv = step.values();
            for (std::size_t n = 0; n < zv.size(); ++n) zv[n] += sigma * sv[n];
        }
        detail::project_dual_ball_inplace(z, lambda);

        std::swap(x, next);
        ++iterations_run;

        const double change = prev_sq > 0.0 ? std::sqrt(diff_sq / prev_sq) : std::sqrt(diff_sq);
        if (cfg.record_trace()) {
            change_trace.push_back(change);
            objective_trace.push_back(objective(x, y, h, lambda));
        }
        if (cfg.tolerance() > 0.0 && change < cfg.tolerance()) break;
    }

    if (!x.all_finite() || !z.all_finite())
        throw DivergenceError("solver finished with a non-finite iterate", iterations_run);
    SpectralImage full(std::move(x));
    RgbImage rgb = drop_white(full);
    return {std::move(rgb), std::move(full), iterations_run, std::move(objective_trace), std::move(change_trace)};
}

}  // namespace rgbw
