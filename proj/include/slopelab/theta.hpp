#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "slopelab/rational.hpp"

namespace slopelab {

/// Point of the Siegel upper half space: symmetric complex matrix with
/// positive definite imaginary part. Caches the factorizations every theta
/// evaluation needs.
class SiegelMatrix {
public:
    explicit SiegelMatrix(const Eigen::MatrixXcd& omega) : omega_(omega) {
        if (omega.rows() != omega.cols() || omega.rows() == 0)
            throw validation_error("period matrix must be square and non-empty");
        const double scale = omega.norm();
        if ((omega - omega.transpose()).norm() > 1e-12 * std::max(1.0, scale))
            throw validation_error("period matrix must be symmetric");
        re_ = omega.real();
        im_ = omega.imag();
        im_ = (im_ + im_.transpose()) / 2;  // kill roundoff asymmetry
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im_);
        min_eig_ = es.eigenvalues().minCoeff();
        if (min_eig_ <= 0)
            throw validation_error("imaginary part must be positive definite");
        llt_.compute(im_);
        log_det_im_ = 0;
        for (Eigen::Index i = 0; i < im_.rows(); ++i)
            log_det_im_ += 2 * std::log(llt_.matrixL()(i, i));
    }

    int genus() const { return static_cast<int>(omega_.rows()); }
    const Eigen::MatrixXcd& omega() const { return omega_; }
    const Eigen::MatrixXd& real_part() const { return re_; }
    const Eigen::MatrixXd& imag_part() const { return im_; }
    double log_det_im() const { return log_det_im_; }
    double min_eig_im() const { return min_eig_; }
    Eigen::VectorXd solve_im(const Eigen::VectorXd& y) const { return llt_.solve(y); }

private:
    Eigen::MatrixXcd omega_;
    Eigen::MatrixXd re_, im_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_det_im_ = 0;
    double min_eig_ = 0;
};

/// theta = normalized * exp(gauss_exponent); |normalized| <= (lattice count),
/// so logs of theta never overflow.
struct ThetaEval {
    std::complex<double> normalized;
    double gauss_exponent;

    std::complex<double> value() const { return normalized * std::exp(gauss_exponent); }
    double log_abs() const { return gauss_exponent + std::log(std::abs(normalized)); }
};

namespace detail {

/// Smallest box radius M whose Gaussian tail is below tol, using the
/// eigenvalue bound (n+c)^T Y (n+c) >= lambda ||n+c||_inf^2. Starts from the
/// analytic estimate and grows geometrically; the box size is capped so a
/// single evaluation never exceeds a few million terms.
inline long theta_box_radius(int g, double lambda, double tol) {
    if (lambda <= 0) throw numeric_error("NonConvergent: degenerate imaginary part");
    const double pi = std::numbers::pi;
    const long cap = std::max<long>(8, static_cast<long>(std::pow(4.0e6, 1.0 / g) / 2));

    auto tail_at = [&](long M) {
        double tail = 0;
        for (long m = M;; ++m) {
            double shell = 4.0 * g * std::pow(2.0 * m + 4.0, g - 1);
            double term = shell * std::exp(-pi * lambda * static_cast<double>(m) * m);
            tail += term;
            if (term < 1e-300 || term < 1e-6 * tail || tail > tol) break;
        }
        return tail;
    };

    long M = std::max<long>(1, static_cast<long>(std::sqrt(
                                   std::max(1.0, -std::log(tol)) / (pi * lambda))));
    for (int iter = 0; iter < 256; ++iter) {
        if (M > cap)
            throw numeric_error("NonConvergent: theta tail bound unreachable at requested tolerance");
        if (tail_at(M) <= tol) {
            // Shrink back while the bound still holds.
            for (int down = 0; down < 64 && M > 1 && tail_at(M - 1) <= tol; ++down) --M;
            return M;
        }
        M = M < 8 ? M + 1 : static_cast<long>(M * 1.2) + 1;
    }
    throw numeric_error("NonConvergent: theta tail bound unreachable at requested tolerance");
}

/// Gaussian-normalized theta sum with the completed-square center c given
/// explicitly: sum over n of exp(-pi (n+c)^T Y (n+c) + i (pi n^T X n + 2 pi n^T x)).
inline std::complex<double> theta_sum(const SiegelMatrix& s, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& c, double tol) {
    const int g = s.genus();
    const double pi = std::numbers::pi;
    const long M = theta_box_radius(g, 0.95 * s.min_eig_im(), tol);
    const Eigen::MatrixXd& Y = s.imag_part();
    const Eigen::MatrixXd& X = s.real_part();

    std::vector<long> lo(g), hi(g), n(g);
    for (int i = 0; i < g; ++i) {
        lo[i] = static_cast<long>(std::ceil(-c(i) - M));
        hi[i] = static_cast<long>(std::floor(-c(i) + M));
        n[i] = lo[i];
    }
    std::complex<double> acc(0, 0);
    Eigen::VectorXd v(g);
    while (true) {
        for (int i = 0; i < g; ++i) v(i) = static_cast<double>(n[i]) + c(i);
        double quad = v.dot(Y * v);
        double phase = 0;
        for (int i = 0; i < g; ++i) {
            double ni = static_cast<double>(n[i]);
            phase += 2 * ni * x(i);
            for (int j = 0; j < g; ++j) phase += ni * X(i, j) * static_cast<double>(n[j]);
        }
        acc += std::polar(std::exp(-pi * quad), pi * phase);
        int pos = 0;
        while (pos < g) {
            if (++n[pos] <= hi[pos]) break;
            n[pos] = lo[pos];
            ++pos;
        }
        if (pos == g) break;
    }
    return acc;
}

} // namespace detail

/// Riemann theta with a rigorous Gaussian tail bound: the truncation error
/// of the normalized sum (theta scaled by exp(-pi Im z^T (Im O)^-1 Im z))
/// is at most tol.
inline ThetaEval theta_eval(const Eigen::VectorXcd& z, const SiegelMatrix& s, double tol = 1e-12) {
    Eigen::VectorXd x = z.real(), y = z.imag();
    Eigen::VectorXd c = s.solve_im(y);
    const double pi = std::numbers::pi;
    return {detail::theta_sum(s, x, c, tol), pi * y.dot(c)};
}

inline std::complex<double> theta(const Eigen::VectorXcd& z, const SiegelMatrix& s,
                                  double tol = 1e-12) {
    return theta_eval(z, s, tol).value();
}

/// Normalized theta (det Im O)^{1/4} exp(-pi Im z^T (Im O)^{-1} Im z) |theta|;
/// invariant under lattice translations.
inline double theta_norm(const Eigen::VectorXcd& z, const SiegelMatrix& s, double tol = 1e-12) {
    return std::exp(s.log_det_im() / 4) * std::abs(theta_eval(z, s, tol).normalized);
}

// --- Monte Carlo ------------------------------------------------------------

struct MCConfig {
    long samples = 100000;
    unsigned long seed = 1;
    int batches = 32;
    bool quasi = true;       // scrambled low-discrepancy points; PRNG fallback otherwise
    double theta_tol = 1e-10;  // per-evaluation truncation tolerance

    void validate() const {
        if (samples < 1000)
            throw validation_error("Monte Carlo sample count must be at least 1000");
        if (theta_tol <= 0 || theta_tol > 1e-2)
            throw validation_error("theta tolerance must lie in (0, 1e-2]");
    }
};

struct MCResult {
    double value = 0;
    double sigma = 0;
};

namespace detail {

constexpr int kHaltonPrimes[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

/// Scrambled Halton stream with a per-batch Cranley-Patterson rotation.
class QmcStream {
public:
    QmcStream(int dims, unsigned long seed, int batch, bool quasi)
        : dims_(dims), quasi_(quasi), rng_(seed * 0x9e3779b97f4a7c15ULL + 0x3779ULL * batch + 1) {
        if (dims > 12) quasi_ = false;
        if (quasi_) {
            perms_.resize(dims_);
            shifts_.resize(dims_);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            for (int d = 0; d < dims_; ++d) {
                const int p = kHaltonPrimes[d];
                perms_[d].resize(p);
                for (int i = 0; i < p; ++i) perms_[d][i] = i;
                // Keep 0 fixed so trailing zero digits stay zero.
                for (int i = p - 1; i > 1; --i) {
                    std::uniform_int_distribution<int> pick(1, i);
                    std::swap(perms_[d][i], perms_[d][pick(rng_)]);
                }
                shifts_[d] = unif(rng_);
            }
        }
        index_ = 17;  // skip the first points of the sequence
    }

    /// Next point in [-1/2, 1/2)^dims.
    Eigen::VectorXd next() {
        Eigen::VectorXd u(dims_);
        if (quasi_) {
            ++index_;
            for (int d = 0; d < dims_; ++d) {
                const int p = kHaltonPrimes[d];
                double inv = 1.0 / p, f = inv, val = 0;
                unsigned long i = index_;
                while (i > 0) {
                    val += f * perms_[d][i % p];
                    i /= p;
                    f *= inv;
                }
                val += shifts_[d];
                u(d) = val - std::floor(val) - 0.5;
            }
        } else {
            std::uniform_real_distribution<double> unif(-0.5, 0.5);
            for (int d = 0; d < dims_; ++d) u(d) = unif(rng_);
        }
        return u;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    int dims_;
    bool quasi_;
    std::mt19937_64 rng_;
    std::vector<std::vector<int>> perms_;
    std::vector<double> shifts_;
    unsigned long index_ = 0;
};

inline int mc_thread_count() {
    if (const char* env = std::getenv("SLOPELAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs the batch estimators, possibly across threads. Each batch owns its
/// derived-seed stream and writes one slot, so the reduction order and the
/// result are independent of scheduling.
template <typename Fn>
inline std::vector<double> batch_means(int batches, Fn&& batch_fn) {
    std::vector<double> means(batches);
    const int threads = std::min(batches, mc_thread_count());
    if (threads <= 1) {
        for (int b = 0; b < batches; ++b) means[b] = batch_fn(b);
        return means;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            int b = next.fetch_add(1);
            if (b >= batches) break;
            means[b] = batch_fn(b);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return means;
}

inline MCResult combine_mean(const std::vector<double>& batch_means) {
    const double b = static_cast<double>(batch_means.size());
    double mean = 0;
    for (double m : batch_means) mean += m;
    mean /= b;
    double var = 0;
    for (double m : batch_means) var += (m - mean) * (m - mean);
    var /= (b - 1);
    return {mean, std::sqrt(var / b)};
}

/// Median of batch means; robust against the integrable log singularity on
/// the theta divisor.
inline MCResult combine_median(std::vector<double> batch_means) {
    std::vector<double> sorted = batch_means;
    std::sort(sorted.begin(), sorted.end());
    const size_t b = sorted.size();
    double med = (b % 2) ? sorted[b / 2] : (sorted[b / 2 - 1] + sorted[b / 2]) / 2;
    MCResult spread = combine_mean(batch_means);
    return {med, spread.sigma};
}

} // namespace detail

/// Monte Carlo check of the L2 normalization: the mean of |theta-norm|^2
/// over the fundamental parallelotope, which should equal 2^{-g/2}.
inline MCResult l2_norm_check(const SiegelMatrix& s, const MCConfig& mc) {
    mc.validate();
    const int g = s.genus();
    const int B = std::max(2, mc.batches);
    const long per_batch = std::max<long>(1, mc.samples / B);
    const double det_factor = std::exp(s.log_det_im() / 2);
    auto means = detail::batch_means(B, [&](int b) {
        detail::QmcStream stream(2 * g, mc.seed, b, mc.quasi);
        double acc = 0;
        for (long i = 0; i < per_batch; ++i) {
            Eigen::VectorXd ab = stream.next();
            Eigen::VectorXd alpha = ab.head(g), beta = ab.tail(g);
            Eigen::VectorXd x = alpha + s.real_part() * beta;
            std::complex<double> t = detail::theta_sum(s, x, beta, mc.theta_tol);
            acc += det_factor * std::norm(t);
        }
        return acc / static_cast<double>(per_batch);
    });
    return detail::combine_mean(means);
}

/// Autissier's I-invariant by Monte Carlo over the fundamental domain built
/// from the centered unit box:
///   2 I = -(g/2) log 2 - (1/2) log det Im O - 2 E[log |theta-tilde|],
/// where theta-tilde is the Gaussian-normalized sum (the quadratic part of
/// log |theta| is integrated exactly and cancels 2 pi I_W(Im O)).
inline MCResult i_invariant(const SiegelMatrix& s, const MCConfig& mc) {
    mc.validate();
    const int g = s.genus();
    const int B = std::max(32, mc.batches);
    const long per_batch = std::max<long>(1, mc.samples / B);
    auto means = detail::batch_means(B, [&](int b) {
        detail::QmcStream stream(2 * g, mc.seed, b, mc.quasi);
        double acc = 0;
        for (long i = 0; i < per_batch; ++i) {
            Eigen::VectorXd ab = stream.next();
            Eigen::VectorXd alpha = ab.head(g), beta = ab.tail(g);
            Eigen::VectorXd x = alpha + s.real_part() * beta;
            std::complex<double> t = detail::theta_sum(s, x, beta, mc.theta_tol);
            acc += -2 * std::log(std::abs(t));
        }
        return acc / static_cast<double>(per_batch);
    });
    MCResult inner = detail::combine_median(means);
    const double two_i = -(g / 2.0) * std::log(2.0) - s.log_det_im() / 2 + inner.value;
    return {two_i / 2, inner.sigma / 2};
}

} // namespace slopelab
