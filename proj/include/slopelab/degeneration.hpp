#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "slopelab/theta.hpp"
#include "slopelab/tropical.hpp"

namespace slopelab {

/// Degenerating period family Omega(t) = (1/(2 pi i)) A log t + B(t) with
/// A = diag(A0, 0) integral symmetric of rank r and B a matrix polynomial.
class PeriodFamily {
public:
    PeriodFamily(int g, int r, RatMatrix a0, std::vector<Eigen::MatrixXcd> b_coeffs,
                 double radius)
        : g_(g), r_(r), a0_(std::move(a0)), b_(std::move(b_coeffs)), radius_(radius) {
        if (g_ < 1 || r_ < 0 || r_ > g_)
            throw validation_error("period family needs 0 <= r <= g, g >= 1");
        if (radius_ <= 0 || radius_ > 1)
            throw validation_error("family radius must lie in (0, 1]");
        if (r_ > 0) {
            if (a0_.rows() != r_ || a0_.cols() != r_)
                throw validation_error("A0 must be r x r");
            for (int i = 0; i < r_; ++i)
                for (int j = 0; j < r_; ++j) {
                    if (a0_(i, j) != a0_(j, i))
                        throw validation_error("A0 must be symmetric");
                    if (denominator(a0_(i, j)) != 1)
                        throw validation_error("A0 must be integral");
                }
            if (!is_positive_definite(a0_))
                throw validation_error("A0 must be positive definite");
        }
        if (b_.empty()) b_.push_back(Eigen::MatrixXcd::Zero(g_, g_));
        for (const auto& bk : b_) {
            if (bk.rows() != g_ || bk.cols() != g_)
                throw validation_error("B coefficients must be g x g");
            if ((bk - bk.transpose()).norm() > 1e-12 * std::max(1.0, bk.norm()))
                throw validation_error("B coefficients must be symmetric");
        }
        if (g_ > r_) {
            Eigen::MatrixXd im22 = b_[0].imag().bottomRightCorner(g_ - r_, g_ - r_);
            Eigen::LLT<Eigen::MatrixXd> llt((im22 + im22.transpose()) / 2);
            if (llt.info() != Eigen::Success)
                throw validation_error("Im B(0) abelian block must be positive definite");
        }
    }

    int genus() const { return g_; }
    int toric_rank() const { return r_; }
    double radius() const { return radius_; }
    const RatMatrix& a0() const { return a0_; }
    const std::vector<Eigen::MatrixXcd>& b_coefficients() const { return b_; }

    Eigen::MatrixXcd b_at(std::complex<double> t) const {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(g_, g_);
        for (size_t k = b_.size(); k-- > 0;) acc = acc * t + b_[k];
        return acc;
    }

    Eigen::MatrixXcd omega_at(std::complex<double> t) const {
        if (t == 0.0 || std::abs(t) >= radius_)
            throw validation_error("parameter t outside the family's punctured disk");
        Eigen::MatrixXcd omega = b_at(t);
        const std::complex<double> factor = std::log(t) / std::complex<double>(0, 2 * std::numbers::pi);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < r_; ++j) omega(i, j) += factor * to_double(a0_(i, j));
        return omega;
    }

    SiegelMatrix siegel_at(std::complex<double> t) const { return SiegelMatrix(omega_at(t)); }

    /// Period matrix of the abelian part P (empty when r = g).
    Eigen::MatrixXcd abelian_block() const {
        return b_[0].bottomRightCorner(g_ - r_, g_ - r_);
    }

private:
    int g_, r_;
    RatMatrix a0_;
    std::vector<Eigen::MatrixXcd> b_;
    double radius_;
};

namespace detail {

/// Uniform sampler over a Voronoi cell via its simplicial decomposition.
class PolytopeSampler {
public:
    explicit PolytopeSampler(const VoronoiPolytope& cell) : dim_(cell.dim) {
        double total = 0;
        for (const auto& simp : cell.simplices) {
            Eigen::MatrixXd w(dim_, dim_);
            for (int c = 0; c < dim_; ++c) {
                for (int rr = 0; rr < dim_; ++rr) w(rr, c) = to_double(cell.vertices[simp[c]](rr));
            }
            double vol = std::abs(w.determinant());
            total += vol;
            corners_.push_back(w);
            cumulative_.push_back(total);
        }
        for (double& c : cumulative_) c /= total;
    }

    int dim() const { return dim_; }

    Eigen::VectorXd sample(std::mt19937_64& rng) const {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double pick = unif(rng);
        size_t k = 0;
        while (k + 1 < cumulative_.size() && cumulative_[k] < pick) ++k;
        // Barycentric weights over origin + dim corners via sorted spacings.
        std::vector<double> cuts(dim_);
        for (int i = 0; i < dim_; ++i) cuts[i] = unif(rng);
        std::sort(cuts.begin(), cuts.end());
        Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
        double prev = 0;
        for (int i = 0; i < dim_; ++i) {
            double w = cuts[i] - prev;  // weight of corner i (origin takes the rest)
            prev = cuts[i];
            x += w * corners_[k].col(i);
        }
        return x;
    }

private:
    int dim_;
    std::vector<Eigen::MatrixXd> corners_;
    std::vector<double> cumulative_;
};

inline RatMatrix rationalize(const Eigen::MatrixXd& m) {
    RatMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
    // Exact symmetrization: floats may break the symmetry the cell needs.
    return RatMatrix((out + out.transpose()) / 2);
}

} // namespace detail

/// Monte Carlo estimate of the fiber integral of log|theta| over the
/// fundamental domain F(V, Omega(t)) with V = Vor(A0) x Vor(Im B22(0)).
inline MCResult log_theta_fiber_integral(const PeriodFamily& fam, std::complex<double> t,
                                         const MCConfig& mc) {
    mc.validate();
    const int g = fam.genus(), r = fam.toric_rank();
    SiegelMatrix s = fam.siegel_at(t);

    std::vector<detail::PolytopeSampler> samplers;
    if (r > 0) samplers.emplace_back(voronoi_cell(GramLattice(fam.a0())));
    if (g - r > 0) {
        Eigen::MatrixXd im22 = fam.abelian_block().imag();
        samplers.emplace_back(voronoi_cell(GramLattice(detail::rationalize(im22))));
    }

    const int B = std::max(32, mc.batches);
    const long per_batch = std::max<long>(1, mc.samples / B);
    const double pi = std::numbers::pi;
    auto means = detail::batch_means(B, [&](int b) {
        detail::QmcStream stream(g, mc.seed, b, mc.quasi);
        std::mt19937_64& rng = stream.rng();
        double acc = 0;
        for (long i = 0; i < per_batch; ++i) {
            Eigen::VectorXd beta(g);
            int off = 0;
            for (const auto& sampler : samplers) {
                beta.segment(off, sampler.dim()) = sampler.sample(rng);
                off += sampler.dim();
            }
            Eigen::VectorXd alpha = stream.next();
            Eigen::VectorXd x = alpha + s.real_part() * beta;
            std::complex<double> tt = detail::theta_sum(s, x, beta, mc.theta_tol);
            acc += pi * beta.dot(s.imag_part() * beta) + std::log(std::abs(tt));
        }
        return acc / static_cast<double>(per_batch);
    });
    return detail::combine_median(means);
}

// --- Degeneration asymptotics ------------------------------------------------

struct ScanRow {
    double t;
    double two_i;        // 2 I(A_Omega(t))
    double sigma;        // MC sigma of two_i
    double toric_term;   // I(Sigma) log|t|
    double log_det_term; // (1/2) log det Im Omega(t)
    double h;            // sum of the three
};

struct ScanResult {
    double tropical_moment;  // I(Sigma) = I(A0)
    std::vector<ScanRow> rows;
    double limit;
    double limit_error;
};

inline std::vector<double> default_schedule() {
    return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
}

/// Follows h(t) = 2 I + I(Sigma) log|t| + (1/2) log det Im Omega(t) along a
/// shrinking schedule; the limit estimate averages the last two values.
inline ScanResult degeneration_scan(const PeriodFamily& fam, std::vector<double> schedule,
                                    const MCConfig& mc) {
    mc.validate();
    if (schedule.empty()) schedule = default_schedule();
    ScanResult out;
    out.tropical_moment =
        fam.toric_rank() > 0 ? to_double(moment(GramLattice(fam.a0()))) : 0.0;
    for (double t : schedule) {
        SiegelMatrix s = fam.siegel_at(t);
        MCResult iv = i_invariant(s, mc);
        ScanRow row;
        row.t = t;
        row.two_i = 2 * iv.value;
        row.sigma = 2 * iv.sigma;
        row.toric_term = out.tropical_moment * std::log(t);
        row.log_det_term = s.log_det_im() / 2;
        row.h = row.two_i + row.toric_term + row.log_det_term;
        out.rows.push_back(row);
    }
    const auto& last = out.rows.back();
    const auto& prev = out.rows[out.rows.size() - 2];
    out.limit = (last.h + prev.h) / 2;
    out.limit_error = std::abs(last.h - prev.h) / 2 +
                      std::sqrt(last.sigma * last.sigma + prev.sigma * prev.sigma);
    return out;
}

/// Closed form of the limit of h(t): the constant term of the I-invariant
/// asymptotics, with Q(t) = 2 pi Im B(t) and the Schur complement of its
/// abelian block integrated over Vor(A0).
inline MCResult limit_constant(const PeriodFamily& fam, const MCConfig& mc) {
    mc.validate();
    const int g = fam.genus(), r = fam.toric_rank();
    const double pi = std::numbers::pi;
    double value = -(r / 2.0) * std::log(2.0);
    double sigma = 0;

    Eigen::MatrixXd q0 = 2 * pi * fam.b_coefficients()[0].imag();
    if (g - r > 0) {
        SiegelMatrix p(fam.abelian_block());
        MCResult ip = i_invariant(p, mc);
        value += 2 * ip.value + p.log_det_im() / 2;
        sigma = 2 * ip.sigma;
    }
    if (r > 0) {
        Eigen::MatrixXd schur = q0.topLeftCorner(r, r);
        if (g - r > 0) {
            Eigen::MatrixXd q22 = q0.bottomRightCorner(g - r, g - r);
            Eigen::MatrixXd q12 = q0.topRightCorner(r, g - r);
            schur -= q12 * q22.llt().solve(q12.transpose());
        }
        MomentDomain dom = MomentDomain::cell(voronoi_cell(GramLattice(fam.a0())));
        value += moment_over(dom, schur);
    }
    return {value, sigma};
}

struct GrowthFit {
    double log_det;   // log det Im Omega at the query point
    double constant;  // fitted c in det ~ c (-log|t|)^rho
    double exponent;  // fitted rho; should match rank(A)
};

/// Fits det Im Omega(t) ~ c (-log|t|)^rho over a fixed geometric schedule.
inline GrowthFit log_det_growth(const PeriodFamily& fam, std::complex<double> t) {
    GrowthFit out;
    out.log_det = fam.siegel_at(t).log_det_im();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int k = 3; k <= 10; ++k) {
        double tk = std::pow(10.0, -k);
        double x = std::log(-std::log(tk));
        double y = fam.siegel_at(tk).log_det_im();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    const double denom = n * sxx - sx * sx;
    out.exponent = (n * sxy - sx * sy) / denom;
    out.constant = std::exp((sy - out.exponent * sx) / n);
    return out;
}

} // namespace slopelab
