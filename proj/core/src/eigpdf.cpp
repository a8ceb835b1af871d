#include "mimocap/eigpdf.hpp"

#include "logdet.hpp"
#include "mimocap/quadrature.hpp"
#include "mimocap/rng.hpp"
#include "wishart_structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimocap {

namespace {
constexpr double kSignNoiseFloorLog = -23.025850929940457;  // ln(1e-10)
constexpr double kAbsErrorFloorLog = -27.631021115928547;   // ln(1e-12)
}

EigenvaluePdf::EigenvaluePdf(CovarianceSpec spec, int p) : spec_(std::move(spec)), p_(p) {
    const detail::WishartStructure s = detail::make_wishart_structure(spec_, p_);
    n_min_ = s.n_min;
    k_ = s.constant;
    const int n = s.n;
    row_mu_.resize(n);
    row_d_.resize(n);
    for (int i = 0; i < n; ++i) {
        row_mu_[i] = s.mu[static_cast<std::size_t>(s.index.group[i])];
        row_d_[i] = s.index.derivative[i];
    }
    power_cols_.resize(static_cast<std::size_t>(n) * (n - n_min_));
    for (int i = 0; i < n; ++i)
        for (int j = n_min_; j < n; ++j)
            power_cols_[static_cast<std::size_t>(i) * (n - n_min_) + (j - n_min_)] =
                detail::power_column_entry(n, j + 1, row_d_[i], row_mu_[i]);
}

SignedLogValue EigenvaluePdf::log_value(std::span<const double> x) const {
    return eval(x, false);
}

SignedLogValue EigenvaluePdf::eval(std::span<const double> x, bool tail_cutoff) const {
    const int n = spec_.dimension();
    if (static_cast<int>(x.size()) != n_min_)
        throw std::domain_error("expected " + std::to_string(n_min_) + " eigenvalues");
    for (int i = 0; i < n_min_; ++i) {
        if (!(x[i] > 0.0)) throw std::domain_error("eigenvalues must be positive");
        if (i > 0 && !(x[i - 1] > x[i]))
            throw std::domain_error("eigenvalues must be strictly decreasing");
    }

    // Vandermonde |V(x)| with v_{i,j} = x_j^{i-1}: prod_{i<j}(x_j - x_i).
    SignedLogValue vdm = SignedLogValue::one();
    for (int i = 0; i < n_min_; ++i)
        for (int j = i + 1; j < n_min_; ++j)
            vdm *= SignedLogValue::from_double(x[j] - x[i]);

    double log_power = 0.0;
    const double pow_exp = static_cast<double>(p_ - n_min_);
    if (pow_exp != 0.0) {
        double s = 0.0;
        for (int i = 0; i < n_min_; ++i) s += std::log(x[i]);
        log_power = pow_exp * s;
    }

    detail::LogMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
        const double mu = row_mu_[i];
        const int d = row_d_[i];
        const int sign = d % 2 == 0 ? 1 : -1;  // (-x)^d with x > 0
        for (int j = 0; j < n_min_; ++j) {
            g.set(i, j, SignedLogValue::from_log(sign, d * std::log(x[j]) - mu * x[j]));
        }
        for (int j = n_min_; j < n; ++j) {
            g.set(i, j, power_cols_[static_cast<std::size_t>(i) * (n - n_min_) + (j - n_min_)]);
        }
    }
    // Extended precision is only worth it where the determinant would show
    // up in the density at the 1e-12 absolute level.
    const double det_floor =
        tail_cutoff ? kAbsErrorFloorLog - (k_.logmag + vdm.logmag + log_power)
                    : -std::numeric_limits<double>::infinity();
    const detail::LogDetResult gd = detail::signed_log_det(g, det_floor, 1e-8);

    SignedLogValue value = k_ * vdm * gd.det;
    if (log_power != 0.0) value *= SignedLogValue::from_log(1, log_power);

    if (value.sign < 0) {
        // The density is nonnegative by construction; a visibly negative
        // value means the determinant sign survived past its cancellation
        // noise and something is inconsistent.
        if (gd.det.logmag - gd.log_scale > kSignNoiseFloorLog)
            throw std::logic_error("joint pdf evaluated negative beyond noise level");
        return SignedLogValue::zero();
    }
    return value;
}

double EigenvaluePdf::operator()(std::span<const double> x) const {
    const SignedLogValue v = eval(x, true);
    return v.is_zero() ? 0.0 : std::exp(v.logmag);
}

NormalizationReport normalization_check(const EigenvaluePdf& pdf, int quadrature_depth) {
    const int nm = pdf.n_min();
    if (nm > 3)
        throw std::invalid_argument("normalization check supports n_min <= 3 (nested cost)");
    const double inf = std::numeric_limits<double>::infinity();
    // Per-level tolerances sized to the 1e-4 contract with margin; the cost
    // of the nesting is the product of the per-level evaluation counts.
    const double outer_tol = nm == 1 ? 1e-10 : (nm == 2 ? 1e-8 : 3e-6);
    const double inner_tol = nm == 2 ? 1e-9 : 1e-6;
    const int inner_depth = nm == 3 ? std::min(quadrature_depth, 8) : quadrature_depth;

    QuadratureResult outer;
    if (nm == 1) {
        outer = integrate(
            [&pdf](double x1) { return pdf(std::span<const double>(&x1, 1)); }, 0.0, inf,
            outer_tol, quadrature_depth);
    } else if (nm == 2) {
        outer = integrate(
            [&](double x1) {
                return integrate(
                           [&](double x2) {
                               const double xs[2] = {x1, x2};
                               return pdf(std::span<const double>(xs, 2));
                           },
                           0.0, x1, inner_tol, quadrature_depth)
                    .value;
            },
            0.0, inf, outer_tol, quadrature_depth);
    } else {
        outer = integrate(
            [&](double x1) {
                return integrate(
                           [&](double x2) {
                               return integrate(
                                          [&](double x3) {
                                              const double xs[3] = {x1, x2, x3};
                                              return pdf(std::span<const double>(xs, 3));
                                          },
                                          0.0, x2, inner_tol, inner_depth)
                                   .value;
                           },
                           0.0, x1, inner_tol, inner_depth)
                    .value;
            },
            0.0, inf, outer_tol, quadrature_depth);
    }
    return {outer.value, outer.abs_error, outer.converged};
}

std::vector<std::vector<double>> sample_eigenvalues(const CovarianceSpec& spec, int p,
                                                    int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");
    const detail::WishartStructure s = detail::make_wishart_structure(spec, p);
    const int n = s.n;
    const std::vector<double> eig = spec.expanded_eigenvalues();
    std::vector<double> root(eig.size());
    std::transform(eig.begin(), eig.end(), root.begin(),
                   [](double v) { return std::sqrt(v); });

    const double inv_sqrt2 = 0.7071067811865475244;
    std::vector<std::vector<double>> out;
    out.reserve(count);
    Eigen::MatrixXcd b(p, n);
    for (int sample = 0; sample < count; ++sample) {
        CounterRng rng(seed, static_cast<std::uint64_t>(sample));
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < n; ++j) {
                double re, im;
                rng.next_normal_pair(re, im);
                b(i, j) = std::complex<double>(re * inv_sqrt2, im * inv_sqrt2) * root[j];
            }
        }
        Eigen::MatrixXcd w;
        if (p <= n) {
            w.noalias() = b * b.adjoint();
        } else {
            w.noalias() = b.adjoint() * b;  // same nonzero spectrum, smaller solve
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();  // ascending
        std::vector<double> lam(s.n_min);
        for (int i = 0; i < s.n_min; ++i) lam[i] = ev(ev.size() - 1 - i);
        out.push_back(std::move(lam));
    }
    return out;
}

std::vector<HistogramBin> eigenvalue_histogram(const std::vector<std::vector<double>>& samples,
                                               int component, int bins, double x_min,
                                               double x_max) {
    if (bins < 1) throw std::invalid_argument("need at least one bin");
    if (!(x_max > x_min)) throw std::invalid_argument("need x_max > x_min");
    if (samples.empty()) throw std::invalid_argument("no samples");
    const double width = (x_max - x_min) / bins;
    std::vector<long> counts(bins, 0);
    const double n = static_cast<double>(samples.size());
    for (const auto& s : samples) {
        const double v = s.at(static_cast<std::size_t>(component));
        if (v < x_min || v >= x_max) continue;
        const int b = std::min(bins - 1, static_cast<int>((v - x_min) / width));
        ++counts[b];
    }
    std::vector<HistogramBin> out(bins);
    for (int b = 0; b < bins; ++b) {
        const double phat = counts[b] / n;
        out[b].left = x_min + b * width;
        out[b].right = x_min + (b + 1) * width;
        out[b].density = phat / width;
        out[b].std_error = std::sqrt(phat * (1.0 - phat) / n) / width;
    }
    return out;
}

}  // namespace mimocap
