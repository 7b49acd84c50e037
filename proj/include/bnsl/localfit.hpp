#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"

namespace bnsl {

// Keeps log-densities finite on exact-fit data.
inline constexpr double kSigma2Floor = 1e-12;
// Per-row clamp for zero-probability CPT cells at prediction time.
inline constexpr double kProbFloor = 1e-300;
// Relative threshold below which the closed-form path declares collinearity.
inline constexpr double kCollinearTol = 1e-12;

enum class FitMethod { QR, Closed1, Closed2 };

inline int closed_form_cap(FitMethod m) {
    switch (m) {
        case FitMethod::QR: return -1;
        case FitMethod::Closed1: return 1;
        case FitMethod::Closed2: return 2;
    }
    return -1;
}

namespace detail {

// Row selection: idx == nullptr means rows 0..count-1.
struct RowRef {
    const std::uint32_t* idx = nullptr;
    std::size_t count = 0;
};

inline RowRef all_rows(const Dataset& ds) { return {nullptr, ds.n()}; }

inline RowRef ref_of(const Dataset& ds, const std::vector<std::uint32_t>* rows) {
    if (rows) return {rows->data(), rows->size()};
    return all_rows(ds);
}

}  // namespace detail

// Multinomial local distribution. Probabilities are stored as an
// l x q table, probs[k * q + cfg]; parent configuration index is
// mixed-radix with the first parent most significant.
struct Cpt {
    int child = -1;
    std::vector<int> parents;
    int levels = 0;
    long q = 1;
    std::vector<double> probs;   // levels * q
    std::vector<double> counts;  // levels * q
    long nfit = 0;

    long param_count() const { return static_cast<long>(levels - 1) * q; }
};

struct GaussRegression {
    int child = -1;
    std::vector<int> parents;  // continuous, declared order
    double intercept = 0.0;
    std::vector<double> coef;  // one per parent
    double sigma2 = kSigma2Floor;           // MLE, divisor n
    double sigma2_unbiased = kSigma2Floor;  // divisor n - |parents| - 1, reported only
    double sse = 0.0;
    long nfit = 0;

    long param_count() const { return static_cast<long>(parents.size()) + 2; }
};

struct ClgComponent {
    double intercept = 0.0;
    std::vector<double> coef;
    double sigma2 = kSigma2Floor;
    double sigma2_unbiased = kSigma2Floor;
    double sse = 0.0;
    long count = 0;
    bool observed = false;  // unobserved configurations hold the pooled fit
};

// Mixture of per-discrete-configuration regressions. An observed
// configuration with fewer than |gparents| + 2 rows marks the fit invalid.
struct ClgMixture {
    int child = -1;
    std::vector<int> dparents;
    std::vector<int> gparents;
    long q = 1;
    std::vector<ClgComponent> components;  // size q
    bool valid = true;
    long nfit = 0;

    long param_count() const { return q * (static_cast<long>(gparents.size()) + 2); }
};

using LocalDistribution = std::variant<Cpt, GaussRegression, ClgMixture>;

inline long param_count(const LocalDistribution& d) {
    return std::visit([](const auto& v) { return v.param_count(); }, d);
}

namespace detail {

inline long config_space(const Dataset& ds, const std::vector<int>& dparents) {
    long q = 1;
    for (int p : dparents) q *= ds.num_levels(p);
    return q;
}

inline long config_of_row(const Dataset& ds, const std::vector<int>& dparents, std::size_t row) {
    long cfg = 0;
    for (int p : dparents) cfg = cfg * ds.num_levels(p) + ds.codes(p)[row];
    return cfg;
}

}  // namespace detail

inline Cpt fit_cpt(const Dataset& ds, int child, const std::vector<int>& parents,
                   const std::vector<std::uint32_t>* rows = nullptr) {
    if (!ds.is_discrete(child)) throw std::invalid_argument("fit_cpt: child not discrete");
    for (int p : parents) {
        if (!ds.is_discrete(p)) throw std::invalid_argument("fit_cpt: parent not discrete");
        if (p == child) throw std::invalid_argument("fit_cpt: child among parents");
    }
    Cpt cpt;
    cpt.child = child;
    cpt.parents = parents;
    cpt.levels = ds.num_levels(child);
    cpt.q = detail::config_space(ds, parents);
    cpt.counts.assign(static_cast<std::size_t>(cpt.levels) * cpt.q, 0.0);
    auto rr = detail::ref_of(ds, rows);
    cpt.nfit = static_cast<long>(rr.count);
    const auto& child_codes = ds.codes(child);
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        long cfg = detail::config_of_row(ds, parents, r);
        cpt.counts[static_cast<std::size_t>(child_codes[r]) * cpt.q + cfg] += 1.0;
    }
    cpt.probs.assign(cpt.counts.size(), 0.0);
    for (long cfg = 0; cfg < cpt.q; ++cfg) {
        double total = 0.0;
        for (int k = 0; k < cpt.levels; ++k) total += cpt.counts[static_cast<std::size_t>(k) * cpt.q + cfg];
        if (total > 0.0) {
            for (int k = 0; k < cpt.levels; ++k)
                cpt.probs[static_cast<std::size_t>(k) * cpt.q + cfg] =
                    cpt.counts[static_cast<std::size_t>(k) * cpt.q + cfg] / total;
        } else {
            for (int k = 0; k < cpt.levels; ++k)
                cpt.probs[static_cast<std::size_t>(k) * cpt.q + cfg] = 1.0 / cpt.levels;
        }
    }
    return cpt;
}

namespace detail {

inline void finish_residuals(const Dataset& ds, GaussRegression& fit, RowRef rr) {
    const auto& y = ds.reals(fit.child);
    const std::size_t p = fit.parents.size();
    double sse = 0.0;
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        double pred = fit.intercept;
        for (std::size_t a = 0; a < p; ++a) pred += fit.coef[a] * ds.reals(fit.parents[a])[r];
        double e = y[r] - pred;
        sse += e * e;
    }
    fit.sse = sse;
    fit.nfit = static_cast<long>(rr.count);
    const double m = static_cast<double>(rr.count);
    fit.sigma2 = std::max(sse / m, kSigma2Floor);
    double dof = m - static_cast<double>(p) - 1.0;
    fit.sigma2_unbiased = std::max(sse / std::max(dof, 1.0), kSigma2Floor);
}

inline GaussRegression fit_gauss_qr_impl(const Dataset& ds, int child,
                                         const std::vector<int>& parents, RowRef rr) {
    const std::size_t m = rr.count;
    const std::size_t p = parents.size() + 1;  // intercept column first
    if (m < parents.size() + 2) throw std::invalid_argument("fit_gauss_qr: too few rows");

    // Scratch reused across calls; QR is the hot path of candidate scoring.
    static thread_local std::vector<double> A;  // column-major m x p
    static thread_local std::vector<double> y;
    A.resize(m * p);
    y.resize(m);
    for (std::size_t t = 0; t < m; ++t) A[t] = 1.0;
    for (std::size_t a = 0; a < parents.size(); ++a) {
        const auto& col = ds.reals(parents[a]);
        double* dst = A.data() + (a + 1) * m;
        if (rr.idx)
            for (std::size_t t = 0; t < m; ++t) dst[t] = col[rr.idx[t]];
        else
            for (std::size_t t = 0; t < m; ++t) dst[t] = col[t];
    }
    {
        const auto& col = ds.reals(child);
        if (rr.idx)
            for (std::size_t t = 0; t < m; ++t) y[t] = col[rr.idx[t]];
        else
            for (std::size_t t = 0; t < m; ++t) y[t] = col[t];
    }

    std::vector<std::size_t> perm(p);
    for (std::size_t c = 0; c < p; ++c) perm[c] = c;
    std::size_t rank = p;
    double tol0 = -1.0;

    // Householder QR with column pivoting; dropped columns get coefficient 0.
    for (std::size_t k = 0; k < p && k < m; ++k) {
        std::size_t best = k;
        double best_norm2 = -1.0;
        for (std::size_t c = k; c < p; ++c) {
            const double* col = A.data() + c * m;
            double s = 0.0;
            for (std::size_t t = k; t < m; ++t) s += col[t] * col[t];
            if (s > best_norm2) {
                best_norm2 = s;
                best = c;
            }
        }
        if (tol0 < 0.0) tol0 = best_norm2 * (kCollinearTol * kCollinearTol);
        if (best_norm2 <= tol0) {
            rank = k;
            break;
        }
        if (best != k) {
            for (std::size_t t = 0; t < m; ++t)
                std::swap(A[k * m + t], A[best * m + t]);
            std::swap(perm[k], perm[best]);
        }
        double* ck = A.data() + k * m;
        double alpha = std::sqrt(best_norm2);
        if (ck[k] > 0.0) alpha = -alpha;
        double v0 = ck[k] - alpha;
        double vtv = best_norm2 - 2.0 * alpha * ck[k] + alpha * alpha;
        if (vtv > 0.0) {
            for (std::size_t c = k + 1; c < p; ++c) {
                double* cc = A.data() + c * m;
                double dot = v0 * cc[k];
                for (std::size_t t = k + 1; t < m; ++t) dot += ck[t] * cc[t];
                double scale = 2.0 * dot / vtv;
                cc[k] -= scale * v0;
                for (std::size_t t = k + 1; t < m; ++t) cc[t] -= scale * ck[t];
            }
            double dot = v0 * y[k];
            for (std::size_t t = k + 1; t < m; ++t) dot += ck[t] * y[t];
            double scale = 2.0 * dot / vtv;
            y[k] -= scale * v0;
            for (std::size_t t = k + 1; t < m; ++t) y[t] -= scale * ck[t];
        }
        ck[k] = alpha;
    }
    if (rank > m) rank = m;

    std::vector<double> z(rank, 0.0);
    for (std::size_t k = rank; k-- > 0;) {
        double s = y[k];
        for (std::size_t c = k + 1; c < rank; ++c) s -= A[c * m + k] * z[c];
        z[k] = s / A[k * m + k];
    }

    GaussRegression fit;
    fit.child = child;
    fit.parents = parents;
    fit.coef.assign(parents.size(), 0.0);
    for (std::size_t k = 0; k < rank; ++k) {
        if (perm[k] == 0)
            fit.intercept = z[k];
        else
            fit.coef[perm[k] - 1] = z[k];
    }
    finish_residuals(ds, fit, rr);
    return fit;
}

// Closes out a closed-form fit from the residual sum of squares implied by
// the accumulated moments (no extra data pass).
inline void finish_from_sse(GaussRegression& fit, double sse, std::size_t m) {
    fit.sse = std::max(sse, 0.0);
    fit.nfit = static_cast<long>(m);
    const double dm = static_cast<double>(m);
    fit.sigma2 = std::max(fit.sse / dm, kSigma2Floor);
    double dof = dm - static_cast<double>(fit.parents.size()) - 1.0;
    fit.sigma2_unbiased = std::max(fit.sse / std::max(dof, 1.0), kSigma2Floor);
}

inline GaussRegression fit_gauss_closed_impl(const Dataset& ds, int child,
                                             const std::vector<int>& parents, RowRef rr) {
    const std::size_t j = parents.size();
    if (j > 2) throw std::invalid_argument("fit_gauss_closed: more than 2 parents");
    const std::size_t m = rr.count;
    if (m < j + 2) throw std::invalid_argument("fit_gauss_closed: too few rows");
    const double dm = static_cast<double>(m);

    const auto& yi = ds.reals(child);
    double mean_i = 0.0;
    if (rr.idx)
        for (std::size_t t = 0; t < m; ++t) mean_i += yi[rr.idx[t]];
    else
        for (std::size_t t = 0; t < m; ++t) mean_i += yi[t];
    mean_i /= dm;

    GaussRegression fit;
    fit.child = child;
    fit.parents = parents;
    fit.coef.assign(j, 0.0);

    if (j == 0) {
        fit.intercept = mean_i;
        double v_i = 0.0;
        if (rr.idx) {
            for (std::size_t t = 0; t < m; ++t) {
                double b = yi[rr.idx[t]] - mean_i;
                v_i += b * b;
            }
        } else {
            for (std::size_t t = 0; t < m; ++t) {
                double b = yi[t] - mean_i;
                v_i += b * b;
            }
        }
        finish_from_sse(fit, v_i, m);
        return fit;
    }

    if (j == 1) {
        const auto& xj = ds.reals(parents[0]);
        double mean_j = 0.0;
        if (rr.idx)
            for (std::size_t t = 0; t < m; ++t) mean_j += xj[rr.idx[t]];
        else
            for (std::size_t t = 0; t < m; ++t) mean_j += xj[t];
        mean_j /= dm;
        double v_j = 0.0, c_ij = 0.0, v_i = 0.0;
        if (rr.idx) {
            for (std::size_t t = 0; t < m; ++t) {
                double a = xj[rr.idx[t]] - mean_j, b = yi[rr.idx[t]] - mean_i;
                v_j += a * a;
                c_ij += a * b;
                v_i += b * b;
            }
        } else {
            for (std::size_t t = 0; t < m; ++t) {
                double a = xj[t] - mean_j, b = yi[t] - mean_i;
                v_j += a * a;
                c_ij += a * b;
                v_i += b * b;
            }
        }
        double scale = std::max({v_i, v_j, 1e-300});
        if (v_j <= kCollinearTol * scale)
            return fit_gauss_qr_impl(ds, child, parents, rr);  // collinear; pivoted QR resolves it
        fit.coef[0] = c_ij / v_j;
        fit.intercept = mean_i - fit.coef[0] * mean_j;
        finish_from_sse(fit, v_i - fit.coef[0] * c_ij, m);
        return fit;
    }

    const auto& xj = ds.reals(parents[0]);
    const auto& xk = ds.reals(parents[1]);
    double mean_j = 0.0, mean_k = 0.0;
    if (rr.idx) {
        for (std::size_t t = 0; t < m; ++t) {
            mean_j += xj[rr.idx[t]];
            mean_k += xk[rr.idx[t]];
        }
    } else {
        for (std::size_t t = 0; t < m; ++t) {
            mean_j += xj[t];
            mean_k += xk[t];
        }
    }
    mean_j /= dm;
    mean_k /= dm;
    double v_j = 0.0, v_k = 0.0, v_i = 0.0, c_jk = 0.0, c_ij = 0.0, c_ik = 0.0;
    if (rr.idx) {
        for (std::size_t t = 0; t < m; ++t) {
            double a = xj[rr.idx[t]] - mean_j;
            double b = xk[rr.idx[t]] - mean_k;
            double yc = yi[rr.idx[t]] - mean_i;
            v_j += a * a;
            v_k += b * b;
            v_i += yc * yc;
            c_jk += a * b;
            c_ij += a * yc;
            c_ik += b * yc;
        }
    } else {
        for (std::size_t t = 0; t < m; ++t) {
            double a = xj[t] - mean_j;
            double b = xk[t] - mean_k;
            double yc = yi[t] - mean_i;
            v_j += a * a;
            v_k += b * b;
            v_i += yc * yc;
            c_jk += a * b;
            c_ij += a * yc;
            c_ik += b * yc;
        }
    }
    // determinant of the 2x2 regressor covariance matrix
    double d = v_j * v_k - c_jk * c_jk;
    if (std::abs(d) <= kCollinearTol * v_j * v_k || !(d > 0.0))
        return fit_gauss_qr_impl(ds, child, parents, rr);
    fit.coef[0] = (v_k * c_ij - c_jk * c_ik) / d;
    fit.coef[1] = (v_j * c_ik - c_jk * c_ij) / d;
    fit.intercept = mean_i - fit.coef[0] * mean_j - fit.coef[1] * mean_k;
    finish_from_sse(fit, v_i - fit.coef[0] * c_ij - fit.coef[1] * c_ik, m);
    return fit;
}

inline GaussRegression fit_gauss_dispatch(const Dataset& ds, int child,
                                          const std::vector<int>& parents, FitMethod method,
                                          RowRef rr) {
    if (static_cast<int>(parents.size()) <= closed_form_cap(method))
        return fit_gauss_closed_impl(ds, child, parents, rr);
    return fit_gauss_qr_impl(ds, child, parents, rr);
}

}  // namespace detail

inline GaussRegression fit_gauss_qr(const Dataset& ds, int child, const std::vector<int>& parents,
                                    const std::vector<std::uint32_t>* rows = nullptr) {
    return detail::fit_gauss_qr_impl(ds, child, parents, detail::ref_of(ds, rows));
}

inline GaussRegression fit_gauss_closed(const Dataset& ds, int child,
                                        const std::vector<int>& parents,
                                        const std::vector<std::uint32_t>* rows = nullptr) {
    return detail::fit_gauss_closed_impl(ds, child, parents, detail::ref_of(ds, rows));
}

inline ClgMixture fit_clg(const Dataset& ds, int child, const std::vector<int>& dparents,
                          const std::vector<int>& gparents, FitMethod method,
                          const std::vector<std::uint32_t>* rows = nullptr) {
    if (ds.is_discrete(child)) throw std::invalid_argument("fit_clg: child not continuous");
    for (int p : dparents)
        if (!ds.is_discrete(p)) throw std::invalid_argument("fit_clg: discrete parent expected");
    for (int p : gparents)
        if (ds.is_discrete(p)) throw std::invalid_argument("fit_clg: continuous parent expected");

    auto rr = detail::ref_of(ds, rows);
    ClgMixture mix;
    mix.child = child;
    mix.dparents = dparents;
    mix.gparents = gparents;
    mix.q = detail::config_space(ds, dparents);
    mix.nfit = static_cast<long>(rr.count);
    mix.components.resize(mix.q);

    if (dparents.empty()) {
        auto fit = detail::fit_gauss_dispatch(ds, child, gparents, method, rr);
        auto& c = mix.components[0];
        c.intercept = fit.intercept;
        c.coef = fit.coef;
        c.sigma2 = fit.sigma2;
        c.sigma2_unbiased = fit.sigma2_unbiased;
        c.sse = fit.sse;
        c.count = static_cast<long>(rr.count);
        c.observed = true;
        return mix;
    }

    // Counting sort of the selected rows by discrete-parent configuration.
    static thread_local std::vector<std::uint32_t> grouped;
    std::vector<long> counts(mix.q, 0);
    grouped.resize(rr.count);
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        ++counts[detail::config_of_row(ds, dparents, r)];
    }
    const long min_rows = static_cast<long>(gparents.size()) + 2;
    bool any_unobserved = false;
    for (long cfg = 0; cfg < mix.q; ++cfg) {
        if (counts[cfg] == 0) any_unobserved = true;
        else if (counts[cfg] < min_rows) {
            mix.valid = false;
            return mix;
        }
    }
    std::vector<std::size_t> offsets(mix.q + 1, 0);
    for (long cfg = 0; cfg < mix.q; ++cfg) offsets[cfg + 1] = offsets[cfg] + counts[cfg];
    {
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t t = 0; t < rr.count; ++t) {
            std::size_t r = rr.idx ? rr.idx[t] : t;
            grouped[cursor[detail::config_of_row(ds, dparents, r)]++] =
                static_cast<std::uint32_t>(r);
        }
    }

    for (long cfg = 0; cfg < mix.q; ++cfg) {
        auto& c = mix.components[cfg];
        c.count = counts[cfg];
        if (counts[cfg] == 0) continue;
        detail::RowRef sub{grouped.data() + offsets[cfg], static_cast<std::size_t>(counts[cfg])};
        auto fit = detail::fit_gauss_dispatch(ds, child, gparents, method, sub);
        c.intercept = fit.intercept;
        c.coef = fit.coef;
        c.sigma2 = fit.sigma2;
        c.sigma2_unbiased = fit.sigma2_unbiased;
        c.sse = fit.sse;
        c.observed = true;
    }

    if (any_unobserved) {
        // Pooled fallback on all selected rows; used only for prediction.
        auto pooled = detail::fit_gauss_dispatch(ds, child, gparents, method, rr);
        for (long cfg = 0; cfg < mix.q; ++cfg) {
            auto& c = mix.components[cfg];
            if (c.observed) continue;
            c.intercept = pooled.intercept;
            c.coef = pooled.coef;
            c.sigma2 = pooled.sigma2;
            c.sigma2_unbiased = pooled.sigma2_unbiased;
        }
    }
    return mix;
}

inline double normal_logdensity(double x, double mean, double sigma2) {
    double e = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * sigma2) - e * e / (2.0 * sigma2);
}

inline double loglik(const Cpt& cpt, const Dataset& ds,
                     const std::vector<std::uint32_t>* rows = nullptr) {
    auto rr = detail::ref_of(ds, rows);
    const auto& codes = ds.codes(cpt.child);
    // log table once per call instead of one log per row
    static thread_local std::vector<double> logp;
    logp.resize(cpt.probs.size());
    for (std::size_t c = 0; c < cpt.probs.size(); ++c)
        logp[c] = std::log(std::max(cpt.probs[c], kProbFloor));
    double ll = 0.0;
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        long cfg = detail::config_of_row(ds, cpt.parents, r);
        ll += logp[static_cast<std::size_t>(codes[r]) * cpt.q + cfg];
    }
    return ll;
}

inline double loglik(const GaussRegression& fit, const Dataset& ds,
                     const std::vector<std::uint32_t>* rows = nullptr) {
    auto rr = detail::ref_of(ds, rows);
    const auto& y = ds.reals(fit.child);
    const std::size_t p = fit.parents.size();
    const double c0 = -0.5 * std::log(2.0 * std::numbers::pi * fit.sigma2);
    const double inv2s = 1.0 / (2.0 * fit.sigma2);
    double ll = 0.0;
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        double pred = fit.intercept;
        for (std::size_t a = 0; a < p; ++a) pred += fit.coef[a] * ds.reals(fit.parents[a])[r];
        double e = y[r] - pred;
        ll += c0 - e * e * inv2s;
    }
    return ll;
}

inline double loglik(const ClgMixture& mix, const Dataset& ds,
                     const std::vector<std::uint32_t>* rows = nullptr) {
    if (!mix.valid) throw std::invalid_argument("loglik: invalid CLG fit");
    auto rr = detail::ref_of(ds, rows);
    const auto& y = ds.reals(mix.child);
    const std::size_t p = mix.gparents.size();
    // per-component constants once per call instead of one log per row
    static thread_local std::vector<double> c0, inv2s;
    c0.resize(mix.components.size());
    inv2s.resize(mix.components.size());
    for (std::size_t c = 0; c < mix.components.size(); ++c) {
        c0[c] = -0.5 * std::log(2.0 * std::numbers::pi * mix.components[c].sigma2);
        inv2s[c] = 1.0 / (2.0 * mix.components[c].sigma2);
    }
    double ll = 0.0;
    for (std::size_t t = 0; t < rr.count; ++t) {
        std::size_t r = rr.idx ? rr.idx[t] : t;
        long cfg = detail::config_of_row(ds, mix.dparents, r);
        const auto& c = mix.components[cfg];
        double pred = c.intercept;
        for (std::size_t a = 0; a < p; ++a) pred += c.coef[a] * ds.reals(mix.gparents[a])[r];
        double e = y[r] - pred;
        ll += c0[cfg] - e * e * inv2s[cfg];
    }
    return ll;
}

inline double loglik(const LocalDistribution& d, const Dataset& ds,
                     const std::vector<std::uint32_t>* rows = nullptr) {
    return std::visit([&](const auto& v) { return loglik(v, ds, rows); }, d);
}

struct BnModel {
    Dag dag;
    Schema schema;
    std::vector<LocalDistribution> locals;  // one per node, node order
};

// Family rule: discrete child -> CPT (all parents discrete); continuous
// child with no discrete parents -> plain regression; otherwise CLG mixture.
inline BnModel fit_model(const Dataset& ds, const Dag& dag, FitMethod method,
                         const std::vector<std::uint32_t>* rows = nullptr) {
    BnModel model;
    model.dag = dag;
    model.schema = ds.schema();
    model.locals.reserve(dag.num_nodes());
    for (std::size_t i = 0; i < dag.num_nodes(); ++i) {
        int child = ds.column(dag.name(static_cast<int>(i)));
        std::vector<int> dpar, gpar;
        for (int p : dag.parents(static_cast<int>(i))) {
            int col = ds.column(dag.name(p));
            (ds.is_discrete(col) ? dpar : gpar).push_back(col);
        }
        if (ds.is_discrete(child)) {
            if (!gpar.empty())
                throw std::invalid_argument("fit_model: discrete child with continuous parent");
            model.locals.emplace_back(fit_cpt(ds, child, dpar, rows));
        } else if (dpar.empty()) {
            model.locals.emplace_back(detail::fit_gauss_dispatch(ds, child, gpar, method,
                                                                 detail::ref_of(ds, rows)));
        } else {
            auto mix = fit_clg(ds, child, dpar, gpar, method, rows);
            if (!mix.valid) throw std::invalid_argument("fit_model: invalid CLG fit");
            model.locals.emplace_back(std::move(mix));
        }
    }
    return model;
}

}  // namespace bnsl
