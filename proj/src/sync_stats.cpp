#include "tranchelab/sync_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "tranchelab/engine.hpp"

namespace tranchelab {

SymmetricMatrix SymmetricMatrix::identity(int n) {
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymmetricMatrix SymmetricMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw Error(ErrorCode::InvalidParameter, "matrix rows must be square");
        for (int j = 0; j < n; ++j) m.set_raw(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return m;
}

bool SymmetricMatrix::any_degenerate() const noexcept {
    return std::any_of(flag_.begin(), flag_.end(), [](std::uint8_t f) { return f != 0; });
}

double recession_rate(const CyclePanel& panel) {
    std::int64_t hits = 0, cells = 0;
    for (int t = 0; t < panel.years(); ++t)
        for (int i = 0; i < panel.countries(); ++i) {
            if (!panel.observed(t, i)) continue;
            ++cells;
            hits += panel.state(t, i) ? 1 : 0;
        }
    if (cells == 0) throw Error(ErrorCode::EmptyPanel, "panel has no observed cells");
    return static_cast<double>(hits) / static_cast<double>(cells);
}

PairTable pair_table(const CyclePanel& panel, int i, int j) {
    PairTable t;
    for (int y = 0; y < panel.years(); ++y) {
        if (!panel.observed(y, i) || !panel.observed(y, j)) continue;
        const bool x = panel.state(y, i), z = panel.state(y, j);
        if (x && z) ++t.a;
        else if (x) ++t.b;
        else if (z) ++t.c;
        else ++t.d;
    }
    return t;
}

double concordance_rate(const CyclePanel& panel) {
    const int n = panel.countries();
    if (n < 2) throw Error(ErrorCode::TooFewCountries, "concordance needs at least two countries");
    std::int64_t agree = 0, total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const PairTable t = pair_table(panel, i, j);
            agree += t.a + t.d;
            total += t.total();
        }
    if (total == 0) throw Error(ErrorCode::EmptyPanel, "no overlapping observations");
    return static_cast<double>(agree) / static_cast<double>(total);
}

namespace {

bool degenerate_margins(const PairTable& t) {
    return t.a + t.b == 0 || t.c + t.d == 0 || t.a + t.c == 0 || t.b + t.d == 0;
}

double phi_coefficient(const PairTable& t) {
    const double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
    const double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
    const double den = std::sqrt((a + b) * (c + d) * (a + c) * (b + d));
    return (a * d - b * c) / den;
}

}  // namespace

SymmetricMatrix pearson_correlation_matrix(const CyclePanel& panel) {
    const int n = panel.countries();
    if (n < 2) throw Error(ErrorCode::TooFewCountries, "correlation matrix needs at least two countries");
    SymmetricMatrix m = SymmetricMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const PairTable t = pair_table(panel, i, j);
            if (t.total() == 0 || degenerate_margins(t)) {
                m.set(i, j, 0.0);
                m.set_degenerate(i, j);
            } else {
                m.set(i, j, std::clamp(phi_coefficient(t), -1.0, 1.0));
            }
        }
    return m;
}

GaussLegendreRule gauss_legendre(int order) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    return rule;
}

namespace {

const GaussLegendreRule& rule_for(double abs_rho) {
    static const std::array<GaussLegendreRule, 3> rules = {gauss_legendre(6), gauss_legendre(12),
                                                           gauss_legendre(20)};
    if (abs_rho < 0.3) return rules[0];
    if (abs_rho < 0.75) return rules[1];
    return rules[2];
}

// Upper orthant P(X > dh, Y > dk).
double bvn_upper(double dh, double dk, double r) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (std::isinf(dh) && dh > 0) return 0.0;
    if (std::isinf(dk) && dk > 0) return 0.0;
    if (std::isinf(dh)) return std::isinf(dk) ? 1.0 : normal_cdf(-dk);
    if (std::isinf(dk)) return normal_cdf(-dh);
    if (r == 0.0) return normal_cdf(-dh) * normal_cdf(-dk);

    const GaussLegendreRule& gl = rule_for(std::fabs(r));
    double h = dh, k = dk, hk = h * k, bvn = 0.0;

    if (std::fabs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r) / 2.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double sn = std::sin(asr * (1.0 + gl.nodes[i]));
            acc += gl.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return std::clamp(acc * asr / two_pi + normal_cdf(-h) * normal_cdf(-k), 0.0, 1.0);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (std::fabs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - k) * (h - k);
        const double c = (4.0 - hk) / 8.0;
        const double d = (12.0 - hk) / 80.0;
        double asr = -(bs / as + hk) / 2.0;
        if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        if (hk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(two_pi) * normal_cdf(-b / a);
            bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a /= 2.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double xs = std::pow(a * (1.0 + gl.nodes[i]), 2);
            const double asr_i = -(bs / xs + hk) / 2.0;
            if (asr_i <= -100.0) continue;
            const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
            const double rs = std::sqrt(1.0 - xs);
            const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
            acc += gl.weights[i] * std::exp(asr_i) * (sp - ep);
        }
        bvn = (a * acc - bvn) / two_pi;
    }
    if (r > 0.0) {
        bvn += normal_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        const double l = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
        bvn = l - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bivariate_normal_cdf(double h, double k, double rho) {
    if (std::isnan(h) || std::isnan(k) || std::isnan(rho))
        throw Error(ErrorCode::NonFiniteInput, "bivariate normal arguments must not be NaN");
    if (rho < -1.0 || rho > 1.0) throw Error(ErrorCode::InvalidParameter, "correlation outside [-1,1]");
    return bvn_upper(-h, -k, rho);
}

TetrachoricResult tetrachoric_correlation(const PairTable& table) {
    if (table.a < 0 || table.b < 0 || table.c < 0 || table.d < 0 || table.total() < 1)
        throw Error(ErrorCode::InvalidParameter, "pair table needs non-negative counts and n >= 1");
    TetrachoricResult res;
    if (degenerate_margins(table)) {
        res.status = TetrachoricStatus::DegenerateMargins;
        return res;
    }
    double a = static_cast<double>(table.a), b = static_cast<double>(table.b);
    double c = static_cast<double>(table.c), d = static_cast<double>(table.d);
    if (table.a == 0 || table.b == 0 || table.c == 0 || table.d == 0) {
        a += 0.5;
        b += 0.5;
        c += 0.5;
        d += 0.5;
        res.continuity_corrected = true;
    }
    const double n = a + b + c + d;
    const double h = inverse_normal_cdf((a + b) / n);
    const double k = inverse_normal_cdf((a + c) / n);
    const double target = a / n;

    double lo = -kTetrachoricBound, hi = kTetrachoricBound;
    if (target >= bivariate_normal_cdf(h, k, hi)) {
        res.rho = hi;
        res.status = TetrachoricStatus::Clamped;
        return res;
    }
    if (target <= bivariate_normal_cdf(h, k, lo)) {
        res.rho = lo;
        res.status = TetrachoricStatus::Clamped;
        return res;
    }
    while (hi - lo > kTetrachoricTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (bivariate_normal_cdf(h, k, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    res.rho = 0.5 * (lo + hi);
    return res;
}

const TetrachoricResult& TetrachoricCache::get(const PairTable& t) {
    const bool packable = t.a >= 0 && t.b >= 0 && t.c >= 0 && t.d >= 0 && t.a < 65536 && t.b < 65536 &&
                          t.c < 65536 && t.d < 65536;
    if (!packable) {
        thread_local TetrachoricResult scratch;
        scratch = tetrachoric_correlation(t);
        return scratch;
    }
    const std::uint64_t key = static_cast<std::uint64_t>(t.a) | static_cast<std::uint64_t>(t.b) << 16 |
                              static_cast<std::uint64_t>(t.c) << 32 | static_cast<std::uint64_t>(t.d) << 48;
    auto it = memo_.find(key);
    if (it == memo_.end()) it = memo_.emplace(key, tetrachoric_correlation(t)).first;
    return it->second;
}

SymmetricMatrix tetrachoric_correlation_matrix(const CyclePanel& panel, TetrachoricCache* cache) {
    const int n = panel.countries();
    if (n < 2) throw Error(ErrorCode::TooFewCountries, "correlation matrix needs at least two countries");
    SymmetricMatrix m = SymmetricMatrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const PairTable t = pair_table(panel, i, j);
            if (t.total() == 0) {
                m.set(i, j, 0.0);
                m.set_degenerate(i, j);
                continue;
            }
            const TetrachoricResult r = cache ? cache->get(t) : tetrachoric_correlation(t);
            m.set(i, j, r.rho);
            if (r.status == TetrachoricStatus::DegenerateMargins) m.set_degenerate(i, j);
        }
    return m;
}

std::vector<double> jacobi_eigenvalues(const SymmetricMatrix& m, double threshold) {
    const int n = m.size();
    std::vector<double> a = m.values();
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)]; };
    auto off_norm = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(2.0 * s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= threshold; ++sweep) {
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                at(p, p) -= t * apq;
                at(q, q) += t * apq;
                at(p, q) = at(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = at(r, p), arq = at(r, q);
                    at(r, p) = at(p, r) = c * arp - s * arq;
                    at(r, q) = at(q, r) = s * arp + c * arq;
                }
            }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

double first_component_share(const SymmetricMatrix& corr) {
    const int n = corr.size();
    if (n < 1) throw Error(ErrorCode::InvalidParameter, "empty matrix");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(corr(i, j) - corr(j, i)) > 1e-9)
                throw Error(ErrorCode::NotSymmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
    return jacobi_eigenvalues(corr).front() / n;
}

SyncStats sync_stats(const CyclePanel& panel, TetrachoricCache* cache) {
    if (panel.countries() < 2) throw Error(ErrorCode::TooFewCountries, "sync stats need at least two countries");
    SyncStats s;
    s.recession_rate = recession_rate(panel);
    s.concordance_rate = concordance_rate(panel);
    s.pca_share = first_component_share(pearson_correlation_matrix(panel));
    s.pca_tetrachoric_share = first_component_share(tetrachoric_correlation_matrix(panel, cache));
    return s;
}

namespace {

double median_in_place(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

}  // namespace

SyncStats median_of(std::vector<SyncStats> stats) {
    if (stats.empty()) throw Error(ErrorCode::EmptyInput, "median of zero replications");
    std::vector<double> buf(stats.size());
    auto column = [&](double SyncStats::*field) {
        for (std::size_t i = 0; i < stats.size(); ++i) buf[i] = stats[i].*field;
        return median_in_place(buf);
    };
    SyncStats out;
    out.recession_rate = column(&SyncStats::recession_rate);
    out.concordance_rate = column(&SyncStats::concordance_rate);
    out.pca_share = column(&SyncStats::pca_share);
    out.pca_tetrachoric_share = column(&SyncStats::pca_tetrachoric_share);
    return out;
}

SyncStats median_sync_stats(const Scenario& scenario, int replications, int years, int workers) {
    if (replications < 1) throw Error(ErrorCode::InvalidParameter, "replications must be >= 1");
    if (years < 1) throw Error(ErrorCode::InvalidParameter, "years must be >= 1");
    const int n = static_cast<int>(scenario.countries.size());
    RandomPlan plan{scenario.master_seed, replications, workers};
    auto per_run = run_indexed(plan, [&](RandomStream& rng, std::int64_t) {
        thread_local TetrachoricCache cache;
        return sync_stats(simulate_panel(scenario.factor, years, n, rng), &cache);
    });
    return median_of(std::move(per_run));
}

}  // namespace tranchelab
