#pragma once

// Recession synchronization measures on boolean panels: recession rate,
// pairwise concordance, and the first-principal-component variance share of
// the Pearson (phi) and tetrachoric correlation matrices.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tranchelab/cycle.hpp"
#include "tranchelab/scenario.hpp"

namespace tranchelab {

struct SyncStats {
    double recession_rate = 0.0;
    double concordance_rate = 0.0;
    double pca_share = 0.0;
    double pca_tetrachoric_share = 0.0;
};

/// 2x2 contingency counts for two binary series.
/// a = both true, b = first only, c = second only, d = both false.
struct PairTable {
    std::int64_t a = 0, b = 0, c = 0, d = 0;
    std::int64_t total() const noexcept { return a + b + c + d; }
};

/// Dense symmetric matrix with a per-entry degeneracy flag (set where a
/// correlation was undefined and replaced by zero).
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int n) : n_(n), v_(static_cast<std::size_t>(n) * n, 0.0), flag_(v_.size(), 0) {}

    static SymmetricMatrix identity(int n);
    static SymmetricMatrix from_rows(const std::vector<std::vector<double>>& rows);

    int size() const noexcept { return n_; }
    double operator()(int i, int j) const { return v_[idx(i, j)]; }
    void set(int i, int j, double x) { v_[idx(i, j)] = x; v_[idx(j, i)] = x; }
    /// Writes a single cell; used to build deliberately asymmetric inputs.
    void set_raw(int i, int j, double x) { v_[idx(i, j)] = x; }

    bool degenerate(int i, int j) const { return flag_[idx(i, j)] != 0; }
    void set_degenerate(int i, int j) { flag_[idx(i, j)] = 1; flag_[idx(j, i)] = 1; }
    bool any_degenerate() const noexcept;

    const std::vector<double>& values() const noexcept { return v_; }

private:
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j); }
    int n_ = 0;
    std::vector<double> v_;
    std::vector<std::uint8_t> flag_;
};

double recession_rate(const CyclePanel& panel);
double concordance_rate(const CyclePanel& panel);

/// Pairwise-complete counts for countries i and j.
PairTable pair_table(const CyclePanel& panel, int i, int j);

SymmetricMatrix pearson_correlation_matrix(const CyclePanel& panel);

/// P(X < h, Y < k) for standard bivariate normal with correlation rho.
/// Genz's method: Gauss-Legendre quadrature (6, 12 or 20 points by |rho|) of
/// the single-integral form; absolute error well below 1e-10.
double bivariate_normal_cdf(double h, double k, double rho);

/// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order);

inline constexpr double kTetrachoricBound = 0.999;
inline constexpr double kTetrachoricTolerance = 1e-8;

enum class TetrachoricStatus { Converged, Clamped, DegenerateMargins };

struct TetrachoricResult {
    double rho = 0.0;
    TetrachoricStatus status = TetrachoricStatus::Converged;
    bool continuity_corrected = false;
    bool converged() const noexcept { return status != TetrachoricStatus::DegenerateMargins; }
};

/// Latent bivariate-normal correlation for a 2x2 table. Thresholds come from
/// the margins; rho solves Phi2(z1, z2; rho) = a / n by bisection. Tables with
/// a zero cell get 0.5 added to every cell first. A zero margin yields rho = 0
/// with status DegenerateMargins.
TetrachoricResult tetrachoric_correlation(const PairTable& table);

/// Memo of tetrachoric estimates keyed by the exact counts. Not thread-safe;
/// use one per worker.
class TetrachoricCache {
public:
    const TetrachoricResult& get(const PairTable& table);
    std::size_t size() const noexcept { return memo_.size(); }

private:
    std::unordered_map<std::uint64_t, TetrachoricResult> memo_;
};

SymmetricMatrix tetrachoric_correlation_matrix(const CyclePanel& panel, TetrachoricCache* cache = nullptr);

/// All eigenvalues, descending, by cyclic Jacobi rotations. Stops when the
/// off-diagonal Frobenius norm drops below `threshold`.
std::vector<double> jacobi_eigenvalues(const SymmetricMatrix& m, double threshold = 1e-12);

/// Largest eigenvalue over N. Throws NotSymmetric (tolerance 1e-9).
double first_component_share(const SymmetricMatrix& corr);

SyncStats sync_stats(const CyclePanel& panel, TetrachoricCache* cache = nullptr);

/// Componentwise median over `replications` simulated years x N panels, one
/// substream per replication under scenario.master_seed.
SyncStats median_sync_stats(const Scenario& scenario, int replications, int years, int workers = 0);

/// Componentwise median of precomputed per-panel stats.
SyncStats median_of(std::vector<SyncStats> stats);

}  // namespace tranchelab
