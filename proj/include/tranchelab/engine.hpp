#pragma once

// Deterministic Monte Carlo orchestration. Work items are pure functions of
// (substream, run index); results are stored by index so every reduction
// sees the same order no matter how many workers ran.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "tranchelab/error.hpp"
#include "tranchelab/random.hpp"

namespace tranchelab {

inline constexpr const char* kVersionTag = "tranchelab 0.1.0";

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

struct RandomPlan {
    std::uint64_t master_seed = 0;
    std::int64_t n_runs = 0;
    int workers = 0;  // 0 = hardware concurrency
};

struct Provenance {
    std::uint64_t scenario_digest = 0;
    std::uint64_t master_seed = 0;
    std::int64_t n_runs = 0;
    std::string version = kVersionTag;
};

template <class Record>
struct ResultSet {
    std::vector<Record> runs;
    Provenance provenance;
};

int resolve_workers(int requested) noexcept;

/// FNV-1a over the raw bytes of a trivially copyable record array.
std::uint64_t digest_bytes(const void* data, std::size_t size) noexcept;

template <class T>
std::uint64_t digest(std::span<const T> values) noexcept {
    static_assert(std::is_trivially_copyable_v<T>);
    return digest_bytes(values.data(), values.size_bytes());
}

/// Runs `work(stream, index)` for every index in [0, n_runs) and returns the
/// results in index order. Each index gets substream(master_seed, index).
template <class Work>
auto run_indexed(const RandomPlan& plan, Work&& work)
    -> std::vector<std::invoke_result_t<Work&, RandomStream&, std::int64_t>> {
    using Record = std::invoke_result_t<Work&, RandomStream&, std::int64_t>;
    if (plan.n_runs <= 0) throw Error(ErrorCode::EmptyPlan, "n_runs must be >= 1");

    std::vector<Record> out(static_cast<std::size_t>(plan.n_runs));
    const int workers =
        static_cast<int>(std::min<std::int64_t>(resolve_workers(plan.workers), plan.n_runs));

    auto run_block = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            RandomStream rng = substream(plan.master_seed, static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = work(rng, i);
        }
    };

    if (workers <= 1) {
        run_block(0, plan.n_runs);
        return out;
    }

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const std::int64_t begin = plan.n_runs * w / workers;
            const std::int64_t end = plan.n_runs * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_block(begin, end);
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
    }
    // Lowest block first, so the reported failure does not depend on timing.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

template <class Work>
auto run_parallel(const RandomPlan& plan, std::uint64_t scenario_digest, Work&& work)
    -> ResultSet<std::invoke_result_t<Work&, RandomStream&, std::int64_t>> {
    using Record = std::invoke_result_t<Work&, RandomStream&, std::int64_t>;
    ResultSet<Record> rs;
    rs.runs = run_indexed(plan, std::forward<Work>(work));
    rs.provenance.scenario_digest = scenario_digest;
    rs.provenance.master_seed = plan.master_seed;
    rs.provenance.n_runs = plan.n_runs;
    return rs;
}

}  // namespace tranchelab
