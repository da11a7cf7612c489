#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace xgram {

/// Worker count used when callers pass 0.
unsigned default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work items
/// are claimed dynamically, so body must write only to slot i of its output.
/// Exceptions thrown by body are rethrown on the calling thread (the one for
/// the lowest failing index wins).
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// Pairwise (tree) summation; the association order depends only on
/// values.size().
double pairwise_sum(std::span<const double> values);

/**
 * Accumulates per-replicate vectors into a mean and a pointwise standard
 * error. Replicates are grouped into fixed chunks of `kChunk` consecutive
 * indices; each chunk is summed serially and the chunk sums are combined
 * pairwise, so the result does not depend on the number of workers.
 */
class ReplicateAccumulator {
public:
    static constexpr std::size_t kChunk = 64;

    ReplicateAccumulator(std::size_t replicates, std::size_t width);

    /// Add the curve of `replicate`; safe to call concurrently for replicates
    /// in different chunks, and must be called in increasing replicate order
    /// within a chunk.
    void add(std::size_t replicate, std::span<const double> values);

    std::vector<double> mean() const;
    std::vector<double> standard_error() const;
    std::size_t replicates() const { return replicates_; }

private:
    std::vector<double> combine(const std::vector<std::vector<double>>& parts) const;

    std::size_t replicates_;
    std::size_t width_;
    std::vector<std::vector<double>> sums_;
    std::vector<std::vector<double>> squares_;
};

/// Runs replicates in chunk order with each chunk processed by one worker;
/// body(r) is invoked for increasing r within a chunk.
void parallel_chunks(std::size_t count, std::size_t chunk, unsigned workers,
                     const std::function<void(std::size_t)>& body);

}  // namespace xgram
