#include "xgram/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace xgram {

unsigned default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers == 0) {
        workers = default_workers();
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

void parallel_chunks(std::size_t count, std::size_t chunk, unsigned workers,
                     const std::function<void(std::size_t)>& body) {
    const std::size_t chunks = (count + chunk - 1) / chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t end = std::min(count, (c + 1) * chunk);
        for (std::size_t r = c * chunk; r < end; ++r) {
            body(r);
        }
    });
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ReplicateAccumulator::ReplicateAccumulator(std::size_t replicates, std::size_t width)
    : replicates_(replicates),
      width_(width),
      sums_((replicates + kChunk - 1) / kChunk, std::vector<double>(width, 0.0)),
      squares_((replicates + kChunk - 1) / kChunk, std::vector<double>(width, 0.0)) {}

void ReplicateAccumulator::add(std::size_t replicate, std::span<const double> values) {
    auto& sum = sums_[replicate / kChunk];
    auto& sq = squares_[replicate / kChunk];
    for (std::size_t k = 0; k < width_; ++k) {
        sum[k] += values[k];
        sq[k] += values[k] * values[k];
    }
}

std::vector<double> ReplicateAccumulator::combine(const std::vector<std::vector<double>>& parts) const {
    std::vector<double> out(width_);
    std::vector<double> column(parts.size());
    for (std::size_t k = 0; k < width_; ++k) {
        for (std::size_t c = 0; c < parts.size(); ++c) {
            column[c] = parts[c][k];
        }
        out[k] = pairwise_sum(column);
    }
    return out;
}

std::vector<double> ReplicateAccumulator::mean() const {
    auto out = combine(sums_);
    for (double& v : out) {
        v /= static_cast<double>(replicates_);
    }
    return out;
}

std::vector<double> ReplicateAccumulator::standard_error() const {
    const auto total = combine(sums_);
    const auto squares = combine(squares_);
    const double r = static_cast<double>(replicates_);
    std::vector<double> out(width_, 0.0);
    if (replicates_ < 2) {
        return out;
    }
    for (std::size_t k = 0; k < width_; ++k) {
        const double mean = total[k] / r;
        const double var = std::max(0.0, (squares[k] - r * mean * mean) / (r - 1.0));
        out[k] = std::sqrt(var / r);
    }
    return out;
}

}  // namespace xgram
