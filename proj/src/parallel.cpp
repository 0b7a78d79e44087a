#include "monotone_mas/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace mas {

std::size_t worker_count() {
    if (const char* env = std::getenv("MONOTONE_MAS_THREADS")) {
        try {
            const unsigned long v = std::stoul(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
            // unparsable values fall back to auto
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, count);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t block = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(count, begin + block);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w]) std::rethrow_exception(errors[w]);  // blocks are index-ordered
    }
}

}  // namespace mas
