#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/generator/config.hpp"
#include "ttg/generator/sampler.hpp"
#include "ttg/schema/json_io.hpp"

namespace ttg {

/// Writes `n` JSON lines {request, inventory}. Sample i depends only on
/// (seed, i), so the output is identical for any `jobs`.
inline void generate_dataset(std::uint64_t n, std::uint64_t seed, GeneratorConfig config, std::ostream& out,
                             unsigned jobs = 1) {
    if (n == 0) throw Error(ErrorKind::invalid_argument, "dataset size must be at least 1", "n");
    config.rng_seed = seed;
    config.validate();
    jobs = std::max(1u, jobs);
    constexpr std::uint64_t kChunk = 256;
    std::vector<std::string> lines;
    for (std::uint64_t base = 0; base < n; base += kChunk) {
        std::uint64_t count = std::min(kChunk, n - base);
        lines.assign(count, {});
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            for (std::uint64_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    auto g = generate_instance(config, base + i);
                    lines[i] = serialize(DatasetRecord{g.request, g.inventory});
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
        work();
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        for (const auto& l : lines) out << l << '\n';
        if (!out) throw Error(ErrorKind::io_error, "write failed", "dataset");
    }
}

inline std::vector<DatasetRecord> read_dataset(std::istream& in) {
    std::vector<DatasetRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            out.push_back(parse_dataset_record(line));
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(lineno) + ": " + e.message(), e.field());
        }
    }
    return out;
}

inline std::vector<DatasetRecord> read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path, "dataset");
    return read_dataset(in);
}

struct DatasetSummary {
    std::size_t samples = 0;
    std::size_t one_way = 0;
    std::map<int, std::size_t> airline_counts;
    std::map<int, std::size_t> hotel_counts;
    std::map<int, std::size_t> city_counts;
    std::map<std::string, std::size_t> field_presence;
};

inline void add_to_summary(DatasetSummary& s, const TravelRequest& r) {
    ++s.samples;
    s.one_way += !r.is_round_trip();
    ++s.airline_counts[r.airline.count()];
    ++s.hotel_counts[r.hotel.count()];
    ++s.city_counts[r.city_count()];
    auto j = to_json(r);
    for (const char* group : {"airline_constraints", "hotel_constraints", "budget"})
        for (const auto& [k, v] : j[group].items()) ++s.field_presence[std::string(group) + "." + k];
}

inline nlohmann::json to_json(const DatasetSummary& s) {
    auto hist = [](const std::map<int, std::size_t>& m) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : m) j[std::to_string(k)] = v;
        return j;
    };
    return {{"samples", s.samples},
            {"one_way", s.one_way},
            {"airline_constraint_counts", hist(s.airline_counts)},
            {"hotel_constraint_counts", hist(s.hotel_counts)},
            {"city_counts", hist(s.city_counts)},
            {"field_presence", s.field_presence}};
}

}  // namespace ttg
