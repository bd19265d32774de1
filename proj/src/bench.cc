// Copyright 2026 The Shorjit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shorjit/bench.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "shorjit/circuits.h"
#include "shorjit/driver.h"
#include "shorjit/errors.h"
#include "shorjit/rng.h"
#include "shorjit/unroll.h"

#ifndef SHORJIT_BUILD_PROFILE
#define SHORJIT_BUILD_PROFILE "unknown"
#endif

namespace shorjit {

namespace {

class Counter {
   public:
    explicit Counter(const CountOptions &options) : options_(options) {
        counts_.count_zero_angle = options.count_zero_angle;
    }

    void gate(const ir::Event &e) {
        using ir::GateKind;
        const bool phase =
            e.gate == GateKind::Phase || e.gate == GateKind::CPhase || e.gate == GateKind::CCPhase;
        if (phase && e.zero_angle && !options_.count_zero_angle) {
            return;
        }
        if (options_.lowered && e.gate == GateKind::CCPhase) {
            counts_.two_qubit += 5;
            return;
        }
        if (options_.lowered && e.gate == GateKind::CSwap) {
            counts_.one_qubit += 2;
            counts_.two_qubit += 7;
            return;
        }
        switch (e.arity) {
            case 1:
                ++counts_.one_qubit;
                break;
            case 2:
                ++counts_.two_qubit;
                break;
            default:
                ++counts_.three_qubit;
                break;
        }
    }
    int measure(const ir::Event &) {
        ++counts_.measurements;
        return 0;
    }
    void reset(const ir::Event &) {
        ++counts_.resets;
    }

    const GateCounts &counts() const {
        return counts_;
    }

   private:
    CountOptions options_;
    GateCounts counts_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<u64> draw_bases(u64 N, unsigned samples, Rng &rng) {
    std::vector<u64> pool;
    for (u64 a = 3; a + 2 <= N; ++a) {
        if (gcd(a, N) == 1) {
            pool.push_back(a);
        }
    }
    if (pool.size() <= samples) {
        return pool;
    }
    std::vector<u64> picked;
    std::set<u64> seen;
    while (picked.size() < samples) {
        u64 a = rng.uniform_int(3, N - 2);
        if (gcd(a, N) == 1 && seen.insert(a).second) {
            picked.push_back(a);
        }
    }
    return picked;
}

}  // namespace

GateCounts count_gates(const ir::HybridProgram &program, const ir::ParamValues &params,
                       const CountOptions &options) {
    Counter counter(options);
    ir::stream_unroll(program, params, counter);
    return counter.counts();
}

GateCounts count_gates(u64 N, u64 a, unsigned t, OptimizationFlags flags,
                       const CountOptions &options) {
    const unsigned n = bit_width(N);
    if (t == 0) {
        t = 2 * n;
    }
    ir::HybridProgram program = circuits::build_qpe_program(n, t);
    ElisionPlan plan = build_plan(a, N, n, t, flags);
    return count_gates(program, circuits::bind_qpe_params(program, plan), options);
}

u64 balanced_semiprime(unsigned n) {
    if (n < 4 || n > 62) {
        throw InvalidArgument("balanced_semiprime: n must be in [4, 62]");
    }
    const u64 lo = u64{1} << (n - 1);
    const u64 hi = (u64{1} << n) - 1;
    u64 best = 0;
    u64 best_p = 0;
    u64 best_q = 0;
    for (u64 p = 3; p * p < hi; p += 2) {
        if (!is_prime(p)) {
            continue;
        }
        // Smallest prime q > p with p*q inside the bit range gives this p's
        // best ratio.
        u64 q = std::max(p + 2, (lo + p - 1) / p) | 1;
        while (q <= hi / p && !is_prime(q)) {
            q += 2;
        }
        if (q > hi / p) {
            continue;
        }
        // q/p < best_q/best_p, cross-multiplied; equal ratios prefer larger N.
        const u128 lhs = u128{q} * best_p;
        const u128 rhs = u128{best_q} * p;
        if (best == 0 || lhs < rhs || (lhs == rhs && p * q > best)) {
            best = p * q;
            best_p = p;
            best_q = q;
        }
    }
    if (best == 0) {
        throw InvalidArgument("no odd semiprime with " + std::to_string(n) + " bits");
    }
    return best;
}

BenchMetadata current_metadata() {
    BenchMetadata meta;
    char host[256] = {};
    if (gethostname(host, sizeof host - 1) == 0) {
        meta.host = host;
    }
    meta.build_profile = SHORJIT_BUILD_PROFILE;
    return meta;
}

std::vector<BenchRecord> bench_construction(const std::vector<unsigned> &bit_widths,
                                            unsigned repetitions, unsigned t,
                                            double min_batch_s) {
    if (repetitions < 1) {
        throw InvalidArgument("bench_construction: repetitions must be at least 1");
    }
    if (!bit_widths.empty()) {
        unsigned n = bit_widths.front();
        (void)circuits::build_qpe_program(n, t ? t : 2 * n);
    }
    std::vector<BenchRecord> out;
    for (unsigned n : bit_widths) {
        const unsigned rounds = t ? t : 2 * n;
        BenchRecord record;
        record.n = n;
        double sum = 0.0;
        for (unsigned rep = 0; rep < repetitions; ++rep) {
            std::size_t builds = 0;
            auto start = Clock::now();
            double elapsed = 0.0;
            do {
                ir::HybridProgram program = circuits::build_qpe_program(n, rounds);
                record.node_count = ir::node_count(program);
                ++builds;
                elapsed = seconds_since(start);
            } while (elapsed < min_batch_s);
            sum += elapsed / static_cast<double>(builds);
        }
        record.construction_time_s = sum / repetitions;
        out.push_back(record);
    }
    return out;
}

std::vector<BenchRecord> bench_ratio(const std::vector<unsigned> &bit_widths,
                                     const RatioOptions &options) {
    struct Cell {
        unsigned n;
        u64 N;
        u64 a;
        unsigned t;
    };
    std::vector<Cell> cells;
    for (unsigned n : bit_widths) {
        const u64 N = balanced_semiprime(n);
        const unsigned t = options.t ? options.t : 2 * n;
        Rng rng(options.seed, n);
        cells.push_back({n, N, 2, t});
        for (u64 a : draw_bases(N, options.samples, rng)) {
            cells.push_back({n, N, a, t});
        }
    }

    ProgramCache cache;
    std::vector<BenchRecord> out(2 * cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell &cell = cells[i];
            ProgramCache::Entry entry = cache.get(cell.n, cell.t);
            const ir::HybridProgram &program = *entry.program;
            BenchRecord base;
            base.n = cell.n;
            base.N = cell.N;
            base.a = cell.a;
            base.construction_time_s = entry.construction_time.count();
            base.node_count = ir::node_count(program);
            BenchRecord opt = base;
            base.flags = options.baseline;
            opt.flags = options.optimized;
            for (BenchRecord *r : {&base, &opt}) {
                ElisionPlan plan = build_plan(cell.a, cell.N, cell.n, cell.t, r->flags);
                r->counts =
                    count_gates(program, circuits::bind_qpe_params(program, plan), options.counting);
            }
            base.reduction_ratio = 0.0;
            opt.reduction_ratio = 1.0 - static_cast<double>(opt.counts->total()) /
                                            static_cast<double>(base.counts->total());
            out[2 * i] = base;
            out[2 * i + 1] = opt;
        }
    };
    const unsigned threads = std::max(1u, options.threads);
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (std::thread &th : pool) {
        th.join();
    }
    return out;
}

std::vector<RatioSummary> summarize_ratio(const std::vector<BenchRecord> &records,
                                          const OptimizationFlags &optimized) {
    std::map<unsigned, RatioSummary> by_n;
    for (const BenchRecord &r : records) {
        if (!(r.flags == optimized) || !r.reduction_ratio || !r.a || !r.N) {
            continue;
        }
        RatioSummary &s = by_n[r.n];
        s.n = r.n;
        s.N = *r.N;
        if (*r.a == 2) {
            s.fixed_a2 = *r.reduction_ratio;
        } else {
            s.random_mean += *r.reduction_ratio;
            ++s.random_samples;
        }
    }
    std::vector<RatioSummary> out;
    for (auto &[n, s] : by_n) {
        if (s.random_samples) {
            s.random_mean /= static_cast<double>(s.random_samples);
        }
        out.push_back(s);
    }
    return out;
}

namespace {

constexpr const char *kHeader =
    "n,N,a,flags,construction_time_s,node_count,g1,g2,g3,total,reduction_ratio";

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string optional_field(const std::optional<T> &v) {
    if (!v) {
        return "";
    }
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(*v);
    } else {
        return std::to_string(*v);
    }
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

u64 parse_u64(const std::string &s, const char *what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-') {
        throw InvalidArgument(std::string("bad ") + what + " field '" + s + "'");
    }
    return v;
}

double parse_double(const std::string &s, const char *what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw InvalidArgument(std::string("bad ") + what + " field '" + s + "'");
    }
    return v;
}

}  // namespace

void write_csv(std::ostream &out, const std::vector<BenchRecord> &records,
               const BenchMetadata *metadata) {
    if (metadata) {
        out << "# host=" << metadata->host << " build=" << metadata->build_profile
            << " repetitions=" << metadata->repetitions << " samples=" << metadata->samples
            << " seed=" << metadata->seed << '\n';
    }
    out << kHeader << '\n';
    for (const BenchRecord &r : records) {
        out << r.n << ',' << optional_field(r.N) << ',' << optional_field(r.a) << ','
            << r.flags.to_string() << ',' << format_double(r.construction_time_s) << ','
            << r.node_count << ',';
        if (r.counts) {
            out << r.counts->one_qubit << ',' << r.counts->two_qubit << ','
                << r.counts->three_qubit << ',' << r.counts->total() << ',';
        } else {
            out << ",,,,";
        }
        out << optional_field(r.reduction_ratio) << '\n';
    }
}

std::vector<BenchRecord> parse_csv(std::istream &in) {
    std::vector<BenchRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != kHeader) {
                throw InvalidArgument("unexpected CSV header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 11) {
            throw InvalidArgument("expected 11 fields, got " + std::to_string(f.size()) +
                                  " in '" + line + "'");
        }
        BenchRecord r;
        r.n = static_cast<unsigned>(parse_u64(f[0], "n"));
        if (!f[1].empty()) {
            r.N = parse_u64(f[1], "N");
        }
        if (!f[2].empty()) {
            r.a = parse_u64(f[2], "a");
        }
        r.flags = OptimizationFlags::parse(f[3]);
        r.construction_time_s = parse_double(f[4], "construction_time_s");
        r.node_count = parse_u64(f[5], "node_count");
        const bool any_count = !f[6].empty() || !f[7].empty() || !f[8].empty() || !f[9].empty();
        if (any_count) {
            GateCounts c;
            c.one_qubit = parse_u64(f[6], "g1");
            c.two_qubit = parse_u64(f[7], "g2");
            c.three_qubit = parse_u64(f[8], "g3");
            if (c.total() != parse_u64(f[9], "total")) {
                throw InvalidArgument("total does not match g1+g2+g3 in '" + line + "'");
            }
            r.counts = c;
        }
        if (!f[10].empty()) {
            r.reduction_ratio = parse_double(f[10], "reduction_ratio");
        }
        records.push_back(r);
    }
    if (!header_seen) {
        throw InvalidArgument("CSV has no header");
    }
    return records;
}

void to_json(nlohmann::json &j, const GateCounts &counts) {
    j = nlohmann::json{{"g1", counts.one_qubit},
                       {"g2", counts.two_qubit},
                       {"g3", counts.three_qubit},
                       {"total", counts.total()},
                       {"measurements", counts.measurements},
                       {"resets", counts.resets},
                       {"count_zero_angle", counts.count_zero_angle}};
}

void to_json(nlohmann::json &j, const BenchRecord &r) {
    j = nlohmann::json{{"n", r.n},
                       {"flags", r.flags.to_string()},
                       {"construction_time_s", r.construction_time_s},
                       {"node_count", r.node_count}};
    j["N"] = r.N ? nlohmann::json(*r.N) : nlohmann::json(nullptr);
    j["a"] = r.a ? nlohmann::json(*r.a) : nlohmann::json(nullptr);
    for (const char *key : {"g1", "g2", "g3", "total"}) {
        j[key] = nullptr;
    }
    if (r.counts) {
        j["g1"] = r.counts->one_qubit;
        j["g2"] = r.counts->two_qubit;
        j["g3"] = r.counts->three_qubit;
        j["total"] = r.counts->total();
    }
    j["reduction_ratio"] =
        r.reduction_ratio ? nlohmann::json(*r.reduction_ratio) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json &j, const BenchMetadata &m) {
    j = nlohmann::json{{"host", m.host},
                       {"build_profile", m.build_profile},
                       {"repetitions", m.repetitions},
                       {"samples", m.samples},
                       {"seed", m.seed}};
}

}  // namespace shorjit
