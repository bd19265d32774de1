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

#include <gtest/gtest.h>

#include <sstream>

#include "shorjit/bench.h"
#include "shorjit/circuits.h"
#include "shorjit/cli.h"
#include "shorjit/errors.h"
#include "shorjit/unroll.h"

namespace shorjit {
namespace {

// Counts with every measurement reading 1 instead of 0.
GateCounts count_with_ones(const ir::HybridProgram &p, const ir::ParamValues &params,
                           bool count_zero_angle) {
    struct V {
        GateCounts c;
        bool zeros;
        void gate(const ir::Event &e) {
            bool phase = e.gate == ir::GateKind::Phase || e.gate == ir::GateKind::CPhase ||
                         e.gate == ir::GateKind::CCPhase;
            if (phase && e.zero_angle && !zeros) {
                return;
            }
            (e.arity == 1 ? c.one_qubit : e.arity == 2 ? c.two_qubit : c.three_qubit)++;
        }
        int measure(const ir::Event &) {
            ++c.measurements;
            return 1;
        }
        void reset(const ir::Event &) {
            ++c.resets;
        }
    } v{GateCounts{}, count_zero_angle};
    v.c.count_zero_angle = count_zero_angle;
    ir::stream_unroll(p, params, v);
    return v.c;
}

TEST(Count, OptimizedIsSmallerForFifteen) {
    GateCounts base = count_gates(15, 7, 0, OptimizationFlags::beauregard());
    GateCounts opt = count_gates(15, 7, 0, OptimizationFlags::all());
    EXPECT_LT(opt.total(), base.total());
    EXPECT_EQ(base.measurements, 8u);
    EXPECT_EQ(base.resets, 8u);
}

TEST(Count, IndependentOfMeasurementOutcomes) {
    ir::HybridProgram p = circuits::build_qpe_program(5, 10);
    ir::ParamValues params =
        circuits::bind_qpe_params(p, build_plan(2, 21, 5, 10, OptimizationFlags::all()));
    GateCounts zeros = count_gates(p, params);
    EXPECT_EQ(zeros, count_with_ones(p, params, true));
    // Skipping zero angles makes the feed-forward count outcome dependent;
    // only the always-emitted total is invariant.
    CountOptions skip;
    skip.count_zero_angle = false;
    EXPECT_LE(count_gates(p, params, skip).total(), zeros.total());
}

TEST(Count, LoweringRemovesThreeQubitGates) {
    CountOptions lowered;
    lowered.lowered = true;
    GateCounts raw = count_gates(21, 5, 0, OptimizationFlags::beauregard());
    GateCounts low = count_gates(21, 5, 0, OptimizationFlags::beauregard(), lowered);
    EXPECT_EQ(low.three_qubit, 0u);
    EXPECT_GE(low.total(), raw.total());
    // Each 3-qubit gate becomes 5 gates; the CSWAPs (n per U) become 9.
    const std::uint64_t cswaps = 5 * 10;
    EXPECT_EQ(low.total(), raw.total() + 4 * (raw.three_qubit - cswaps) + 8 * cswaps);
}

TEST(Count, Deterministic) {
    EXPECT_EQ(count_gates(143, 12, 0, OptimizationFlags::all()),
              count_gates(143, 12, 0, OptimizationFlags::all()));
}

TEST(Semiprime, BalancedChoices) {
    EXPECT_EQ(balanced_semiprime(4), 15u);
    EXPECT_EQ(balanced_semiprime(5), 21u);
    EXPECT_EQ(balanced_semiprime(6), 35u);
    EXPECT_EQ(balanced_semiprime(8), 143u);
    for (unsigned n = 4; n <= 32; ++n) {
        u64 N = balanced_semiprime(n);
        EXPECT_EQ(bit_width(N), n);
        EXPECT_FALSE(is_prime(N));
        EXPECT_EQ(N % 2, 1u);
    }
    EXPECT_THROW(balanced_semiprime(3), InvalidArgument);
}

TEST(Construction, NodeCountIsConstant) {
    auto records = bench_construction({8, 16, 32}, 1, 0, 0.0);
    ASSERT_EQ(records.size(), 3u);
    for (const BenchRecord &r : records) {
        EXPECT_EQ(r.node_count, records[0].node_count);
        EXPECT_GT(r.construction_time_s, 0.0);
    }
}

TEST(Ratio, RecordsAndSummary) {
    RatioOptions options;
    options.samples = 3;
    options.seed = 5;
    auto records = bench_ratio({5, 6}, options);
    // a = 2 plus three random bases, each with a baseline and an optimized row.
    ASSERT_EQ(records.size(), 2u * 2u * 4u);
    for (const BenchRecord &r : records) {
        ASSERT_TRUE(r.counts && r.N && r.a && r.reduction_ratio);
        EXPECT_EQ(gcd(*r.a, *r.N), 1u);
    }
    auto summary = summarize_ratio(records);
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[0].N, 21u);
    EXPECT_EQ(summary[0].random_samples, 3u);
    // Threads do not change the results.
    options.threads = 3;
    auto threaded = bench_ratio({5, 6}, options);
    ASSERT_EQ(threaded.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(threaded[i].a, records[i].a);
        EXPECT_EQ(threaded[i].counts, records[i].counts);
        EXPECT_EQ(threaded[i].reduction_ratio, records[i].reduction_ratio);
    }
}

TEST(Csv, RoundTrip) {
    RatioOptions options;
    options.samples = 2;
    auto records = bench_ratio({4, 5}, options);
    auto construction = bench_construction({4}, 1, 0, 0.0);
    records.insert(records.end(), construction.begin(), construction.end());
    BenchMetadata meta = current_metadata();
    std::stringstream csv;
    write_csv(csv, records, &meta);
    std::stringstream in(csv.str());
    auto parsed = parse_csv(in);
    ASSERT_EQ(parsed.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        // Measurements and resets are not CSV columns.
        if (records[i].counts) {
            records[i].counts->measurements = 0;
            records[i].counts->resets = 0;
        }
        EXPECT_EQ(parsed[i], records[i]) << i;
    }
    std::stringstream again;
    write_csv(again, parsed, &meta);
    EXPECT_EQ(again.str(), csv.str());
}

TEST(Csv, RejectsBadInput) {
    std::stringstream bad_header("n,N\n1,2\n");
    EXPECT_THROW(parse_csv(bad_header), InvalidArgument);
    std::stringstream bad_total(
        "n,N,a,flags,construction_time_s,node_count,g1,g2,g3,total,reduction_ratio\n"
        "4,15,2,powers,0.1,109,1,2,3,7,0\n");
    EXPECT_THROW(parse_csv(bad_total), InvalidArgument);
}

int cli(std::vector<std::string> args, std::string *out_text = nullptr,
        std::string *err_text = nullptr) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    if (out_text) {
        *out_text = out.str();
    }
    if (err_text) {
        *err_text = err.str();
    }
    return code;
}

TEST(Cli, FactorFifteen) {
    std::string out;
    EXPECT_EQ(cli({"factor", "15", "--seed", "1"}, &out), 0);
    EXPECT_EQ(out, "p=3 q=5\n");
}

TEST(Cli, FactorJson) {
    std::string out;
    EXPECT_EQ(cli({"factor", "21", "--seed", "2", "--json"}, &out), 0);
    auto j = nlohmann::json::parse(out);
    EXPECT_EQ(j["p"], 3);
    EXPECT_EQ(j["q"], 7);
}

TEST(Cli, UsageErrors) {
    std::string err;
    EXPECT_EQ(cli({"factor", "16"}, nullptr, &err), 2);
    EXPECT_NE(err.find("odd"), std::string::npos);
    EXPECT_EQ(cli({"factor", "13"}), 2);
    EXPECT_EQ(cli({"factor", "9"}), 2);
    EXPECT_EQ(cli({"factor", "15", "--opt", "bogus"}), 2);
    EXPECT_EQ(cli({"nonsense"}), 2);
    EXPECT_EQ(cli({}), 2);
    EXPECT_EQ(cli({"count", "15", "5"}), 2);
    EXPECT_EQ(cli({"bench", "ratio", "--bits", "9..4"}), 2);
}

TEST(Cli, CapacityErrorPointsAtCount) {
    std::string err;
    EXPECT_EQ(cli({"factor", "323", "--max-attempts", "1"}, nullptr, &err), 2);
    EXPECT_NE(err.find("count"), std::string::npos);
}

TEST(Cli, FactoringFailureExitCode) {
    std::string out;
    // One attempt at N = 21 with seed 3 draws a base that does not split it.
    int code = cli({"factor", "21", "--seed", "3", "--max-attempts", "1", "--json"}, &out);
    auto j = nlohmann::json::parse(out);
    EXPECT_EQ(code, j["success"].get<bool>() ? 0 : 1);
}

TEST(Cli, CountNoneVersusAll) {
    auto total = [](const std::string &text) {
        auto pos = text.find("total=");
        return std::stoull(text.substr(pos + 6));
    };
    std::string none, all;
    ASSERT_EQ(cli({"count", "15", "7", "--opt", "none"}, &none), 0);
    ASSERT_EQ(cli({"count", "15", "7", "--opt", "all"}, &all), 0);
    EXPECT_LT(total(all), total(none));
    std::string lowered;
    ASSERT_EQ(cli({"count", "15", "7", "--lowered", "--no-count-zero-angle"}, &lowered), 0);
    EXPECT_NE(lowered.find("g3=0 "), std::string::npos);
}

TEST(Cli, BenchCompileHasEqualNodeCounts) {
    std::string out;
    ASSERT_EQ(cli({"bench", "compile", "--bits", "8,16", "--reps", "1"}, &out), 0);
    std::stringstream in(out);
    auto records = parse_csv(in);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].node_count, records[1].node_count);
}

TEST(Cli, BenchRatioCsv) {
    std::string out;
    ASSERT_EQ(cli({"bench", "ratio", "--bits", "4..5", "--samples", "2"}, &out), 0);
    std::stringstream in(out);
    EXPECT_EQ(parse_csv(in).size(), 2u * 2u * 3u);
}

TEST(Cli, DumpIr) {
    std::string out;
    ASSERT_EQ(cli({"dump-ir", "--bits", "4"}, &out), 0);
    EXPECT_EQ(out.rfind("program bit_width=4 qubits=11", 0), 0u);
}

TEST(Cli, BitWidthLists) {
    EXPECT_EQ(parse_bit_widths("8,16,32"), (std::vector<unsigned>{8, 16, 32}));
    EXPECT_EQ(parse_bit_widths("4..6,9"), (std::vector<unsigned>{4, 5, 6, 9}));
    EXPECT_THROW(parse_bit_widths("x"), InvalidArgument);
    EXPECT_THROW(parse_bit_widths(""), InvalidArgument);
}

}  // namespace
}  // namespace shorjit
