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

#include "shorjit/cli.h"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shorjit/bench.h"
#include "shorjit/circuits.h"
#include "shorjit/driver.h"
#include "shorjit/errors.h"

namespace shorjit {

namespace {

unsigned parse_unsigned(const std::string &s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-') {
        throw InvalidArgument("bad bit width '" + s + "'");
    }
    return static_cast<unsigned>(v);
}

// A usage problem found after parsing; reported like a parse error.
struct UsageError : Error {
    using Error::Error;
};

OptimizationFlags parse_flags(const std::string &text) {
    try {
        return OptimizationFlags::parse(text);
    } catch (const InvalidArgument &e) {
        throw UsageError(e.what());
    }
}

std::ostream *open_output(const std::string &path, std::ofstream &file, std::ostream &fallback) {
    if (path.empty() || path == "-") {
        return &fallback;
    }
    file.open(path);
    if (!file) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    return &file;
}

void print_counts(std::ostream &out, const GateCounts &c) {
    out << "g1=" << c.one_qubit << " g2=" << c.two_qubit << " g3=" << c.three_qubit
        << " total=" << c.total() << " measurements=" << c.measurements
        << " resets=" << c.resets << '\n';
}

}  // namespace

std::vector<unsigned> parse_bit_widths(const std::string &text) {
    std::vector<unsigned> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_unsigned(item));
            continue;
        }
        unsigned lo = parse_unsigned(item.substr(0, dots));
        unsigned hi = parse_unsigned(item.substr(dots + 2));
        if (lo > hi) {
            throw InvalidArgument("empty bit-width range '" + item + "'");
        }
        for (unsigned n = lo; n <= hi; ++n) {
            out.push_back(n);
        }
    }
    if (out.empty()) {
        throw InvalidArgument("no bit widths given");
    }
    return out;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Order-finding compiler, simulator and benchmark harness", "shorjit"};
    app.require_subcommand(1);

    // factor
    auto *factor = app.add_subcommand("factor", "Factor N by simulating order finding");
    std::uint64_t factor_n = 0;
    std::uint64_t seed = 0;
    unsigned t = 0;
    std::string opt = "all";
    unsigned max_attempts = 32;
    unsigned max_qubits = SimulatorConfig{}.max_qubits;
    bool json = false;
    factor->add_option("N", factor_n, "Odd composite to factor")->required();
    factor->add_option("--seed", seed, "Seed for a and for measurement sampling");
    factor->add_option("--t", t, "Phase estimation rounds (default 2n)");
    factor->add_option("--opt", opt, "all, none, naive, or a list of powers,first-add,or-mask,overflow");
    factor->add_option("--max-attempts", max_attempts, "Attempts before giving up")
        ->check(CLI::PositiveNumber);
    factor->add_option("--max-qubits", max_qubits, "Simulator capacity");
    factor->add_flag("--json", json, "Print the result and trace as JSON");

    // count
    auto *count = app.add_subcommand("count", "Count the gates of one (N, a) instance");
    std::uint64_t count_n = 0;
    std::uint64_t count_a = 0;
    bool lowered = false;
    bool count_zero = true;
    count->add_option("N", count_n, "Modulus")->required();
    count->add_option("a", count_a, "Base, coprime to N")->required();
    count->add_option("--t", t, "Phase estimation rounds (default 2n)");
    count->add_option("--opt", opt, "all, none, naive, or a flag list");
    count->add_flag("--lowered", lowered, "Expand 3-qubit gates into 1- and 2-qubit gates");
    count->add_flag("--count-zero-angle,!--no-count-zero-angle", count_zero,
                    "Count phase gates whose angle is exactly zero (default on)");
    count->add_flag("--json", json, "Print counts as JSON");

    // bench
    auto *bench = app.add_subcommand("bench", "Benchmarks");
    bench->require_subcommand(1);
    std::string bits = "8,16,32";
    unsigned reps = 3;
    std::string csv_path;
    auto *compile = bench->add_subcommand("compile", "Construction time and IR size per bit width");
    compile->add_option("--bits", bits, "Bit widths, e.g. 8,16,32 or 4..16");
    compile->add_option("--reps", reps, "Timed repetitions per bit width")
        ->check(CLI::PositiveNumber);
    compile->add_option("--t", t, "Phase estimation rounds (default 2n)");
    compile->add_option("--csv", csv_path, "Write CSV here instead of stdout");
    compile->add_flag("--json", json, "Print JSON instead of CSV");

    auto *ratio = bench->add_subcommand("ratio", "Gate-count reduction of the optimizations");
    unsigned samples = 10;
    unsigned threads = 1;
    std::string ratio_bits = "4..16";
    ratio->add_option("--bits", ratio_bits, "Bit widths, e.g. 4..16");
    ratio->add_option("--samples", samples, "Random a per bit width");
    ratio->add_option("--seed", seed, "Seed for drawing a");
    ratio->add_option("--t", t, "Phase estimation rounds (default 2n)");
    ratio->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    ratio->add_flag("--lowered", lowered, "Count after 3-qubit lowering");
    ratio->add_flag("--count-zero-angle,!--no-count-zero-angle", count_zero,
                    "Count phase gates whose angle is exactly zero (default on)");
    ratio->add_option("--csv", csv_path, "Write CSV here instead of stdout");
    ratio->add_flag("--json", json, "Print JSON instead of CSV");

    // dump-ir
    auto *dump_ir = app.add_subcommand("dump-ir", "Print the text form of the QPE program");
    unsigned dump_bits = 0;
    dump_ir->add_option("--bits", dump_bits, "Bit width n")->required()->check(CLI::PositiveNumber);
    dump_ir->add_option("--t", t, "Phase estimation rounds (default 2n)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitSuccess;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        if (app.get_subcommands().empty()) {
            err << app.help();
        }
        return kExitUsage;
    }

    try {
        if (factor->parsed()) {
            if (factor_n < 15 || factor_n % 2 == 0 || is_prime(factor_n) ||
                is_prime_power(factor_n)) {
                throw UsageError("N must be an odd composite >= 15 that is not a prime power");
            }
            ShorOptions options;
            options.seed = seed;
            options.t = t;
            options.flags = parse_flags(opt);
            options.max_attempts = max_attempts;
            options.simulator.max_qubits = max_qubits;
            FactoringResult result;
            try {
                result = shors_algorithm(factor_n, options);
            } catch (const CapacityError &e) {
                err << "error: " << e.what()
                    << "\nN is too large to simulate; use 'shorjit count' for gate counts\n";
                return kExitUsage;
            }
            if (json) {
                out << nlohmann::json(result).dump(2) << '\n';
            } else if (result.success) {
                out << "p=" << result.p << " q=" << result.q << '\n';
            } else {
                out << "failed after " << result.attempts.size() << " attempts\n";
            }
            return result.success ? kExitSuccess : kExitFactoringFailed;
        }

        if (count->parsed()) {
            if (count_n < 3 || count_a < 2 || count_a >= count_n || gcd(count_a, count_n) != 1) {
                throw UsageError("need 2 <= a < N with gcd(a, N) = 1");
            }
            CountOptions counting{lowered, count_zero};
            GateCounts c = count_gates(count_n, count_a, t, parse_flags(opt), counting);
            if (json) {
                nlohmann::json j = c;
                j["N"] = count_n;
                j["a"] = count_a;
                j["flags"] = parse_flags(opt).to_string();
                j["lowered"] = lowered;
                out << j.dump(2) << '\n';
            } else {
                print_counts(out, c);
            }
            return kExitSuccess;
        }

        if (compile->parsed() || ratio->parsed()) {
            std::vector<unsigned> widths;
            try {
                widths = parse_bit_widths(compile->parsed() ? bits : ratio_bits);
            } catch (const InvalidArgument &e) {
                throw UsageError(e.what());
            }
            BenchMetadata meta = current_metadata();
            std::vector<BenchRecord> records;
            if (compile->parsed()) {
                meta.repetitions = reps;
                records = bench_construction(widths, reps, t);
            } else {
                RatioOptions options;
                options.samples = samples;
                options.seed = seed;
                options.t = t;
                options.threads = threads;
                options.counting = CountOptions{lowered, count_zero};
                meta.samples = samples;
                meta.seed = seed;
                try {
                    records = bench_ratio(widths, options);
                } catch (const InvalidArgument &e) {
                    throw UsageError(e.what());
                }
            }
            std::ofstream file;
            std::ostream *sink = open_output(csv_path, file, out);
            if (json) {
                nlohmann::json j{{"metadata", meta}, {"records", records}};
                *sink << j.dump(2) << '\n';
            } else {
                write_csv(*sink, records, &meta);
            }
            return kExitSuccess;
        }

        if (dump_ir->parsed()) {
            out << ir::dump(circuits::build_qpe_program(dump_bits, t ? t : 2 * dump_bits));
            return kExitSuccess;
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace shorjit
