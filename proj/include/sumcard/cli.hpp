#pragma once
// Command-line surface: summary construction, estimation, exact counting,
// benchmarking, and bound validation. Commands are plain functions over a
// parsed option set so tests can drive them in-process; exit codes are part
// of the contract.

#include "sumcard/estimator.hpp"
#include "sumcard/eval.hpp"
#include "sumcard/ntriples.hpp"
#include "sumcard/oracle.hpp"
#include "sumcard/query.hpp"
#include "sumcard/refine.hpp"
#include "sumcard/resource_types.hpp"
#include "sumcard/summary.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace sumcard::cli {

struct ExitCode {
    enum : int {
        Ok = 0,
        Failure = 1,
        Parse = 2,
        InconsistentSummary = 3,
        UnknownResource = 4,
        CapExceeded = 5,
        BoundInapplicable = 6,
        Usage = 7,
    };
};

struct Options {
    // inputs
    std::string input;        // N-Triples file
    std::string summary;      // SUMRDF file
    std::string query;        // .cq file
    std::string queries_dir;  // directory of .cq files
    std::string output;       // command-specific output path
    std::string config_file;
    std::string plot_data;    // bench: histogram-binned q-error file

    // tunables (flag > config file > default)
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> target;
    std::optional<std::uint32_t> minhash_m, minhash_n;
    std::optional<std::uint32_t> histogram_buckets;
    std::optional<bool> auto_histogram;
    std::optional<std::string> partitioner;  // single | label-propagation | file
    std::optional<std::string> partition_file;
    std::optional<std::uint64_t> answer_cap;
    std::optional<int> atom_cap;
    std::optional<unsigned> threads;

    bool want_variance = false;
    bool want_timings = false;  // wall-clock columns break byte-stable reports
    std::optional<double> bound_eps;
    bool exact_mode = false;
    std::uint64_t samples = 10'000;
    double validate_eps = 10.0;

    // resolved view after merging the config file
    std::uint64_t r_seed = 0;
    std::uint64_t r_target = 30'000;
    std::uint32_t r_m = 20, r_n = 2;
    std::uint32_t r_hist = 1;
    bool r_auto_hist = false;
    std::string r_partitioner = "single";
    std::string r_partition_file;
    std::uint64_t r_answer_cap = 50'000'000;
    int r_atom_cap = PartitionBase::kDefaultAtomCap;
    unsigned r_threads = 0;

    void resolve() {
        std::map<std::string, std::string> file_values;
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw std::runtime_error("cannot open config " + config_file);
            std::string line;
            while (std::getline(in, line)) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                auto trim = [](std::string v) {
                    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.erase(0, 1);
                    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
                        v.pop_back();
                    return v;
                };
                file_values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
            }
        }
        auto pick_u64 = [&](const std::optional<std::uint64_t>& flag, const char* key,
                            std::uint64_t fallback) -> std::uint64_t {
            if (flag) return *flag;
            auto it = file_values.find(key);
            return it == file_values.end() ? fallback
                                           : static_cast<std::uint64_t>(std::stoull(it->second));
        };
        auto pick_u32 = [&](const std::optional<std::uint32_t>& flag, const char* key,
                            std::uint32_t fallback) -> std::uint32_t {
            if (flag) return *flag;
            auto it = file_values.find(key);
            return it == file_values.end() ? fallback
                                           : static_cast<std::uint32_t>(std::stoul(it->second));
        };
        auto pick_str = [&](const std::optional<std::string>& flag, const char* key,
                            std::string fallback) -> std::string {
            if (flag) return *flag;
            auto it = file_values.find(key);
            return it == file_values.end() ? fallback : it->second;
        };
        r_seed = pick_u64(seed, "seed", 0);
        r_target = pick_u64(target, "target", 30'000);
        r_m = pick_u32(minhash_m, "minhash_m", 20);
        r_n = pick_u32(minhash_n, "minhash_n", 2);
        r_hist = pick_u32(histogram_buckets, "histogram_buckets", 1);
        if (auto_histogram) {
            r_auto_hist = *auto_histogram;
        } else if (auto it = file_values.find("auto_histogram"); it != file_values.end()) {
            r_auto_hist = it->second == "true" || it->second == "1";
        }
        r_partitioner = pick_str(partitioner, "partitioner", "single");
        r_partition_file = pick_str(partition_file, "partition_file", "");
        r_answer_cap = pick_u64(answer_cap, "answer_cap", 50'000'000);
        r_atom_cap = atom_cap ? *atom_cap
                              : (file_values.count("atom_cap")
                                     ? std::stoi(file_values.at("atom_cap"))
                                     : PartitionBase::kDefaultAtomCap);
        if (threads) {
            r_threads = *threads;
        } else if (auto it = file_values.find("threads"); it != file_values.end()) {
            r_threads = static_cast<unsigned>(std::stoul(it->second));
        }
        if (r_threads == 0) r_threads = std::max(1u, std::thread::hardware_concurrency());
    }

    EstimatorOptions estimator_options() const {
        EstimatorOptions o;
        o.mode = exact_mode ? ArithmeticMode::Exact : ArithmeticMode::Floating;
        o.atom_cap = r_atom_cap;
        o.answer_cap = r_answer_cap;
        return o;
    }
};

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string quoted = "\"";
    for (char c : raw) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
}

inline PartitionAssignment make_partition(const Options& opt, const RdfGraph& g,
                                          Dictionary& dict) {
    if (opt.r_partitioner == "single") return single_partition();
    if (opt.r_partitioner == "label-propagation") {
        return apply_cut_fallback(g, label_propagation_partition(g, opt.r_seed));
    }
    if (opt.r_partitioner == "file") {
        if (opt.r_partition_file.empty())
            throw std::invalid_argument("partitioner=file requires partition_file");
        return apply_cut_fallback(g, load_partition_file(opt.r_partition_file, dict));
    }
    throw std::invalid_argument("unknown partitioner: " + opt.r_partitioner);
}

inline ResourceId rdf_type_of(const Dictionary& dict) {
    auto id = dict.find(kRdfType);
    return id ? *id : kNoResource;
}

}  // namespace detail

// Builds the typed summary and refines it when above target; writes SUMRDF.
inline int cmd_summarize(const Options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g = load_ntriples_file(opt.input, dict);
    ResourceId rdf_type = detail::rdf_type_of(*dict);

    HistogramSpec hist;
    hist.default_buckets = opt.r_hist;
    hist.auto_freedman_diaconis = opt.r_auto_hist;
    PartitionAssignment partition = detail::make_partition(opt, g, *dict);
    TypeAssignment types = compute_types(g, hist, partition, rdf_type);

    Summary summary = typed_summary(g, types, rdf_type);
    bool refined = false, achieved = true;
    if (summary.h.size() > opt.r_target) {
        RefineConfig cfg;
        cfg.minhash_rows = opt.r_m;
        cfg.minhash_cols = opt.r_n;
        cfg.seed = opt.r_seed;
        cfg.target = opt.r_target;
        RefineResult r = minhash_refine(g, types, cfg, rdf_type);
        summary = std::move(r.summary);
        refined = true;
        achieved = r.achieved;
    }
    summary.validate();
    if (!opt.output.empty()) summary.save_file(opt.output);

    double reduction = summary.h.size() == 0
                           ? 0.0
                           : static_cast<double>(g.size()) / static_cast<double>(summary.h.size());
    char red[32];
    std::snprintf(red, sizeof red, "%.1f", reduction);
    out << "triples=" << g.size() << " buckets=" << summary.bucket_size.size()
        << " summary_triples=" << summary.h.size() << " reduction=" << red
        << " refined=" << (refined ? "yes" : "no")
        << " target_achieved=" << (achieved ? "yes" : "no") << " seed=" << opt.r_seed << "\n";
    return ExitCode::Ok;
}

inline int cmd_estimate(const Options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    auto dict = std::make_shared<Dictionary>();
    Summary s = Summary::load_file(opt.summary, dict);
    Query q = load_query_file(opt.query, *dict);
    EstimatorOptions eopts = opt.estimator_options();

    Estimate e = expectation(q, s, eopts);
    out << "E=" << detail::fmt(e.value)
        << " path=" << (e.path == EstimatePath::UnificationFree ? "unification-free" : "general")
        << " answers_over_H=" << e.answers_over_h;
    if (e.exact) out << " exact=" << e.exact->to_string();

    std::optional<VarianceEstimate> var;
    if (opt.want_variance || opt.bound_eps) {
        var = variance(q, s, eopts);
        out << " D=" << detail::fmt(std::sqrt(var->value));
        if (var->exact) out << " D2=" << var->exact->to_string();
    }
    if (opt.bound_eps) {
        if (*opt.bound_eps <= 1.0) throw std::invalid_argument("--bound must exceed 1");
        double b;
        if (eopts.mode == ArithmeticMode::Exact) {
            // thresholds arrive as decimals; scale to an exact rational
            long long scaled = static_cast<long long>(std::llround(*opt.bound_eps * 1000.0));
            Rational eps(scaled, 1000);
            b = bound_from_moments_exact(*var->expectation.exact, *var->exact, eps).to_double();
        } else {
            b = bound_from_moments(var->expectation.value, var->value, *opt.bound_eps);
        }
        out << " P(qerror>=" << detail::fmt(*opt.bound_eps) << ")<=" << detail::fmt(b);
    }
    out << "\n";
    return ExitCode::Ok;
}

inline int cmd_exact(const Options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g = load_ntriples_file(opt.input, dict);
    Query q = load_query_file(opt.query, *dict);
    out << "N=" << cardinality(q, g) << "\n";
    return ExitCode::Ok;
}

struct BenchRow {
    std::string id;
    std::string text;
    bool failed = false;
    std::string error;
    std::uint64_t exact = 0;
    double estimate = 0.0;
    double qerr = 0.0;
    std::optional<double> variance;
    std::optional<double> bound10, bound100, bound1000;
    std::string path;
    std::uint64_t answers_over_h = 0;
    std::int64_t estimate_us = 0;
    std::int64_t exact_us = 0;
};

inline int cmd_bench(const Options& opt, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    auto dict = std::make_shared<Dictionary>();
    RdfGraph g = load_ntriples_file(opt.input, dict);
    Summary s = Summary::load_file(opt.summary, dict);
    EstimatorOptions eopts = opt.estimator_options();

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(opt.queries_dir)) {
        if (entry.path().extension() == ".cq") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    // parse serially: interning mutates the dictionary
    std::vector<Query> queries;
    std::vector<BenchRow> rows(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        rows[i].id = files[i].stem().string();
        std::ifstream in(files[i]);
        std::stringstream text;
        text << in.rdbuf();
        rows[i].text = text.str();
        try {
            queries.push_back(parse_query(rows[i].text, *dict));
        } catch (const std::exception& e) {
            queries.emplace_back();
            rows[i].failed = true;
            rows[i].error = e.what();
        }
    }

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= rows.size()) return;
            BenchRow& row = rows[i];
            if (row.failed) continue;
            try {
                auto t0 = std::chrono::steady_clock::now();
                Estimate e = expectation(queries[i], s, eopts);
                auto t1 = std::chrono::steady_clock::now();
                std::uint64_t n = cardinality(queries[i], g);
                auto t2 = std::chrono::steady_clock::now();
                row.estimate = e.value;
                row.exact = n;
                row.qerr = qerror(static_cast<double>(n), e.value);
                row.path = e.path == EstimatePath::UnificationFree ? "unification-free" : "general";
                row.answers_over_h = e.answers_over_h;
                row.estimate_us =
                    std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
                row.exact_us =
                    std::chrono::duration_cast<std::chrono::microseconds>(t2 - t1).count();
                if (opt.want_variance) {
                    try {
                        VarianceEstimate v = variance(queries[i], s, eopts);
                        row.variance = v.value;
                        double expect = v.expectation.value;
                        if (expect >= 1.0) {
                            row.bound10 = bound_from_moments(expect, v.value, 10.0);
                            row.bound100 = bound_from_moments(expect, v.value, 100.0);
                            row.bound1000 = bound_from_moments(expect, v.value, 1000.0);
                        }
                    } catch (const CapExceededError&) {
                        // variance intractable: leave the columns empty
                    }
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::max(1u, opt.r_threads); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::sort(rows.begin(), rows.end(),
              [](const BenchRow& a, const BenchRow& b) { return a.id < b.id; });

    std::ostream* csv = &out;
    std::ofstream file_out;
    if (!opt.output.empty()) {
        file_out.open(opt.output, std::ios::binary);
        if (!file_out) throw std::runtime_error("cannot write " + opt.output);
        csv = &file_out;
    }
    *csv << "query_id,exact,estimate,qerror,variance,bound_eps10,bound_eps100,bound_eps1000,"
            "path,answers_over_h,estimate_us,exact_us,error,query_text\n";
    auto opt_fmt = [&](const std::optional<double>& v) {
        return v ? detail::fmt(*v) : std::string();
    };
    std::vector<double> qerrors;
    for (const BenchRow& r : rows) {
        if (r.failed) {
            *csv << detail::csv_field(r.id) << ",,,,,,,,,,,," << detail::csv_field(r.error) << ","
                 << detail::csv_field(r.text) << "\n";
            continue;
        }
        qerrors.push_back(r.qerr);
        std::string est_us = opt.want_timings ? std::to_string(r.estimate_us) : std::string();
        std::string exa_us = opt.want_timings ? std::to_string(r.exact_us) : std::string();
        *csv << detail::csv_field(r.id) << "," << r.exact << "," << detail::fmt(r.estimate) << ","
             << detail::fmt(r.qerr) << "," << opt_fmt(r.variance) << "," << opt_fmt(r.bound10)
             << "," << opt_fmt(r.bound100) << "," << opt_fmt(r.bound1000) << "," << r.path << ","
             << r.answers_over_h << "," << est_us << "," << exa_us << ",,"
             << detail::csv_field(r.text) << "\n";
    }
    if (!qerrors.empty()) {
        std::sort(qerrors.begin(), qerrors.end());
        double min = qerrors.front(), max = qerrors.back();
        double avg = 0;
        for (double v : qerrors) avg += v;
        avg /= static_cast<double>(qerrors.size());
        double median = qerrors.size() % 2 == 1
                            ? qerrors[qerrors.size() / 2]
                            : 0.5 * (qerrors[qerrors.size() / 2 - 1] + qerrors[qerrors.size() / 2]);
        auto agg = [&](const char* name, double v) {
            *csv << name << ",,," << detail::fmt(v) << ",,,,,,,,,,\n";
        };
        agg("agg:min_qerror", min);
        agg("agg:median_qerror", median);
        agg("agg:avg_qerror", avg);
        agg("agg:max_qerror", max);
    }

    if (!opt.plot_data.empty()) {
        std::ofstream plot(opt.plot_data, std::ios::binary);
        if (!plot) throw std::runtime_error("cannot write " + opt.plot_data);
        const double edges[] = {1.0, 10.0, 100.0, 1000.0, 10000.0};
        plot << "bin_low,bin_high,count,share\n";
        for (std::size_t b = 0; b < 5; ++b) {
            double lo = edges[b];
            double hi = b + 1 < 5 ? edges[b + 1] : std::numeric_limits<double>::infinity();
            std::size_t count = 0;
            for (double v : qerrors) {
                if (v >= lo && (b + 1 == 5 || v < hi)) ++count;
            }
            plot << detail::fmt(lo) << "," << (b + 1 < 5 ? detail::fmt(hi) : std::string("inf"))
                 << "," << count << ","
                 << detail::fmt(qerrors.empty()
                                    ? 0.0
                                    : static_cast<double>(count) /
                                          static_cast<double>(qerrors.size()))
                 << "\n";
        }
    }

    std::size_t failed = 0;
    for (const BenchRow& r : rows) failed += r.failed;
    err << "bench: " << rows.size() << " queries, " << failed << " failed, seed=" << opt.r_seed
        << "\n";
    return ExitCode::Ok;
}

inline int cmd_validate_bound(const Options& opt, std::ostream& out, std::ostream& err) {
    (void)err;
    if (opt.validate_eps <= 1.0) throw std::invalid_argument("eps must exceed 1");
    auto dict = std::make_shared<Dictionary>();
    Summary s = Summary::load_file(opt.summary, dict);
    Query q = load_query_file(opt.query, *dict);

    EstimatorOptions eopts = opt.estimator_options();
    VarianceEstimate v = variance(q, s, eopts);
    double expect = v.expectation.value;
    double bound = bound_from_moments(expect, v.value, opt.validate_eps);

    WorldSpace space(s, WorldSpace::kDefaultCap);
    std::mt19937_64 rng(opt.r_seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < opt.samples; ++i) {
        RdfGraph world = space.sample(rng);
        std::uint64_t n = cardinality(q, world);
        if (qerror(static_cast<double>(n), expect) >= opt.validate_eps) ++hits;
    }
    double empirical = static_cast<double>(hits) / static_cast<double>(opt.samples);
    double slack = 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(opt.samples));
    bool pass = empirical <= bound + slack;
    out << "bound=" << detail::fmt(bound) << " empirical=" << detail::fmt(empirical)
        << " slack=" << detail::fmt(slack) << " samples=" << opt.samples << " "
        << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? ExitCode::Ok : ExitCode::Failure;
}

}  // namespace sumcard::cli
