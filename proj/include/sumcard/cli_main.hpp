#pragma once
// Argument parsing for the sumcard tool. Split from cli.hpp so that only the
// binary and the CLI tests pay for CLI11.

#include "sumcard/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace sumcard::cli {

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"summary-based cardinality estimation for RDF basic graph patterns", "sumcard"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_file, "key=value configuration file");
        cmd->add_option("--seed", opt.seed, "PRNG seed");
        cmd->add_option("--answer-cap", opt.answer_cap, "abort when a fold exceeds this many summary answers");
        cmd->add_option("--atom-cap", opt.atom_cap, "largest atom count for the general path");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    };

    CLI::App* summarize = app.add_subcommand("summarize", "build a summary from an N-Triples file");
    summarize->add_option("--input", opt.input, "N-Triples input")->required();
    summarize->add_option("--output", opt.output, "summary output path");
    summarize->add_option("--target", opt.target, "target summary size (triples)");
    std::string minhash_spec;
    summarize->add_option("--minhash", minhash_spec, "MinHash scheme size as m,n");
    summarize->add_option("--histogram-buckets", opt.histogram_buckets,
                          "equi-depth histogram buckets per predicate/direction");
    bool auto_hist_flag = false;
    summarize->add_flag("--auto-histogram", auto_hist_flag,
                        "choose histogram bucket counts by the Freedman-Diaconis rule");
    summarize->add_option("--partitioner", opt.partitioner,
                          "single | label-propagation | file");
    summarize->add_option("--partition-file", opt.partition_file,
                          "resource<TAB>partition-id file");
    add_common(summarize);

    CLI::App* estimate = app.add_subcommand("estimate", "estimate a query's cardinality on a summary");
    estimate->add_option("--summary", opt.summary, "SUMRDF summary file")->required();
    estimate->add_option("--query", opt.query, "query file")->required();
    estimate->add_flag("--variance", opt.want_variance, "also report the standard deviation");
    estimate->add_option("--bound", opt.bound_eps, "report P(q-error >= eps) bound");
    estimate->add_flag("--exact-mode", opt.exact_mode, "exact rational arithmetic");
    add_common(estimate);

    CLI::App* exact = app.add_subcommand("exact", "exact cardinality on the data graph");
    exact->add_option("--input", opt.input, "N-Triples input")->required();
    exact->add_option("--query", opt.query, "query file")->required();
    add_common(exact);

    CLI::App* bench = app.add_subcommand("bench", "estimate vs. exact over a query directory");
    bench->add_option("--input", opt.input, "N-Triples input")->required();
    bench->add_option("--summary", opt.summary, "SUMRDF summary file")->required();
    bench->add_option("--queries-dir", opt.queries_dir, "directory of .cq files")->required();
    bench->add_option("--output", opt.output, "CSV output path (default stdout)");
    bench->add_flag("--variance", opt.want_variance, "also compute variance and bounds");
    bench->add_flag("--timings", opt.want_timings,
                    "emit wall-clock columns (makes reports non-reproducible)");
    bench->add_flag("--exact-mode", opt.exact_mode, "exact rational arithmetic");
    bench->add_option("--plot-data", opt.plot_data, "write binned q-error histogram data");
    add_common(bench);

    CLI::App* validate = app.add_subcommand("validate-bound",
                                            "Monte-Carlo check of the q-error bound");
    validate->add_option("--summary", opt.summary, "SUMRDF summary file")->required();
    validate->add_option("--query", opt.query, "query file")->required();
    validate->add_option("--eps", opt.validate_eps, "q-error threshold (> 1)")->required();
    validate->add_option("--samples", opt.samples, "number of sampled worlds");
    validate->add_flag("--exact-mode", opt.exact_mode, "exact rational arithmetic");
    add_common(validate);

    std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return ExitCode::Ok;
        }
        err << "usage error: " << e.what() << "\n";
        return ExitCode::Usage;
    }

    try {
        if (!minhash_spec.empty()) {
            auto comma = minhash_spec.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--minhash expects m,n");
            opt.minhash_m = static_cast<std::uint32_t>(std::stoul(minhash_spec.substr(0, comma)));
            opt.minhash_n = static_cast<std::uint32_t>(std::stoul(minhash_spec.substr(comma + 1)));
        }
        if (auto_hist_flag) opt.auto_histogram = true;
        opt.resolve();
        if (summarize->parsed()) return cmd_summarize(opt, out, err);
        if (estimate->parsed()) return cmd_estimate(opt, out, err);
        if (exact->parsed()) return cmd_exact(opt, out, err);
        if (bench->parsed()) return cmd_bench(opt, out, err);
        if (validate->parsed()) return cmd_validate_bound(opt, out, err);
        err << "no command\n";
        return ExitCode::Usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return ExitCode::Parse;
    } catch (const TermSyntaxError& e) {
        err << "parse error: " << e.what() << "\n";
        return ExitCode::Parse;
    } catch (const InconsistentSummaryError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::InconsistentSummary;
    } catch (const UnknownResourceError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::UnknownResource;
    } catch (const CapExceededError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::CapExceeded;
    } catch (const BoundInapplicableError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::BoundInapplicable;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return ExitCode::Usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::Failure;
    }
}

inline int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), std::cout, std::cerr);
}

}  // namespace sumcard::cli
