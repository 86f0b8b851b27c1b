#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hfm/catalog.hpp"
#include "hfm/config.hpp"
#include "hfm/format.hpp"
#include "hfm/pipeline.hpp"
#include "hfm/records.hpp"
#include "hfm/simulate.hpp"

namespace hfm::cli {

namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
};

PipelineConfig resolve_config(const Globals& g) {
    PipelineConfig cfg = g.config_path.empty() ? PipelineConfig{} : load_config(g.config_path);
    if (g.seed) cfg.sim.seed = *g.seed;
    return cfg;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<DailyRecord> load_records(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    try {
        return read_records_csv(in);
    } catch (const ParseError& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

/// `AAA_daily.csv` -> `AAA`.
std::string stem_of(const fs::path& records_path) {
    auto stem = records_path.stem().string();
    const std::string suffix = "_daily";
    if (stem.size() > suffix.size() && stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        stem.resize(stem.size() - suffix.size());
    }
    return stem;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Realized moments from tick data and variance forecasting regressions", "hfmoments"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "JSON pipeline configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Override the simulation seed");
    app.add_option("--out-dir", g.out_dir, "Directory for output files");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Write simulated tick files and a ground-truth sidecar");
    std::string sim_symbols;
    sim->add_option("--symbols", sim_symbols, "Comma-separated symbols; each gets seed + its index");

    // compute
    auto* compute = app.add_subcommand("compute", "Daily realized measures from <SYMBOL>_<YYYY-MM-DD>.csv files");
    std::string input_dir;
    std::optional<std::string> estimator;
    compute->add_option("input_dir", input_dir, "Directory of tick files")->required();
    compute->add_option("--estimator", estimator, "naive or preavg")->check(CLI::IsMember({"naive", "preavg"}));

    // regress
    auto* regress = app.add_subcommand("regress", "Run catalog models on daily records");
    std::vector<std::string> regress_files;
    std::string models_opt, horizons_opt;
    bool standardize = false;
    regress->add_option("records", regress_files, "<SYMBOL>_daily.csv files")->required()->check(CLI::ExistingFile);
    regress->add_option("--models", models_opt, "Comma-separated model ids");
    regress->add_option("--horizons", horizons_opt, "Comma-separated forecast horizons in days");
    regress->add_flag("--standardize-tvol", standardize, "z-score trading volume before fitting");

    // oos
    auto* oos = app.add_subcommand("oos", "Out-of-sample comparison of nested models");
    std::vector<std::string> oos_files;
    std::vector<std::string> pairs_opt;
    std::optional<std::size_t> train_len, test_len;
    std::optional<std::string> scheme;
    oos->add_option("records", oos_files, "<SYMBOL>_daily.csv files")->required()->check(CLI::ExistingFile);
    oos->add_option("--pair", pairs_opt, "restricted,augmented (repeatable); default: all catalog pairs");
    oos->add_option("--train", train_len, "Training rows");
    oos->add_option("--test", test_len, "Forecast rows");
    oos->add_option("--scheme", scheme, "fixed or recursive")->check(CLI::IsMember({"fixed", "recursive"}));

    // select
    auto* select = app.add_subcommand("select", "Stepwise AIC covariate selection");
    std::vector<std::string> select_files;
    std::string response = "rvar", kform = "rkurt";
    select->add_option("records", select_files, "<SYMBOL>_daily.csv files")->required()->check(CLI::ExistingFile);
    select->add_option("--response", response, "rvar or bipower")->check(CLI::IsMember({"rvar", "bipower"}));
    select->add_option("--kurtosis", kform, "rkurt or sqrt_rkurt")->check(CLI::IsMember({"rkurt", "sqrt_rkurt"}));

    // report
    auto* report = app.add_subcommand("report", "Cross-symbol significance summary and code counts");
    std::vector<std::string> report_files;
    report->add_option("records", report_files, "<SYMBOL>_daily.csv files")->required()->check(CLI::ExistingFile);
    report->add_option("--response", response, "rvar or bipower")->check(CLI::IsMember({"rvar", "bipower"}));
    report->add_option("--kurtosis", kform, "rkurt or sqrt_rkurt")->check(CLI::IsMember({"rkurt", "sqrt_rkurt"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        const PipelineConfig cfg = resolve_config(g);
        const fs::path out_dir = g.out_dir;

        if (*sim) {
            auto symbols = split_list(sim_symbols);
            if (symbols.empty()) symbols.push_back(cfg.symbol);
            for (std::size_t i = 0; i < symbols.size(); ++i) {
                SimConfig s = cfg.sim;
                s.seed = cfg.sim.seed + i;
                const auto written = write_sim_panel(s, cfg.clean, out_dir, symbols[i]);
                out << symbols[i] << ": wrote " << written.size() - 1 << " tick files to " << out_dir.string() << '\n';
            }
        } else if (*compute) {
            const auto kind = estimator ? estimator_from_string(*estimator) : cfg.estimator;
            const auto result = cmd_compute(input_dir, kind, cfg);
            for (const auto& w : result.warnings) err << "warning: " << w << '\n';
            for (const auto& [symbol, records] : result.by_symbol) {
                const auto path = out_dir / (symbol + "_daily.csv");
                auto f = open_output(path);
                write_records_csv(records, f);
                out << symbol << ": " << records.size() << " days -> " << path.string() << '\n';
            }
        } else if (*regress) {
            const auto models = models_opt.empty() ? cfg.models : split_list(models_opt);
            std::vector<int> horizons = cfg.horizons;
            if (!horizons_opt.empty()) {
                horizons.clear();
                for (const auto& h : split_list(horizons_opt)) horizons.push_back(std::stoi(h));
            }
            for (int h : horizons) {
                if (h < 1) throw std::invalid_argument("horizons must be >= 1");
            }
            for (const auto& m : models) find_model(m);
            for (const auto& file : regress_files) {
                const auto runs = cmd_regress(load_records(file), models, horizons, standardize || cfg.standardize_tvol);
                std::string dropped;
                for (const auto& r : runs) {
                    if (!r.error.empty()) {
                        err << "warning: " << file << " model " << r.model_id << " d=" << r.horizon << ": " << r.error
                            << '\n';
                    }
                    if (r.dropped_missing > 0 && r.result) {
                        dropped += ' ' + r.model_id + "/d" + std::to_string(r.horizon) + '=' +
                                   std::to_string(r.dropped_missing);
                    }
                }
                if (!dropped.empty()) err << "note: " << file << ": rows dropped for missing values:" << dropped << '\n';
                const auto path = out_dir / (stem_of(file) + "_results.csv");
                auto f = open_output(path);
                write_results_csv(runs, f);
                out << file << " -> " << path.string() << '\n';
            }
        } else if (*oos) {
            OosSplit split = cfg.oos;
            if (train_len) split.train_len = *train_len;
            if (test_len) split.test_len = *test_len;
            if (scheme) split.scheme = *scheme == "fixed" ? OosScheme::fixed : OosScheme::recursive;
            std::vector<std::pair<std::string, std::string>> pairs;
            for (const auto& p : pairs_opt) {
                const auto ids = split_list(p);
                if (ids.size() != 2) throw std::invalid_argument("--pair expects restricted,augmented");
                pairs.emplace_back(ids[0], ids[1]);
            }
            if (pairs.empty()) pairs = oos_pairs();
            for (const auto& file : oos_files) {
                const auto records = load_records(file);
                std::vector<OosResult> results;
                for (const auto& [small, large] : pairs) {
                    try {
                        results.push_back(cmd_oos(records, find_model(small), find_model(large), split));
                    } catch (const std::exception& e) {
                        err << "warning: " << file << " pair (" << small << "," << large << "): " << e.what() << '\n';
                    }
                }
                const auto path = out_dir / (stem_of(file) + "_oos.csv");
                auto f = open_output(path);
                write_oos_csv(results, f);
                out << file << " -> " << path.string() << '\n';
            }
        } else if (*select) {
            for (const auto& file : select_files) {
                const auto sel = cmd_select(load_records(file), response, kform);
                const auto path = out_dir / (stem_of(file) + "_select.csv");
                auto f = open_output(path);
                f << "symbol,response,kurtosis_form,covariate_selection,aic\n"
                  << stem_of(file) << ',' << response << ',' << kform << ',' << sel.token << ','
                  << format_real(sel.fit.aic) << '\n';
                out << stem_of(file) << ": " << sel.token << '\n';
            }
        } else if (*report) {
            std::vector<SymbolSummary> rows;
            for (const auto& file : report_files) {
                rows.push_back(summarize_symbol(stem_of(file), load_records(file), response, kform));
            }
            auto f = open_output(out_dir / "report.csv");
            write_report_csv(rows, f);
            auto c = open_output(out_dir / "report_counts.csv");
            write_report_counts_csv(rows, c);
            out << rows.size() << " symbols -> " << (out_dir / "report.csv").string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace hfm::cli
