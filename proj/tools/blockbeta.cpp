#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "blockbeta/experiment.hpp"
#include "blockbeta/metacube.hpp"
#include "blockbeta/suites.hpp"

using namespace blockbeta;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::string default_out() {
    const char* env = std::getenv("BLOCKBETA_OUT");
    return env && *env ? env : "blockbeta-out";
}

int parse_log_power(const std::string& text) {
    if (text == "auto") return -1;
    try {
        std::size_t used = 0;
        const int p = std::stoi(text, &used);
        if (used == text.size() && p >= 0) return p;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--log-power", "expected 'auto' or a nonnegative integer");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random polytopes from block-beta points: simulation, rate fitting and numeric checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir = default_out(), log_power = "auto", suite, dims_text, betas_text;
    std::uint64_t seed = 0;
    int workers = 0;
    bool budget_override = false;
    double budget = 1e9, scale = 1.0;
    std::vector<std::string> records;

    auto* sim = app.add_subcommand("simulate", "Run a simulation sweep and write samples.csv + manifest.json");
    sim->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    auto* seed_opt = sim->add_option("--seed", seed, "Override root_seed");
    auto* workers_opt = sim->add_option("--workers", workers, "Override worker count")->check(CLI::PositiveNumber);
    sim->add_option("--out", out_dir, "Record directory (default $BLOCKBETA_OUT or ./blockbeta-out)");
    sim->add_option("--budget", budget, "Cost budget in units of n*reps*d!")->check(CLI::PositiveNumber);
    sim->add_flag("--budget-override", budget_override, "Run even if the estimated cost exceeds the budget");

    auto* fit = app.add_subcommand("fit", "Fit the f_0 growth rate of a record");
    fit->add_option("record", records, "Record directory or manifest.json")->required()->expected(1);
    fit->add_option("--log-power", log_power, "auto (predicted) or a fixed integer");

    auto* ver = app.add_subcommand("verify", "Run numeric verification suites");
    std::string suite_help = "One of all";
    for (const auto& n : suite_names()) suite_help += ", " + n;
    ver->add_option("suite", suite, suite_help)->required();
    auto* vseed = ver->add_option("--seed", seed, "Root seed (default 1)");
    ver->add_option("--scale", scale, "Multiplier for Monte Carlo sizes")->check(CLI::PositiveNumber);

    auto* pred = app.add_subcommand("predict", "Print the predicted growth rate");
    pred->add_option("--dims", dims_text, "Block dimensions, e.g. 2,1");
    pred->add_option("--betas", betas_text, "Block betas, e.g. 0,1/2");
    pred->add_option("--config", config_path, "Take dims and betas from a config")->check(CLI::ExistingFile);

    auto* plot = app.add_subcommand("plot", "Emit a gnuplot script and data for one or more records");
    plot->add_option("records", records, "Record directories or manifests")->required();
    plot->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sim) {
            ExperimentConfig cfg = ExperimentConfig::load(config_path);
            if (*seed_opt) cfg.root_seed = seed;
            if (*workers_opt) cfg.workers = workers;
            SimulateOptions opt;
            opt.budget = budget;
            opt.budget_override = budget_override;
            opt.log = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
            const RunRecord rec = simulate(cfg, opt);
            write_record(out_dir, rec);
            std::cout << "wrote " << (fs::path(out_dir) / "samples.csv").string() << " (" << rec.samples.size()
                      << " rows, " << rec.wall_seconds << " s, config " << rec.config_hash << ")\n";
            for (const auto& a : rec.aggregates) {
                std::cout << "n=" << a.n;
                if (!a.f_mean.empty()) std::cout << " f_0=" << a.f_mean[0] << " +- " << a.f_se[0];
                if (cfg.record_volume_deficit)
                    std::cout << " deficit=" << a.volume_deficit_mean << " +- " << a.volume_deficit_se;
                std::cout << "\n";
            }
            return kOk;
        }
        if (*fit) {
            const int p = parse_log_power(log_power);
            std::cout << fit_record(read_record(records.front()), p).str();
            return kOk;
        }
        if (*ver) {
            SuiteOptions opt;
            opt.seed = *vseed ? seed : 1;
            opt.scale = scale;
            bool ok = true;
            for (const auto& rep : run_suite(suite, opt)) {
                std::cout << rep.str() << "\n";
                ok = ok && rep.passed();
            }
            std::cout << (ok ? "verify " + suite + ": PASS\n" : "verify " + suite + ": FAIL\n");
            return ok ? kOk : kFailed;
        }
        if (*pred) {
            std::vector<int> dims;
            std::vector<std::string> betas;
            if (!config_path.empty()) {
                const auto cfg = ExperimentConfig::load(config_path);
                dims = cfg.block_dims;
                betas = cfg.betas;
            } else {
                if (dims_text.empty()) throw CLI::ValidationError("predict", "need --dims or --config");
                for (const auto& d : split_list(dims_text)) dims.push_back(std::stoi(d));
                betas = betas_text.empty() ? std::vector<std::string>(dims.size(), "0") : split_list(betas_text);
            }
            ExperimentConfig cfg;
            cfg.block_dims = dims;
            cfg.betas = betas;
            if (betas.size() != dims.size()) throw CLI::ValidationError("predict", "one beta per block");
            const BlockStructure bs = cfg.block_structure();
            std::cout << bs.str() << " beta=" << cfg.beta_params().str() << ": "
                      << predict_rate(bs, cfg.beta_params()).str() << "\n";
            return kOk;
        }
        if (*plot) {
            std::vector<RunRecord> recs;
            for (const auto& r : records) recs.push_back(read_record(r));
            std::cout << "wrote " << write_plot(recs, out_dir).string() << "\n";
            return kOk;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
