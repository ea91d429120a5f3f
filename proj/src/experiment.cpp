#include "blockbeta/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "blockbeta/hull.hpp"
#include "blockbeta/sampler.hpp"
#include "json.hpp"

#ifndef BLOCKBETA_VERSION
#define BLOCKBETA_VERSION "0.0.0"
#endif

namespace blockbeta {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {"block_dims", "betas",      "n_grid", "reps_per_n",
                                           "root_seed",  "observables", "workers"};

std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_beta(const json& j) {
    if (j.is_string()) {
        const std::string text = j.get<std::string>();
        try {
            return Rational::parse(text).str();
        } catch (const std::exception&) {
            throw FormatError("config: beta '" + text + "' is not a rational");
        }
    }
    if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
    if (j.is_number_float()) {
        // shortest round-trip decimal; exact as a rational unless it needs an exponent
        const std::string text = j.dump();
        try {
            return Rational::parse(text).str();
        } catch (const std::exception&) {
            return fmt17(j.get<double>());
        }
    }
    throw FormatError("config: betas must be numbers or rational strings");
}

template <class T>
T get_as(const json& j, const char* key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("config: bad value for '") + key + "'");
    }
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b) || (std::isnan(a) && std::isnan(b)); }

double json_double(const json& j) { return j.is_null() ? NAN : j.get<double>(); }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        T v;
        if constexpr (std::is_same_v<T, double>) {
            if (s == "nan") return NAN;
            v = std::stod(s, &used);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            v = std::stoull(s, &used);
        } else {
            v = static_cast<T>(std::stoll(s, &used));
        }
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

}  // namespace

std::vector<std::int64_t> default_n_grid() {
    return {100, 188, 352, 658, 1233, 2310, 4329, 8111, 15199, 28480, 53367, 100000};
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("config: expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kConfigKeys.count(key)) throw FormatError("config: unknown key '" + key + "'");
    if (!j.contains("block_dims") || !j.contains("betas")) throw FormatError("config: block_dims and betas are required");

    ExperimentConfig cfg;
    cfg.block_dims = get_as<std::vector<int>>(j["block_dims"], "block_dims");
    if (!j["betas"].is_array()) throw FormatError("config: betas must be an array");
    for (const auto& b : j["betas"]) cfg.betas.push_back(canonical_beta(b));
    if (j.contains("n_grid")) cfg.n_grid = get_as<std::vector<std::int64_t>>(j["n_grid"], "n_grid");
    if (j.contains("reps_per_n")) cfg.reps_per_n = get_as<int>(j["reps_per_n"], "reps_per_n");
    if (j.contains("root_seed")) cfg.root_seed = get_as<std::uint64_t>(j["root_seed"], "root_seed");
    if (j.contains("workers")) cfg.workers = get_as<int>(j["workers"], "workers");
    if (j.contains("observables")) {
        cfg.record_f_vector = cfg.record_volume_deficit = false;
        for (const auto& o : get_as<std::vector<std::string>>(j["observables"], "observables")) {
            if (o == "f_vector")
                cfg.record_f_vector = true;
            else if (o == "volume_deficit")
                cfg.record_volume_deficit = true;
            else
                throw FormatError("config: unknown observable '" + o + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

static json config_json(const ExperimentConfig& c, bool with_workers) {
    json j;
    j["block_dims"] = c.block_dims;
    j["betas"] = c.betas;
    j["n_grid"] = c.n_grid;
    j["reps_per_n"] = c.reps_per_n;
    j["root_seed"] = c.root_seed;
    json obs = json::array();
    if (c.record_f_vector) obs.push_back("f_vector");
    if (c.record_volume_deficit) obs.push_back("volume_deficit");
    j["observables"] = obs;
    if (with_workers) j["workers"] = c.workers;
    return j;
}

std::string ExperimentConfig::to_json_text() const { return config_json(*this, true).dump(); }

BlockStructure ExperimentConfig::block_structure() const {
    try {
        return BlockStructure(block_dims);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
}

BetaParams ExperimentConfig::beta_params() const {
    std::vector<Rational> exact;
    try {
        for (const auto& b : betas) exact.push_back(Rational::parse(b));
        return BetaParams(exact);
    } catch (const std::invalid_argument&) {
        // some beta is only available as a real
    }
    std::vector<double> values;
    for (const auto& b : betas) values.push_back(std::stod(b));
    return BetaParams(values);
}

void ExperimentConfig::validate() const {
    const BlockStructure bs = block_structure();
    if (betas.size() != block_dims.size()) throw FormatError("config: betas must have one entry per block");
    try {
        beta_params();
    } catch (const std::exception& e) {
        throw FormatError(std::string("config: ") + e.what());
    }
    if (bs.total() > 8) throw FormatError("config: total dimension must be <= 8");
    if (n_grid.empty()) throw FormatError("config: n_grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < bs.total() + 2) throw FormatError("config: every n must be >= d + 2");
        if (i && n_grid[i] <= n_grid[i - 1]) throw FormatError("config: n_grid must be strictly increasing");
    }
    if (reps_per_n < 1) throw FormatError("config: reps_per_n must be >= 1");
    if (workers < 1) throw FormatError("config: workers must be >= 1");
    if (!record_f_vector && !record_volume_deficit) throw FormatError("config: no observables selected");
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : config_json(*this, false).dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double ExperimentConfig::estimated_cost() const {
    const int d = block_structure().total();
    const double fact = std::tgamma(d + 1.0);
    double total = 0.0;
    for (auto n : n_grid) total += static_cast<double>(n) * reps_per_n * fact;
    return total;
}

std::vector<Aggregate> aggregate(const ExperimentConfig& cfg, const std::vector<Sample>& samples) {
    const int d = cfg.block_structure().total();
    std::vector<Aggregate> out;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        while (j < samples.size() && samples[j].n == samples[i].n) ++j;
        Aggregate a;
        a.n = samples[i].n;
        a.reps = static_cast<int>(j - i);
        auto reduce = [&](auto value, double& mean, double& se) {
            double sum = 0.0;
            for (std::size_t k = i; k < j; ++k) sum += value(samples[k]);
            mean = sum / a.reps;
            double sq = 0.0;
            for (std::size_t k = i; k < j; ++k) sq += (value(samples[k]) - mean) * (value(samples[k]) - mean);
            se = a.reps > 1 ? std::sqrt(sq / (a.reps - 1) / a.reps) : 0.0;
        };
        if (cfg.record_f_vector) {
            a.f_mean.resize(d);
            a.f_se.resize(d);
            for (int c = 0; c < d; ++c)
                reduce([c](const Sample& s) { return static_cast<double>(s.f[c]); }, a.f_mean[c], a.f_se[c]);
        }
        if (cfg.record_volume_deficit)
            reduce([](const Sample& s) { return s.volume_deficit; }, a.volume_deficit_mean, a.volume_deficit_se);
        else
            a.volume_deficit_mean = a.volume_deficit_se = NAN;
        out.push_back(std::move(a));
        i = j;
    }
    return out;
}

RunRecord simulate(const ExperimentConfig& cfg, const SimulateOptions& opt) {
    cfg.validate();
    if (!opt.budget_override && cfg.estimated_cost() > opt.budget) {
        std::ostringstream os;
        os << "estimated cost " << cfg.estimated_cost() << " exceeds budget " << opt.budget
           << " (n * reps * d! summed over n_grid); use --budget-override";
        throw BudgetExceeded(os.str());
    }
    const BlockStructure bs = cfg.block_structure();
    const BetaParams bp = cfg.beta_params();
    const int d = bs.total();
    const double body = body_volume(bs);
    const auto start = std::chrono::steady_clock::now();

    struct Task {
        std::int64_t n;
        int rep;
    };
    std::vector<Task> tasks;
    for (auto n : cfg.n_grid)
        for (int r = 0; r < cfg.reps_per_n; ++r) tasks.push_back({n, r});

    std::vector<Sample> results(tasks.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    std::exception_ptr failure;
    auto work = [&] {
        try {
            for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
                for (std::uint64_t attempt = 0;; ++attempt) {
                    const std::uint64_t stream = task_stream(t, attempt);
                    RngStream rng(cfg.root_seed, stream);
                    try {
                        const HullResult hull =
                            convex_hull(PointCloud(d, sample_block_beta_cloud(bs, bp, tasks[t].n, rng)));
                        Sample& s = results[t];
                        s.n = tasks[t].n;
                        s.rep = tasks[t].rep;
                        s.seed_stream = stream;
                        if (cfg.record_f_vector) s.f = hull.f_vector;
                        s.volume_deficit = cfg.record_volume_deficit ? body - hull.volume : NAN;
                        break;
                    } catch (const DegenerateInput& e) {
                        if (opt.log) {
                            std::lock_guard lock(log_mutex);
                            opt.log("n=" + std::to_string(tasks[t].n) + " rep=" + std::to_string(tasks[t].rep) +
                                    ": degenerate sample (" + e.what() + "), retrying on next stream");
                        }
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(log_mutex);
            if (!failure) failure = std::current_exception();
            next = tasks.size();
        }
    };
    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    RunRecord rec;
    rec.config = cfg;
    rec.config_hash = cfg.hash();
    rec.version = BLOCKBETA_VERSION;
    rec.samples = std::move(results);
    rec.aggregates = aggregate(cfg, rec.samples);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<Sample>& samples) {
    const int d = cfg.block_structure().total();
    out << "n,rep";
    for (int j = 0; j < d; ++j) out << ",f_" << j;
    out << ",volume_deficit,seed_stream\n";
    for (const auto& s : samples) {
        out << s.n << ',' << s.rep;
        for (int j = 0; j < d; ++j) {
            out << ',';
            if (s.f.empty())
                out << "nan";
            else
                out << s.f[j];
        }
        out << ',' << fmt17(s.volume_deficit) << ',' << s.seed_stream << '\n';
    }
}

std::vector<Sample> read_csv(std::istream& in, const ExperimentConfig& cfg) {
    const int d = cfg.block_structure().total();
    std::ostringstream header;
    header << "n,rep";
    for (int j = 0; j < d; ++j) header << ",f_" << j;
    header << ",volume_deficit,seed_stream";
    std::string line;
    if (!std::getline(in, line) || line != header.str())
        throw FormatError("csv: expected header '" + header.str() + "'");
    std::vector<Sample> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != d + 4)
            throw FormatError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(d + 4) + " fields");
        Sample s;
        s.n = parse_number<std::int64_t>(cells[0], lineno);
        s.rep = parse_number<int>(cells[1], lineno);
        if (cfg.record_f_vector)
            for (int j = 0; j < d; ++j) s.f.push_back(parse_number<std::int64_t>(cells[2 + j], lineno));
        s.volume_deficit = parse_number<double>(cells[2 + d], lineno);
        s.seed_stream = parse_number<std::uint64_t>(cells[3 + d], lineno);
        if (!out.empty() && (s.n < out.back().n || (s.n == out.back().n && s.rep <= out.back().rep)))
            throw FormatError("csv line " + std::to_string(lineno) + ": rows must be in (n, rep) order");
        out.push_back(std::move(s));
    }
    return out;
}

void write_record(const std::filesystem::path& dir, const RunRecord& rec) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / "samples.csv", std::ios::binary);
        if (!csv) throw FormatError("cannot write " + (dir / "samples.csv").string());
        write_csv(csv, rec.config, rec.samples);
    }
    json m;
    m["config"] = config_json(rec.config, true);
    m["config_hash"] = rec.config_hash;
    m["version"] = rec.version;
    m["wall_seconds"] = rec.wall_seconds;
    m["csv"] = "samples.csv";
    json aggs = json::array();
    for (const auto& a : rec.aggregates) {
        json ja;
        ja["n"] = a.n;
        ja["reps"] = a.reps;
        ja["f_mean"] = a.f_mean;
        ja["f_se"] = a.f_se;
        // NaN serializes as null
        ja["volume_deficit_mean"] = a.volume_deficit_mean;
        ja["volume_deficit_se"] = a.volume_deficit_se;
        aggs.push_back(ja);
    }
    m["aggregates"] = aggs;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw FormatError("cannot write " + (dir / "manifest.json").string());
    out << m.dump(2) << '\n';
}

RunRecord read_record(const std::filesystem::path& path) {
    const auto dir = std::filesystem::is_directory(path) ? path : path.parent_path();
    const auto manifest_path = std::filesystem::is_directory(path) ? path / "manifest.json" : path;
    std::ifstream in(manifest_path);
    if (!in) throw FormatError("cannot open record " + manifest_path.string());
    json m;
    try {
        m = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("manifest: " + std::string(e.what()));
    }
    RunRecord rec;
    try {
        rec.config = ExperimentConfig::from_json_text(m.at("config").dump());
        rec.config_hash = m.at("config_hash").get<std::string>();
        rec.version = m.at("version").get<std::string>();
        rec.wall_seconds = m.at("wall_seconds").get<double>();
        const auto csv_path = dir / m.at("csv").get<std::string>();
        std::ifstream csv(csv_path, std::ios::binary);
        if (!csv) throw FormatError("cannot open " + csv_path.string());
        rec.samples = read_csv(csv, rec.config);
        rec.aggregates = aggregate(rec.config, rec.samples);
        if (rec.config_hash != rec.config.hash()) throw FormatError("manifest: config hash mismatch");
        const auto& stored = m.at("aggregates");
        if (stored.size() != rec.aggregates.size()) throw FormatError("manifest: aggregate count mismatch");
        for (std::size_t i = 0; i < stored.size(); ++i) {
            const auto& s = stored[i];
            const auto& a = rec.aggregates[i];
            bool same = s.at("n").get<std::int64_t>() == a.n && s.at("reps").get<int>() == a.reps &&
                        same_bits(json_double(s.at("volume_deficit_mean")), a.volume_deficit_mean) &&
                        same_bits(json_double(s.at("volume_deficit_se")), a.volume_deficit_se) &&
                        s.at("f_mean").size() == a.f_mean.size();
            for (std::size_t c = 0; same && c < a.f_mean.size(); ++c)
                same = same_bits(json_double(s.at("f_mean")[c]), a.f_mean[c]) &&
                       same_bits(json_double(s.at("f_se")[c]), a.f_se[c]);
            if (!same) throw FormatError("manifest: aggregates at n=" + std::to_string(a.n) + " do not match the CSV");
        }
    } catch (const json::exception& e) {
        throw FormatError("manifest: " + std::string(e.what()));
    }
    return rec;
}

std::string FitSummary::str() const {
    std::ostringstream os;
    os << "predicted: " << predicted.str() << "\n";
    os << "f_0 fixed: " << f0.fixed.str() << "\n";
    os << "f_0 free:  " << f0.free.str() << "\n";
    os << "exponent deviation " << f0.fixed.exponent_hat - predicted.exponent << " (log power " << log_power << ")\n";
    return os.str();
}

FitSummary fit_record(const RunRecord& rec, int log_power) {
    if (!rec.config.record_f_vector) throw FormatError("record has no f_vector observable");
    FitSummary out;
    out.predicted = predict_rate(rec.config.block_structure(), rec.config.beta_params());
    out.log_power = log_power < 0 ? out.predicted.log_power : log_power;
    std::vector<RatePoint> points;
    for (const auto& a : rec.aggregates) points.push_back({static_cast<double>(a.n), a.f_mean[0], a.f_se[0]});
    out.f0 = fit_rate(points, out.predicted.exponent, out.log_power);
    return out;
}

std::filesystem::path write_plot(const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
    if (records.empty()) throw FormatError("plot: no records");
    for (const auto& r : records)
        if (r.aggregates.empty() || !r.config.record_f_vector) throw FormatError("plot: empty record (no f_0 data)");
    std::filesystem::create_directories(dir);
    std::ostringstream plots;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const std::string data = "f0_" + std::to_string(i) + ".dat";
        std::ofstream out(dir / data);
        if (!out) throw FormatError("cannot write " + (dir / data).string());
        out << "# n mean_f0 se_f0\n";
        for (const auto& a : r.aggregates) out << a.n << ' ' << fmt17(a.f_mean[0]) << ' ' << fmt17(a.f_se[0]) << '\n';
        const std::string label = r.config.block_structure().str() + " beta=" + r.config.beta_params().str();
        plots << (i ? ", \\\n     " : "plot ") << "'" << data << "' using 1:2:3 with yerrorlines lc " << i + 1
              << " title '" << label << "'";
        try {
            // guide line of the predicted order through the last point
            const RatePrediction p = predict_rate(r.config.block_structure(), r.config.beta_params());
            const auto& last = r.aggregates.back();
            const double ln = std::log(static_cast<double>(last.n));
            const double scale = last.f_mean[0] / (std::pow(last.n, p.exponent) * std::pow(ln, p.log_power));
            plots << ", \\\n     " << fmt17(scale) << " * x**" << fmt17(p.exponent) << " * log(x)**" << p.log_power
                  << " with lines dt 2 lc " << i + 1 << " title 'n^{" << short_num(p.exponent) << "} (ln n)^{"
                  << p.log_power << "}'";
        } catch (const DomainError&) {
            // no prediction for negative betas
        }
    }
    const auto script = dir / "plot.gp";
    std::ofstream gp(script);
    if (!gp) throw FormatError("cannot write " + script.string());
    gp << "# gnuplot " << script.filename().string() << "\n"
       << "set terminal pngcairo size 900,650\n"
       << "set output 'f0.png'\n"
       << "set logscale xy\n"
       << "set xlabel 'n'\n"
       << "set ylabel 'mean f_0'\n"
       << "set key top left\n"
       << "set grid\n"
       << plots.str() << "\n";
    return script;
}

}  // namespace blockbeta
