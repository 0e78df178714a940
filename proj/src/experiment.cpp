#include "grl/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "grl/error.hpp"
#include "grl/generator.hpp"

namespace grl {

std::vector<std::uint64_t> ExperimentConfig::run_seeds() const {
    if (!seeds.empty()) return seeds;
    std::vector<std::uint64_t> out;
    for (int r = 0; r < runs; ++r) out.push_back(seed + static_cast<std::uint64_t>(r));
    return out;
}

std::vector<CurriculumStage> ExperimentConfig::stages() const {
    std::vector<CurriculumStage> out;
    for (const auto& params : curriculum) out.push_back({domain, params, hyper.episodes});
    return out;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw ValidationError("runs must be at least 1");
    if (eval_episodes < 1) throw ValidationError("eval_episodes must be at least 1");
    if (threads < 1) throw ValidationError("threads must be at least 1");
    if (curriculum.empty()) throw ValidationError("config needs a curriculum");
    if (tests.empty() && test_files.empty()) throw ValidationError("config needs at least one test instance");
    hyper.validate();
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

struct Value {
    std::string text;
    std::size_t line;
    std::size_t column;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, column, msg); }

    template <class T>
    T number() const {
        T v{};
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size()) fail("expected a number, got '" + text + "'");
        return v;
    }

    bool boolean() const {
        if (text == "true" || text == "1" || text == "yes") return true;
        if (text == "false" || text == "0" || text == "no") return false;
        fail("expected true or false, got '" + text + "'");
    }

    std::vector<int> ints() const {
        std::vector<int> out;
        for (const auto& part : split(text, ',')) {
            Value v{part, line, column};
            out.push_back(v.number<int>());
        }
        return out;
    }

    std::vector<std::vector<int>> instances() const {
        std::vector<std::vector<int>> out;
        for (const auto& group : split(text, ';')) {
            if (group.empty()) fail("empty instance in list");
            out.push_back(Value{group, line, column}.ints());
        }
        return out;
    }
};

void apply_hyper(GrlHyper& h, const std::string& key, const Value& v) {
    if (key == "gamma") h.gamma = v.number<double>();
    else if (key == "alpha") h.alpha = v.number<double>();
    else if (key == "epsilon") h.epsilon = v.number<double>();
    else if (key == "epsilon_decay") h.epsilon_decay = v.number<double>();
    else if (key == "train_interval") h.train_interval = v.number<int>();
    else if (key == "opt_steps") h.opt_steps = v.number<int>();
    else if (key == "minibatch") h.minibatch = v.number<int>();
    else if (key == "buffer_capacity") h.buffer_capacity = v.number<std::size_t>();
    else if (key == "episodes_per_stage") h.episodes = v.number<int>();
    else if (key == "horizon") h.horizon = v.number<int>();
    else if (key == "feature_complexity") h.feature_complexity = v.number<int>();
    else if (key == "sample_episodes") h.sample_episodes = v.number<int>();
    else if (key == "hidden") h.hidden = v.ints();
    else if (key == "learning_rate") h.learning_rate = v.number<double>();
    else if (key == "normalize_counts") h.normalize_counts = v.boolean();
    else if (key == "clear_buffer_per_stage") h.clear_buffer_per_stage = v.boolean();
    else if (key == "probe_episodes") h.probe_episodes = v.number<int>();
    else if (key == "bootstrap_at_horizon") h.bootstrap_at_horizon = v.boolean();
    else v.fail("unknown key '" + key + "'");
}

} // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig config;
    std::map<std::string, Value> hyper_keys;
    std::map<std::string, std::size_t> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        const std::size_t key_col = line.find_first_not_of(" \t") + 1;
        if (eq == std::string::npos) throw ParseError(line_no, key_col, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const auto value_start = line.find_first_not_of(" \t", eq + 1);
        const std::size_t value_col = (value_start == std::string::npos ? eq + 1 : value_start) + 1;
        if (key.empty()) throw ParseError(line_no, key_col, "missing key");
        if (value.empty()) throw ParseError(line_no, value_col, "missing value for '" + key + "'");
        if (key != "test_file" && !seen.emplace(key, line_no).second)
            throw ParseError(line_no, key_col, "duplicate key '" + key + "'");
        Value v{value, line_no, value_col};

        if (key == "domain") {
            try {
                config.domain = canonical_domain_name(value);
            } catch (const ValidationError& e) {
                v.fail(e.what());
            }
        } else if (key == "curriculum") config.curriculum = v.instances();
        else if (key == "test") config.tests = v.instances();
        else if (key == "test_file") config.test_files.emplace_back(value);
        else if (key == "runs") config.runs = v.number<int>();
        else if (key == "eval_episodes") config.eval_episodes = v.number<int>();
        else if (key == "seed") config.seed = v.number<std::uint64_t>();
        else if (key == "seeds") {
            for (const auto& part : split(value, ','))
                config.seeds.push_back(Value{part, line_no, value_col}.number<std::uint64_t>());
            config.runs = static_cast<int>(config.seeds.size());
        } else if (key == "instance_seed") config.instance_seed = v.number<std::uint64_t>();
        else if (key == "output_dir") config.output_dir = value;
        else if (key == "threads") config.threads = v.number<int>();
        else hyper_keys.emplace(key, v);
    }
    if (seen.count("runs") && seen.count("seeds"))
        throw ParseError(seen["seeds"], 1, "give either 'runs' or 'seeds', not both");
    // Domain defaults first, so overrides win regardless of line order.
    config.hyper = GrlHyper::for_domain(config.domain);
    for (const auto& [key, v] : hyper_keys) apply_hyper(config.hyper, key, v);
    try {
        config.validate();
    } catch (const ValidationError& e) {
        throw ParseError(line_no, 1, e.what());
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_experiment_config(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path.string() + ": " + e.what());
    }
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (!config.output_dir.empty()) return config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "grl_output";
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

struct RunOutput {
    std::vector<StageReport> stages;
    std::vector<ResultRecord> grl;
    std::vector<ResultRecord> random;
    std::optional<std::string> error;
};

RunOutput execute_run(const ExperimentConfig& config, const std::vector<InstanceSpec>& tests, std::uint64_t seed) {
    RunOutput out;
    try {
        LeapfrogResult trained = run_leapfrog(config.stages(), config.hyper, seed);
        for (std::size_t j = 0; j < tests.size(); ++j) {
            const std::uint64_t eval_seed = derive_seed(seed, {10, j});
            out.grl.push_back(
                evaluate_zero_shot(trained.net, trained.layout, tests[j], config.eval_episodes, eval_seed));
            out.random.push_back(evaluate_random(tests[j], config.eval_episodes, eval_seed));
        }
        out.stages = std::move(trained.stages);
    } catch (const std::exception& e) {
        out = RunOutput{};
        out.error = e.what();
    }
    return out;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, std::ostream* log) {
    config.validate();
    ExperimentReport report;
    report.output_dir = resolve_output_dir(config);
    std::filesystem::create_directories(report.output_dir);

    std::vector<InstanceSpec> tests;
    for (const auto& params : config.tests)
        tests.push_back(generate_instance(config.domain, params, config.instance_seed, config.hyper.horizon));
    for (const auto& path : config.test_files) {
        tests.push_back(load_instance(path));
        if (tests.back().domain.name() != config.domain)
            throw LayoutError("test instance " + path.string() + " is not a " + config.domain + " instance");
    }

    const auto seeds = config.run_seeds();
    std::vector<RunOutput> runs(seeds.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < seeds.size(); r = next++) {
            runs[r] = execute_run(config, tests, seeds[r]);
            if (log) {
                std::lock_guard lock(log_mutex);
                *log << "run " << r << " (seed " << seeds[r] << ") " << (runs[r].error ? "failed" : "done") << '\n';
            }
        }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config.threads), seeds.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::ofstream results(report.output_dir / "results.csv");
    std::ofstream curves(report.output_dir / "training_curves.csv");
    std::ofstream stage_csv(report.output_dir / "stages.csv");
    results << "run,seed,instance,policy,status,episodes,mean,std,returns\n";
    curves << "run,seed,stage,instance,episode,total_reward,epsilon,loss\n";
    stage_csv << "run,seed,stage,instance,initial_greedy_return,fresh_greedy_return,table_entries,"
                 "network_initializations\n";

    report.summary.resize(tests.size());
    for (std::size_t j = 0; j < tests.size(); ++j) report.summary[j].instance = tests[j].name;

    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        const std::string prefix = std::to_string(r) + "," + std::to_string(seeds[r]) + ",";
        if (run.error) {
            results << prefix << "*,-," << csv_field("error: " + *run.error) << ",0,,,\n";
            report.failures.push_back({static_cast<int>(r), seeds[r], *run.error});
            continue;
        }
        for (std::size_t j = 0; j < tests.size(); ++j) {
            for (const auto* rec : {&run.grl[j], &run.random[j]}) {
                const bool is_grl = rec == &run.grl[j];
                results << prefix << csv_field(rec->instance) << ',' << (is_grl ? "grl" : "random") << ",ok,"
                        << rec->returns.size() << ',' << num(rec->mean) << ',' << num(rec->stddev) << ',';
                for (std::size_t k = 0; k < rec->returns.size(); ++k) results << (k ? " " : "") << num(rec->returns[k]);
                results << '\n';
            }
            report.summary[j].grl_means.push_back(run.grl[j].mean);
            report.summary[j].random_means.push_back(run.random[j].mean);
            report.grl.push_back(run.grl[j]);
            report.random.push_back(run.random[j]);
        }
        for (std::size_t i = 0; i < run.stages.size(); ++i) {
            const auto& st = run.stages[i];
            stage_csv << prefix << i << ',' << csv_field(st.instance.name) << ',' << num(st.initial_greedy_return)
                      << ',' << num(st.fresh_greedy_return) << ',' << st.table_entries << ','
                      << st.network_initializations << '\n';
            for (const auto& e : st.curve)
                curves << prefix << i << ',' << csv_field(st.instance.name) << ',' << e.episode << ','
                       << num(e.total_reward) << ',' << num(e.epsilon) << ',' << num(e.loss) << '\n';
        }
        report.stages.push_back(run.stages);
    }

    std::ofstream plot(report.output_dir / "plot_data.dat");
    for (std::size_t j = 0; j < tests.size(); ++j) {
        auto& s = report.summary[j];
        if (s.grl_means.size() >= 2) s.welch = welch_t_test(s.grl_means, s.random_means);
        plot << "# instance " << s.instance << "\n# run grl_mean random_mean\n";
        for (std::size_t r = 0; r < s.grl_means.size(); ++r)
            plot << r << ' ' << num(s.grl_means[r]) << ' ' << num(s.random_means[r]) << '\n';
        plot << "\n\n";
    }

    if (log) {
        *log << "instance                         runs  grl mean (std)        random mean (std)     p(grl>random)\n";
        for (const auto& s : report.summary) {
            char p[32] = "n/a";
            if (s.grl_means.size() >= 2) std::snprintf(p, sizeof p, "%.3g", s.welch.p_greater);
            char line[256];
            std::snprintf(line, sizeof line, "%-32s %4zu  %9s (%8s)  %9s (%8s)  %s\n", s.instance.c_str(),
                          s.grl_means.size(), short_num(mean(s.grl_means)).c_str(),
                          short_num(population_stddev(s.grl_means)).c_str(), short_num(mean(s.random_means)).c_str(),
                          short_num(population_stddev(s.random_means)).c_str(),
                          p);
            *log << line;
        }
        for (const auto& f : report.failures) *log << "run " << f.run << " failed: " << f.message << '\n';
    }
    return report;
}

} // namespace grl
