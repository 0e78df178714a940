// grl: command-line front end (gen, features, train, eval, bench).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "grl/checkpoint.hpp"
#include "grl/dl_enumerate.hpp"
#include "grl/error.hpp"
#include "grl/evaluation.hpp"
#include "grl/experiment.hpp"
#include "grl/generator.hpp"
#include "grl/grl.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw grl::Error("cannot write " + path);
    out << text;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) out.push_back(std::stoi(part));
    return out;
}

std::vector<std::vector<int>> parse_curriculum(const std::string& text) {
    std::vector<std::vector<int>> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ';')) out.push_back(parse_sizes(part));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized reinforcement learning over relational domains"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Write a generated instance file");
    std::string gen_domain, gen_sizes, gen_out;
    std::uint64_t gen_seed = 0;
    int gen_horizon = 40;
    gen->add_option("domain", gen_domain, "sysadmin|academic_advising|game_of_life|wildfire (or sys/aa/gol/wf)")
        ->required();
    gen->add_option("sizes", gen_sizes, "Comma-separated size parameters, e.g. 3 or 2,2,2")->required();
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--horizon", gen_horizon, "Episode horizon");
    gen->add_option("-o,--output", gen_out, "Output file (default stdout)");

    // features
    auto* feat = app.add_subcommand("features", "Enumerate and dump the feature set of an instance");
    std::string feat_instance, feat_out;
    int feat_k = 5, feat_episodes = 100;
    std::uint64_t feat_seed = 0;
    feat->add_option("instance", feat_instance, "Instance file")->required()->check(CLI::ExistingFile);
    feat->add_option("-k,--complexity", feat_k, "Maximum feature complexity");
    feat->add_option("--episodes", feat_episodes, "Random-walk episodes for the sampled state space");
    feat->add_option("--seed", feat_seed, "Sampling seed");
    feat->add_option("-o,--output", feat_out, "Output file (default stdout)");

    // train
    auto* train = app.add_subcommand("train", "Leapfrog training; writes a checkpoint");
    std::string train_domain = "sysadmin", train_curriculum = "3;4;6", train_out = "model.ckpt", train_curves;
    std::uint64_t train_seed = 0;
    int train_episodes = -1;
    train->add_option("--domain", train_domain, "Domain name");
    train->add_option("--curriculum", train_curriculum, "Stages separated by ';', sizes by ','");
    train->add_option("--episodes", train_episodes, "Episodes per stage (default 1250)");
    train->add_option("--seed", train_seed, "Run seed");
    train->add_option("-o,--output", train_out, "Checkpoint path");
    train->add_option("--curves", train_curves, "Optional CSV of per-episode training records");

    // eval
    auto* eval = app.add_subcommand("eval", "Zero-shot evaluation of a checkpoint on instance files");
    std::string eval_ckpt, eval_out;
    std::vector<std::string> eval_instances;
    int eval_episodes = 100;
    std::uint64_t eval_seed = 0;
    eval->add_option("checkpoint", eval_ckpt, "Checkpoint file")->required()->check(CLI::ExistingFile);
    eval->add_option("instances", eval_instances, "Instance files")->required()->check(CLI::ExistingFile);
    eval->add_option("--episodes", eval_episodes, "Greedy episodes per instance");
    eval->add_option("--seed", eval_seed, "Evaluation seed");
    eval->add_option("-o,--output", eval_out, "Output directory (default $GRL_OUTPUT_DIR or grl_output)");

    // bench
    auto* bench = app.add_subcommand("bench", "Full experiment from a config file");
    std::string bench_config, bench_out;
    int bench_threads = 0;
    bench->add_option("config", bench_config, "Experiment config file")->required()->check(CLI::ExistingFile);
    bench->add_option("-o,--output", bench_out, "Output directory (overrides the config)");
    bench->add_option("-j,--threads", bench_threads, "Worker threads (overrides the config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            auto spec = grl::generate_instance(gen_domain, parse_sizes(gen_sizes), gen_seed, gen_horizon);
            write_text(gen_out, grl::format_instance(spec));
        } else if (*feat) {
            auto spec = grl::load_instance(feat_instance);
            grl::GrlHyper h;
            h.feature_complexity = feat_k;
            h.sample_episodes = feat_episodes;
            auto layout = grl::build_layout(spec, h, feat_seed);
            write_text(feat_out, grl::dl::serialize_features(layout.features));
            std::cerr << layout.feature_count() << " features, network input size " << layout.input_size() << '\n';
        } else if (*train) {
            const auto domain = grl::canonical_domain_name(train_domain);
            auto hyper = grl::GrlHyper::for_domain(domain);
            if (train_episodes >= 0) hyper.episodes = train_episodes;
            std::vector<grl::CurriculumStage> stages;
            for (auto& sizes : parse_curriculum(train_curriculum)) stages.push_back({domain, sizes, hyper.episodes});
            auto result = grl::run_leapfrog(stages, hyper, train_seed);
            grl::write_checkpoint(train_out, result.net, result.layout);
            std::ostringstream curves;
            curves << "stage,instance,episode,total_reward,epsilon,loss\n";
            for (std::size_t i = 0; i < result.stages.size(); ++i) {
                const auto& st = result.stages[i];
                double last = 0.0;
                for (const auto& e : st.curve) {
                    curves << i << ',' << st.instance.name << ',' << e.episode << ',' << e.total_reward << ','
                           << e.epsilon << ',' << e.loss << '\n';
                    last = e.total_reward;
                }
                std::cout << "stage " << i << ' ' << st.instance.name << ": initial greedy return "
                          << st.initial_greedy_return << ", last training return " << last << '\n';
            }
            if (!train_curves.empty()) write_text(train_curves, curves.str());
            std::cout << result.layout.feature_count() << " features; checkpoint written to " << train_out << '\n';
        } else if (*eval) {
            auto ckpt = grl::read_checkpoint(eval_ckpt);
            grl::ExperimentConfig defaults;
            defaults.output_dir = eval_out;
            auto dir = grl::resolve_output_dir(defaults);
            std::filesystem::create_directories(dir);
            std::ofstream csv(dir / "results.csv");
            csv << "instance,policy,episodes,mean,std\n";
            for (const auto& path : eval_instances) {
                auto spec = grl::load_instance(path);
                auto g = grl::evaluate_zero_shot(ckpt.net, ckpt.layout, spec, eval_episodes, eval_seed);
                auto r = grl::evaluate_random(spec, eval_episodes, eval_seed);
                for (const auto* rec : {&g, &r}) {
                    char line[256];
                    std::snprintf(line, sizeof line, "%s,%s,%zu,%.17g,%.17g\n", rec->instance.c_str(),
                                  rec == &g ? "grl" : "random", rec->returns.size(), rec->mean, rec->stddev);
                    csv << line;
                }
                std::printf("%-32s grl %10.3f (%.3f)   random %10.3f (%.3f)\n", spec.name.c_str(), g.mean, g.stddev,
                            r.mean, r.stddev);
            }
            std::cout << "results written to " << (dir / "results.csv").string() << '\n';
        } else if (*bench) {
            auto config = grl::load_experiment_config(bench_config);
            if (!bench_out.empty()) config.output_dir = bench_out;
            if (bench_threads > 0) config.threads = bench_threads;
            auto report = grl::run_experiment(config, &std::cout);
            std::cout << "outputs in " << report.output_dir.string() << '\n';
            return report.failures.empty() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
