#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tweetmine/pipeline.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string input;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t ngram_max = 0;
    std::size_t min_df = 0;
    std::size_t svd_rank = 0;
    std::size_t k = 0;
    std::size_t restarts = 0;
    double perplexity = 0.0;
    double learning_rate = 0.0;
    std::size_t n_iter = 0;
    double early_exaggeration = 0.0;
    std::size_t exaggeration_iters = 0;
    double momentum_early = 0.0;
    double momentum_late = 0.0;
    std::string lexicon;
    std::string stopwords;
    std::string lemma_rules;
    bool lenient = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("-c,--config", o.config_path, "configuration file");
    cmd->add_option("-i,--input", o.input, "input corpus (JSON lines)");
    cmd->add_option("-o,--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--ngram-max", o.ngram_max, "largest n-gram size (1..3)");
    cmd->add_option("--min-df", o.min_df, "minimum document frequency");
    cmd->add_option("--svd-rank", o.svd_rank, "truncated SVD rank");
    cmd->add_option("--k", o.k, "number of k-means clusters");
    cmd->add_option("--restarts", o.restarts, "k-means restarts");
    cmd->add_option("--perplexity", o.perplexity, "t-SNE perplexity");
    cmd->add_option("--learning-rate", o.learning_rate, "t-SNE learning rate");
    cmd->add_option("--n-iter", o.n_iter, "t-SNE iterations");
    cmd->add_option("--early-exaggeration", o.early_exaggeration,
                    "t-SNE early exaggeration factor");
    cmd->add_option("--exaggeration-iters", o.exaggeration_iters,
                    "iterations under early exaggeration");
    cmd->add_option("--momentum-early", o.momentum_early, "momentum before switch");
    cmd->add_option("--momentum-late", o.momentum_late, "momentum after switch");
    cmd->add_option("--lexicon", o.lexicon, "sentiment lexicon file");
    cmd->add_option("--stopwords", o.stopwords, "stopword list file");
    cmd->add_option("--lemma-rules", o.lemma_rules, "lemmatization rules file");
    cmd->add_flag("--lenient", o.lenient, "skip malformed corpus lines");
}

tweetmine::PipelineConfig build_config(const CLI::App* cmd, const CliOverrides& o) {
    tweetmine::PipelineConfig config;
    if (cmd->count("--config")) config = tweetmine::load_config(o.config_path);

    // command line wins over the config file
    if (cmd->count("--input")) config.input_path = o.input;
    if (cmd->count("--out")) config.output_dir = o.out;
    if (cmd->count("--seed")) config.seed = o.seed;
    if (cmd->count("--ngram-max")) config.ngram_max = o.ngram_max;
    if (cmd->count("--min-df")) config.min_df = o.min_df;
    if (cmd->count("--svd-rank")) {
        config.svd_rank = o.svd_rank;
        config.svd_rank_auto = false;
    }
    if (cmd->count("--k")) config.kmeans_k = o.k;
    if (cmd->count("--restarts")) config.kmeans_restarts = o.restarts;
    if (cmd->count("--perplexity")) config.tsne.perplexity = o.perplexity;
    if (cmd->count("--learning-rate")) config.tsne.learning_rate = o.learning_rate;
    if (cmd->count("--n-iter")) config.tsne.n_iter = o.n_iter;
    if (cmd->count("--early-exaggeration"))
        config.tsne.early_exaggeration = o.early_exaggeration;
    if (cmd->count("--exaggeration-iters"))
        config.tsne.exaggeration_iters = o.exaggeration_iters;
    if (cmd->count("--momentum-early")) config.tsne.momentum_early = o.momentum_early;
    if (cmd->count("--momentum-late")) config.tsne.momentum_late = o.momentum_late;
    if (cmd->count("--lexicon")) config.lexicon_path = o.lexicon;
    if (cmd->count("--stopwords")) config.stopwords_path = o.stopwords;
    if (cmd->count("--lemma-rules")) config.lemma_rules_path = o.lemma_rules;
    if (cmd->count("--lenient")) config.lenient = true;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twitter interest-map and sentiment mining pipeline"};
    app.require_subcommand(1);

    CliOverrides o_map, o_senti, o_report, o_all;
    CLI::App* cmd_map = app.add_subcommand("map", "build the interest map");
    CLI::App* cmd_senti = app.add_subcommand("sentiment", "score sentiment");
    CLI::App* cmd_report = app.add_subcommand("report", "render the summary report");
    CLI::App* cmd_all = app.add_subcommand("all", "full pipeline");
    add_common_options(cmd_map, o_map);
    add_common_options(cmd_senti, o_senti);
    add_common_options(cmd_report, o_report);
    add_common_options(cmd_all, o_all);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_map->parsed()) {
            tweetmine::run_map(build_config(cmd_map, o_map));
        } else if (cmd_senti->parsed()) {
            tweetmine::run_sentiment(build_config(cmd_senti, o_senti));
        } else if (cmd_report->parsed()) {
            tweetmine::run_report(build_config(cmd_report, o_report));
        } else if (cmd_all->parsed()) {
            tweetmine::run_all(build_config(cmd_all, o_all));
        }
    } catch (const tweetmine::StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_input ? 2 : 1;
    } catch (const tweetmine::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tweetmine::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
