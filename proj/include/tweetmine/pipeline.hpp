#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tweetmine/analytics.hpp"
#include "tweetmine/cluster.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/decompose.hpp"
#include "tweetmine/embed.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/features.hpp"
#include "tweetmine/sentiment.hpp"
#include "tweetmine/textprep.hpp"

namespace tweetmine {

struct TopicSpec {
    std::string name;
    std::vector<std::string> terms;
};

struct PipelineConfig {
    std::string input_path;
    std::string output_dir = "out";
    std::uint64_t seed = 42;
    std::size_t ngram_max = 3;
    std::size_t min_df = 5;
    std::size_t svd_rank = 50;
    bool svd_rank_auto = true;  // default rank is capped at min(rows,cols)-1
    std::size_t kmeans_k = 12;
    std::size_t kmeans_restarts = 4;
    TsneConfig tsne;
    std::string lexicon_path = "data/vader_lexicon.txt";
    std::string stopwords_path = "data/stopwords.txt";
    std::string lemma_rules_path = "data/lemma_rules.txt";
    std::vector<TopicSpec> topics;
    bool lenient = false;
};

inline void validate(const PipelineConfig& config) {
    if (config.input_path.empty()) throw InvalidConfig("input_path is empty");
    if (config.output_dir.empty()) throw InvalidConfig("output_dir is empty");
    if (config.ngram_max < 1 || config.ngram_max > 3)
        throw InvalidConfig("ngram_max must be 1, 2 or 3");
    if (config.min_df < 1) throw InvalidConfig("min_df must be >= 1");
    if (config.svd_rank < 1) throw InvalidConfig("svd_rank must be >= 1");
    if (config.kmeans_k < 1) throw InvalidConfig("kmeans_k must be >= 1");
    if (config.kmeans_restarts < 1) throw InvalidConfig("kmeans_restarts must be >= 1");
    if (config.lexicon_path.empty() || config.stopwords_path.empty() ||
        config.lemma_rules_path.empty())
        throw InvalidConfig("resource paths must be non-empty");
    if (!(config.tsne.perplexity > 0)) throw InvalidConfig("perplexity must be positive");
    for (const TopicSpec& t : config.topics) {
        if (t.name.empty()) throw InvalidConfig("topic with empty name");
        if (t.terms.empty()) throw InvalidConfig("topic \"" + t.name + "\" has no terms");
    }
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_pipe(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t bar = s.find('|', start);
        std::string piece = trim(s.substr(start, bar - start));
        if (!piece.empty()) out.push_back(piece);
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return out;
}

template <typename T>
T parse_count(const std::string& value, std::size_t line_no) {
    try {
        return static_cast<T>(std::stoull(value));
    } catch (const std::exception&) {
        throw ParseError(line_no, "bad count \"" + value + "\"");
    }
}

inline double parse_real(const std::string& value, std::size_t line_no) {
    try {
        return std::stod(value);
    } catch (const std::exception&) {
        throw ParseError(line_no, "bad number \"" + value + "\"");
    }
}

} // namespace detail

// Flat "key = value" lines with '#' comment lines and one [topic] table per
// topic (keys: name, terms; terms are '|'-separated phrases).
inline PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw FileNotFound(path);
    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;
    bool in_topic = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[topic]") {
            in_topic = true;
            config.topics.emplace_back();
            continue;
        }
        if (!t.empty() && t[0] == '[')
            throw ParseError(line_no, "unknown section " + t);
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");

        if (in_topic) {
            TopicSpec& topic = config.topics.back();
            if (key == "name")
                topic.name = value;
            else if (key == "terms")
                topic.terms = detail::split_pipe(value);
            else
                throw ParseError(line_no, "unknown topic key \"" + key + "\"");
            continue;
        }
        if (key == "input_path") config.input_path = value;
        else if (key == "output_dir") config.output_dir = value;
        else if (key == "seed") config.seed = detail::parse_count<std::uint64_t>(value, line_no);
        else if (key == "ngram_max") config.ngram_max = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "min_df") config.min_df = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "svd_rank") {
            config.svd_rank = detail::parse_count<std::size_t>(value, line_no);
            config.svd_rank_auto = false;
        }
        else if (key == "kmeans_k") config.kmeans_k = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "kmeans_restarts") config.kmeans_restarts = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "perplexity") config.tsne.perplexity = detail::parse_real(value, line_no);
        else if (key == "learning_rate") config.tsne.learning_rate = detail::parse_real(value, line_no);
        else if (key == "n_iter") config.tsne.n_iter = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "early_exaggeration") config.tsne.early_exaggeration = detail::parse_real(value, line_no);
        else if (key == "exaggeration_iters") config.tsne.exaggeration_iters = detail::parse_count<std::size_t>(value, line_no);
        else if (key == "momentum_early") config.tsne.momentum_early = detail::parse_real(value, line_no);
        else if (key == "momentum_late") config.tsne.momentum_late = detail::parse_real(value, line_no);
        else if (key == "lexicon_path") config.lexicon_path = value;
        else if (key == "stopwords_path") config.stopwords_path = value;
        else if (key == "lemma_rules_path") config.lemma_rules_path = value;
        else if (key == "lenient") config.lenient = value == "true" || value == "1";
        else throw ParseError(line_no, "unknown key \"" + key + "\"");
    }
    return config;
}

namespace detail {

inline std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) throw FileNotFound(path);
    std::uint64_t hash = 14695981039346656037ULL;
    char buf[1 << 14];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (in.eof()) break;
    }
    return hash;
}

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string topic_slug(const std::string& name) {
    std::string slug;
    for (char c : name) {
        if (c >= 'A' && c <= 'Z') c += 32;
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_')
            slug.push_back(c);
        else if (c == ' ')
            slug.push_back('_');
    }
    return slug.empty() ? "topic" : slug;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const InputError& e) {
        throw StageError(name, e, true);
    } catch (const Error& e) {
        throw StageError(name, e, false);
    }
}

// Echo of everything that determines the run's content.  output_dir is
// deliberately excluded so runs into different directories stay
// byte-identical; artifact names are relative for the same reason.
inline std::string manifest_text(const PipelineConfig& config,
                                 const std::vector<std::string>& artifacts) {
    std::ostringstream out;
    out << "# tweetmine run manifest\n";
    out << "input_path = " << config.input_path << '\n';
    out << "seed = " << config.seed << '\n';
    out << "ngram_max = " << config.ngram_max << '\n';
    out << "min_df = " << config.min_df << '\n';
    out << "svd_rank = " << config.svd_rank << '\n';
    out << "kmeans_k = " << config.kmeans_k << '\n';
    out << "kmeans_restarts = " << config.kmeans_restarts << '\n';
    out << "perplexity = " << fmt_real(config.tsne.perplexity) << '\n';
    out << "learning_rate = " << fmt_real(config.tsne.learning_rate) << '\n';
    out << "n_iter = " << config.tsne.n_iter << '\n';
    out << "early_exaggeration = " << fmt_real(config.tsne.early_exaggeration) << '\n';
    out << "exaggeration_iters = " << config.tsne.exaggeration_iters << '\n';
    out << "momentum_early = " << fmt_real(config.tsne.momentum_early) << '\n';
    out << "momentum_late = " << fmt_real(config.tsne.momentum_late) << '\n';
    out << "lexicon_path = " << config.lexicon_path << '\n';
    out << "stopwords_path = " << config.stopwords_path << '\n';
    out << "lemma_rules_path = " << config.lemma_rules_path << '\n';
    out << "lenient = " << (config.lenient ? "true" : "false") << '\n';
    for (const TopicSpec& t : config.topics) {
        out << "topic " << t.name << " =";
        for (std::size_t i = 0; i < t.terms.size(); ++i)
            out << (i ? " | " : " ") << t.terms[i];
        out << '\n';
    }
    std::vector<std::string> sorted = artifacts;
    std::sort(sorted.begin(), sorted.end());
    for (const std::string& name : sorted) {
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(
                          (std::filesystem::path(config.output_dir) / name).string())));
        out << "artifact " << name << " fnv1a64=" << hex << '\n';
    }
    return out.str();
}

inline void write_manifest(const PipelineConfig& config,
                           const std::vector<std::string>& artifacts) {
    const std::string text = manifest_text(config, artifacts);
    std::ofstream out((std::filesystem::path(config.output_dir) / "manifest.txt").string());
    out << text;
    std::cout << text;
}

inline std::string artifact_path(const PipelineConfig& config, const std::string& name) {
    return (std::filesystem::path(config.output_dir) / name).string();
}

} // namespace detail

struct MapRunResult {
    Corpus corpus;
    Vocabulary vocabulary;
    InterestMap map;
    std::vector<std::string> artifacts;
};

struct SentimentRunResult {
    Corpus corpus;
    std::vector<std::pair<std::string, SentimentScore>> scores;
    SentimentBreakdown breakdown;
    std::vector<std::string> artifacts;
};

namespace detail {

inline MapRunResult run_map_stages(const PipelineConfig& config) {
    MapRunResult result;
    std::filesystem::create_directories(config.output_dir);

    result.corpus = stage("corpus", [&] {
        return deduplicate(load_corpus(config.input_path, !config.lenient));
    });

    std::vector<TokenizedDocument> docs = stage("textprep", [&] {
        const LemmaRules rules = load_lemma_rules(config.lemma_rules_path);
        const auto stopwords = load_stopwords(config.stopwords_path);
        return prepare_corpus(result.corpus, rules, stopwords);
    });

    SparseBinaryMatrix matrix;
    stage("features", [&] {
        result.vocabulary = build_vocabulary(docs, config.ngram_max, config.min_df);
        matrix = build_matrix(docs, result.vocabulary);
        export_vocabulary(result.vocabulary, artifact_path(config, "vocabulary.tsv"));
        return 0;
    });
    result.artifacts.push_back("vocabulary.tsv");

    ReducedMatrix reduced = stage("decompose", [&] {
        std::size_t rank = config.svd_rank;
        const std::size_t limit = std::min(matrix.n_rows, matrix.n_cols);
        if (config.svd_rank_auto && limit > 1)
            rank = std::min(rank, limit - 1);
        SvdResult svd = truncated_svd(matrix, rank, config.seed);
        ReducedMatrix red = reduce(svd);
        export_reduced(red, artifact_path(config, "reduced.txt"));
        return red;
    });
    result.artifacts.push_back("reduced.txt");

    std::vector<std::string> surfaces;
    surfaces.reserve(result.vocabulary.size());
    for (const auto& e : result.vocabulary.entries) surfaces.push_back(e.ngram.surface);

    ClusterModel clusters = stage("cluster", [&] {
        ClusterModel model = best_of_restarts(reduced, config.kmeans_k,
                                              config.kmeans_restarts, config.seed + 1);
        export_clusters(surfaces, model, artifact_path(config, "clusters.tsv"));
        return model;
    });
    result.artifacts.push_back("clusters.tsv");

    Embedding2D embedding = stage("embed", [&] {
        TsneConfig tsne_config = config.tsne;
        tsne_config.seed = config.seed + 2;
        Embedding2D emb = tsne(reduced, tsne_config);
        export_embedding(surfaces, emb, artifact_path(config, "embedding.tsv"));
        return emb;
    });
    result.artifacts.push_back("embedding.tsv");

    stage("analytics", [&] {
        result.map = assemble_map(result.vocabulary, embedding, clusters);
        export_interest_map(result.map, artifact_path(config, "interest_map.jsonl"));
        export_map_svg(result.map, artifact_path(config, "interest_map.svg"));
        return 0;
    });
    result.artifacts.push_back("interest_map.jsonl");
    result.artifacts.push_back("interest_map.svg");
    return result;
}

inline SentimentRunResult run_sentiment_stages(const PipelineConfig& config) {
    SentimentRunResult result;
    std::filesystem::create_directories(config.output_dir);

    result.corpus = stage("corpus", [&] {
        return deduplicate(load_corpus(config.input_path, !config.lenient));
    });

    stage("sentiment", [&] {
        const SentimentLexicon lexicon = load_lexicon(config.lexicon_path);
        result.scores = score_corpus(result.corpus, lexicon);
        export_scores(result.scores, artifact_path(config, "scores.csv"));
        return 0;
    });
    result.artifacts.push_back("scores.csv");

    stage("analytics", [&] {
        result.breakdown = corpus_breakdown(result.scores);
        export_breakdown(result.breakdown, artifact_path(config, "breakdown.csv"));
        export_year_series(tweets_per_year(result.corpus),
                           artifact_path(config, "yearly_counts.csv"));
        for (const TopicSpec& topic : config.topics) {
            const auto evolution =
                sentiment_evolution(result.corpus, result.scores, topic.terms);
            const std::string name = "evolution_" + topic_slug(topic.name) + ".csv";
            export_evolution(evolution, artifact_path(config, name));
            result.artifacts.push_back(name);
        }
        return 0;
    });
    result.artifacts.push_back("breakdown.csv");
    result.artifacts.push_back("yearly_counts.csv");
    return result;
}

struct ReportInputs {
    std::vector<std::pair<std::string, std::size_t>> top_terms;  // from vocabulary.tsv
    SentimentBreakdown breakdown;
};

inline std::string render_report(const PipelineConfig& config) {
    // report is assembled from prior artifacts plus the corpus itself
    const std::string vocab_path = artifact_path(config, "vocabulary.tsv");
    if (!std::filesystem::exists(vocab_path)) throw MissingArtifact("map");
    const std::string breakdown_path = artifact_path(config, "breakdown.csv");
    if (!std::filesystem::exists(breakdown_path)) throw MissingArtifact("sentiment");

    std::vector<std::pair<std::string, std::size_t>> top_terms;
    {
        std::ifstream in(vocab_path);
        std::string line;
        while (top_terms.size() < 10 && std::getline(in, line)) {
            const std::size_t tab = line.find('\t');
            if (tab == std::string::npos) continue;
            top_terms.emplace_back(line.substr(0, tab),
                                   std::stoull(line.substr(tab + 1)));
        }
    }
    SentimentBreakdown breakdown;
    {
        std::ifstream in(breakdown_path);
        std::string header, row;
        std::getline(in, header);
        if (!std::getline(in, row)) throw MissingArtifact("sentiment");
        std::replace(row.begin(), row.end(), ',', ' ');
        std::istringstream fields(row);
        fields >> breakdown.share_negative >> breakdown.share_neutral >>
            breakdown.share_positive;
    }

    const Corpus corpus = stage("corpus", [&] {
        return deduplicate(load_corpus(config.input_path, !config.lenient));
    });
    const auto counts = keyterm_counts(corpus);
    const auto shares = keyterm_shares(counts);

    std::ostringstream out;
    out << "INTEREST AND SENTIMENT REPORT\n";
    out << "=============================\n\n";
    out << "Corpus: " << config.input_path << " (" << corpus.size()
        << " documents after deduplication)\n\n";

    out << "Most frequent n-grams (document frequency):\n";
    for (std::size_t i = 0; i < top_terms.size(); ++i)
        out << "  " << (i + 1) << ". " << top_terms[i].first << "  "
            << top_terms[i].second << '\n';
    out << '\n';

    out << "Key-term shares:\n";
    for (const auto& [term, share] : shares)
        out << "  " << term << ": "
            << static_cast<long long>(std::llround(share * 100.0)) << "% ("
            << counts.at(term) << ")\n";
    out << '\n';

    out << "Sentiment: " << format_breakdown(breakdown) << "\n\n";

    if (!config.topics.empty()) {
        out << "Topics:\n";
        for (const TopicSpec& topic : config.topics) {
            const std::string evo_path =
                artifact_path(config, "evolution_" + topic_slug(topic.name) + ".csv");
            if (!std::filesystem::exists(evo_path)) throw MissingArtifact("sentiment");
            std::ifstream in(evo_path);
            std::string line;
            std::getline(in, line);  // header
            int first_year = 0, last_year = 0;
            double first_pos = 0.0, last_pos = 0.0;
            std::size_t total = 0, rows = 0;
            while (std::getline(in, line)) {
                std::replace(line.begin(), line.end(), ',', ' ');
                std::istringstream fields(line);
                int year;
                double neg, neu, pos;
                std::size_t count;
                if (!(fields >> year >> neg >> neu >> pos >> count)) continue;
                if (rows == 0) { first_year = year; first_pos = pos; }
                last_year = year;
                last_pos = pos;
                total += count;
                ++rows;
            }
            out << "  " << topic.name << ": " << total << " docs";
            if (rows > 0)
                out << ", positive share "
                    << static_cast<long long>(std::llround(first_pos * 100.0)) << "% ("
                    << first_year << ") -> "
                    << static_cast<long long>(std::llround(last_pos * 100.0)) << "% ("
                    << last_year << ")";
            out << '\n';
        }
    }
    return out.str();
}

} // namespace detail

inline MapRunResult run_map(const PipelineConfig& config) {
    validate(config);
    MapRunResult result = detail::run_map_stages(config);
    detail::write_manifest(config, result.artifacts);
    return result;
}

inline SentimentRunResult run_sentiment(const PipelineConfig& config) {
    validate(config);
    SentimentRunResult result = detail::run_sentiment_stages(config);
    detail::write_manifest(config, result.artifacts);
    return result;
}

inline std::string run_report(const PipelineConfig& config) {
    validate(config);
    const std::string text = detail::render_report(config);
    std::ofstream out(detail::artifact_path(config, "report.txt"));
    out << text;
    std::cout << text;
    return text;
}

inline void run_all(const PipelineConfig& config) {
    validate(config);
    MapRunResult map_result = detail::run_map_stages(config);
    SentimentRunResult senti_result = detail::run_sentiment_stages(config);
    const std::string report = detail::render_report(config);
    std::ofstream out(detail::artifact_path(config, "report.txt"));
    out << report;

    std::vector<std::string> artifacts = map_result.artifacts;
    artifacts.insert(artifacts.end(), senti_result.artifacts.begin(),
                     senti_result.artifacts.end());
    artifacts.push_back("report.txt");
    detail::write_manifest(config, artifacts);
}

} // namespace tweetmine
