#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tweetmine/cluster.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/embed.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/features.hpp"
#include "tweetmine/sentiment.hpp"
#include "tweetmine/textprep.hpp"

namespace tweetmine {

struct YearSeries {
    std::vector<std::pair<int, std::size_t>> entries;  // years strictly increasing
    std::size_t unknown = 0;                           // lenient-mode sentinel bucket
};

struct SentimentBreakdown {
    double share_negative = 0.0;
    double share_neutral = 0.0;
    double share_positive = 0.0;
};

struct MapPoint {
    std::string surface;
    double x = 0.0;
    double y = 0.0;
    std::size_t cluster = 0;
    std::size_t document_frequency = 0;
};

struct InterestMap {
    std::vector<MapPoint> points;
};

struct EvolutionPoint {
    int year = 0;
    SentimentBreakdown breakdown;
    std::size_t count = 0;
};

inline YearSeries tweets_per_year(const Corpus& corpus) {
    std::map<int, std::size_t> by_year;
    YearSeries series;
    for (const Document& d : corpus.documents) {
        if (d.year == kUnknownYear)
            ++series.unknown;
        else
            ++by_year[d.year];
    }
    series.entries.assign(by_year.begin(), by_year.end());
    return series;
}

inline std::map<std::string, double> keyterm_shares(
    const std::map<std::string, std::size_t>& counts) {
    std::size_t total = 0;
    for (const auto& [term, count] : counts) total += count;
    if (total == 0) throw EmptyInput("keyterm counts");
    std::map<std::string, double> shares;
    for (const auto& [term, count] : counts)
        shares[term] = static_cast<double>(count) / static_cast<double>(total);
    return shares;
}

// Case-insensitive phrase containment on cleaned, whitespace-normalized text.
inline Corpus topic_filter(const Corpus& corpus,
                           const std::vector<std::string>& topic_terms) {
    if (topic_terms.empty()) throw InvalidConfig("topic_filter needs at least one phrase");
    std::vector<std::string> phrases;
    phrases.reserve(topic_terms.size());
    for (const std::string& t : topic_terms) phrases.push_back(clean(t));

    Corpus out;
    out.source_path = corpus.source_path;
    for (const Document& d : corpus.documents) {
        const std::string cleaned = clean(d.text);
        for (const std::string& p : phrases) {
            if (!p.empty() && cleaned.find(p) != std::string::npos) {
                out.documents.push_back(d);
                break;
            }
        }
    }
    return out;
}

inline SentimentBreakdown corpus_breakdown(
    const std::vector<std::pair<std::string, SentimentScore>>& scores) {
    if (scores.empty()) throw EmptyInput("sentiment scores");
    std::size_t neg = 0, neu = 0, pos = 0;
    for (const auto& [id, score] : scores) {
        switch (score.label) {
            case SentimentLabel::NEGATIVE: ++neg; break;
            case SentimentLabel::NEUTRAL: ++neu; break;
            case SentimentLabel::POSITIVE: ++pos; break;
        }
    }
    const double total = static_cast<double>(scores.size());
    return {static_cast<double>(neg) / total, static_cast<double>(neu) / total,
            static_cast<double>(pos) / total};
}

// Per-year label shares over the topic-filtered subcorpus; zero-count years
// omitted; unknown-year documents excluded.
inline std::vector<EvolutionPoint> sentiment_evolution(
    const Corpus& corpus,
    const std::vector<std::pair<std::string, SentimentScore>>& scores,
    const std::vector<std::string>& topic_terms) {
    std::unordered_map<std::string, const SentimentScore*> by_id;
    by_id.reserve(scores.size());
    for (const auto& [id, score] : scores) by_id[id] = &score;

    const Corpus filtered = topic_filter(corpus, topic_terms);
    std::map<int, std::array<std::size_t, 3>> buckets;  // year → {neg, neu, pos}
    for (const Document& d : filtered.documents) {
        auto it = by_id.find(d.id);
        if (it == by_id.end()) throw MissingScore(d.id);
        if (d.year == kUnknownYear) continue;
        auto& b = buckets[d.year];
        switch (it->second->label) {
            case SentimentLabel::NEGATIVE: ++b[0]; break;
            case SentimentLabel::NEUTRAL: ++b[1]; break;
            case SentimentLabel::POSITIVE: ++b[2]; break;
        }
    }
    std::vector<EvolutionPoint> out;
    out.reserve(buckets.size());
    for (const auto& [year, b] : buckets) {
        EvolutionPoint p;
        p.year = year;
        p.count = b[0] + b[1] + b[2];
        const double total = static_cast<double>(p.count);
        p.breakdown = {static_cast<double>(b[0]) / total,
                       static_cast<double>(b[1]) / total,
                       static_cast<double>(b[2]) / total};
        out.push_back(p);
    }
    return out;
}

inline InterestMap assemble_map(const Vocabulary& vocab, const Embedding2D& embedding,
                                const ClusterModel& clusters) {
    if (vocab.size() != embedding.coords.rows())
        throw SizeMismatch(vocab.size(), embedding.coords.rows());
    if (vocab.size() != clusters.assignments.size())
        throw SizeMismatch(vocab.size(), clusters.assignments.size());
    InterestMap map;
    map.points.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        MapPoint p;
        p.surface = vocab.entries[i].ngram.surface;
        p.x = embedding.coords(i, 0);
        p.y = embedding.coords(i, 1);
        p.cluster = clusters.assignments[i];
        p.document_frequency = vocab.entries[i].document_frequency;
        map.points.push_back(std::move(p));
    }
    return map;
}

// ---- exports ----

inline void export_interest_map(const InterestMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    for (const MapPoint& p : map.points) {
        nlohmann::ordered_json rec;
        rec["surface"] = p.surface;
        rec["x"] = p.x;
        rec["y"] = p.y;
        rec["cluster"] = p.cluster;
        rec["df"] = p.document_frequency;
        out << rec.dump() << "\n";
    }
}

inline void export_map_svg(const InterestMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);

    static const char* kPalette[] = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
    };
    constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
    constexpr double kWidth = 800.0, kHeight = 600.0, kMargin = 40.0;
    constexpr double kMaxRadius = 12.0;

    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    double df_max = 1.0;
    if (!map.points.empty()) {
        xmin = xmax = map.points[0].x;
        ymin = ymax = map.points[0].y;
        for (const MapPoint& p : map.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
            df_max = std::max(df_max, static_cast<double>(p.document_frequency));
        }
    }
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    char buf[256];
    for (const MapPoint& p : map.points) {
        const double px =
            kMargin + (p.x - xmin) / xspan * (kWidth - 2.0 * kMargin);
        const double py =
            kHeight - kMargin - (p.y - ymin) / yspan * (kHeight - 2.0 * kMargin);
        // marker radius ∝ √df, largest marker pinned to kMaxRadius
        const double radius =
            kMaxRadius * std::sqrt(static_cast<double>(p.document_frequency) / df_max);
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" "
                      "fill-opacity=\"0.75\">",
                      px, py, std::max(radius, 1.0),
                      kPalette[p.cluster % kPaletteSize]);
        out << buf << "<title>";
        for (char c : p.surface) {  // minimal XML escaping
            switch (c) {
                case '&': out << "&amp;"; break;
                case '<': out << "&lt;"; break;
                case '>': out << "&gt;"; break;
                default: out << c;
            }
        }
        out << " (df=" << p.document_frequency << ", cluster=" << p.cluster
            << ")</title></circle>\n";
    }
    out << "</svg>\n";
}

inline void export_year_series(const YearSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    out << "year,count\n";
    for (const auto& [year, count] : series.entries)
        out << year << ',' << count << '\n';
    if (series.unknown > 0) out << "unknown," << series.unknown << '\n';
}

inline void export_evolution(const std::vector<EvolutionPoint>& evolution,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    out << "year,neg_share,neu_share,pos_share,count\n";
    char buf[200];
    for (const EvolutionPoint& p : evolution) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%zu", p.year,
                      p.breakdown.share_negative, p.breakdown.share_neutral,
                      p.breakdown.share_positive, p.count);
        out << buf << '\n';
    }
}

inline void export_scores(
    const std::vector<std::pair<std::string, SentimentScore>>& scores,
    const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    out << "doc_id,neg,neu,pos,compound,label\n";
    char buf[256];
    for (const auto& [id, s] : scores) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,", s.negative,
                      s.neutral, s.positive, s.compound);
        out << id << buf << to_string(s.label) << '\n';
    }
}

inline void export_breakdown(const SentimentBreakdown& b, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    out << "neg_share,neu_share,pos_share\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", b.share_negative,
                  b.share_neutral, b.share_positive);
    out << buf;
}

// "7% negative, 48% neutral, 45% positive" — whole-percent display rounding
inline std::string format_breakdown(const SentimentBreakdown& b) {
    auto pct = [](double share) {
        return std::to_string(static_cast<long long>(std::llround(share * 100.0)));
    };
    return pct(b.share_negative) + "% negative, " + pct(b.share_neutral) +
           "% neutral, " + pct(b.share_positive) + "% positive";
}

} // namespace tweetmine
