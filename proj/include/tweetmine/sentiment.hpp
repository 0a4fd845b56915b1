#pragma once

// Rule-based sentiment intensity analyzer following the VADER conventions
// (C.J. Hutto & E. Gilbert, 2014).  Idiom and emoji tables are deliberately
// out of scope; URLs and @mentions are stripped before scoring.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tweetmine/corpus.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/textprep.hpp"

namespace tweetmine {

// All rule constants in one record so tests can pin them.
struct RuleConstants {
    double booster_decay_1 = 0.95;   // booster two tokens back
    double booster_decay_2 = 0.90;   // booster three tokens back
    double caps_increment = 0.733;   // ALL-CAPS emphasis
    double negation_factor = -0.74;  // negator flip/damp
    double exclaim_increment = 0.292;
    int max_exclaims = 4;
    double but_before = 0.5;
    double but_after = 1.5;
    double alpha = 15.0;             // compound normalization
    double pos_threshold = 0.05;
    double neg_threshold = -0.05;
};

enum class SentimentLabel { NEGATIVE, NEUTRAL, POSITIVE };

inline const char* to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::NEGATIVE: return "NEGATIVE";
        case SentimentLabel::NEUTRAL: return "NEUTRAL";
        case SentimentLabel::POSITIVE: return "POSITIVE";
    }
    return "NEUTRAL";
}

struct SentimentScore {
    double negative = 0.0;
    double neutral = 0.0;
    double positive = 0.0;
    double compound = 0.0;
    SentimentLabel label = SentimentLabel::NEUTRAL;
};

inline constexpr double kBoostIncr = 0.293;

inline const std::unordered_set<std::string>& default_negators() {
    static const std::unordered_set<std::string> negators = {
        "ain't", "aint", "aren't", "arent", "can't", "cannot",
        "cant", "couldn't", "couldnt", "daren't", "darent", "despite",
        "didn't", "didnt", "doesn't", "doesnt", "don't", "dont",
        "hadn't", "hadnt", "hasn't", "hasnt", "haven't", "havent",
        "isn't", "isnt", "mightn't", "mightnt", "mustn't", "mustnt",
        "needn't", "neednt", "neither", "never", "none", "nope",
        "nor", "not", "nothing", "nowhere", "oughtn't", "oughtnt",
        "rarely", "seldom", "shan't", "shant", "shouldn't", "shouldnt",
        "uh-uh", "uhuh", "wasn't", "wasnt", "weren't", "werent",
        "without", "won't", "wont", "wouldn't", "wouldnt",
    };
    return negators;
}

inline const std::unordered_map<std::string, double>& default_boosters() {
    static const std::unordered_map<std::string, double> boosters = {
        {"absolutely", +kBoostIncr},
        {"almost", -kBoostIncr},
        {"amazingly", +kBoostIncr},
        {"awfully", +kBoostIncr},
        {"barely", -kBoostIncr},
        {"completely", +kBoostIncr},
        {"considerable", +kBoostIncr},
        {"considerably", +kBoostIncr},
        {"decidedly", +kBoostIncr},
        {"deeply", +kBoostIncr},
        {"effing", +kBoostIncr},
        {"enormous", +kBoostIncr},
        {"enormously", +kBoostIncr},
        {"entirely", +kBoostIncr},
        {"especially", +kBoostIncr},
        {"exceptional", +kBoostIncr},
        {"exceptionally", +kBoostIncr},
        {"extreme", +kBoostIncr},
        {"extremely", +kBoostIncr},
        {"fabulously", +kBoostIncr},
        {"flippin", +kBoostIncr},
        {"flipping", +kBoostIncr},
        {"frackin", +kBoostIncr},
        {"fracking", +kBoostIncr},
        {"frickin", +kBoostIncr},
        {"fricking", +kBoostIncr},
        {"friggin", +kBoostIncr},
        {"frigging", +kBoostIncr},
        {"fuckin", +kBoostIncr},
        {"fucking", +kBoostIncr},
        {"fuggin", +kBoostIncr},
        {"fugging", +kBoostIncr},
        {"fully", +kBoostIncr},
        {"greatly", +kBoostIncr},
        {"hardly", -kBoostIncr},
        {"hella", +kBoostIncr},
        {"highly", +kBoostIncr},
        {"hugely", +kBoostIncr},
        {"incredible", +kBoostIncr},
        {"incredibly", +kBoostIncr},
        {"intensely", +kBoostIncr},
        {"just enough", -kBoostIncr},
        {"kind of", -kBoostIncr},
        {"kind-of", -kBoostIncr},
        {"kinda", -kBoostIncr},
        {"kindof", -kBoostIncr},
        {"less", -kBoostIncr},
        {"little", -kBoostIncr},
        {"major", +kBoostIncr},
        {"majorly", +kBoostIncr},
        {"marginal", -kBoostIncr},
        {"marginally", -kBoostIncr},
        {"more", +kBoostIncr},
        {"most", +kBoostIncr},
        {"occasional", -kBoostIncr},
        {"occasionally", -kBoostIncr},
        {"particularly", +kBoostIncr},
        {"partly", -kBoostIncr},
        {"purely", +kBoostIncr},
        {"quite", +kBoostIncr},
        {"really", +kBoostIncr},
        {"remarkably", +kBoostIncr},
        {"scarce", -kBoostIncr},
        {"scarcely", -kBoostIncr},
        {"slight", -kBoostIncr},
        {"slightly", -kBoostIncr},
        {"so", +kBoostIncr},
        {"somewhat", -kBoostIncr},
        {"sort of", -kBoostIncr},
        {"sort-of", -kBoostIncr},
        {"sorta", -kBoostIncr},
        {"sortof", -kBoostIncr},
        {"substantially", +kBoostIncr},
        {"thoroughly", +kBoostIncr},
        {"total", +kBoostIncr},
        {"totally", +kBoostIncr},
        {"tremendous", +kBoostIncr},
        {"tremendously", +kBoostIncr},
        {"uber", +kBoostIncr},
        {"unbelievably", +kBoostIncr},
        {"unusually", +kBoostIncr},
        {"utter", +kBoostIncr},
        {"utterly", +kBoostIncr},
        {"very", +kBoostIncr},
    };
    return boosters;
}

struct SentimentLexicon {
    std::unordered_map<std::string, double> valences;  // lowercase token → mean
    std::unordered_map<std::string, double> boosters;
    std::unordered_set<std::string> negators;
    RuleConstants constants;
};

inline SentimentLexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw FileNotFound(path);
    SentimentLexicon lex;
    lex.boosters = default_boosters();
    lex.negators = default_negators();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ParseError(line_no, "expected token<TAB>mean_valence");
        try {
            lex.valences[line.substr(0, tab)] = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            throw ParseError(line_no, "bad valence \"" + line.substr(tab + 1) + "\"");
        }
    }
    if (lex.valences.empty()) throw EmptyInput("lexicon " + path);
    return lex;
}

inline SentimentLabel classify(double compound,
                               const RuleConstants& constants = RuleConstants{}) {
    if (compound < -1.0 || compound > 1.0) throw OutOfRange(compound);
    if (compound >= constants.pos_threshold) return SentimentLabel::POSITIVE;
    if (compound <= constants.neg_threshold) return SentimentLabel::NEGATIVE;
    return SentimentLabel::NEUTRAL;
}

namespace detail {

inline const std::string kPunct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

// strip leading/trailing punctuation; keep the original token when the
// remainder is two characters or fewer (preserves emoticons like ":)")
inline std::string strip_punct(const std::string& token) {
    std::size_t lo = 0;
    std::size_t hi = token.size();
    while (lo < hi && kPunct.find(token[lo]) != std::string::npos) ++lo;
    while (hi > lo && kPunct.find(token[hi - 1]) != std::string::npos) --hi;
    std::string stripped = token.substr(lo, hi - lo);
    return stripped.size() <= 2 ? token : stripped;
}

// Python str.isupper over ASCII: at least one cased character, none lowercase
inline bool is_all_caps(const std::string& token) {
    bool any_upper = false;
    for (char c : token) {
        if (c >= 'a' && c <= 'z') return false;
        if (c >= 'A' && c <= 'Z') any_upper = true;
    }
    return any_upper;
}

inline std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c += 32;
    return out;
}

inline bool is_negator(const std::string& low,
                       const std::unordered_set<std::string>& negators) {
    return negators.count(low) > 0 || low.find("n't") != std::string::npos;
}

} // namespace detail

inline SentimentScore polarity(const std::string& text,
                               const SentimentLexicon& lexicon) {
    const RuleConstants& rc = lexicon.constants;

    // whitespace tokens with URLs and @mentions dropped
    std::vector<std::string> raw;
    {
        std::string cur;
        for (char c : text) {
            if (detail::is_ascii_space(c)) {
                if (!cur.empty()) raw.push_back(std::move(cur)), cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) raw.push_back(std::move(cur));
        std::vector<std::string> kept;
        kept.reserve(raw.size());
        for (std::string& t : raw)
            if (!detail::is_url_token(t) && !detail::is_mention_token(t))
                kept.push_back(std::move(t));
        raw = std::move(kept);
    }

    int exclaims = 0;
    for (const std::string& t : raw)
        for (char c : t)
            if (c == '!') ++exclaims;

    std::vector<std::string> toks;
    toks.reserve(raw.size());
    for (const std::string& t : raw) toks.push_back(detail::strip_punct(t));
    std::vector<std::string> lows;
    lows.reserve(toks.size());
    for (const std::string& t : toks) lows.push_back(detail::ascii_lower(t));

    std::size_t n_caps = 0;
    for (const std::string& t : toks)
        if (detail::is_all_caps(t)) ++n_caps;
    const bool cap_diff = n_caps > 0 && n_caps < toks.size();

    std::vector<double> sentiments;
    sentiments.reserve(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string& low = lows[i];
        if (lexicon.boosters.count(low)) {
            sentiments.push_back(0.0);
            continue;
        }
        auto it = lexicon.valences.find(low);
        if (it == lexicon.valences.end()) {
            sentiments.push_back(0.0);
            continue;
        }
        double val = it->second;
        if (detail::is_all_caps(toks[i]) && cap_diff)
            val += val > 0 ? rc.caps_increment : -rc.caps_increment;

        for (std::size_t dist = 0; dist < 3; ++dist) {
            if (i <= dist) continue;
            const std::string& prev = toks[i - dist - 1];
            const std::string& prevlow = lows[i - dist - 1];
            if (lexicon.valences.count(prevlow)) continue;

            double s = 0.0;
            auto bit = lexicon.boosters.find(prevlow);
            if (bit != lexicon.boosters.end()) {
                s = bit->second;
                if (val < 0) s = -s;
                if (detail::is_all_caps(prev) && cap_diff)
                    s += val > 0 ? rc.caps_increment : -rc.caps_increment;
            }
            if (dist == 1 && s != 0.0) s *= rc.booster_decay_1;
            if (dist == 2 && s != 0.0) s *= rc.booster_decay_2;
            val += s;
            if (detail::is_negator(prevlow, lexicon.negators))
                val *= rc.negation_factor;
        }
        sentiments.push_back(val);
    }

    // "but" re-weights both clauses around its first occurrence
    const auto but_it = std::find(lows.begin(), lows.end(), "but");
    if (but_it != lows.end()) {
        const std::size_t bi = static_cast<std::size_t>(but_it - lows.begin());
        for (std::size_t i = 0; i < sentiments.size(); ++i) {
            if (i < bi)
                sentiments[i] *= rc.but_before;
            else if (i > bi)
                sentiments[i] *= rc.but_after;
        }
    }

    SentimentScore score;
    if (sentiments.empty()) {
        score.neutral = 1.0;  // empty input reads as fully neutral
        score.label = SentimentLabel::NEUTRAL;
        return score;
    }

    double sum = 0.0;
    for (double v : sentiments) sum += v;
    const double ep =
        static_cast<double>(std::min(exclaims, rc.max_exclaims)) * rc.exclaim_increment;
    if (sum > 0)
        sum += ep;
    else if (sum < 0)
        sum -= ep;
    double compound = sum / std::sqrt(sum * sum + rc.alpha);
    compound = std::clamp(compound, -1.0, 1.0);

    double pos_sum = 0.0, neg_sum = 0.0;
    double neu_count = 0.0;
    for (double v : sentiments) {
        if (v > 0)
            pos_sum += v + 1.0;  // +1 counts the token itself
        else if (v < 0)
            neg_sum += v - 1.0;
        else
            neu_count += 1.0;
    }
    if (pos_sum > std::fabs(neg_sum))
        pos_sum += ep;
    else if (pos_sum < std::fabs(neg_sum))
        neg_sum -= ep;

    const double total = pos_sum + std::fabs(neg_sum) + neu_count;
    score.negative = std::fabs(neg_sum / total);
    score.neutral = std::fabs(neu_count / total);
    score.positive = std::fabs(pos_sum / total);
    score.compound = compound;
    score.label = classify(compound, rc);
    return score;
}

inline std::vector<std::pair<std::string, SentimentScore>> score_corpus(
    const Corpus& corpus, const SentimentLexicon& lexicon) {
    std::vector<std::pair<std::string, SentimentScore>> out;
    out.reserve(corpus.size());
    for (const Document& d : corpus.documents)
        out.emplace_back(d.id, polarity(d.text, lexicon));
    return out;
}

} // namespace tweetmine
