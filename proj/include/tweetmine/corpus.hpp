#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "tweetmine/errors.hpp"
#include "tweetmine/unicode_latin.hpp"

namespace tweetmine {

constexpr int kUnknownYear = -1;

struct Document {
    std::string id;
    std::string created_at;  // ISO 8601 UTC, e.g. "2015-03-02T10:00:00Z"
    std::string text;        // raw, unmodified
    std::string query;       // key-term that retrieved the document
    int year = kUnknownYear; // extracted once at load time
};

struct Corpus {
    std::vector<Document> documents;
    std::string source_path;
    std::size_t skipped = 0;  // malformed records dropped in lenient mode

    std::size_t size() const { return documents.size(); }
    bool empty() const { return documents.empty(); }
};

namespace detail {

// Parses "YYYY-MM-DDThh:mm:ss" with optional ".fff" and "Z" or "+hh:mm"
// offset, returning the UTC year, or kUnknownYear on failure.  Offsets can
// move a timestamp across a year boundary, so the civil-day arithmetic is
// done properly (Howard Hinnant's days_from_civil).
inline long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

inline void civil_from_days(long long z, long long& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += (m <= 2);
}

inline bool parse_fixed_uint(const std::string& s, std::size_t pos, std::size_t len,
                             unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + static_cast<unsigned>(s[i] - '0');
    }
    out = v;
    return true;
}

inline int parse_utc_year(const std::string& ts) {
    unsigned y, mo, d, h, mi, se;
    if (!parse_fixed_uint(ts, 0, 4, y)) return kUnknownYear;
    if (ts.size() < 19 || ts[4] != '-' || ts[7] != '-' || ts[10] != 'T') return kUnknownYear;
    if (!parse_fixed_uint(ts, 5, 2, mo) || !parse_fixed_uint(ts, 8, 2, d)) return kUnknownYear;
    if (ts[13] != ':' || ts[16] != ':') return kUnknownYear;
    if (!parse_fixed_uint(ts, 11, 2, h) || !parse_fixed_uint(ts, 14, 2, mi) ||
        !parse_fixed_uint(ts, 17, 2, se))
        return kUnknownYear;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 60)
        return kUnknownYear;

    std::size_t p = 19;
    if (p < ts.size() && ts[p] == '.') {  // fractional seconds
        ++p;
        std::size_t digits = 0;
        while (p < ts.size() && ts[p] >= '0' && ts[p] <= '9') { ++p; ++digits; }
        if (digits == 0) return kUnknownYear;
    }
    long long offset_min = 0;
    if (p == ts.size()) return kUnknownYear;  // offset required
    if (ts[p] == 'Z') {
        if (p + 1 != ts.size()) return kUnknownYear;
    } else if (ts[p] == '+' || ts[p] == '-') {
        const bool neg = ts[p] == '-';
        unsigned oh = 0, om = 0;
        if (!parse_fixed_uint(ts, p + 1, 2, oh)) return kUnknownYear;
        std::size_t q = p + 3;
        if (q < ts.size() && ts[q] == ':') ++q;
        if (!parse_fixed_uint(ts, q, 2, om)) return kUnknownYear;
        if (q + 2 != ts.size() || oh > 23 || om > 59) return kUnknownYear;
        offset_min = static_cast<long long>(oh) * 60 + om;
        if (neg) offset_min = -offset_min;
    } else {
        return kUnknownYear;
    }

    long long total_min = days_from_civil(y, mo, d) * 1440LL +
                          static_cast<long long>(h) * 60 + mi - offset_min;
    long long days = total_min / 1440;
    if (total_min < 0 && total_min % 1440 != 0) --days;
    long long yy;
    unsigned mm, dd;
    civil_from_days(days, yy, mm, dd);
    return static_cast<int>(yy);
}

// --- UTF-8 <-> codepoint helpers shared with textprep ---

inline std::size_t utf8_decode(const std::string& s, std::size_t i, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) { cp = b0; return 1; }
    auto cont = [&](std::size_t k) {
        return i + k < s.size() &&
               (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(1)) {
        cp = (static_cast<char32_t>(b0 & 0x1F) << 6) |
             (static_cast<unsigned char>(s[i + 1]) & 0x3F);
        return 2;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
        cp = (static_cast<char32_t>(b0 & 0x0F) << 12) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 6) |
             (static_cast<unsigned char>(s[i + 2]) & 0x3F);
        return 3;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
        cp = (static_cast<char32_t>(b0 & 0x07) << 18) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 1]) & 0x3F)) << 12) |
             ((static_cast<char32_t>(static_cast<unsigned char>(s[i + 2]) & 0x3F)) << 6) |
             (static_cast<unsigned char>(s[i + 3]) & 0x3F);
        return 4;
    }
    cp = 0xFFFD;  // invalid byte: emit replacement, consume one byte
    return 1;
}

inline void utf8_encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::vector<char32_t> to_codepoints(const std::string& s) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char32_t cp;
        i += utf8_decode(s, i, cp);
        cps.push_back(cp);
    }
    return cps;
}

inline bool is_combining_mark(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

} // namespace detail

// Deduplication key: canonically compose Latin base+mark pairs, lowercase,
// strip a leading "RT @handle:" prefix, fold whitespace runs.
inline std::string dedup_key(const std::string& text) {
    std::vector<char32_t> cps = detail::to_codepoints(text);

    // compose base + combining mark where a precomposed Latin letter exists
    std::vector<char32_t> composed;
    composed.reserve(cps.size());
    for (char32_t cp : cps) {
        if (!composed.empty() && detail::is_combining_mark(cp)) {
            char32_t c = unicode_latin::compose_pair(composed.back(), cp);
            if (c != 0) {
                composed.back() = c;
                continue;
            }
        }
        composed.push_back(cp);
    }
    for (char32_t& cp : composed) cp = unicode_latin::to_lower(cp);

    std::string flat;
    flat.reserve(text.size());
    for (char32_t cp : composed) detail::utf8_encode(cp, flat);

    // fold whitespace
    std::string folded;
    folded.reserve(flat.size());
    bool in_space = true;  // also trims leading space
    for (char c : flat) {
        const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                        c == '\f' || c == '\v';
        if (ws) {
            if (!in_space) folded.push_back(' ');
            in_space = true;
        } else {
            folded.push_back(c);
            in_space = false;
        }
    }
    while (!folded.empty() && folded.back() == ' ') folded.pop_back();

    // strip a leading "rt @handle:" (text already lowercased)
    if (folded.size() > 4 && folded.compare(0, 4, "rt @") == 0) {
        std::size_t colon = folded.find(':', 4);
        std::size_t space = folded.find(' ', 4);
        if (colon != std::string::npos && (space == std::string::npos || colon < space)) {
            std::size_t start = colon + 1;
            while (start < folded.size() && folded[start] == ' ') ++start;
            folded.erase(0, start);
        }
    }
    return folded;
}

inline Corpus load_corpus(const std::string& path, bool strict = true) {
    std::ifstream in(path);
    if (!in.is_open()) throw FileNotFound(path);

    Corpus corpus;
    corpus.source_path = path;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;

    auto reject = [&](const std::string& reason) {
        if (strict) throw ParseError(line_no, reason);
        ++corpus.skipped;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;

        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            reject("not a JSON object");
            continue;
        }
        Document doc;
        bool bad = false;
        for (const char* field : {"id", "text", "query"}) {
            if (!rec.contains(field) || !rec[field].is_string()) {
                reject(std::string("missing string field \"") + field + "\"");
                bad = true;
                break;
            }
        }
        if (bad) continue;
        doc.id = rec["id"].get<std::string>();
        doc.text = rec["text"].get<std::string>();
        doc.query = rec["query"].get<std::string>();

        const bool blank = doc.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
        if (doc.id.empty() || blank) {
            reject(doc.id.empty() ? "empty id" : "empty text");
            continue;
        }
        if (seen_ids.count(doc.id)) {
            reject("duplicate id \"" + doc.id + "\"");
            continue;
        }
        if (rec.contains("created_at") && rec["created_at"].is_string()) {
            doc.created_at = rec["created_at"].get<std::string>();
            doc.year = detail::parse_utc_year(doc.created_at);
            if (doc.year == kUnknownYear) {
                if (strict) throw ParseError(line_no, "unparseable created_at \"" +
                                                          doc.created_at + "\"");
                // lenient: keep the document in the unknown-year bucket
            }
        } else {
            if (strict) throw ParseError(line_no, "missing created_at");
            // lenient: sentinel unknown year, document kept
        }
        seen_ids.insert(doc.id);
        corpus.documents.push_back(std::move(doc));
    }
    if (corpus.documents.empty()) throw EmptyCorpus();
    return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    for (const Document& d : corpus.documents) {
        nlohmann::json rec;
        rec["id"] = d.id;
        rec["created_at"] = d.created_at;
        rec["text"] = d.text;
        rec["query"] = d.query;
        out << rec.dump() << "\n";
    }
}

// First occurrence of each normalized text wins; order preserved.
inline Corpus deduplicate(const Corpus& corpus) {
    Corpus out;
    out.source_path = corpus.source_path;
    out.skipped = corpus.skipped;
    std::unordered_set<std::string> seen;
    for (const Document& d : corpus.documents)
        if (seen.insert(dedup_key(d.text)).second) out.documents.push_back(d);
    return out;
}

inline std::map<std::string, std::size_t> keyterm_counts(const Corpus& corpus) {
    std::map<std::string, std::size_t> counts;
    for (const Document& d : corpus.documents) ++counts[d.query];
    return counts;
}

} // namespace tweetmine
