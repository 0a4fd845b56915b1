#pragma once

#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tweetmine/corpus.hpp"
#include "tweetmine/errors.hpp"
#include "tweetmine/unicode_latin.hpp"

namespace tweetmine {

struct TokenizedDocument {
    std::string doc_id;
    std::vector<std::string> lemmas;
};

struct SuffixRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem;  // characters that must remain before the suffix
};

struct LemmaRules {
    std::unordered_map<std::string, std::string> exceptions;
    std::vector<SuffixRule> suffix_rules;  // applied in file order
};

namespace detail {

inline bool is_url_token(const std::string& tok) {
    auto starts_with_ci = [&](const char* prefix) {
        std::size_t n = 0;
        while (prefix[n]) ++n;
        if (tok.size() < n) return false;
        for (std::size_t i = 0; i < n; ++i) {
            char c = tok[i];
            if (c >= 'A' && c <= 'Z') c += 32;
            if (c != prefix[i]) return false;
        }
        return true;
    };
    return starts_with_ci("http://") || starts_with_ci("https://") ||
           starts_with_ci("www.");
}

inline bool is_mention_token(const std::string& tok) {
    return !tok.empty() && tok[0] == '@';
}

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace detail

// Lowercases, removes URLs, @mentions, '#' marks, apostrophes and all other
// symbols, keeping ASCII alphanumerics and accented Latin letters.  Idempotent.
inline std::string clean(const std::string& text) {
    // split on whitespace first so URL/mention detection sees whole tokens
    std::vector<std::string> raw_tokens;
    std::string cur;
    for (char c : text) {
        if (detail::is_ascii_space(c)) {
            if (!cur.empty()) raw_tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) raw_tokens.push_back(std::move(cur));

    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (const std::string& tok : raw_tokens) {
        if (detail::is_url_token(tok) || detail::is_mention_token(tok)) continue;
        std::string piece;
        std::size_t i = 0;
        while (i < tok.size()) {
            char32_t cp;
            i += detail::utf8_decode(tok, i, cp);
            if (cp == U'#' || cp == U'\'' || cp == 0x2018 || cp == 0x2019)
                continue;  // deleted outright so "don't" folds to "dont"
            if (cp < 0x80) {
                if ((cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9')) {
                    piece.push_back(static_cast<char>(cp));
                } else if (cp >= U'A' && cp <= U'Z') {
                    piece.push_back(static_cast<char>(cp + 32));
                } else {
                    piece.push_back(' ');  // symbol → separator
                }
            } else if (unicode_latin::is_latin_letter(cp)) {
                detail::utf8_encode(unicode_latin::to_lower(cp), piece);
            } else {
                piece.push_back(' ');
            }
        }
        // append piece with single-space joins
        for (char c : piece) {
            if (c == ' ') {
                pending_space = !out.empty();
            } else {
                if (pending_space) out.push_back(' ');
                pending_space = false;
                out.push_back(c);
            }
        }
        pending_space = !out.empty();
    }
    return out;
}

inline std::vector<std::string> tokenize(const std::string& cleaned) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : cleaned) {
        if (detail::is_ascii_space(c)) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Exceptions first; otherwise the first matching suffix rule rewrites the
// token and the scan restarts, until no rule changes it (fixed point).
inline std::string lemmatize(const std::string& token, const LemmaRules& rules) {
    auto it = rules.exceptions.find(token);
    if (it != rules.exceptions.end()) return it->second;

    std::string cur = token;
    // every effective rewrite strictly shortens the token, so |token|
    // iterations suffice to reach the fixed point
    for (std::size_t guard = 0; guard <= token.size(); ++guard) {
        bool changed = false;
        for (const SuffixRule& r : rules.suffix_rules) {
            if (cur.size() < r.suffix.size() + r.min_stem) continue;
            if (cur.compare(cur.size() - r.suffix.size(), r.suffix.size(), r.suffix) != 0)
                continue;
            std::string next = cur.substr(0, cur.size() - r.suffix.size()) + r.replacement;
            if (next.empty()) continue;  // a rewrite may never produce ""
            if (next != cur) {
                cur = std::move(next);
                changed = true;
            }
            break;  // first matching rule only, then restart
        }
        if (!changed) break;
        auto ex = rules.exceptions.find(cur);
        if (ex != rules.exceptions.end()) return ex->second;
    }
    return cur;
}

inline std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stopwords) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens)
        if (!stopwords.count(t)) out.push_back(t);
    return out;
}

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw FileNotFound(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        words.insert(line);
    }
    return words;
}

inline LemmaRules load_lemma_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw FileNotFound(path);
    LemmaRules rules;
    std::string line;
    std::size_t line_no = 0;
    enum class Section { none, exceptions, suffix } section = Section::none;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line == "[exceptions]") { section = Section::exceptions; continue; }
        if (line == "[suffix]") { section = Section::suffix; continue; }

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (section == Section::exceptions) {
            if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
                throw ParseError(line_no, "expected inflected<TAB>lemma");
            rules.exceptions[fields[0]] = fields[1];
        } else if (section == Section::suffix) {
            if (fields.size() != 3 || fields[0].empty())
                throw ParseError(line_no, "expected suffix<TAB>replacement<TAB>min-stem");
            SuffixRule r;
            r.suffix = fields[0];
            r.replacement = fields[1] == "-" ? "" : fields[1];
            try {
                r.min_stem = std::stoul(fields[2]);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad min-stem \"" + fields[2] + "\"");
            }
            rules.suffix_rules.push_back(std::move(r));
        } else {
            throw ParseError(line_no, "data before any section header");
        }
    }
    return rules;
}

inline TokenizedDocument prepare_document(
    const Document& doc, const LemmaRules& rules,
    const std::unordered_set<std::string>& stopwords) {
    TokenizedDocument out;
    out.doc_id = doc.id;
    std::vector<std::string> tokens = tokenize(clean(doc.text));
    tokens = remove_stopwords(tokens, stopwords);
    out.lemmas.reserve(tokens.size());
    for (const std::string& t : tokens) {
        std::string lemma = lemmatize(t, rules);
        if (!lemma.empty() && !stopwords.count(lemma)) out.lemmas.push_back(lemma);
    }
    return out;
}

inline std::vector<TokenizedDocument> prepare_corpus(
    const Corpus& corpus, const LemmaRules& rules,
    const std::unordered_set<std::string>& stopwords) {
    std::vector<TokenizedDocument> docs;
    docs.reserve(corpus.size());
    for (const Document& d : corpus.documents)
        docs.push_back(prepare_document(d, rules, stopwords));
    return docs;
}

} // namespace tweetmine
