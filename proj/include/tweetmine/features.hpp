#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tweetmine/errors.hpp"
#include "tweetmine/matrix.hpp"
#include "tweetmine/textprep.hpp"

namespace tweetmine {

struct NGram {
    std::vector<std::string> terms;  // 1 to 3 lemmas
    std::string surface;             // terms joined by single spaces
};

struct VocabularyEntry {
    NGram ngram;
    std::size_t document_frequency = 0;
};

struct Vocabulary {
    // sorted by (document_frequency desc, surface asc)
    std::vector<VocabularyEntry> entries;
    std::unordered_map<std::string, std::size_t> index;  // surface → row id

    std::size_t size() const { return entries.size(); }
};

inline std::vector<NGram> extract_ngrams(const std::vector<std::string>& lemmas,
                                         std::size_t n_max) {
    std::vector<NGram> out;
    const std::size_t L = lemmas.size();
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (L < n) break;
        for (std::size_t i = 0; i + n <= L; ++i) {
            NGram g;
            g.terms.assign(lemmas.begin() + i, lemmas.begin() + i + n);
            g.surface = g.terms[0];
            for (std::size_t t = 1; t < n; ++t) {
                g.surface += ' ';
                g.surface += g.terms[t];
            }
            out.push_back(std::move(g));
        }
    }
    return out;
}

inline Vocabulary build_vocabulary(const std::vector<TokenizedDocument>& docs,
                                   std::size_t n_max, std::size_t min_df) {
    // df counts distinct documents containing the n-gram
    std::unordered_map<std::string, std::size_t> df;
    for (const TokenizedDocument& doc : docs) {
        std::set<std::string> in_doc;
        for (const NGram& g : extract_ngrams(doc.lemmas, n_max))
            in_doc.insert(g.surface);
        for (const std::string& s : in_doc) ++df[s];
    }

    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [surface, count] : df)
        if (count >= min_df) kept.emplace_back(surface, count);
    if (kept.empty()) throw EmptyVocabulary(min_df);

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.entries.reserve(kept.size());
    for (const auto& [surface, count] : kept) {
        VocabularyEntry e;
        e.ngram.surface = surface;
        std::size_t start = 0;
        while (true) {
            std::size_t sp = surface.find(' ', start);
            e.ngram.terms.push_back(surface.substr(start, sp - start));
            if (sp == std::string::npos) break;
            start = sp + 1;
        }
        e.document_frequency = count;
        vocab.index[surface] = vocab.entries.size();
        vocab.entries.push_back(std::move(e));
    }
    return vocab;
}

// Feature-major incidence matrix: entry (i,j) set iff vocabulary n-gram i
// occurs in document j.  Built in two passes over documents in ascending
// order so each row's column list comes out sorted.
inline SparseBinaryMatrix build_matrix(const std::vector<TokenizedDocument>& docs,
                                       const Vocabulary& vocab) {
    if (vocab.entries.empty()) throw EmptyVocabulary(0);
    const std::size_t n_max = 3;

    std::vector<std::size_t> row_counts(vocab.size(), 0);
    std::vector<std::vector<std::size_t>> doc_rows(docs.size());
    for (std::size_t j = 0; j < docs.size(); ++j) {
        std::set<std::size_t> rows;
        for (const NGram& g : extract_ngrams(docs[j].lemmas, n_max)) {
            auto it = vocab.index.find(g.surface);
            if (it != vocab.index.end()) rows.insert(it->second);
        }
        doc_rows[j].assign(rows.begin(), rows.end());
        for (std::size_t r : doc_rows[j]) ++row_counts[r];
    }

    SparseBinaryMatrix m;
    m.n_rows = vocab.size();
    m.n_cols = docs.size();
    m.row_offsets.resize(m.n_rows + 1, 0);
    for (std::size_t i = 0; i < m.n_rows; ++i)
        m.row_offsets[i + 1] = m.row_offsets[i] + row_counts[i];
    m.col_indices.resize(m.row_offsets.back());

    std::vector<std::size_t> cursor(m.row_offsets.begin(), m.row_offsets.end() - 1);
    for (std::size_t j = 0; j < docs.size(); ++j)
        for (std::size_t r : doc_rows[j]) m.col_indices[cursor[r]++] = j;
    return m;
}

inline std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const Vocabulary& vocab, std::size_t k) {
    std::vector<std::pair<std::string, std::size_t>> out;
    const std::size_t n = std::min(k, vocab.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(vocab.entries[i].ngram.surface,
                         vocab.entries[i].document_frequency);
    return out;
}

inline void export_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    for (const VocabularyEntry& e : vocab.entries)
        out << e.ngram.surface << '\t' << e.document_frequency << '\n';
}

inline void export_matrix(const SparseBinaryMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw FileNotFound(path);
    out << m.n_rows << ' ' << m.n_cols << ' ' << m.nnz() << '\n';
    for (std::size_t i = 0; i < m.n_rows; ++i)
        for (std::size_t p = m.row_offsets[i]; p < m.row_offsets[i + 1]; ++p)
            out << i << ' ' << m.col_indices[p] << '\n';
}

} // namespace tweetmine
