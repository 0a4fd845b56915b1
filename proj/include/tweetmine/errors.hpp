#pragma once

#include <stdexcept>
#include <string>

namespace tweetmine {

// Base of all library errors.  input_error covers bad files, bad configs and
// size guards (CLI exit status 2); internal_error covers numeric failures
// inside a stage (exit status 1).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InputError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class FileNotFound : public InputError {
public:
    explicit FileNotFound(const std::string& path)
        : InputError("file not found: " + path), path(path) {}
    std::string path;
};

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& reason)
        : InputError("parse error at line " + std::to_string(line) + ": " + reason),
          line(line), reason(reason) {}
    std::size_t line;
    std::string reason;
};

class EmptyCorpus : public InputError {
public:
    EmptyCorpus() : InputError("corpus contains no valid documents") {}
};

class EmptyVocabulary : public InputError {
public:
    explicit EmptyVocabulary(std::size_t min_df)
        : InputError("no n-gram reaches min_df=" + std::to_string(min_df)) {}
};

class RankTooLarge : public InputError {
public:
    RankTooLarge(std::size_t rank, std::size_t limit)
        : InputError("svd rank " + std::to_string(rank) + " exceeds min(rows,cols)=" +
                     std::to_string(limit)) {}
};

class KTooLarge : public InputError {
public:
    KTooLarge(std::size_t k, std::size_t n)
        : InputError("k=" + std::to_string(k) + " exceeds point count " + std::to_string(n)) {}
};

class ConvergenceFailure : public InternalError {
public:
    ConvergenceFailure(std::size_t max_iter, double residual)
        : InternalError("no convergence after " + std::to_string(max_iter) +
                        " iterations (residual " + std::to_string(residual) + ")"),
          max_iter(max_iter), residual(residual) {}
    std::size_t max_iter;
    double residual;
};

class BandwidthSearchFailure : public InternalError {
public:
    explicit BandwidthSearchFailure(std::size_t point)
        : InternalError("perplexity unreachable for point " + std::to_string(point)),
          point(point) {}
    std::size_t point;
};

class NumericalOverflow : public InternalError {
public:
    explicit NumericalOverflow(std::size_t iteration)
        : InternalError("coordinates diverged at iteration " + std::to_string(iteration)),
          iteration(iteration) {}
    std::size_t iteration;
};

class OutOfRange : public InputError {
public:
    explicit OutOfRange(double value)
        : InputError("compound " + std::to_string(value) + " outside [-1,1]"), value(value) {}
    double value;
};

class EmptyInput : public InputError {
public:
    explicit EmptyInput(const std::string& what_input)
        : InputError("empty input: " + what_input) {}
};

class SizeMismatch : public InputError {
public:
    SizeMismatch(std::size_t a, std::size_t b)
        : InputError("size mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class MissingScore : public InputError {
public:
    explicit MissingScore(const std::string& doc_id)
        : InputError("no score for document " + doc_id), doc_id(doc_id) {}
    std::string doc_id;
};

class MissingArtifact : public InputError {
public:
    explicit MissingArtifact(const std::string& stage)
        : InputError("missing artifact from stage: " + stage), stage(stage) {}
    std::string stage;
};

class InvalidConfig : public InputError {
public:
    explicit InvalidConfig(const std::string& reason)
        : InputError("invalid config: " + reason) {}
};

// Wraps a module error with the pipeline stage that raised it.
class StageError : public Error {
public:
    StageError(const std::string& stage, const Error& cause, bool input)
        : Error("[" + stage + "] " + cause.what()), stage(stage), is_input(input) {}
    std::string stage;
    bool is_input;
};

} // namespace tweetmine
