#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aoa {

enum class Polarity : int { Positive = 0, Neutral = 1, Negative = 2 };

const char* polarity_name(Polarity p);
// Accepts positive/neutral/negative; nullopt for anything else.
std::optional<Polarity> polarity_from_name(std::string_view s);

// Token with half-open [begin, end) offsets in Unicode scalar positions
// of the original string.
struct Token {
    std::string text;
    std::size_t begin{0};
    std::size_t end{0};

    bool operator==(const Token&) const = default;
};

// One sentence-aspect pair: the unit of training and evaluation.
struct Sample {
    std::vector<std::string> tokens;   // lowercased sentence tokens
    std::size_t aspect_begin{0};       // token index range [begin, end)
    std::size_t aspect_end{0};
    Polarity polarity{Polarity::Positive};
    std::string raw_text;

    std::size_t aspect_len() const { return aspect_end - aspect_begin; }
    bool operator==(const Sample&) const = default;
};

struct DatasetStats {
    std::array<std::size_t, 3> counts{0, 0, 0};  // positive, neutral, negative

    std::size_t total() const { return counts[0] + counts[1] + counts[2]; }
};

// Lowercasing whitespace tokenizer, v1: tokens are maximal runs of word
// characters (ASCII alphanumerics plus any non-ASCII scalar) or maximal
// runs of punctuation. Offsets index Unicode scalar positions of the
// original text, so lowercase(text[begin:end]) == token.text.
// Vocabulary and all downstream results depend on this exact rule.
std::vector<Token> tokenize(std::string_view text);

// Substring by Unicode scalar positions; used by loaders and tests.
std::string utf8_substr(std::string_view text, std::size_t begin, std::size_t end);
std::size_t utf8_length(std::string_view text);

// Smallest token index range covering every token overlapping the
// half-open character range; nullopt when no token overlaps.
std::optional<std::pair<std::size_t, std::size_t>> align_aspect_span(
    const std::vector<Token>& tokens, std::size_t char_from, std::size_t char_to);

struct LoadResult {
    std::vector<Sample> samples;
    std::size_t conflict_dropped{0};
    std::vector<std::string> warnings;  // per-sample rejections, duplicates
};

// SemEval-2014 Task 4 aspect-term XML. Malformed XML and unknown
// polarity strings are fatal; aspect spans that cover no token reject
// the single sample with a diagnostic. "conflict" pairs are dropped and
// counted.
LoadResult parse_semeval_xml(const std::string& path);

// Fixture TSV: sentence \t aspect_term \t from \t to \t polarity.
// '#'-prefixed lines are comments. Offsets are Unicode scalar positions.
LoadResult load_tsv(const std::string& path);
void save_tsv(const std::string& path, const std::vector<Sample>& samples);

DatasetStats dataset_stats(const std::vector<Sample>& samples);

// Plain-text stats table, one dataset per row.
std::string format_stats(const std::string& name, const DatasetStats& stats);

}  // namespace aoa
