#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "aoa/data.hpp"
#include "aoa/matrix.hpp"
#include "aoa/rng.hpp"

namespace aoa {

inline constexpr const char* kUnkToken = "<unk>";

struct Vocab {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::string> tokens;  // index -> token, dense in [0, V)
    std::size_t unk{0};

    std::size_t size() const { return tokens.size(); }
    // Index of a token, falling back to <unk>.
    std::size_t lookup(const std::string& tok) const {
        const auto it = index.find(tok);
        return it == index.end() ? unk : it->second;
    }
};

struct EmbeddingTable {
    Matrix table;  // V x d_w
    std::size_t dim{0};
    bool trainable{false};
    std::vector<std::size_t> oov_rows;  // rows not found in the pretrained file
};

// Vocabulary over all distinct training-sentence tokens in first-occurrence
// order, with <unk> appended last. Built from the training split only.
Vocab build_vocab(const std::vector<Sample>& train_samples);

// GloVe-style text format: token followed by d_w space-separated reals,
// no header. Rows absent from the file (and <unk>) are drawn from
// U(-oov_range, oov_range) in vocab-index order. Duplicate tokens keep
// the first occurrence; a warning line is recorded per duplicate.
EmbeddingTable load_pretrained(const std::string& path, const Vocab& vocab, Rng& rng,
                               Real oov_range = Real(0.01),
                               std::vector<std::string>* warnings = nullptr);

// Table with every row OOV-initialized; used when no pretrained file is given.
EmbeddingTable random_table(const Vocab& vocab, std::size_t dim, Rng& rng,
                            Real oov_range = Real(0.01));

// len(tokens) x d_w matrix of embedding rows.
Matrix lookup(const EmbeddingTable& table, const Vocab& vocab,
              const std::vector<std::string>& tokens);

}  // namespace aoa
