#include "aoa/embeddings.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aoa {

Vocab build_vocab(const std::vector<Sample>& train_samples) {
    if (train_samples.empty()) {
        throw std::invalid_argument("build_vocab: empty training set");
    }
    Vocab v;
    for (const Sample& s : train_samples) {
        for (const std::string& tok : s.tokens) {
            if (v.index.emplace(tok, v.tokens.size()).second) {
                v.tokens.push_back(tok);
            }
        }
    }
    v.unk = v.tokens.size();
    v.index.emplace(kUnkToken, v.unk);
    v.tokens.push_back(kUnkToken);
    return v;
}

EmbeddingTable load_pretrained(const std::string& path, const Vocab& vocab, Rng& rng,
                               Real oov_range, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embeddings file " + path);

    EmbeddingTable tab;
    std::vector<bool> found(vocab.size(), false);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string tok;
        is >> tok;
        std::vector<Real> vals;
        double v;
        while (is >> v) vals.push_back(static_cast<Real>(v));
        if (!is.eof()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unreadable real value");
        }
        if (tab.dim == 0) {
            if (vals.empty()) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": no vector values on first entry");
            }
            tab.dim = vals.size();
            tab.table = Matrix(vocab.size(), tab.dim);
        }
        if (vals.size() != tab.dim) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(tab.dim) + " values, got " +
                                     std::to_string(vals.size()));
        }
        const auto it = vocab.index.find(tok);
        if (it == vocab.index.end() || it->second == vocab.unk) continue;
        if (found[it->second]) {
            if (warnings) {
                warnings->push_back(path + ":" + std::to_string(lineno) +
                                    ": duplicate token \"" + tok + "\", first occurrence kept");
            }
            continue;
        }
        found[it->second] = true;
        for (std::size_t j = 0; j < tab.dim; ++j) tab.table(it->second, j) = vals[j];
    }
    if (tab.dim == 0) {
        // Entirely empty pretrained file: fall back to the default width.
        tab.dim = 300;
        tab.table = Matrix(vocab.size(), tab.dim);
    }
    for (std::size_t r = 0; r < vocab.size(); ++r) {
        if (found[r]) continue;
        tab.oov_rows.push_back(r);
        for (std::size_t j = 0; j < tab.dim; ++j) {
            tab.table(r, j) = rng.uniform(-oov_range, oov_range);
        }
    }
    return tab;
}

EmbeddingTable random_table(const Vocab& vocab, std::size_t dim, Rng& rng, Real oov_range) {
    EmbeddingTable tab;
    tab.dim = dim;
    tab.table = uniform_init(vocab.size(), dim, -oov_range, oov_range, rng);
    tab.oov_rows.resize(vocab.size());
    for (std::size_t r = 0; r < vocab.size(); ++r) tab.oov_rows[r] = r;
    return tab;
}

Matrix lookup(const EmbeddingTable& table, const Vocab& vocab,
              const std::vector<std::string>& tokens) {
    if (tokens.empty()) {
        throw std::invalid_argument("lookup: empty token sequence");
    }
    Matrix out(tokens.size(), table.dim);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::size_t r = vocab.lookup(tokens[i]);
        const Real* src = table.table.row(r);
        std::copy(src, src + table.dim, out.row(i));
    }
    return out;
}

}  // namespace aoa
