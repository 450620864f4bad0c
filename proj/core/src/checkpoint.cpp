#include "aoa/checkpoint.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace aoa {

namespace {

using nlohmann::json;

static_assert(sizeof(double) == 8);

struct TensorRef {
    std::string name;
    Matrix* mat;
};

// Bias vectors are carried as 1 x d_h tensors.
std::vector<TensorRef> tensor_manifest(ModelParams& p, std::vector<Matrix>& bias_store) {
    std::vector<TensorRef> refs;
    auto add_lstm = [&](const std::string& prefix, LstmWeights& w) {
        refs.push_back({prefix + ".Wi", &w.Wi});
        refs.push_back({prefix + ".Wf", &w.Wf});
        refs.push_back({prefix + ".Wo", &w.Wo});
        refs.push_back({prefix + ".Wc", &w.Wc});
        refs.push_back({prefix + ".Ui", &w.Ui});
        refs.push_back({prefix + ".Uf", &w.Uf});
        refs.push_back({prefix + ".Uo", &w.Uo});
        refs.push_back({prefix + ".Uc", &w.Uc});
    };
    add_lstm("sent.fwd", p.sent_enc.fwd);
    add_lstm("sent.bwd", p.sent_enc.bwd);
    add_lstm("target.fwd", p.target_enc.fwd);
    add_lstm("target.bwd", p.target_enc.bwd);
    refs.push_back({"linear.W", &p.linear.W});
    refs.push_back({"embeddings", &p.embeddings.table});

    bias_store.clear();
    bias_store.reserve(17);
    auto add_bias = [&](const std::string& name, std::vector<Real>& b) {
        Matrix m(1, b.size());
        std::copy(b.begin(), b.end(), m.data.begin());
        bias_store.push_back(std::move(m));
        refs.push_back({name, &bias_store.back()});
    };
    auto add_lstm_biases = [&](const std::string& prefix, LstmWeights& w) {
        add_bias(prefix + ".bi", w.bi);
        add_bias(prefix + ".bf", w.bf);
        add_bias(prefix + ".bo", w.bo);
        add_bias(prefix + ".bc", w.bc);
    };
    add_lstm_biases("sent.fwd", p.sent_enc.fwd);
    add_lstm_biases("sent.bwd", p.sent_enc.bwd);
    add_lstm_biases("target.fwd", p.target_enc.fwd);
    add_lstm_biases("target.bwd", p.target_enc.bwd);
    add_bias("linear.b", p.linear.b);
    return refs;
}

json config_to_json(const TrainConfig& c) {
    return json{{"d_h", c.d_h},
                {"lr", c.lr},
                {"batch_size", c.batch_size},
                {"lambda", c.lambda},
                {"keep_rate", c.keep_rate},
                {"init_range", c.init_range},
                {"oov_range", c.oov_range},
                {"val_fraction", c.val_fraction},
                {"max_epochs", c.max_epochs},
                {"patience_epochs", c.patience_epochs},
                {"lr_decay", c.lr_decay},
                {"seed", c.seed},
                {"lr_schedule", c.lr_schedule == LrScheduleMode::Patience ? "patience" : "window"},
                {"precision", "f64"}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.d_h = j.at("d_h");
    c.lr = j.at("lr");
    c.batch_size = j.at("batch_size");
    c.lambda = j.at("lambda");
    c.keep_rate = j.at("keep_rate");
    c.init_range = j.at("init_range");
    c.oov_range = j.at("oov_range");
    c.val_fraction = j.at("val_fraction");
    c.max_epochs = j.at("max_epochs");
    c.patience_epochs = j.at("patience_epochs");
    c.lr_decay = j.at("lr_decay");
    c.seed = j.at("seed");
    c.lr_schedule = j.at("lr_schedule") == "window" ? LrScheduleMode::Window
                                                    : LrScheduleMode::Patience;
    return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    Checkpoint copy = ckpt;  // manifest takes mutable refs
    std::vector<Matrix> bias_store;
    const std::vector<TensorRef> refs = tensor_manifest(copy.params, bias_store);

    json tensors = json::array();
    std::size_t offset = 0;
    for (const TensorRef& t : refs) {
        const std::size_t bytes = t.mat->data.size() * sizeof(double);
        tensors.push_back({{"name", t.name},
                           {"rows", t.mat->rows},
                           {"cols", t.mat->cols},
                           {"dtype", "f64"},
                           {"offset", offset},
                           {"bytes", bytes}});
        offset += bytes;
    }
    json header{{"format_version", kCheckpointVersion},
                {"config", config_to_json(copy.config)},
                {"vocab", copy.vocab.tokens},
                {"embedding_dim", copy.params.embeddings.dim},
                {"embedding_oov_rows", copy.params.embeddings.oov_rows},
                {"tensors", tensors}};
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out.write(kCheckpointMagic, 4);
    const std::uint64_t hlen = header_str.size();
    char lenbuf[8];
    for (int i = 0; i < 8; ++i) lenbuf[i] = static_cast<char>((hlen >> (8 * i)) & 0xFF);
    out.write(lenbuf, 8);
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    for (const TensorRef& t : refs) {
        out.write(reinterpret_cast<const char*>(t.mat->data.data()),
                  static_cast<std::streamsize>(t.mat->data.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("I/O error writing checkpoint " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
        throw std::runtime_error(path + ": bad checkpoint magic");
    }
    char lenbuf[8];
    if (!in.read(lenbuf, 8)) throw std::runtime_error(path + ": truncated header length");
    std::uint64_t hlen = 0;
    for (int i = 0; i < 8; ++i) {
        hlen |= static_cast<std::uint64_t>(static_cast<unsigned char>(lenbuf[i])) << (8 * i);
    }
    std::string header_str(hlen, '\0');
    if (!in.read(header_str.data(), static_cast<std::streamsize>(hlen))) {
        throw std::runtime_error(path + ": truncated header");
    }
    json header;
    try {
        header = json::parse(header_str);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": corrupt checkpoint header: " + e.what());
    }
    const int version = header.at("format_version");
    if (version != kCheckpointVersion) {
        throw std::runtime_error(path + ": unsupported checkpoint format version " +
                                 std::to_string(version));
    }

    Checkpoint ckpt;
    ckpt.config = config_from_json(header.at("config"));
    ckpt.vocab.tokens = header.at("vocab").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < ckpt.vocab.tokens.size(); ++i) {
        ckpt.vocab.index.emplace(ckpt.vocab.tokens[i], i);
    }
    ckpt.vocab.unk = ckpt.vocab.lookup(kUnkToken);

    const std::size_t d_w = header.at("embedding_dim");
    ckpt.params.embeddings.dim = d_w;
    ckpt.params.embeddings.oov_rows =
        header.at("embedding_oov_rows").get<std::vector<std::size_t>>();
    ckpt.params.sent_enc = BiLstm::zeros(d_w, ckpt.config.d_h);
    ckpt.params.target_enc = BiLstm::zeros(d_w, ckpt.config.d_h);
    ckpt.params.linear.W = Matrix(kNumClasses, 2 * ckpt.config.d_h);
    ckpt.params.linear.b.assign(kNumClasses, Real(0));
    ckpt.params.embeddings.table = Matrix(ckpt.vocab.size(), d_w);

    std::vector<Matrix> bias_store;
    std::vector<TensorRef> refs = tensor_manifest(ckpt.params, bias_store);

    const std::streampos payload_start = in.tellg();
    in.seekg(0, std::ios::end);
    const std::size_t payload_size = static_cast<std::size_t>(in.tellg() - payload_start);
    in.seekg(payload_start);

    std::size_t expected = 0;
    const json& tensors = header.at("tensors");
    if (tensors.size() != refs.size()) {
        throw std::runtime_error(path + ": manifest lists " + std::to_string(tensors.size()) +
                                 " tensors, expected " + std::to_string(refs.size()));
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const json& t = tensors[i];
        if (t.at("name") != refs[i].name) {
            throw std::runtime_error(path + ": unexpected tensor \"" +
                                     t.at("name").get<std::string>() + "\" at slot " +
                                     std::to_string(i));
        }
        if (t.at("dtype") != "f64") {
            throw std::runtime_error(path + ": unsupported dtype for " + refs[i].name);
        }
        const std::size_t rows = t.at("rows"), cols = t.at("cols");
        if (rows != refs[i].mat->rows || cols != refs[i].mat->cols) {
            throw std::runtime_error(path + ": tensor " + refs[i].name + " shape " +
                                     std::to_string(rows) + "x" + std::to_string(cols) +
                                     " does not match header dimensions");
        }
        const std::size_t offset = t.at("offset"), bytes = t.at("bytes");
        if (offset != expected || bytes != rows * cols * sizeof(double)) {
            throw std::runtime_error(path + ": manifest offsets are not contiguous at " +
                                     refs[i].name);
        }
        expected += bytes;
    }
    if (expected != payload_size) {
        throw std::runtime_error(path + ": truncated payload (" + std::to_string(payload_size) +
                                 " bytes, manifest requires " + std::to_string(expected) + ")");
    }
    for (TensorRef& t : refs) {
        if (!in.read(reinterpret_cast<char*>(t.mat->data.data()),
                     static_cast<std::streamsize>(t.mat->data.size() * sizeof(double)))) {
            throw std::runtime_error(path + ": truncated payload while reading " + t.name);
        }
    }

    // Biases travelled as 1 x d_h tensors inside bias_store; copy back.
    std::size_t bias_idx = 0;
    auto restore_biases = [&](LstmWeights& w) {
        for (auto* b : {&w.bi, &w.bf, &w.bo, &w.bc}) {
            const Matrix& m = bias_store[bias_idx++];
            b->assign(m.data.begin(), m.data.end());
        }
    };
    restore_biases(ckpt.params.sent_enc.fwd);
    restore_biases(ckpt.params.sent_enc.bwd);
    restore_biases(ckpt.params.target_enc.fwd);
    restore_biases(ckpt.params.target_enc.bwd);
    ckpt.params.linear.b.assign(bias_store[bias_idx].data.begin(),
                                bias_store[bias_idx].data.end());
    return ckpt;
}

}  // namespace aoa
