#include "aoa/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "aoa/visualize.hpp"

namespace aoa::cli {

using nlohmann::json;

LoadResult load_dataset(const std::string& path, const std::string& format) {
    if (format == "semeval-xml") return parse_semeval_xml(path);
    if (format == "tsv") return load_tsv(path);
    throw std::runtime_error("unknown dataset format \"" + format +
                             "\" (expected semeval-xml or tsv)");
}

std::string history_line(const EpochRecord& rec, bool with_timing) {
    json j{{"epoch", rec.epoch},
           {"lr", rec.lr},
           {"train_loss", rec.train_loss},
           {"train_accuracy", rec.train_accuracy},
           {"val_accuracy", rec.val_accuracy}};
    if (with_timing) j["wall_seconds"] = rec.wall_seconds;
    return j.dump();
}

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const LoadResult data = load_dataset(args.train_path, args.format);
        for (const std::string& w : data.warnings) err << "warning: " << w << "\n";
        if (data.samples.empty()) {
            err << "error: no samples in " << args.train_path << "\n";
            return kExitInputError;
        }
        const Vocab vocab = build_vocab(data.samples);

        Rng emb_rng = Rng(args.config.seed).derive(10);
        EmbeddingTable emb;
        std::vector<std::string> emb_warnings;
        if (!args.embeddings_path.empty()) {
            emb = load_pretrained(args.embeddings_path, vocab, emb_rng,
                                  args.config.oov_range, &emb_warnings);
        } else {
            emb = random_table(vocab, args.embedding_dim, emb_rng, args.config.oov_range);
        }
        for (const std::string& w : emb_warnings) err << "warning: " << w << "\n";

        const TrainResult result = train(args.config, data.samples, vocab, std::move(emb));

        std::ofstream log_file;
        std::ostream* log = &out;
        if (!args.log_path.empty()) {
            log_file.open(args.log_path);
            if (!log_file) {
                err << "error: cannot write log " << args.log_path << "\n";
                return kExitInputError;
            }
            log = &log_file;
        }
        for (const EpochRecord& rec : result.history) {
            *log << history_line(rec, args.log_timing) << "\n";
        }

        save_checkpoint({args.config, vocab, result.best}, args.out_path);
        return kExitOk;
    } catch (const TrainingAbort& e) {
        err << "error: training aborted: " << e.what() << "\n";
        return kExitTrainingAbort;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

namespace {

void print_confusion(const Checkpoint& ckpt, const std::vector<Sample>& samples,
                     std::ostream& out) {
    std::size_t confusion[3][3] = {};
    Rng unused(0);
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        const ForwardResult fr =
            model_forward(ckpt.params, ckpt.vocab, s, false, Real(1), unused);
        ++confusion[static_cast<int>(s.polarity)][static_cast<int>(fr.label)];
        if (fr.label == s.polarity) ++correct;
    }
    out << "accuracy " << std::fixed << std::setprecision(6)
        << static_cast<double>(correct) / static_cast<double>(samples.size()) << "\n";
    out << "confusion (rows gold, cols predicted):\n";
    out << "            positive   neutral  negative\n";
    const char* names[3] = {"positive", "neutral", "negative"};
    for (int g = 0; g < 3; ++g) {
        out << std::left << std::setw(10) << names[g] << std::right;
        for (int p = 0; p < 3; ++p) out << std::setw(10) << confusion[g][p];
        out << "\n";
    }
}

}  // namespace

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.majority) {
            if (args.train_path.empty()) {
                err << "error: --majority requires --train\n";
                return kExitInputError;
            }
            const LoadResult train_data = load_dataset(args.train_path, args.format);
            const LoadResult test_data = load_dataset(args.data_path, args.format);
            if (train_data.samples.empty() || test_data.samples.empty()) {
                err << "error: empty dataset\n";
                return kExitInputError;
            }
            out << "majority accuracy " << std::fixed << std::setprecision(6)
                << majority_baseline(train_data.samples, test_data.samples) << "\n";
            return kExitOk;
        }
        const Checkpoint ckpt = load_checkpoint(args.model_path);
        const LoadResult data = load_dataset(args.data_path, args.format);
        for (const std::string& w : data.warnings) err << "warning: " << w << "\n";
        if (data.samples.empty()) {
            err << "error: no samples in " << args.data_path << "\n";
            return kExitInputError;
        }
        print_confusion(ckpt, data.samples, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_predict(const PredictArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const Checkpoint ckpt = load_checkpoint(args.model_path);
        const std::vector<Token> toks = tokenize(args.sentence);
        if (toks.empty()) {
            err << "error: sentence has no tokens\n";
            return kExitInputError;
        }

        std::size_t from, to;
        if (args.from && args.to) {
            from = *args.from;
            to = *args.to;
        } else {
            // Locate the aspect term (case-insensitive, scalar offsets).
            const std::vector<Token> aspect_toks = tokenize(args.aspect);
            if (aspect_toks.empty()) {
                err << "error: aspect has no tokens\n";
                return kExitInputError;
            }
            std::vector<std::pair<std::size_t, std::size_t>> occurrences;
            for (std::size_t i = 0; i + aspect_toks.size() <= toks.size(); ++i) {
                bool match = true;
                for (std::size_t k = 0; k < aspect_toks.size(); ++k) {
                    if (toks[i + k].text != aspect_toks[k].text) {
                        match = false;
                        break;
                    }
                }
                if (match) {
                    occurrences.emplace_back(toks[i].begin,
                                             toks[i + aspect_toks.size() - 1].end);
                }
            }
            if (occurrences.empty()) {
                err << "error: aspect \"" << args.aspect << "\" not found in sentence\n";
                return kExitInputError;
            }
            if (occurrences.size() > 1) {
                err << "error: aspect \"" << args.aspect
                    << "\" occurs multiple times; pass --from/--to. Occurrences:";
                for (const auto& [f, t] : occurrences) err << " [" << f << "," << t << ")";
                err << "\n";
                return kExitInputError;
            }
            std::tie(from, to) = occurrences[0];
        }

        const auto span = align_aspect_span(toks, from, to);
        if (!span) {
            err << "error: offsets [" << from << "," << to << ") overlap no token\n";
            return kExitInputError;
        }
        Sample s;
        for (const Token& t : toks) s.tokens.push_back(t.text);
        s.aspect_begin = span->first;
        s.aspect_end = span->second;
        s.raw_text = args.sentence;

        Rng unused(0);
        const ForwardResult fr =
            model_forward(ckpt.params, ckpt.vocab, s, false, Real(1), unused);
        json j{{"label", polarity_name(fr.label)},
               {"probs", fr.probs.probs},
               {"tokens", s.tokens},
               {"gamma", fr.trace.gamma}};
        out << j.dump() << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_visualize(const VisualizeArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const Checkpoint ckpt = load_checkpoint(args.model_path);
        const LoadResult data = load_dataset(args.data_path, args.format);
        if (data.samples.empty()) {
            err << "error: no samples in " << args.data_path << "\n";
            return kExitInputError;
        }
        std::vector<HeatmapRow> rows;
        Rng unused(0);
        for (const Sample& s : data.samples) {
            const ForwardResult fr =
                model_forward(ckpt.params, ckpt.vocab, s, false, Real(1), unused);
            rows.push_back({s.tokens, fr.trace.gamma, s.aspect_begin, s.aspect_end,
                            s.polarity, fr.label});
        }
        if (args.ansi) {
            out << render_heatmap_ansi(rows);
            return kExitOk;
        }
        std::ofstream html(args.out_path);
        if (!html) {
            err << "error: cannot write " << args.out_path << "\n";
            return kExitInputError;
        }
        html << render_heatmap_html(rows);
        if (!html) {
            err << "error: I/O failure writing " << args.out_path << "\n";
            return kExitInputError;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_gradcheck(const GradcheckArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const GradCheckReport rep = model_gradient_check(args.config);
        out << "max relative gradient error " << std::scientific << std::setprecision(6)
            << rep.max_rel_error << " over " << rep.checked << " coordinates\n";
        if (rep.max_rel_error <= Real(1e-4)) return kExitOk;
        err << "gradient check failed: worst coordinate " << rep.worst_coord
            << " analytic " << rep.analytic_at_worst << " numeric " << rep.numeric_at_worst
            << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

int run_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const LoadResult data = load_dataset(args.data_path, args.format);
        for (const std::string& w : data.warnings) err << "warning: " << w << "\n";
        const DatasetStats stats = dataset_stats(data.samples);
        out << format_stats(args.data_path, stats);
        out << "total " << stats.total() << "\n";
        if (data.conflict_dropped > 0) {
            out << "(dropped " << data.conflict_dropped << " conflict pairs)\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace aoa::cli
