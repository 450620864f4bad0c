#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "aoa/cli.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("AOA_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 42;
}

void add_config_flags(CLI::App* cmd, aoa::TrainConfig& cfg) {
    cmd->add_option("--d-h", cfg.d_h, "LSTM hidden size");
    cmd->add_option("--lr", cfg.lr, "initial learning rate");
    cmd->add_option("--batch-size", cfg.batch_size, "mini-batch size");
    cmd->add_option("--lambda", cfg.lambda, "L2 regularization coefficient");
    cmd->add_option("--keep-rate", cfg.keep_rate, "dropout keep rate on LSTM inputs");
    cmd->add_option("--init-range", cfg.init_range, "uniform init range for weights");
    cmd->add_option("--oov-range", cfg.oov_range, "uniform init range for OOV embeddings");
    cmd->add_option("--val-fraction", cfg.val_fraction, "validation split fraction");
    cmd->add_option("--max-epochs", cfg.max_epochs, "training epochs");
    cmd->add_option("--patience-epochs", cfg.patience_epochs,
                    "epochs without loss improvement before halving lr");
    cmd->add_option("--lr-decay", cfg.lr_decay, "lr multiplier on schedule trigger");
    cmd->add_option("--seed", cfg.seed, "root random seed (default: AOA_SEED env or 42)");
    cmd->add_option_function<std::string>(
           "--lr-schedule",
           [&cfg](const std::string& v) {
               cfg.lr_schedule = v == "window" ? aoa::LrScheduleMode::Window
                                               : aoa::LrScheduleMode::Patience;
           },
           "lr schedule reading: patience (default) or window")
        ->check(CLI::IsMember({"patience", "window"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aspect-level sentiment classification with attention-over-attention"};
    app.require_subcommand(1);

    aoa::cli::TrainArgs train_args;
    train_args.config.seed = default_seed();
    auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
    train->add_option("--train", train_args.train_path, "training data file")->required();
    train->add_option("--format", train_args.format, "semeval-xml or tsv")
        ->check(CLI::IsMember({"semeval-xml", "tsv"}));
    train->add_option("--embeddings", train_args.embeddings_path,
                      "pretrained vectors (GloVe text format)");
    train->add_option("--embedding-dim", train_args.embedding_dim,
                      "embedding width when no pretrained file is given");
    train->add_option("--out", train_args.out_path, "output checkpoint path")->required();
    train->add_option("--log", train_args.log_path, "history JSON-lines file (default stdout)");
    train->add_flag("--log-timing", train_args.log_timing,
                    "include wall_seconds in history records");
    add_config_flags(train, train_args.config);

    aoa::cli::EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    eval->add_option("--model", eval_args.model_path, "checkpoint path");
    eval->add_option("--data", eval_args.data_path, "dataset file")->required();
    eval->add_option("--format", eval_args.format, "semeval-xml or tsv")
        ->check(CLI::IsMember({"semeval-xml", "tsv"}));
    eval->add_flag("--majority", eval_args.majority, "report the majority baseline instead");
    eval->add_option("--train", eval_args.train_path, "training data (with --majority)");

    aoa::cli::PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "classify one sentence-aspect pair");
    predict->add_option("--model", predict_args.model_path, "checkpoint path")->required();
    predict->add_option("--sentence", predict_args.sentence, "input sentence")->required();
    predict->add_option("--aspect", predict_args.aspect, "aspect term");
    std::size_t from = 0, to = 0;
    auto* from_opt = predict->add_option("--from", from, "aspect start offset (scalars)");
    auto* to_opt = predict->add_option("--to", to, "aspect end offset (scalars)");

    aoa::cli::VisualizeArgs viz_args;
    auto* viz = app.add_subcommand("visualize", "export attention heatmaps");
    viz->add_option("--model", viz_args.model_path, "checkpoint path")->required();
    viz->add_option("--data", viz_args.data_path, "dataset file")->required();
    viz->add_option("--format", viz_args.format, "semeval-xml or tsv")
        ->check(CLI::IsMember({"semeval-xml", "tsv"}));
    viz->add_option("--out", viz_args.out_path, "output HTML path");
    viz->add_flag("--ansi", viz_args.ansi, "print 256-color terminal shading instead");

    aoa::cli::GradcheckArgs grad_args;
    grad_args.config.seed = default_seed();
    auto* grad = app.add_subcommand("gradcheck", "verify analytic gradients");
    grad->add_option("--seed", grad_args.config.seed, "random seed");
    std::vector<std::size_t> dims;
    grad->add_option("--dims", dims, "d_w d_h n m (default 4 3 6 2)")->expected(4);
    grad->add_flag("--corrupt", grad_args.config.corrupt,
                   "negative control: perturb one gradient coordinate")
        ->group("");  // hidden; exists for the test suite

    aoa::cli::StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "print per-polarity dataset counts");
    stats->add_option("--data", stats_args.data_path, "dataset file")->required();
    stats->add_option("--format", stats_args.format, "semeval-xml or tsv")
        ->check(CLI::IsMember({"semeval-xml", "tsv"}));

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) return aoa::cli::run_train(train_args, std::cout, std::cerr);
    if (eval->parsed()) return aoa::cli::run_eval(eval_args, std::cout, std::cerr);
    if (predict->parsed()) {
        if (from_opt->count()) predict_args.from = from;
        if (to_opt->count()) predict_args.to = to;
        if (predict_args.aspect.empty() && !(predict_args.from && predict_args.to)) {
            std::cerr << "error: pass --aspect or both --from and --to\n";
            return aoa::cli::kExitInputError;
        }
        return aoa::cli::run_predict(predict_args, std::cout, std::cerr);
    }
    if (viz->parsed()) {
        if (!viz_args.ansi && viz_args.out_path.empty()) {
            std::cerr << "error: pass --out <html> or --ansi\n";
            return aoa::cli::kExitInputError;
        }
        return aoa::cli::run_visualize(viz_args, std::cout, std::cerr);
    }
    if (grad->parsed()) {
        if (dims.size() == 4) {
            grad_args.config.d_w = dims[0];
            grad_args.config.d_h = dims[1];
            grad_args.config.n = dims[2];
            grad_args.config.m = dims[3];
        }
        return aoa::cli::run_gradcheck(grad_args, std::cout, std::cerr);
    }
    return aoa::cli::run_stats(stats_args, std::cout, std::cerr);
}
