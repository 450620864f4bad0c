#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <fstream>
#include <sstream>

#include "aoa/checkpoint.hpp"
#include "aoa/cli.hpp"
#include "aoa/visualize.hpp"

using namespace aoa;

namespace {

const std::string kFixtures = AOA_FIXTURE_DIR;

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint small_checkpoint(std::uint64_t seed, std::size_t d_w = 4, std::size_t d_h = 3) {
    Sample s;
    for (int i = 0; i < 6; ++i) s.tokens.push_back("t" + std::to_string(i));
    s.aspect_end = 1;
    Vocab vocab = build_vocab({s});
    Rng rng(seed);
    EmbeddingTable emb = random_table(vocab, d_w, rng, 0.5);
    ModelParams params = init_params(d_h, 0.3, rng, std::move(emb));
    TrainConfig cfg;
    cfg.d_h = d_h;
    cfg.seed = seed;
    return {cfg, std::move(vocab), std::move(params)};
}

struct TempPath {
    std::string path;
    explicit TempPath(std::string p) : path(std::move(p)) {}
    ~TempPath() { std::remove(path.c_str()); }
};

cli::TrainArgs fixture_train_args(const std::string& out_path) {
    cli::TrainArgs args;
    args.train_path = kFixtures + "/synthetic32.tsv";
    args.embeddings_path = kFixtures + "/synthetic_vectors_16d.txt";
    args.out_path = out_path;
    args.config.d_h = 4;
    args.config.keep_rate = 1.0;
    args.config.max_epochs = 3;
    args.config.seed = 17;
    return args;
}

}  // namespace

TEST_CASE("checkpoint round-trips bitwise") {
    const TempPath p("/tmp/aoa_ckpt_roundtrip.bin");
    const Checkpoint ckpt = small_checkpoint(21);
    save_checkpoint(ckpt, p.path);

    const Checkpoint back = load_checkpoint(p.path);
    CHECK(back.vocab.tokens == ckpt.vocab.tokens);
    CHECK(back.vocab.unk == ckpt.vocab.unk);
    CHECK(back.config.d_h == ckpt.config.d_h);
    CHECK(back.config.seed == ckpt.config.seed);
    CHECK(back.config.lr == ckpt.config.lr);
    CHECK(flatten(back.params) == flatten(ckpt.params));
    CHECK(back.params.embeddings.table == ckpt.params.embeddings.table);

    // Save-load-save is byte identical.
    const TempPath p2("/tmp/aoa_ckpt_roundtrip2.bin");
    save_checkpoint(back, p2.path);
    CHECK(read_bytes(p2.path) == read_bytes(p.path));
}

TEST_CASE("checkpoint round-trip property over random shapes") {
    const TempPath p("/tmp/aoa_ckpt_prop.bin");
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng shape_rng(seed * 101);
        const std::size_t d_w = 2 + shape_rng.next_below(4);
        const std::size_t d_h = 1 + shape_rng.next_below(5);
        const Checkpoint ckpt = small_checkpoint(seed, d_w, d_h);
        save_checkpoint(ckpt, p.path);
        const Checkpoint back = load_checkpoint(p.path);
        CHECK(flatten(back.params) == flatten(ckpt.params));
        CHECK(back.params.embeddings.table == ckpt.params.embeddings.table);
    }
}

TEST_CASE("checkpoint loader rejects corruption") {
    const TempPath p("/tmp/aoa_ckpt_corrupt.bin");
    save_checkpoint(small_checkpoint(22), p.path);
    const std::string good = read_bytes(p.path);

    // Truncated payload.
    write_bytes(p.path, good.substr(0, good.size() - 9));
    CHECK_THROWS_WITH_AS(load_checkpoint(p.path), doctest::Contains("truncated"),
                         std::runtime_error);

    // Bad magic.
    std::string bad_magic = good;
    bad_magic[0] = 'X';
    write_bytes(p.path, bad_magic);
    CHECK_THROWS_AS(load_checkpoint(p.path), std::runtime_error);

    // Missing file.
    CHECK_THROWS_AS(load_checkpoint("/tmp/aoa_ckpt_nonexistent.bin"), std::runtime_error);

    // Header tensor shape no longer matching the payload size.
    std::string bad_shape = good;
    const std::size_t rpos = bad_shape.find("\"rows\":3");
    REQUIRE(rpos != std::string::npos);
    bad_shape[rpos + 7] = '4';
    write_bytes(p.path, bad_shape);
    CHECK_THROWS_AS(load_checkpoint(p.path), std::runtime_error);
}

TEST_CASE("run_train produces a checkpoint and exits cleanly") {
    const TempPath model("/tmp/aoa_cli_train.bin");
    const TempPath log("/tmp/aoa_cli_train.jsonl");
    cli::TrainArgs args = fixture_train_args(model.path);
    args.log_path = log.path;

    std::ostringstream out, err;
    CHECK(cli::run_train(args, out, err) == cli::kExitOk);
    CHECK(err.str().empty());

    const Checkpoint ckpt = load_checkpoint(model.path);
    CHECK(ckpt.config.d_h == 4);
    CHECK(ckpt.params.d_h() == 4);
    CHECK(ckpt.params.embeddings.dim == 16);

    // One JSON line per epoch, stable keys, no timing by default.
    std::ifstream lf(log.path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(lf, line)) {
        CHECK(line.find("\"epoch\":") != std::string::npos);
        CHECK(line.find("\"train_loss\":") != std::string::npos);
        CHECK(line.find("\"val_accuracy\":") != std::string::npos);
        CHECK(line.find("wall_seconds") == std::string::npos);
        ++lines;
    }
    CHECK(lines == 3);
}

TEST_CASE("run_train rejects a missing dataset, naming the path") {
    cli::TrainArgs args = fixture_train_args("/tmp/aoa_cli_never.bin");
    args.train_path = "/tmp/aoa_cli_missing.tsv";
    std::ostringstream out, err;
    CHECK(cli::run_train(args, out, err) == cli::kExitInputError);
    CHECK(err.str().find("/tmp/aoa_cli_missing.tsv") != std::string::npos);
}

TEST_CASE("run_train is byte-deterministic across invocations") {
    const TempPath m1("/tmp/aoa_cli_det1.bin"), m2("/tmp/aoa_cli_det2.bin");
    const TempPath l1("/tmp/aoa_cli_det1.jsonl"), l2("/tmp/aoa_cli_det2.jsonl");
    cli::TrainArgs a1 = fixture_train_args(m1.path);
    a1.log_path = l1.path;
    cli::TrainArgs a2 = fixture_train_args(m2.path);
    a2.log_path = l2.path;

    std::ostringstream out, err;
    REQUIRE(cli::run_train(a1, out, err) == cli::kExitOk);
    REQUIRE(cli::run_train(a2, out, err) == cli::kExitOk);
    CHECK(read_bytes(m1.path) == read_bytes(m2.path));
    CHECK(read_bytes(l1.path) == read_bytes(l2.path));
}

TEST_CASE("run_eval reports accuracy and a confusion matrix") {
    const TempPath model("/tmp/aoa_cli_eval.bin");
    std::ostringstream tout, terr;
    REQUIRE(cli::run_train(fixture_train_args(model.path), tout, terr) == cli::kExitOk);

    cli::EvalArgs args;
    args.model_path = model.path;
    args.data_path = kFixtures + "/synthetic32.tsv";
    std::ostringstream out, err;
    CHECK(cli::run_eval(args, out, err) == cli::kExitOk);
    const std::string text = out.str();
    CHECK(text.find("accuracy") != std::string::npos);
    CHECK(text.find("confusion") != std::string::npos);

    // The printed accuracy agrees with direct evaluation.
    const Checkpoint ckpt = load_checkpoint(model.path);
    const LoadResult data = cli::load_dataset(args.data_path, "tsv");
    const Real acc = evaluate_accuracy(ckpt.params, ckpt.vocab, data.samples);
    char expect[32];
    std::snprintf(expect, sizeof expect, "%.6f", acc);
    CHECK(text.find(expect) != std::string::npos);
}

TEST_CASE("run_eval majority mode reproduces the baseline arithmetic") {
    cli::EvalArgs args;
    args.majority = true;
    args.train_path = kFixtures + "/synthetic32.tsv";
    args.data_path = kFixtures + "/synthetic32.tsv";
    std::ostringstream out, err;
    CHECK(cli::run_eval(args, out, err) == cli::kExitOk);

    const LoadResult data = cli::load_dataset(args.data_path, "tsv");
    const Real acc = majority_baseline(data.samples, data.samples);
    char expect[32];
    std::snprintf(expect, sizeof expect, "%.6f", acc);
    CHECK(out.str().find(expect) != std::string::npos);
}

TEST_CASE("run_predict emits a token-aligned attention distribution") {
    const TempPath model("/tmp/aoa_cli_predict.bin");
    std::ostringstream tout, terr;
    REQUIRE(cli::run_train(fixture_train_args(model.path), tout, terr) == cli::kExitOk);

    cli::PredictArgs args;
    args.model_path = model.path;
    args.sentence = "the good food arrived late last night here";
    args.aspect = "food";
    std::ostringstream out, err;
    REQUIRE(cli::run_predict(args, out, err) == cli::kExitOk);
    const std::string line = out.str();
    // 8 tokens and 8 gamma entries summing to 1.
    std::size_t commas = 0;
    const std::size_t gpos = line.find("\"gamma\":[");
    REQUIRE(gpos != std::string::npos);
    const std::size_t gend = line.find(']', gpos);
    Real gsum = 0;
    {
        std::string arr = line.substr(gpos + 9, gend - gpos - 9);
        std::replace(arr.begin(), arr.end(), ',', ' ');
        std::istringstream ss(arr);
        Real v;
        while (ss >> v) {
            gsum += v;
            ++commas;
        }
    }
    CHECK(commas == 8);
    CHECK(gsum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(line.find("\"label\":") != std::string::npos);

    // Absent aspect: input error naming the aspect.
    args.aspect = "decor";
    std::ostringstream out2, err2;
    CHECK(cli::run_predict(args, out2, err2) == cli::kExitInputError);
    CHECK(err2.str().find("decor") != std::string::npos);

    // Repeated aspect requires explicit offsets.
    args.sentence = "good food and bad food";
    args.aspect = "food";
    std::ostringstream out3, err3;
    CHECK(cli::run_predict(args, out3, err3) == cli::kExitInputError);
    CHECK(err3.str().find("--from") != std::string::npos);
    args.aspect.clear();
    args.from = 18;
    args.to = 22;
    std::ostringstream out4, err4;
    CHECK(cli::run_predict(args, out4, err4) == cli::kExitOk);
    CHECK(out4.str().find("\"label\":") != std::string::npos);
}

TEST_CASE("run_visualize writes one heatmap row per sample") {
    const TempPath model("/tmp/aoa_cli_vis.bin");
    std::ostringstream tout, terr;
    REQUIRE(cli::run_train(fixture_train_args(model.path), tout, terr) == cli::kExitOk);

    const TempPath data("/tmp/aoa_cli_vis.tsv");
    {
        std::ofstream f(data.path);
        f << "the good food arrived\tfood\t9\t13\tpositive\n"
             "bad service again\tservice\t4\t11\tnegative\n"
             "the screen is okay\tscreen\t4\t10\tneutral\n"
             "great battery life\tbattery\t6\t13\tpositive\n"
             "awful food truly\tfood\t6\t10\tnegative\n";
    }
    const TempPath html("/tmp/aoa_cli_vis.html");
    cli::VisualizeArgs args;
    args.model_path = model.path;
    args.data_path = data.path;
    args.out_path = html.path;
    std::ostringstream out, err;
    REQUIRE(cli::run_visualize(args, out, err) == cli::kExitOk);
    const std::string page = read_bytes(html.path);
    CHECK(page.find("<html") != std::string::npos);
    // One row per sample plus signed label text.
    std::size_t rows = 0;
    for (std::size_t pos = page.find("<tr"); pos != std::string::npos;
         pos = page.find("<tr", pos + 1)) {
        ++rows;
    }
    CHECK(rows >= 5);
    CHECK(page.find("+1") != std::string::npos);
    CHECK(page.find("-1") != std::string::npos);
    CHECK(page.find("0") != std::string::npos);

    // ANSI mode writes to the stream instead.
    cli::VisualizeArgs ansi = args;
    ansi.out_path.clear();
    ansi.ansi = true;
    std::ostringstream aout, aerr;
    REQUIRE(cli::run_visualize(ansi, aout, aerr) == cli::kExitOk);
    CHECK(aout.str().find("\x1b[") != std::string::npos);
}

TEST_CASE("run_eval rejects an empty data file") {
    const TempPath model("/tmp/aoa_cli_eval_empty.bin");
    std::ostringstream tout, terr;
    REQUIRE(cli::run_train(fixture_train_args(model.path), tout, terr) == cli::kExitOk);

    const TempPath empty("/tmp/aoa_cli_empty.tsv");
    { std::ofstream f(empty.path); }
    cli::EvalArgs args;
    args.model_path = model.path;
    args.data_path = empty.path;
    std::ostringstream out, err;
    CHECK(cli::run_eval(args, out, err) == cli::kExitInputError);
    CHECK(err.str().find(empty.path) != std::string::npos);
}

TEST_CASE("heatmap one-hot gamma shades exactly one token fully") {
    HeatmapRow row;
    row.tokens = {"the", "food", "rocks"};
    row.gamma = {0.0, 1.0, 0.0};
    row.aspect_begin = 1;
    row.aspect_end = 2;
    row.gold = Polarity::Positive;
    row.predicted = Polarity::Negative;
    const std::string html = render_heatmap_html({row});

    std::size_t full = 0, transparent = 0;
    for (std::size_t pos = html.find("rgba(220, 40, 40, "); pos != std::string::npos;
         pos = html.find("rgba(220, 40, 40, ", pos + 1)) {
        const char level = html[pos + 18];
        if (level == '1') ++full;
        if (level == '0') ++transparent;
    }
    CHECK(full == 1);
    CHECK(transparent == 2);
    CHECK(html.find("class=\"tok aspect\"") != std::string::npos);
    CHECK(html.find("+1/-1") != std::string::npos);
}

TEST_CASE("run_gradcheck verifies and detects corruption") {
    cli::GradcheckArgs args;
    args.config.seed = 3;
    std::ostringstream out, err;
    CHECK(cli::run_gradcheck(args, out, err) == cli::kExitOk);
    CHECK(out.str().find("max relative gradient error") != std::string::npos);

    std::ostringstream out2, err2;
    CHECK(cli::run_gradcheck(args, out2, err2) == cli::kExitOk);
    CHECK(out2.str() == out.str());  // repeatable report

    args.config.corrupt = true;
    std::ostringstream out3, err3;
    CHECK(cli::run_gradcheck(args, out3, err3) == cli::kExitVerificationFailure);
    CHECK(err3.str().find("coordinate") != std::string::npos);
}

TEST_CASE("run_stats prints per-class counts") {
    cli::StatsArgs args;
    args.data_path = kFixtures + "/mini_semeval.xml";
    args.format = "semeval-xml";
    std::ostringstream out, err;
    CHECK(cli::run_stats(args, out, err) == cli::kExitOk);
    const std::string text = out.str();
    CHECK(text.find("Positive") != std::string::npos);
    CHECK(text.find("2") != std::string::npos);
    CHECK(text.find("total") != std::string::npos);
}

TEST_CASE("history_line schema") {
    EpochRecord rec;
    rec.epoch = 3;
    rec.lr = 0.01;
    rec.train_loss = 1.25;
    rec.train_accuracy = 0.5;
    rec.val_accuracy = 0.75;
    rec.wall_seconds = 2.5;
    const std::string plain = cli::history_line(rec, false);
    CHECK(plain ==
          R"({"epoch":3,"lr":0.01,"train_accuracy":0.5,"train_loss":1.25,"val_accuracy":0.75})");
    const std::string timed = cli::history_line(rec, true);
    CHECK(timed.find("\"wall_seconds\":2.5") != std::string::npos);
}
