#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "aoa/data.hpp"
#include "aoa/embeddings.hpp"

using namespace aoa;

namespace {

const std::string kFixtures = AOA_FIXTURE_DIR;

Sample sample_from(const std::vector<std::string>& tokens) {
    Sample s;
    s.tokens = tokens;
    s.aspect_begin = 0;
    s.aspect_end = 1;
    return s;
}

}  // namespace

TEST_CASE("build_vocab first-occurrence order with <unk> last") {
    const Vocab v = build_vocab({sample_from({"a", "b", "a"})});
    REQUIRE(v.size() == 3);
    CHECK(v.tokens == std::vector<std::string>{"a", "b", kUnkToken});
    CHECK(v.index.at("a") == 0);
    CHECK(v.index.at("b") == 1);
    CHECK(v.unk == 2);
    CHECK(v.lookup("zzz") == v.unk);

    const Vocab v2 = build_vocab({sample_from({"a", "b", "a"})});
    CHECK(v2.tokens == v.tokens);

    CHECK_THROWS_AS(build_vocab({}), std::invalid_argument);
}

TEST_CASE("vocab size over fixture corpus equals independent distinct-token count") {
    const LoadResult data = load_tsv(kFixtures + "/synthetic32.tsv");
    const Vocab v = build_vocab(data.samples);
    std::set<std::string> distinct;
    for (const Sample& s : data.samples) distinct.insert(s.tokens.begin(), s.tokens.end());
    CHECK(v.size() == distinct.size() + 1);  // +1 for <unk>
}

TEST_CASE("load_pretrained copies found rows and randomizes the rest") {
    const Vocab v = build_vocab({sample_from({"a", "b"})});
    Rng rng(3);
    std::vector<std::string> warnings;
    const EmbeddingTable tab =
        load_pretrained(kFixtures + "/tiny_vectors.txt", v, rng, 0.01, &warnings);
    CHECK(tab.dim == 2);
    CHECK(tab.table(0, 0) == 1.0);  // first occurrence of "a" wins
    CHECK(tab.table(0, 1) == 2.0);
    CHECK(tab.table(1, 0) == 3.5);
    CHECK(tab.table(1, 1) == -1.25);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);

    // <unk> is the only OOV row and is bounded.
    REQUIRE(tab.oov_rows == std::vector<std::size_t>{v.unk});
    for (std::size_t j = 0; j < tab.dim; ++j) {
        CHECK(std::fabs(tab.table(v.unk, j)) < 0.01);
    }
}

TEST_CASE("load_pretrained empty file leaves all rows OOV") {
    const std::string path = "/tmp/aoa_empty_vectors.txt";
    { std::ofstream f(path); }
    const Vocab v = build_vocab({sample_from({"x", "y"})});
    Rng rng(4);
    const EmbeddingTable tab = load_pretrained(path, v, rng);
    CHECK(tab.oov_rows.size() == v.size());
    for (const Real val : tab.table.data) CHECK(std::fabs(val) < 0.01);
    std::remove(path.c_str());
}

TEST_CASE("load_pretrained rejects inconsistent rows") {
    const std::string path = "/tmp/aoa_bad_vectors.txt";
    {
        std::ofstream f(path);
        f << "a 1.0 2.0\nb 3.0\n";
    }
    const Vocab v = build_vocab({sample_from({"a", "b"})});
    Rng rng(5);
    CHECK_THROWS_WITH_AS(load_pretrained(path, v, rng), doctest::Contains(":2"),
                         std::runtime_error);
    {
        std::ofstream f(path);
        f << "a 1.0 bogus\n";
    }
    CHECK_THROWS_AS(load_pretrained(path, v, rng), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("lookup shapes, repeats and sub-span slicing") {
    const Sample s = sample_from({"a", "b", "a", "c"});
    const Vocab v = build_vocab({s});
    Rng rng(6);
    const EmbeddingTable tab = random_table(v, 5, rng, 0.5);

    const Matrix single = lookup(tab, v, {"b"});
    CHECK(single.rows == 1);
    CHECK(single.cols == 5);
    for (std::size_t j = 0; j < 5; ++j) CHECK(single(0, j) == tab.table(1, j));

    const Matrix rep = lookup(tab, v, {"a", "a"});
    for (std::size_t j = 0; j < 5; ++j) CHECK(rep(0, j) == rep(1, j));

    // Aspect lookup equals the row-slice of the sentence lookup.
    const Matrix sent = lookup(tab, v, s.tokens);
    const Matrix aspect = lookup(tab, v, {"b", "a"});
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(aspect(i, j) == sent(1 + i, j));
        }
    }

    const Matrix unk = lookup(tab, v, {"nope"});
    for (std::size_t j = 0; j < 5; ++j) CHECK(unk(0, j) == tab.table(v.unk, j));

    CHECK_THROWS_AS(lookup(tab, v, {}), std::invalid_argument);
}
