#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>
#include <thread>
#include <vector>

#include <json.hpp>

#include "parafine/attributes.hpp"
#include "parafine/discretize.hpp"
#include "parafine/lexicons.hpp"
#include "parafine/rng.hpp"
#include "parafine/standardize.hpp"
#include "parafine/text.hpp"

using namespace parafine;

namespace {

// Attribute ids whose values are integer counts; everything else is a
// formula value checked to 1e-9.
const std::set<int> kCountIds = {0,  1,  2,  3,  4,  11, 12, 13, 14, 15, 16, 17, 18, 24,
                                 25, 26, 27, 28, 29, 30, 31, 32, 33, 36, 37, 38, 39};

nlohmann::json load_goldens() {
    std::ifstream in(std::string(TEST_DATA_DIR) + "/attr_goldens.json");
    REQUIRE(in.good());
    nlohmann::json doc;
    in >> doc;
    return doc;
}

}  // namespace

TEST_CASE("registry holds 40 contiguous attributes in three groups") {
    const auto& reg = attribute_registry();
    REQUIRE(reg.size() == kAttributeCount);
    int lexical = 0;
    int syntactic = 0;
    int discourse = 0;
    for (std::size_t i = 0; i < reg.size(); ++i) {
        CHECK(reg[i].id == static_cast<int>(i));
        switch (reg[i].group) {
            case AttrGroup::lexical: ++lexical; break;
            case AttrGroup::syntactic: ++syntactic; break;
            case AttrGroup::discourse: ++discourse; break;
        }
    }
    CHECK(lexical == 23);
    CHECK(syntactic == 12);
    CHECK(discourse == 5);
    CHECK(reg[36].supplemental);
    CHECK_FALSE(reg[35].supplemental);
}

TEST_CASE("group lookup follows the registry") {
    CHECK(group_of(attribute_id("ratio of unique words")) == AttrGroup::lexical);
    CHECK(group_of(attribute_id("# clauses")) == AttrGroup::syntactic);
    CHECK(group_of(attribute_id("# named entities gpe")) == AttrGroup::discourse);
    CHECK_THROWS_AS(group_of(40), std::out_of_range);
    CHECK_THROWS_AS(group_of(-1), std::out_of_range);
}

TEST_CASE("registry serializes with stable fields") {
    const auto doc = nlohmann::json::parse(registry_json());
    REQUIRE(doc.size() == kAttributeCount);
    CHECK(doc[0]["name"] == "# unique sophisticated words");
    CHECK(doc[7]["group"] == "lexical");
    CHECK(doc[39]["supplemental"] == true);
}

TEST_CASE("tokenizer matches hand counts") {
    const auto& lex = Lexicons::bundled();
    const TokenizedText a = tokenize("The cat sat.", lex);
    REQUIRE(a.sentences.size() == 1);
    CHECK(a.sentences[0].size() == 3);

    CHECK(tokenize("", lex).sentences.empty());
    CHECK(tokenize("   \n\t ", lex).sentences.empty());
    CHECK(tokenize("Hi! Bye!", lex).sentences.size() == 2);
    CHECK(tokenize("No terminator here", lex).sentences.size() == 1);
    // An ellipsis is a terminator run, so it closes a sentence too.
    CHECK(tokenize("Wait... what?! Really?", lex).sentences.size() == 3);
}

TEST_CASE("word tokens strip punctuation and keep inner apostrophes") {
    const auto& lex = Lexicons::bundled();
    const TokenizedText t = tokenize("Don't stop, 'cause it's 3rd-rate.", lex);
    REQUIRE(t.sentences.size() == 1);
    const auto& s = t.sentences[0];
    REQUIRE(s.size() == 6);
    CHECK(s[0].surface == "Don't");
    CHECK(s[0].chars == 4);
    CHECK(s[1].surface == "stop");
    CHECK(s[2].surface == "cause");
    CHECK(s[3].surface == "it's");
    CHECK(s[4].surface == "3rd");
    CHECK(s[4].pos == Pos::num);
    CHECK(s[5].surface == "rate");
}

TEST_CASE("syllable heuristic on known words") {
    CHECK(count_syllables("cat") == 1);
    CHECK(count_syllables("table") == 2);   // silent-e exception for -le
    CHECK(count_syllables("make") == 1);    // silent e
    CHECK(count_syllables("delegation") == 4);
    CHECK(count_syllables("rhythm") == 1);  // y as vowel
    CHECK(count_syllables("42") == 1);
}

TEST_CASE("extraction matches the frozen reference values") {
    const auto& lex = Lexicons::bundled();
    const auto goldens = load_goldens();
    REQUIRE(goldens.size() == 10);
    for (const auto& entry : goldens) {
        const std::string text = entry["text"].get<std::string>();
        CAPTURE(text);
        const auto expected = entry["values"].get<std::vector<double>>();
        REQUIRE(expected.size() == kAttributeCount);
        const auto actual = extract_attributes(text, lex);
        REQUIRE(actual.size() == kAttributeCount);
        for (int id = 0; id < kAttributeCount; ++id) {
            CAPTURE(id);
            CAPTURE(attribute_registry()[static_cast<std::size_t>(id)].name);
            if (kCountIds.count(id)) {
                CHECK(actual[static_cast<std::size_t>(id)] == expected[static_cast<std::size_t>(id)]);
            } else {
                CHECK(std::abs(actual[static_cast<std::size_t>(id)] -
                               expected[static_cast<std::size_t>(id)]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("extraction rejects text with no words") {
    const auto& lex = Lexicons::bundled();
    CHECK_THROWS_AS(extract_attributes("", lex), std::invalid_argument);
    CHECK_THROWS_AS(extract_attributes("... !!! ???", lex), std::invalid_argument);
}

TEST_CASE("extraction is deterministic across runs and threads") {
    const auto& lex = Lexicons::bundled();
    const std::string text =
        "Although the French minister traveled to Paris, the committee stayed in London and "
        "debated the new Treaty for 12 days.";
    const auto reference = extract_attributes(text, lex);
    CHECK(extract_attributes(text, lex) == reference);

    std::vector<std::vector<Real>> results(4);
    std::vector<std::thread> threads;
    for (int i = 0; i < 4; ++i) {
        threads.emplace_back(
            [&, i] { results[static_cast<std::size_t>(i)] = extract_attributes(text, lex); });
    }
    for (auto& t : threads) t.join();
    for (const auto& r : results) CHECK(r == reference);
}

TEST_CASE("appending a sentence never decreases sentence or character counts") {
    const auto& lex = Lexicons::bundled();
    const std::vector<std::string> bases = {
        "The cat sat.", "Money moves fast.", "Although it rained heavily, we walked home."};
    for (const auto& base : bases) {
        const auto before = extract_attributes(base, lex);
        const auto after = extract_attributes(base + " Another sentence follows now.", lex);
        CHECK(after[17] >= before[17]);
        CHECK(after[18] >= before[18]);
        CHECK(after[3] >= before[3]);
    }
}

TEST_CASE("duplicating a word never increases the unique-word ratio") {
    const auto& lex = Lexicons::bundled();
    const auto before = extract_attributes("The gray fox jumped over the fence.", lex);
    const auto after = extract_attributes("The gray gray fox jumped over the fence.", lex);
    CHECK(after[7] <= before[7]);
}

TEST_CASE("value classes hold on arbitrary text") {
    const auto& lex = Lexicons::bundled();
    const std::vector<std::string> texts = {
        "First they sold 40 dollars of bread in Cairo!",
        "What a strange, strange day it was... nobody spoke.",
        "He wants to visit New York because the museums are famous.",
    };
    for (const auto& text : texts) {
        const auto v = extract_attributes(text, lex);
        for (const int id : kCountIds) {
            const Real x = v[static_cast<std::size_t>(id)];
            CHECK(x >= 0.0);
            CHECK(x == std::floor(x));
        }
        for (const int id : {5, 6, 7, 8, 9, 10}) {
            CHECK(v[static_cast<std::size_t>(id)] >= 0.0);
            CHECK(v[static_cast<std::size_t>(id)] <= 1.0);
        }
        CHECK(v[35] >= 0.0);
    }
}

TEST_CASE("standardizer reproduces the hand-computed example") {
    const std::vector<std::vector<Real>> data = {{1.0}, {2.0}, {3.0}};
    const auto std1 = Standardizer::fit(data);
    const auto out = std1.apply({1.0});
    CHECK(out[0] == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(std1.apply({2.0})[0] == doctest::Approx(0.0));
    CHECK(std1.apply({3.0})[0] == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("standardized training data has mean 0 and variance 1") {
    Rng rng(17);
    std::vector<std::vector<Real>> data;
    for (int i = 0; i < 200; ++i) {
        std::vector<Real> v(5);
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] = rng.normal(static_cast<Real>(j) * 3.0, static_cast<Real>(j) + 1.0);
        }
        data.push_back(v);
    }
    const auto fitted = Standardizer::fit(data);
    std::vector<Real> mean(5, 0.0);
    std::vector<Real> var(5, 0.0);
    for (const auto& v : data) {
        const auto s = fitted.apply(v);
        for (std::size_t j = 0; j < s.size(); ++j) mean[j] += s[j];
    }
    for (auto& m : mean) m /= static_cast<Real>(data.size());
    for (const auto& v : data) {
        const auto s = fitted.apply(v);
        for (std::size_t j = 0; j < s.size(); ++j) var[j] += (s[j] - mean[j]) * (s[j] - mean[j]);
    }
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(std::abs(mean[j]) <= 1e-9);
        CHECK(std::abs(var[j] / static_cast<Real>(data.size()) - 1.0) <= 1e-6);
    }
}

TEST_CASE("standardizer round trip is the identity") {
    Rng rng(19);
    std::vector<std::vector<Real>> data;
    for (int i = 0; i < 50; ++i) {
        std::vector<Real> v(8);
        for (auto& x : v) x = rng.uniform(-20.0, 20.0);
        data.push_back(v);
    }
    const auto fitted = Standardizer::fit(data);
    for (const auto& v : data) {
        const auto back = fitted.invert(fitted.apply(v));
        for (std::size_t j = 0; j < v.size(); ++j) {
            CHECK(std::abs(back[j] - v[j]) <= 1e-9);
        }
    }
}

TEST_CASE("constant attribute is flagged and maps to zero") {
    const std::vector<std::vector<Real>> data = {{5.0, 1.0}, {5.0, 2.0}, {5.0, 3.0}};
    const auto fitted = Standardizer::fit(data);
    CHECK(fitted.degenerate_ids() == std::vector<int>{0});
    for (const auto& v : data) CHECK(fitted.apply(v)[0] == 0.0);
}

TEST_CASE("standardizer requires two vectors and serializes losslessly") {
    CHECK_THROWS_AS(Standardizer::fit({{1.0, 2.0}}), std::invalid_argument);
    const std::vector<std::vector<Real>> data = {{1.0, 7.5}, {4.0, -2.5}, {2.0, 0.0}};
    const auto fitted = Standardizer::fit(data);
    const auto restored = Standardizer::from_json(fitted.to_json());
    CHECK(restored.means() == fitted.means());
    CHECK(restored.stds() == fitted.stds());
}

TEST_CASE("discretizer recovers well-separated clusters exactly") {
    Rng rng(23);
    std::vector<std::vector<Real>> data;
    std::vector<int> truth;
    for (int i = 0; i < 400; ++i) {
        const int cluster = static_cast<int>(rng.below(20));
        truth.push_back(cluster);
        data.push_back({cluster * 10.0 + rng.uniform(-0.5, 0.5)});
    }
    // Every cluster must appear or recovery is ill-posed.
    std::set<int> present(truth.begin(), truth.end());
    REQUIRE(present.size() == 20);

    const auto disc = Discretizer::fit(data, 20);
    REQUIRE(disc.bin_count(0) == 20);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(disc.discretize(data[i])[0] == truth[i]);
    }
}

TEST_CASE("single distinct value gives one bin") {
    const std::vector<std::vector<Real>> data = {{4.0}, {4.0}, {4.0}};
    const auto disc = Discretizer::fit(data, 20);
    CHECK(disc.bin_count(0) == 1);
    CHECK(disc.discretize({4.0})[0] == 0);
    CHECK(disc.discretize({99.0})[0] == 0);
    CHECK(disc.bin_center(0, 0) == 4.0);
}

TEST_CASE("fewer distinct values than bins reduces the bin count") {
    const std::vector<std::vector<Real>> data = {{1.0}, {2.0}, {3.0}, {1.0}, {2.0}};
    const auto disc = Discretizer::fit(data, 20);
    CHECK(disc.bin_count(0) == 3);
    CHECK(disc.bin_center(0, 0) == 1.0);
    CHECK(disc.bin_center(0, 2) == 3.0);
}

TEST_CASE("discretizing a bin center returns that bin") {
    Rng rng(29);
    std::vector<std::vector<Real>> data;
    for (int i = 0; i < 500; ++i) {
        data.push_back({rng.normal(0.0, 5.0), rng.uniform(0.0, 1.0),
                        std::floor(rng.uniform(0.0, 8.0))});
    }
    const auto disc = Discretizer::fit(data, 20);
    for (int attr = 0; attr < 3; ++attr) {
        for (int b = 0; b < disc.bin_count(attr); ++b) {
            CHECK(disc.assign(attr, disc.bin_center(attr, b)) == b);
        }
    }
}

TEST_CASE("discretizer centers are strictly increasing") {
    Rng rng(41);
    std::vector<std::vector<Real>> data;
    for (int i = 0; i < 300; ++i) data.push_back({rng.uniform(0.0, 3.0)});
    const auto disc = Discretizer::fit(data, 20);
    const auto& c = disc.centers()[0];
    REQUIRE(c.size() == 20);
    for (std::size_t b = 1; b < c.size(); ++b) CHECK(c[b] > c[b - 1]);
}

TEST_CASE("discretizer rejects an empty corpus and survives serialization") {
    CHECK_THROWS_AS(Discretizer::fit({}, 20), std::invalid_argument);
    const std::vector<std::vector<Real>> data = {{1.0, 5.0}, {2.0, 5.5}, {3.0, 9.0}};
    const auto disc = Discretizer::fit(data, 2);
    const auto restored = Discretizer::from_json(disc.to_json());
    CHECK(restored.centers() == disc.centers());
}

TEST_CASE("discretizer fit is deterministic") {
    Rng rng(43);
    std::vector<std::vector<Real>> data;
    for (int i = 0; i < 250; ++i) data.push_back({rng.normal(), rng.uniform(0.0, 100.0)});
    const auto a = Discretizer::fit(data, 20);
    const auto b = Discretizer::fit(data, 20);
    CHECK(a.centers() == b.centers());
}
