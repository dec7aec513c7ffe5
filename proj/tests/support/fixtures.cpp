#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <random>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "rws/corpus.hpp"
#include "rws/errors.hpp"
#include "rws/index.hpp"
#include "rws/io_util.hpp"

namespace fixtures {

namespace {

const char* kAdjectives[] = {"calm",  "bright", "quiet", "rapid",  "ancient", "narrow",
                             "broad", "gentle", "rocky", "sandy",  "mossy",   "foggy",
                             "sunny", "frozen", "green", "silver", "golden",  "hidden"};
const char* kNouns[] = {"river",  "valley", "harbor", "meadow",  "forest", "canyon",
                        "bridge", "garden", "castle", "village", "island", "summit",
                        "lagoon", "desert", "glacier", "orchard", "quarry", "plateau"};

std::string filler_sentence(std::mt19937_64& rng) {
    const auto& adj = kAdjectives[rng() % std::size(kAdjectives)];
    const auto& noun = kNouns[rng() % std::size(kNouns)];
    std::uint64_t mile = rng() % 10000;
    return std::string("Where is the ") + adj + " " + noun + " near mile " + std::to_string(mile) + ".";
}

}  // namespace

void write_jsonl_corpus(const std::filesystem::path& path, const std::vector<std::string>& texts) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw rws::IoError("cannot write fixture corpus: " + path.string());
    for (const auto& text : texts) {
        nlohmann::json j;
        j["text"] = text;
        out << j.dump() << "\n";
    }
}

std::filesystem::path make_store(const std::filesystem::path& dir, const std::vector<std::string>& texts) {
    std::filesystem::create_directories(dir);
    auto corpus_path = dir / "corpus.jsonl";
    write_jsonl_corpus(corpus_path, texts);
    auto store_path = dir / "store";
    rws::DocumentStore::ingest(corpus_path, rws::CorpusFormat::jsonl, store_path);
    return store_path;
}

std::vector<std::string> synthetic_corpus(std::size_t n_docs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto word = [&]() -> std::string {
        std::uint64_t u = rng() % 1000;
        if (u < 500) return "c" + std::to_string(rng() % 50);     // common
        if (u < 850) return "m" + std::to_string(rng() % 500);    // mid
        return "r" + std::to_string(rng() % 5000);                // rare
    };
    std::vector<std::string> docs;
    docs.reserve(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        std::size_t len = 30 + rng() % 91;
        std::string text;
        for (std::size_t i = 0; i < len; ++i) {
            if (!text.empty()) text += ' ';
            text += word();
        }
        text += '.';
        docs.push_back(std::move(text));
    }
    return docs;
}

std::vector<std::string> synthetic_queries(std::size_t n_queries, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> queries;
    queries.reserve(n_queries);
    for (std::size_t q = 0; q < n_queries; ++q) {
        std::size_t len = 3 + rng() % 6;
        std::string text;
        for (std::size_t i = 0; i < len; ++i) {
            if (!text.empty()) text += ' ';
            std::uint64_t u = rng() % 10;
            if (u < 4) {
                text += "c" + std::to_string(rng() % 50);
            } else if (u < 7) {
                text += "m" + std::to_string(rng() % 500);
            } else if (u < 9) {
                text += "r" + std::to_string(rng() % 5000);
            } else {
                text += "absent" + std::to_string(rng() % 100);  // matches nothing
            }
        }
        queries.push_back(std::move(text));
    }
    return queries;
}

PlantedFixture make_planted_fixture(std::size_t n_questions, std::size_t n_docs,
                                    std::size_t distractors_per_question) {
    if (n_docs < 2 * n_questions + 1)
        throw rws::Error("planted fixture needs at least 2 docs per question");
    std::mt19937_64 rng(0x52575321);
    PlantedFixture fx;

    std::size_t n_filler_docs = n_docs - 2 * n_questions;
    for (std::size_t d = 0; d < n_filler_docs; ++d) {
        std::string text;
        std::size_t n_sents = 8 + rng() % 5;
        for (std::size_t s = 0; s < n_sents; ++s) {
            if (!text.empty()) text += ' ';
            text += filler_sentence(rng);
        }
        fx.doc_texts.push_back(std::move(text));
    }

    for (std::size_t i = 0; i < n_questions; ++i) {
        std::string subject = "subject" + std::to_string(i);
        std::string hook = "hook" + std::to_string(i);
        std::string extra_a = "extra" + std::to_string(i) + "a";
        std::string extra_b = "extra" + std::to_string(i) + "b";

        rws::ReferencePair pair;
        pair.qid = "q" + std::string(i < 10 ? "0" : "") + std::to_string(i);
        pair.question = "Where is " + subject + " " + hook + "?";
        pair.reference = "Subject" + std::to_string(i) + " is where " + extra_a + " " + extra_b + ".";
        fx.pairs.push_back(pair);

        // Paraphrase: same token multiset as the reference, different order.
        std::string plant = "Where " + extra_a + " " + extra_b + " is " + subject + ".";
        fx.planted_sentences.push_back(plant);

        std::string plant_doc;
        for (std::size_t s = 0; s < 4; ++s) plant_doc += filler_sentence(rng) + " ";
        plant_doc += plant;
        for (std::size_t s = 0; s < 4; ++s) plant_doc += " " + filler_sentence(rng);
        fx.doc_texts.push_back(std::move(plant_doc));

        // Token-disjoint from every reference, hooked to this question only.
        std::string distractor_doc;
        for (std::size_t j = 0; j < distractors_per_question; ++j) {
            std::string d = "Hook" + std::to_string(i) + " blorp" + std::to_string(i) + "x" +
                            std::to_string(j) + " flenk grumble.";
            fx.distractor_sentences.push_back(d);
            if (!distractor_doc.empty()) distractor_doc += ' ';
            distractor_doc += d;
        }
        fx.doc_texts.push_back(std::move(distractor_doc));
    }
    return fx;
}

std::filesystem::path materialize_planted_fixture(const std::filesystem::path& dir,
                                                  const PlantedFixture& fixture) {
    auto store_path = make_store(dir, fixture.doc_texts);
    rws::DocumentStore store = rws::DocumentStore::open(store_path);
    rws::InvertedIndex::build(store).save(store_path / "index.bin");

    std::ofstream pairs(dir / "pairs.tsv", std::ios::binary | std::ios::trunc);
    for (const auto& p : fixture.pairs) {
        pairs << p.qid << '\t' << p.question << '\t' << p.reference << '\n';
    }
    return store_path;
}

rws::Dataset make_shaped_split(const std::string& split_name, const SplitShape& shape) {
    rws::Dataset dataset;
    std::size_t qnum = 0;

    auto add_question = [&](rws::QuestionClass cls, std::uint64_t n_answers) {
        rws::QuestionGroup group;
        group.qid = split_name + "-q" + std::to_string(qnum++);
        std::string question = "what is topic " + group.qid;
        for (std::uint64_t a = 0; a < n_answers; ++a) {
            int label;
            switch (cls) {
                case rws::QuestionClass::all_plus: label = 1; break;
                case rws::QuestionClass::all_minus: label = 0; break;
                default: label = a == 0 ? 1 : 0; break;  // clean: one positive, rest negative
            }
            group.records.push_back(
                {group.qid, question, "answer " + std::to_string(a) + " for " + group.qid, label});
        }
        dataset.push_back(std::move(group));
    };

    // Answers beyond the one-per-question (or two for clean) minimum all go
    // to the first question of the class; counts stay exact.
    auto spread = [](std::uint64_t total_a, std::uint64_t n_q, std::uint64_t min_per_q) {
        std::vector<std::uint64_t> per_q(n_q, min_per_q);
        if (n_q > 0) per_q[0] += total_a - min_per_q * n_q;
        return per_q;
    };

    std::vector<std::pair<rws::QuestionClass, std::uint64_t>> plan;
    for (auto a : spread(shape.a_clean, shape.q_clean, 2)) plan.emplace_back(rws::QuestionClass::clean, a);
    for (auto a : spread(shape.a_all_plus, shape.q_all_plus, 1))
        plan.emplace_back(rws::QuestionClass::all_plus, a);
    for (auto a : spread(shape.a_all_minus, shape.q_all_minus, 1))
        plan.emplace_back(rws::QuestionClass::all_minus, a);
    // Mix classes in file order so filtering cannot rely on contiguity.
    std::mt19937_64 rng(rws::fnv1a64(split_name));
    std::shuffle(plan.begin(), plan.end(), rng);
    for (const auto& [cls, answers] : plan) add_question(cls, answers);
    return dataset;
}

SplitShape wikiqa_train_shape() { return {16, 21, 1245, 11688, 857, 8651}; }
SplitShape wikiqa_dev_shape() { return {5, 5, 170, 1602, 121, 1126}; }
SplitShape wikiqa_test_shape() { return {6, 10, 390, 3814, 237, 2341}; }

std::filesystem::path scratch_dir(const std::string& tag) {
    static std::atomic<std::uint64_t> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("rws-test-" + tag + "-" + std::to_string(counter.fetch_add(1)) + "-" +
                std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
