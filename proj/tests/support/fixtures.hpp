#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rws/dataset.hpp"

namespace fixtures {

// Writes texts as a jsonl corpus file (one {"text": ...} per line).
void write_jsonl_corpus(const std::filesystem::path& path, const std::vector<std::string>& texts);

// Ingests texts into a fresh store at dir/store and returns its path.
std::filesystem::path make_store(const std::filesystem::path& dir, const std::vector<std::string>& texts);

// Mixed common/mid/rare vocabulary documents for retrieval stress tests.
std::vector<std::string> synthetic_corpus(std::size_t n_docs, std::uint64_t seed);
std::vector<std::string> synthetic_queries(std::size_t n_queries, std::uint64_t seed);

// End-to-end fixture: `n_questions` (question, reference) pairs, one
// paraphrase of each reference planted in a corpus of `n_docs` documents,
// plus `distractors_per_question` sentences per question that share a token
// with the question but none with any reference. Every planted or distractor
// sentence lands in its question's top candidates by construction.
struct PlantedFixture {
    std::vector<std::string> doc_texts;
    std::vector<rws::ReferencePair> pairs;
    std::vector<std::string> planted_sentences;     // one per question, same order as pairs
    std::vector<std::string> distractor_sentences;  // n_questions * distractors_per_question
};

PlantedFixture make_planted_fixture(std::size_t n_questions = 50, std::size_t n_docs = 1000,
                                    std::size_t distractors_per_question = 10);

// Writes the fixture corpus + store + index + pairs file under `dir`;
// returns the store path (pairs at dir/pairs.tsv).
std::filesystem::path materialize_planted_fixture(const std::filesystem::path& dir,
                                                  const PlantedFixture& fixture);

// A dataset shaped exactly like the WikiQA split statistics: per split the
// question classes partition into (all_plus, all_minus, clean) with the
// given question/answer counts.
struct SplitShape {
    std::uint64_t q_all_plus, a_all_plus;
    std::uint64_t q_all_minus, a_all_minus;
    std::uint64_t q_clean, a_clean;
};

rws::Dataset make_shaped_split(const std::string& split_name, const SplitShape& shape);

// The three WikiQA-shaped splits used by the acceptance suite.
SplitShape wikiqa_train_shape();
SplitShape wikiqa_dev_shape();
SplitShape wikiqa_test_shape();

// Unique scratch directory under the system temp dir, removed lazily by the
// OS; each call returns a fresh path.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace fixtures
