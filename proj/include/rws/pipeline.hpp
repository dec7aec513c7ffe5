#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rws/candidates.hpp"
#include "rws/dataset.hpp"
#include "rws/evaluator.hpp"

namespace rws {

struct PipelineConfig {
    std::size_t k1 = 1000;
    std::size_t k2 = 25;
    double threshold = 0.9;
    RerankerSpec reranker;    // lexical by default
    EvaluatorSpec evaluator;  // proxy by default; threshold synced from above
    std::filesystem::path corpus_store;
    std::filesystem::path input_pairs;
    std::filesystem::path output;  // .jsonl extension selects jsonl, else TSV
    unsigned parallelism = 1;
};

// Key-value config file: one `key = value` per line, '#' comments. Flag
// overrides are applied by the CLI on top of this.
PipelineConfig load_config_file(const std::filesystem::path& path);

// Normalizes (syncs evaluator.threshold) and returns every invariant
// violation at once; empty means valid.
std::vector<std::string> validate_config(PipelineConfig& config);

struct RunHooks {
    // Called after each question completes; return false to request a
    // graceful stop at the next question boundary (checkpoint retained).
    std::function<bool(const std::string& qid)> after_question;
};

struct RunResult {
    DatasetStats stats;
    std::filesystem::path output_path;
    std::filesystem::path manifest_path;
    std::uint64_t questions_total = 0;
    std::uint64_t questions_completed = 0;
    std::uint64_t questions_failed = 0;        // external-service hard failures
    std::uint64_t questions_no_retrieval = 0;  // zero retrieved documents
    std::uint64_t questions_resumed = 0;       // restored from the checkpoint
    bool stopped_early = false;                // hooks requested a stop; no output written
    bool exceeded_failure_budget = false;      // > 10% of questions failed
};

// Runs retrieval -> pooling -> rerank -> top-K2 -> evaluation -> thresholded
// labels for every input question, writing the labeled pairs in canonical
// (qid, rerank rank) order plus a JSON run manifest. Questions are
// independent work units over `parallelism` workers; output is identical for
// any parallelism. A checkpoint next to the output makes interrupted runs
// resumable with byte-identical results.
RunResult run_pipeline(const PipelineConfig& config, const RunHooks& hooks = {});

}  // namespace rws
