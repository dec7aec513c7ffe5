#include "rws/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rws/errors.hpp"
#include "rws/index.hpp"
#include "rws/io_util.hpp"

namespace rws {

namespace {

using json = nlohmann::json;

constexpr int kCheckpointVersion = 1;

struct QuestionOutcome {
    std::string qid;
    std::vector<LabeledPair> pairs;
    std::uint64_t retrieved = 0;
    std::uint64_t pooled = 0;
    std::uint64_t selected = 0;
    std::uint64_t positives = 0;
    std::string note;   // "no retrieval" when nothing came back
    std::string error;  // non-empty marks a failed question
};

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// The semantic part of the config: everything that determines the output
// bytes. Execution knobs (parallelism) and filesystem paths are excluded so
// that manifests of equivalent runs are byte-identical.
json config_fingerprint(const PipelineConfig& config) {
    json j;
    j["k1"] = config.k1;
    j["k2"] = config.k2;
    j["threshold"] = config.threshold;
    j["reranker"]["kind"] = config.reranker.kind == RerankerKind::lexical ? "lexical" : "external";
    j["reranker"]["endpoint"] = config.reranker.endpoint;
    j["reranker"]["batch_size"] = config.reranker.batch_size;
    j["evaluator"]["kind"] = config.evaluator.kind == EvaluatorKind::proxy ? "proxy" : "external";
    j["evaluator"]["endpoint"] = config.evaluator.endpoint;
    j["evaluator"]["batch_size"] = config.evaluator.batch_size;
    j["evaluator"]["alpha"] = config.evaluator.alpha;
    return j;
}

json outcome_to_json(const QuestionOutcome& o) {
    json j;
    j["type"] = "question";
    j["stage"] = "labeled";
    j["qid"] = o.qid;
    j["note"] = o.note;
    j["error"] = o.error;
    j["counts"] = {{"retrieved", o.retrieved},
                   {"pooled", o.pooled},
                   {"selected", o.selected},
                   {"positives", o.positives}};
    json pairs = json::array();
    for (const LabeledPair& p : o.pairs) {
        pairs.push_back({{"answer", p.answer},
                         {"eval_score", p.eval_score},
                         {"label", p.label},
                         {"doc_id", p.doc_id},
                         {"sent_idx", p.sent_idx}});
    }
    j["pairs"] = std::move(pairs);
    return j;
}

QuestionOutcome outcome_from_json(const json& j, const std::string& question) {
    QuestionOutcome o;
    o.qid = j.at("qid").get<std::string>();
    o.note = j.at("note").get<std::string>();
    o.error = j.at("error").get<std::string>();
    o.retrieved = j.at("counts").at("retrieved").get<std::uint64_t>();
    o.pooled = j.at("counts").at("pooled").get<std::uint64_t>();
    o.selected = j.at("counts").at("selected").get<std::uint64_t>();
    o.positives = j.at("counts").at("positives").get<std::uint64_t>();
    for (const auto& pj : j.at("pairs")) {
        LabeledPair p;
        p.qid = o.qid;
        p.question = question;
        p.answer = pj.at("answer").get<std::string>();
        p.eval_score = pj.at("eval_score").get<double>();
        p.label = pj.at("label").get<int>();
        p.doc_id = pj.at("doc_id").get<std::uint64_t>();
        p.sent_idx = pj.at("sent_idx").get<std::uint32_t>();
        o.pairs.push_back(std::move(p));
    }
    return o;
}

// Completed-question log next to the output file. Records are JSON lines; a
// torn trailing line (killed writer) is discarded on load. The header binds
// the checkpoint to the (config, corpus, input) fingerprints; on mismatch
// the file is discarded and the run starts fresh.
class Checkpoint {
public:
    Checkpoint(std::filesystem::path path, std::string config_digest, std::string inputs_digest)
        : path_(std::move(path)),
          config_digest_(std::move(config_digest)),
          inputs_digest_(std::move(inputs_digest)) {}

    std::unordered_map<std::string, json> load() {
        std::unordered_map<std::string, json> completed;
        std::ifstream in(path_, std::ios::binary);
        if (!in) return completed;
        std::string valid_prefix;
        std::string line;
        bool header_ok = false;
        bool first = true;
        while (std::getline(in, line)) {
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) break;  // torn tail or corruption: keep the valid prefix
            if (first) {
                first = false;
                if (!j.is_object() || j.value("type", "") != "header" ||
                    j.value("version", 0) != kCheckpointVersion ||
                    j.value("config_digest", "") != config_digest_ ||
                    j.value("inputs_digest", "") != inputs_digest_) {
                    return completed;  // stale checkpoint; start fresh
                }
                header_ok = true;
                valid_prefix += line;
                valid_prefix += '\n';
                continue;
            }
            if (j.value("type", "") == "question") {
                completed[j.at("qid").get<std::string>()] = j;
                valid_prefix += line;
                valid_prefix += '\n';
            }
        }
        if (header_ok) {
            write_file(path_, valid_prefix);  // drop any torn tail before appending
        }
        return completed;
    }

    void open_for_append(bool fresh) {
        if (fresh) {
            json header;
            header["type"] = "header";
            header["version"] = kCheckpointVersion;
            header["config_digest"] = config_digest_;
            header["inputs_digest"] = inputs_digest_;
            write_file(path_, header.dump() + "\n");
        }
        out_.open(path_, std::ios::binary | std::ios::app);
        if (!out_) throw IoError("cannot open checkpoint for append: " + path_.string());
    }

    void append(const QuestionOutcome& outcome) {
        out_ << outcome_to_json(outcome).dump() << '\n';
        out_.flush();
    }

private:
    std::filesystem::path path_;
    std::string config_digest_;
    std::string inputs_digest_;
    std::ofstream out_;
};

QuestionOutcome process_question(const ReferenceGroup& group, const PipelineConfig& config,
                                 const DocumentStore& store, const InvertedIndex& index,
                                 const ScoringClient* eval_client) {
    QuestionOutcome outcome;
    outcome.qid = group.qid;

    std::vector<ScoredDoc> retrieved = index.retrieve_topk(group.question, config.k1);
    outcome.retrieved = retrieved.size();
    if (retrieved.empty()) {
        outcome.note = "no retrieval";
        return outcome;
    }

    std::vector<Candidate> pool = pool_candidates(group.qid, retrieved, store);
    outcome.pooled = pool.size();

    if (config.reranker.kind == RerankerKind::lexical) {
        lexical_rerank(group.question, pool, index);
    } else {
        external_rerank(group.question, pool, config.reranker);
    }

    std::vector<Candidate> selected = select_topk2(std::move(pool), config.k2);
    outcome.selected = selected.size();

    outcome.pairs = label_candidates(group, selected, config.evaluator, eval_client);
    for (const LabeledPair& p : outcome.pairs) outcome.positives += p.label ? 1u : 0u;
    return outcome;
}

}  // namespace

PipelineConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path.string());
    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;

    auto parse_size = [&](const std::string& v) -> std::size_t {
        try {
            std::size_t consumed = 0;
            long long n = std::stoll(v, &consumed);
            if (consumed != v.size() || n < 0) throw std::invalid_argument(v);
            return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            throw ParseError("bad integer \"" + v + "\" in " + path.string(), line_no);
        }
    };
    auto parse_real = [&](const std::string& v) -> double {
        try {
            std::size_t consumed = 0;
            double d = std::stod(v, &consumed);
            if (consumed != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ParseError("bad number \"" + v + "\" in " + path.string(), line_no);
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value in " + path.string(), line_no);
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));

        if (key == "k1") {
            config.k1 = parse_size(value);
        } else if (key == "k2") {
            config.k2 = parse_size(value);
        } else if (key == "threshold") {
            config.threshold = parse_real(value);
        } else if (key == "alpha") {
            config.evaluator.alpha = parse_real(value);
        } else if (key == "parallelism") {
            config.parallelism = static_cast<unsigned>(parse_size(value));
        } else if (key == "reranker") {
            if (value == "lexical") {
                config.reranker.kind = RerankerKind::lexical;
            } else if (value == "external") {
                config.reranker.kind = RerankerKind::external;
            } else {
                throw ParseError("reranker must be lexical or external", line_no);
            }
        } else if (key == "reranker_endpoint") {
            config.reranker.endpoint = value;
        } else if (key == "reranker_batch_size") {
            config.reranker.batch_size = parse_size(value);
        } else if (key == "evaluator") {
            if (value == "proxy") {
                config.evaluator.kind = EvaluatorKind::proxy;
            } else if (value == "external") {
                config.evaluator.kind = EvaluatorKind::external;
            } else {
                throw ParseError("evaluator must be proxy or external", line_no);
            }
        } else if (key == "evaluator_endpoint") {
            config.evaluator.endpoint = value;
        } else if (key == "evaluator_batch_size") {
            config.evaluator.batch_size = parse_size(value);
        } else if (key == "corpus_store") {
            config.corpus_store = value;
        } else if (key == "input_pairs") {
            config.input_pairs = value;
        } else if (key == "output") {
            config.output = value;
        } else {
            throw ParseError("unknown config key \"" + key + "\" in " + path.string(), line_no);
        }
    }
    return config;
}

std::vector<std::string> validate_config(PipelineConfig& config) {
    std::vector<std::string> errors;
    if (config.k1 < 1) errors.push_back("k1 must be at least 1");
    if (config.k2 < 1) errors.push_back("k2 must be at least 1");
    if (config.k2 > config.k1) errors.push_back("k2 exceeds k1");
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0))
        errors.push_back("threshold must be in [0,1]");
    if (!(config.evaluator.alpha >= 0.0 && config.evaluator.alpha <= 1.0))
        errors.push_back("alpha must be in [0,1]");
    if (config.parallelism < 1) errors.push_back("parallelism must be at least 1");
    if (config.reranker.kind == RerankerKind::external && config.reranker.endpoint.empty())
        errors.push_back("external reranker requires an endpoint");
    if (config.reranker.kind == RerankerKind::lexical && !config.reranker.endpoint.empty())
        errors.push_back("lexical reranker must not set an endpoint");
    if (config.reranker.batch_size < 1) errors.push_back("reranker batch_size must be at least 1");
    if (config.evaluator.kind == EvaluatorKind::external && config.evaluator.endpoint.empty())
        errors.push_back("external evaluator requires an endpoint");
    if (config.evaluator.kind == EvaluatorKind::proxy && !config.evaluator.endpoint.empty())
        errors.push_back("proxy evaluator must not set an endpoint");
    if (config.evaluator.batch_size < 1) errors.push_back("evaluator batch_size must be at least 1");
    config.evaluator.threshold = config.threshold;
    return errors;
}

RunResult run_pipeline(const PipelineConfig& config_in, const RunHooks& hooks) {
    PipelineConfig config = config_in;
    if (auto errors = validate_config(config); !errors.empty()) {
        std::string msg = "invalid pipeline config:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    if (config.corpus_store.empty() || config.input_pairs.empty() || config.output.empty())
        throw ConfigError("corpus_store, input_pairs and output are required to run the pipeline");

    DocumentStore store = DocumentStore::open(config.corpus_store);
    std::filesystem::path index_path = config.corpus_store / "index.bin";
    if (!std::filesystem::exists(index_path))
        throw ConfigError("no index at " + index_path.string() + "; run `rws index build` first");
    InvertedIndex index = InvertedIndex::load(index_path);
    if (index.stats().doc_count != store.size())
        throw ConfigError("index covers " + std::to_string(index.stats().doc_count) +
                          " documents but the store has " + std::to_string(store.size()) +
                          "; rebuild the index");

    std::vector<ReferenceGroup> groups = group_reference_pairs(load_reference_pairs(config.input_pairs));

    const std::string corpus_digest = store.digest();
    const std::string index_digest = to_hex(fnv1a64_file(index_path));
    const std::string pairs_digest = to_hex(fnv1a64_file(config.input_pairs));
    const std::string config_digest = to_hex(fnv1a64(config_fingerprint(config).dump()));

    RunResult result;
    result.questions_total = groups.size();
    result.output_path = config.output;
    result.manifest_path = config.output;
    result.manifest_path += ".manifest.json";

    std::filesystem::path checkpoint_path = config.output;
    checkpoint_path += ".ckpt.jsonl";
    Checkpoint checkpoint(checkpoint_path, config_digest, corpus_digest + ":" + pairs_digest);
    std::unordered_map<std::string, json> restored = checkpoint.load();
    checkpoint.open_for_append(restored.empty());

    std::map<std::string, QuestionOutcome> outcomes;  // canonical qid order
    std::vector<const ReferenceGroup*> todo;
    for (const auto& g : groups) {
        auto it = restored.find(g.qid);
        if (it != restored.end()) {
            outcomes[g.qid] = outcome_from_json(it->second, g.question);
            ++result.questions_resumed;
        } else {
            todo.push_back(&g);
        }
    }

    std::optional<ScoringClient> eval_client;
    if (config.evaluator.kind == EvaluatorKind::external)
        eval_client.emplace(config.evaluator.endpoint, config.evaluator.batch_size);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex sink_mutex;  // guards outcomes, checkpoint appends, hooks

    auto worker = [&]() {
        while (!stop.load()) {
            std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            const ReferenceGroup& group = *todo[i];
            QuestionOutcome outcome;
            try {
                outcome = process_question(group, config, store, index,
                                           eval_client ? &*eval_client : nullptr);
            } catch (const std::exception& e) {
                outcome = QuestionOutcome{};
                outcome.qid = group.qid;
                outcome.error = e.what();
            }
            std::lock_guard<std::mutex> lock(sink_mutex);
            checkpoint.append(outcome);
            outcomes[group.qid] = std::move(outcome);
            if (hooks.after_question && !hooks.after_question(group.qid)) stop.store(true);
        }
    };

    unsigned num_workers = std::min<unsigned>(config.parallelism,
                                              static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
    if (num_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(num_workers);
        for (unsigned i = 0; i < num_workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    if (stop.load() && outcomes.size() < groups.size()) {
        result.stopped_early = true;
        result.questions_completed = outcomes.size();
        return result;
    }

    // Canonical emission: qid ascending, pairs already in rerank-rank order.
    std::vector<LabeledPair> all_pairs;
    json notes = json::array();
    json failures = json::array();
    std::uint64_t retrieved_total = 0, pooled_total = 0, selected_total = 0;
    for (const auto& [qid, outcome] : outcomes) {
        if (!outcome.error.empty()) {
            ++result.questions_failed;
            failures.push_back({{"qid", qid}, {"error", outcome.error}});
            continue;
        }
        if (!outcome.note.empty()) {
            ++result.questions_no_retrieval;
            notes.push_back({{"qid", qid}, {"note", outcome.note}});
        }
        retrieved_total += outcome.retrieved;
        pooled_total += outcome.pooled;
        selected_total += outcome.selected;
        all_pairs.insert(all_pairs.end(), outcome.pairs.begin(), outcome.pairs.end());
    }
    result.questions_completed = outcomes.size();

    OutputFormat format = config.output.extension() == ".jsonl" ? OutputFormat::jsonl : OutputFormat::tsv;
    emit_labeled_pairs(all_pairs, config.output, format);

    for (const LabeledPair& p : all_pairs) {
        ++result.stats.num_a;
        if (p.label) {
            ++result.stats.num_pos;
        } else {
            ++result.stats.num_neg;
        }
    }
    std::unordered_set<std::string> qids_with_pairs;
    for (const LabeledPair& p : all_pairs) qids_with_pairs.insert(p.qid);
    result.stats.num_q = qids_with_pairs.size();

    result.exceeded_failure_budget =
        result.questions_failed * 10 > result.questions_total && result.questions_total > 0;

    json manifest;
    manifest["config"] = config_fingerprint(config);
    manifest["corpus_digest"] = corpus_digest;
    manifest["index_digest"] = index_digest;
    manifest["input_pairs_digest"] = pairs_digest;
    manifest["questions"] = {{"total", result.questions_total},
                             {"completed", result.questions_completed},
                             {"failed", result.questions_failed},
                             {"no_retrieval", result.questions_no_retrieval}};
    manifest["stage_totals"] = {{"retrieved_docs", retrieved_total},
                                {"pooled_candidates", pooled_total},
                                {"selected_candidates", selected_total},
                                {"labeled_pairs", result.stats.num_a},
                                {"positives", result.stats.num_pos},
                                {"negatives", result.stats.num_neg}};
    manifest["notes"] = std::move(notes);
    manifest["failures"] = std::move(failures);
    manifest["output_digest"] = to_hex(fnv1a64_file(config.output));
    write_file(result.manifest_path, manifest.dump(2) + "\n");

    return result;
}

}  // namespace rws
