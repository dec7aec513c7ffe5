#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rws/candidates.hpp"
#include "rws/dataset.hpp"
#include "rws/errors.hpp"
#include "rws/index.hpp"
#include "rws/io_util.hpp"
#include "rws/metrics.hpp"
#include "rws/pipeline.hpp"

namespace {

namespace fs = std::filesystem;

int cmd_ingest(const std::string& input, const std::string& format, const std::string& store) {
    rws::CorpusFormat fmt;
    if (format == "jsonl") {
        fmt = rws::CorpusFormat::jsonl;
    } else if (format == "plain_dir") {
        fmt = rws::CorpusFormat::plain_dir;
    } else {
        std::cerr << "unknown format: " << format << " (expected jsonl or plain_dir)\n";
        return 1;
    }
    rws::IngestReport report = rws::DocumentStore::ingest(input, fmt, store);
    std::cout << "ingested " << report.documents << " documents into " << store << " (" << report.skipped
              << " empty records skipped)\n";
    return 0;
}

int cmd_index_build(const std::string& store_dir) {
    rws::DocumentStore store = rws::DocumentStore::open(store_dir);
    rws::InvertedIndex index = rws::InvertedIndex::build(store);
    fs::path index_path = fs::path(store_dir) / "index.bin";
    index.save(index_path);
    std::cout << "indexed " << index.stats().doc_count << " documents, " << index.term_count()
              << " terms, avg_doc_len " << rws::format_double(index.stats().avg_doc_len) << " -> "
              << index_path.string() << "\n";
    return 0;
}

int cmd_index_query(const std::string& store_dir, const std::string& question, std::size_t k1) {
    rws::DocumentStore store = rws::DocumentStore::open(store_dir);
    rws::InvertedIndex index = rws::InvertedIndex::load(fs::path(store_dir) / "index.bin");
    auto hits = index.retrieve_topk(question, k1);
    for (const auto& hit : hits) {
        const rws::Document& doc = store.get(hit.doc_id);
        std::string preview = doc.text.substr(0, 80);
        for (char& c : preview) {
            if (c == '\n') c = ' ';
        }
        std::cout << hit.doc_id << '\t' << rws::format_double(hit.score) << '\t' << preview << "\n";
    }
    std::cerr << hits.size() << " documents\n";
    return 0;
}

int cmd_dataset_stats(const std::string& input) {
    rws::DatasetStats stats = rws::compute_stats(rws::load_as2_tsv(input));
    std::cout << "{\n  \"num_q\": " << stats.num_q << ",\n  \"num_a\": " << stats.num_a
              << ",\n  \"num_pos\": " << stats.num_pos << ",\n  \"num_neg\": " << stats.num_neg << "\n}\n";
    return 0;
}

int cmd_dataset_filter(const std::string& input, const std::string& output, const std::string& mode) {
    rws::FilterMode m;
    if (mode == "origin") {
        m = rws::FilterMode::origin;
    } else if (mode == "without_all_minus") {
        m = rws::FilterMode::without_all_minus;
    } else if (mode == "clean_only") {
        m = rws::FilterMode::clean_only;
    } else {
        std::cerr << "unknown mode: " << mode << " (expected origin, without_all_minus or clean_only)\n";
        return 1;
    }
    rws::Dataset filtered = rws::filter_split(rws::load_as2_tsv(input), m);
    rws::write_as2_tsv(filtered, output);
    rws::DatasetStats stats = rws::compute_stats(filtered);
    std::cout << "wrote " << stats.num_q << " questions / " << stats.num_a << " answers to " << output
              << "\n";
    return 0;
}

int cmd_dataset_convert(const std::string& input, const std::string& output, const std::string& from) {
    rws::Dataset dataset;
    if (from == "wikiqa") {
        dataset = rws::convert_wikiqa_tsv(input);
    } else if (from == "jsonl") {
        dataset = rws::convert_jsonl(input);
    } else {
        std::cerr << "unknown source format: " << from << " (expected wikiqa or jsonl)\n";
        return 1;
    }
    rws::write_as2_tsv(dataset, output);
    rws::DatasetStats stats = rws::compute_stats(dataset);
    std::cout << "converted " << stats.num_q << " questions / " << stats.num_a << " answers to " << output
              << "\n";
    return 0;
}

int cmd_metrics_grade(const std::string& gold, const std::string& scores) {
    rws::MetricReport report = rws::grade_files(gold, scores);
    std::cout << rws::to_json(report) << "\n";
    return 0;
}

struct RunOverrides {
    std::string config_path;
    std::optional<std::size_t> k1, k2, parallelism;
    std::optional<double> threshold, alpha;
    std::string reranker, evaluator, endpoint, reranker_endpoint;
    std::string store, pairs, output;
};

int cmd_run(const RunOverrides& o) {
    rws::PipelineConfig config;
    if (!o.config_path.empty()) config = rws::load_config_file(o.config_path);
    if (o.k1) config.k1 = *o.k1;
    if (o.k2) config.k2 = *o.k2;
    if (o.threshold) config.threshold = *o.threshold;
    if (o.alpha) config.evaluator.alpha = *o.alpha;
    if (o.parallelism) config.parallelism = static_cast<unsigned>(*o.parallelism);
    if (!o.reranker.empty()) {
        if (o.reranker == "lexical") {
            config.reranker.kind = rws::RerankerKind::lexical;
        } else if (o.reranker == "external") {
            config.reranker.kind = rws::RerankerKind::external;
        } else {
            std::cerr << "unknown reranker: " << o.reranker << "\n";
            return 1;
        }
    }
    if (!o.evaluator.empty()) {
        if (o.evaluator == "proxy") {
            config.evaluator.kind = rws::EvaluatorKind::proxy;
        } else if (o.evaluator == "external") {
            config.evaluator.kind = rws::EvaluatorKind::external;
        } else {
            std::cerr << "unknown evaluator: " << o.evaluator << "\n";
            return 1;
        }
    }
    if (!o.endpoint.empty()) config.evaluator.endpoint = o.endpoint;
    if (!o.reranker_endpoint.empty()) config.reranker.endpoint = o.reranker_endpoint;
    if (!o.store.empty()) config.corpus_store = o.store;
    if (!o.pairs.empty()) config.input_pairs = o.pairs;
    if (!o.output.empty()) config.output = o.output;

    rws::RunResult result = rws::run_pipeline(config);
    std::cout << "questions: " << result.questions_total << " total, " << result.questions_completed
              << " completed";
    if (result.questions_resumed) std::cout << " (" << result.questions_resumed << " from checkpoint)";
    std::cout << ", " << result.questions_failed << " failed, " << result.questions_no_retrieval
              << " without retrieval\n";
    std::cout << "labeled pairs: " << result.stats.num_a << " (" << result.stats.num_pos << " positive, "
              << result.stats.num_neg << " negative) -> " << result.output_path.string() << "\n";
    std::cout << "manifest: " << result.manifest_path.string() << "\n";
    if (result.exceeded_failure_budget) {
        std::cerr << "error: more than 10% of questions failed\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rws: builds weakly supervised answer-sentence-selection data from (question, reference) pairs"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Ingest a corpus into a document store");
    std::string in_input, in_format = "jsonl", in_store;
    ingest->add_option("--input", in_input, "Corpus input (jsonl file or directory)")->required();
    ingest->add_option("--format", in_format, "jsonl or plain_dir");
    ingest->add_option("--store", in_store, "Store directory to create")->required();

    // index build / query
    auto* index_cmd = app.add_subcommand("index", "Build or query the inverted index");
    index_cmd->require_subcommand(1);
    auto* build = index_cmd->add_subcommand("build", "Build the index for a store");
    std::string ib_store;
    build->add_option("--store", ib_store, "Store directory")->required();
    auto* query = index_cmd->add_subcommand("query", "Run a BM25 query");
    std::string iq_store, iq_question;
    std::size_t iq_k1 = 1000;
    query->add_option("--store", iq_store, "Store directory")->required();
    query->add_option("--question", iq_question, "Query text")->required();
    query->add_option("--k1", iq_k1, "Number of documents to retrieve");

    // dataset stats / filter / convert
    auto* dataset = app.add_subcommand("dataset", "Dataset utilities");
    dataset->require_subcommand(1);
    auto* stats = dataset->add_subcommand("stats", "Print #Q/#A/#A+/#A- for an interchange TSV");
    std::string ds_input;
    stats->add_option("--input", ds_input, "Interchange TSV")->required();
    auto* filter = dataset->add_subcommand("filter", "Filter questions by label class");
    std::string df_input, df_output, df_mode = "origin";
    filter->add_option("--input", df_input, "Interchange TSV")->required();
    filter->add_option("--output", df_output, "Filtered TSV")->required();
    filter->add_option("--mode", df_mode, "origin, without_all_minus or clean_only");
    auto* convert = dataset->add_subcommand("convert", "Convert a native dataset to the interchange TSV");
    std::string dc_input, dc_output, dc_from = "wikiqa";
    convert->add_option("--input", dc_input, "Native dataset file")->required();
    convert->add_option("--output", dc_output, "Interchange TSV")->required();
    convert->add_option("--from", dc_from, "wikiqa or jsonl");

    // metrics grade
    auto* metrics = app.add_subcommand("metrics", "Evaluation metrics");
    metrics->require_subcommand(1);
    auto* grade = metrics->add_subcommand("grade", "P@1 / MAP / MRR of a score file against gold");
    std::string mg_gold, mg_scores;
    grade->add_option("--gold", mg_gold, "Gold interchange TSV")->required();
    grade->add_option("--scores", mg_scores, "Score TSV: qid, answer, score")->required();

    // run
    auto* run = app.add_subcommand("run", "Run the end-to-end labeling pipeline");
    RunOverrides ro;
    std::size_t rk1 = 0, rk2 = 0, rpar = 0;
    double rthr = -1.0, ralpha = -1.0;
    run->add_option("--config", ro.config_path, "Config file (key = value lines)");
    auto* k1_opt = run->add_option("--k1", rk1, "Documents to retrieve per question");
    auto* k2_opt = run->add_option("--k2", rk2, "Candidates to keep per question");
    auto* thr_opt = run->add_option("--threshold", rthr, "Positive-label threshold (inclusive)");
    auto* alpha_opt = run->add_option("--alpha", ralpha, "Proxy evaluator reference weight");
    auto* par_opt = run->add_option("--parallelism", rpar, "Worker threads");
    run->add_option("--reranker", ro.reranker, "lexical or external");
    run->add_option("--evaluator", ro.evaluator, "proxy or external");
    run->add_option("--endpoint", ro.endpoint, "External evaluator endpoint URL");
    run->add_option("--reranker-endpoint", ro.reranker_endpoint, "External reranker endpoint URL");
    run->add_option("--store", ro.store, "Corpus store directory");
    run->add_option("--pairs", ro.pairs, "Input (qid, question, reference) file");
    run->add_option("--output", ro.output, "Output path (.tsv or .jsonl)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(in_input, in_format, in_store);
        if (*build) return cmd_index_build(ib_store);
        if (*query) return cmd_index_query(iq_store, iq_question, iq_k1);
        if (*stats) return cmd_dataset_stats(ds_input);
        if (*filter) return cmd_dataset_filter(df_input, df_output, df_mode);
        if (*convert) return cmd_dataset_convert(dc_input, dc_output, dc_from);
        if (*grade) return cmd_metrics_grade(mg_gold, mg_scores);
        if (*run) {
            if (k1_opt->count()) ro.k1 = rk1;
            if (k2_opt->count()) ro.k2 = rk2;
            if (thr_opt->count()) ro.threshold = rthr;
            if (alpha_opt->count()) ro.alpha = ralpha;
            if (par_opt->count()) ro.parallelism = rpar;
            return cmd_run(ro);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
