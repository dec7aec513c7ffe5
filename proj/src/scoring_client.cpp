#include "rws/scoring_client.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "rws/errors.hpp"

namespace rws {

ScoringClient::Options ScoringClient::Options::from_env() {
    Options opts;
    if (const char* token = std::getenv("RWS_AUTH_TOKEN")) opts.auth_token = token;
    if (const char* ms = std::getenv("RWS_RETRY_BASE_MS")) {
        opts.base_backoff = std::chrono::milliseconds(std::max(0L, std::atol(ms)));
    }
    return opts;
}

ScoringClient::ScoringClient(std::string endpoint, std::size_t batch_size, Options options)
    : endpoint_(std::move(endpoint)), batch_size_(batch_size ? batch_size : 1), options_(options) {
    auto scheme_end = endpoint_.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint must be a http(s) URL: " + endpoint_);
    auto path_start = endpoint_.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = endpoint_;
        path_ = "/";
    } else {
        base_url_ = endpoint_.substr(0, path_start);
        path_ = endpoint_.substr(path_start);
    }
}

std::vector<double> ScoringClient::score_batch(const std::string& question,
                                               const std::optional<std::string>& reference,
                                               const std::vector<std::string>& candidates,
                                               std::size_t batch_index, std::size_t begin,
                                               std::size_t end) const {
    nlohmann::json body;
    body["question"] = question;
    if (reference) {
        body["reference"] = *reference;
    } else {
        body["reference"] = nullptr;
    }
    body["candidates"] = std::vector<std::string>(candidates.begin() + static_cast<std::ptrdiff_t>(begin),
                                                  candidates.begin() + static_cast<std::ptrdiff_t>(end));
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt < options_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(options_.base_backoff * (1 << (attempt - 1)));
        }
        httplib::Client client(base_url_);
        client.set_connection_timeout(options_.timeout);
        client.set_read_timeout(options_.timeout);
        httplib::Headers headers;
        if (!options_.auth_token.empty())
            headers.emplace("Authorization", "Bearer " + options_.auth_token);
        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "transport error (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("scores") ||
            !parsed["scores"].is_array()) {
            throw ProtocolError("malformed response for batch " + std::to_string(batch_index) + " from " +
                                    endpoint_ + ": expected {\"scores\": [number]}",
                                /*retriable=*/false);
        }
        const auto& arr = parsed["scores"];
        if (arr.size() != end - begin) {
            throw ProtocolError("malformed response for batch " + std::to_string(batch_index) + " from " +
                                    endpoint_ + ": got " + std::to_string(arr.size()) + " scores, expected " +
                                    std::to_string(end - begin),
                                /*retriable=*/false);
        }
        std::vector<double> scores;
        scores.reserve(arr.size());
        for (const auto& v : arr) {
            if (!v.is_number()) {
                throw ProtocolError("malformed response for batch " + std::to_string(batch_index) + " from " +
                                        endpoint_ + ": non-numeric score",
                                    /*retriable=*/false);
            }
            scores.push_back(std::clamp(v.get<double>(), 0.0, 1.0));
        }
        return scores;
    }
    throw ProtocolError("batch " + std::to_string(batch_index) + " to " + endpoint_ + " failed after " +
                            std::to_string(options_.max_attempts) + " attempts: " + last_error,
                        /*retriable=*/true);
}

std::vector<double> ScoringClient::score(const std::string& question,
                                         const std::optional<std::string>& reference,
                                         const std::vector<std::string>& candidates) const {
    if (candidates.empty()) return {};
    const std::size_t num_batches = (candidates.size() + batch_size_ - 1) / batch_size_;
    std::vector<double> scores(candidates.size(), 0.0);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::map<std::size_t, std::exception_ptr> errors;  // keyed by batch index

    auto worker = [&]() {
        while (true) {
            std::size_t b = next.fetch_add(1);
            if (b >= num_batches) return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!errors.empty()) return;
            }
            std::size_t begin = b * batch_size_;
            std::size_t end = std::min(candidates.size(), begin + batch_size_);
            try {
                std::vector<double> batch = score_batch(question, reference, candidates, b, begin, end);
                std::copy(batch.begin(), batch.end(), scores.begin() + static_cast<std::ptrdiff_t>(begin));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                errors.emplace(b, std::current_exception());
            }
        }
    };

    std::size_t num_workers = std::min(options_.max_in_flight, num_batches);
    if (num_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(num_workers);
        for (std::size_t i = 0; i < num_workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    if (!errors.empty()) std::rethrow_exception(errors.begin()->second);
    return scores;
}

}  // namespace rws
