#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace rws {

// Client for score protocol v1 (shared by the external reranker and the
// external evaluator):
//   POST <endpoint>  {"question": str, "reference": str|null, "candidates": [str]}
//   -> {"scores": [number]}   one score per candidate, same order.
// Batches of `batch_size` candidates, up to `max_in_flight` batches at once.
// Transport failures are retried `max_attempts` times with exponential
// backoff; malformed responses are hard errors naming the batch. Scores are
// clamped to [0,1].
class ScoringClient {
public:
    struct Options {
        int max_attempts = 3;
        std::chrono::milliseconds base_backoff{500};
        std::size_t max_in_flight = 4;
        std::chrono::seconds timeout{30};
        std::string auth_token;  // sent as "Authorization: Bearer <token>" when non-empty

        // Defaults plus RWS_AUTH_TOKEN / RWS_RETRY_BASE_MS from the environment.
        static Options from_env();
    };

    ScoringClient(std::string endpoint, std::size_t batch_size, Options options = Options::from_env());

    std::vector<double> score(const std::string& question, const std::optional<std::string>& reference,
                              const std::vector<std::string>& candidates) const;

    const std::string& endpoint() const { return endpoint_; }
    std::size_t batch_size() const { return batch_size_; }

private:
    std::vector<double> score_batch(const std::string& question, const std::optional<std::string>& reference,
                                    const std::vector<std::string>& candidates, std::size_t batch_index,
                                    std::size_t begin, std::size_t end) const;

    std::string endpoint_;
    std::string base_url_;
    std::string path_;
    std::size_t batch_size_;
    Options options_;
};

}  // namespace rws
