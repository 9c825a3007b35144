#pragma once

// Text generation backends. Template mode is deterministic and offline.
// External mode sends chat-completion requests to a configured endpoint and
// falls back to templates, with a warning, whenever a call fails.

#include "grokforge/error.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>

namespace grokforge {

namespace prompts {

inline constexpr std::string_view kGraphParsing =
    "You are graph gpt. You build graph based on the provided text. \n"
    "Find all objects, their relations and types.\n"
    "\n"
    "Pick one of the following types:\n"
    "- Person\n"
    "- Location\n"
    "- Object (include everything that was not above)\n"
    "\n"
    "Return the following format with numbering: \n"
    "1. <Avatar; Film><director><James Cameron; Person>\n"
    "2. <James Cameron; Person><directed><Titanic; Object>";

inline constexpr std::string_view kQuestionFormatting =
    "You are a question formatting assistant. Your task is to create questions based on the given relations and "
    "objects. \n"
    "\n"
    "Use the provided examples as a guide for the question style. Ensure that the answer remains unchanged and "
    "enclosed in <a> tags. \n"
    "You may rephrase one question, given the example format. Strictly follow the logic of given examples. \n"
    "Connect it in the following logic: <obj1> -> <rel1> -> <rel2> -> <obj3>\n"
    "\n"
    "Return numbered responses in format:\n"
    "1. What is the director of the film that James Cameron produced?<a>Steven Spielberg</a>\n"
    "2. Who directed the movie starring Tom Cruise?<a>Christopher Nolan</a>";

// `{}` is replaced by the comma-separated country list.
inline constexpr std::string_view kAtomicFactGeneration =
    "You are a helpful assistant that generates geographical facts.\n"
    "Generate new unique locations and their countries in the following format:\n"
    "Follow the style of the examples, but do not use the same locations.\n"
    "\n"
    "Rules:\n"
    "1. Use real locations and countries\n"
    "2. Each location should be unique\n"
    "3. DO NOT REUSE PROVIDED EXAMPLES\n"
    "4. Do not answer the question - only provide locations\n"
    "5. Do not use formatting except for numbering\n"
    "6. Generate equal amount of NEW!!! locations for following countries: {}";

// `{}` is replaced by the numbered example paragraphs.
inline constexpr std::string_view kDetailedFactGeneration =
    "You are a helpful assistant that generates geographical facts.\n"
    "Based on the provided examples, generate a paragraph for each location-country pair. Strictly follow the "
    "style and lenght of the provided examples Do not answer the question - only provide the paragraph with "
    "numbering. DO not return empty lines. One by one. Return the number according to the given data. Here are "
    "the examples: \n"
    "{}";

inline std::string fill(std::string_view prompt, std::string_view value) {
    std::string out(prompt);
    if (auto pos = out.find("{}"); pos != std::string::npos) out.replace(pos, 2, value);
    return out;
}

}  // namespace prompts

enum class BackendMode { template_bank, external };

inline BackendMode parse_backend_mode(std::string_view s) {
    if (s == "template") return BackendMode::template_bank;
    if (s == "external") return BackendMode::external;
    throw InputError("unknown backend '" + std::string(s) + "' (expected template|external)");
}

inline constexpr const char* kApiKeyEnv = "GROKFORGE_API_KEY";

struct BackendConfig {
    BackendMode mode = BackendMode::template_bank;
    std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
    std::string model;
    std::chrono::milliseconds timeout{30'000};
    int retries = 2;
    // Requests are issued one at a time, so this bounds in-flight calls at 1
    // regardless of the configured value.
    unsigned max_in_flight = 1;
    // Items per request when batching numbered lists.
    std::size_t batch_size = 40;
    bool debug = false;

    bool external() const { return mode == BackendMode::external; }
};

// Minimal chat-completion client: POST {model, messages} and read
// choices[0].message.content.
class ChatClient {
public:
    explicit ChatClient(BackendConfig config) : config_(std::move(config)) {
        const auto scheme = config_.endpoint.find("://");
        const auto path_start =
            config_.endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
        if (config_.endpoint.empty() || path_start == std::string::npos) {
            base_ = config_.endpoint;
            path_ = "/";
        } else {
            base_ = config_.endpoint.substr(0, path_start);
            path_ = config_.endpoint.substr(path_start);
        }
    }

    const BackendConfig& config() const { return config_; }

    // nullopt once the retry budget is spent; `error` receives the last failure.
    std::optional<std::string> complete(std::string_view system_prompt, std::string_view user_message,
                                        std::string* error = nullptr) const {
        if (base_.empty()) {
            if (error) *error = "no endpoint configured";
            return std::nullopt;
        }
        nlohmann::json body;
        body["model"] = config_.model;
        body["messages"] = nlohmann::json::array(
            {{{"role", "system"}, {"content", std::string(system_prompt)}},
             {{"role", "user"}, {"content", std::string(user_message)}}});
        const std::string payload = body.dump();

        httplib::Headers headers;
        const char* key = std::getenv(kApiKeyEnv);
        if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);

        std::string last_error;
        for (int attempt = 0; attempt <= config_.retries; ++attempt) {
            if (config_.debug) {
                std::cerr << "debug: POST " << base_ << path_ << " (attempt " << attempt + 1 << ")"
                          << (key && *key ? " Authorization: Bearer [REDACTED]" : "") << "\n"
                          << "debug: request " << payload << '\n';
            }
            httplib::Client client(base_);
            const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
            const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
            client.set_connection_timeout(seconds.count(), micros.count());
            client.set_read_timeout(seconds.count(), micros.count());
            client.set_write_timeout(seconds.count(), micros.count());
            auto res = client.Post(path_, headers, payload, "application/json");
            if (!res) {
                last_error = "request failed: " + httplib::to_string(res.error());
                continue;
            }
            if (config_.debug) std::cerr << "debug: response " << res->status << ' ' << res->body << '\n';
            if (res->status != 200) {
                last_error = "HTTP status " + std::to_string(res->status);
                continue;
            }
            try {
                auto reply = nlohmann::json::parse(res->body);
                return reply.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("malformed response: ") + e.what();
            }
        }
        if (error) *error = last_error;
        return std::nullopt;
    }

private:
    BackendConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace grokforge
