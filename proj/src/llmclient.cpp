#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "nsr/llmclient.hpp"

namespace nsr::llm {

using json = nlohmann::json;

ChatClient::ChatClient(ClientPolicy policy, Transport transport)
    : policy_(std::move(policy)), transport_(std::move(transport)) {
    if (!transport_) transport_ = http_transport(policy_);
}

ChatResult ChatClient::chat(const ChatRequest& req) const {
    const char* key = nullptr;
    if (!policy_.auth_env.empty()) {
        key = std::getenv(policy_.auth_env.c_str());
        if (!key || !*key) {
            ChatResult r;
            r.error = "auth: environment variable " + policy_.auth_env + " is not set";
            return r;
        }
    }

    json body = {
        {"model", req.model},
        {"temperature", req.temperature},
        {"max_tokens", req.max_new_tokens},
        {"messages",
         json::array({{{"role", "system"}, {"content", req.system_text}},
                      {{"role", "user"}, {"content", req.user_text}}})},
    };
    const std::string body_text = body.dump();

    int delay_ms = policy_.backoff_initial_ms;
    ChatResult last;
    for (int attempt = 0; attempt <= policy_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
            delay_ms *= policy_.backoff_factor;
        }
        last = transport_(body_text, key ? key : "");
        if (last.ok) return last;
        if (last.error.rfind("auth:", 0) == 0) return last;  // not transient
    }
    return last;
}

Transport http_transport(const ClientPolicy& policy) {
    return [policy](const std::string& body, const std::string& key) -> ChatResult {
        ChatResult r;
        httplib::Client cli(policy.base_url);
        cli.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
        auto res = cli.Post(policy.chat_path, headers, body, "application/json");
        if (!res) {
            r.error = "transport: connection failed";
            return r;
        }
        if (res->status != 200) {
            r.error = "transport: HTTP " + std::to_string(res->status);
            return r;
        }
        json parsed = json::parse(res->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") ||
            parsed["choices"].empty()) {
            r.error = "transport: malformed provider response";
            return r;
        }
        r.text = parsed["choices"][0].value("message", json::object()).value("content", "");
        if (parsed.contains("usage")) {
            r.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
            r.completion_tokens = parsed["usage"].value("completion_tokens", 0);
        }
        r.ok = true;
        return r;
    };
}

std::optional<std::string> extract_structured(const std::string& text) {
    // Drop fenced-block markers, then take the outermost balanced braces.
    std::string cleaned;
    cleaned.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "```") == 0) {
            i += 3;
            while (i < text.size() && text[i] != '\n') ++i;  // skip language tag
            continue;
        }
        cleaned.push_back(text[i++]);
    }
    size_t start = cleaned.find('{');
    if (start == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (size_t j = start; j < cleaned.size(); ++j) {
        char c = cleaned[j];
        if (in_string) {
            if (c == '\\')
                ++j;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"')
            in_string = true;
        else if (c == '{')
            ++depth;
        else if (c == '}') {
            --depth;
            if (depth == 0) return cleaned.substr(start, j - start + 1);
        }
    }
    return std::nullopt;
}

}  // namespace nsr::llm
