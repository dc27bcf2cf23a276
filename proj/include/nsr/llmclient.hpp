#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nsr::llm {

struct ChatRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.01;
    int max_new_tokens = 4096;
    std::string model = "gpt-4o";
};

struct ClientPolicy {
    std::string base_url = "http://localhost:8000";
    std::string chat_path = "/v1/chat/completions";
    // Name of the environment variable holding the API key. The key itself
    // is never stored on the policy and never written to traces.
    std::string auth_env = "NSR_API_KEY";
    int max_retries = 3;
    int backoff_initial_ms = 250;
    int backoff_factor = 2;
};

struct ChatResult {
    bool ok = false;
    std::string text;
    std::string error;  // "auth: ...", "transport: ..." when !ok
    int prompt_tokens = 0;
    int completion_tokens = 0;
};

// Raw transport: takes the serialized request body and the bearer key,
// returns the provider response body or an error. Injectable for tests.
using Transport = std::function<ChatResult(const std::string& body, const std::string& key)>;

class ChatClient {
  public:
    explicit ChatClient(ClientPolicy policy, Transport transport = nullptr);

    // Fails fast with an auth error when the key env var is unset; retries
    // transient transport errors with exponential backoff.
    ChatResult chat(const ChatRequest& req) const;

    const ClientPolicy& policy() const { return policy_; }

  private:
    ClientPolicy policy_;
    Transport transport_;
};

// OpenAI-compatible HTTP transport bound to the policy's base URL.
Transport http_transport(const ClientPolicy& policy);

// Strips code fences and surrounding prose, returning the outermost
// brace-balanced object text; nullopt when no object is present.
std::optional<std::string> extract_structured(const std::string& text);

}  // namespace nsr::llm
