#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace design_tutor::service {

inline constexpr std::size_t kMaxSourceBytes = 256 * 1024;

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// POST /api/lint with {"language": "...", "source": "..."}.
Response handle_lint(std::string_view body);
/// GET /api/rules, optionally filtered by ?lang=.
Response handle_rules(std::optional<std::string_view> lang);
/// GET /healthz
Response handle_health();

struct Config {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Static files served at `/` when set and present.
  std::optional<std::filesystem::path> web_root;
};

/// Parses `host:port`, `:port` or `host`. Throws std::invalid_argument.
Config parse_listen_address(std::string_view addr);
/// DESIGN_TUTOR_ADDR and DESIGN_TUTOR_WEB_ROOT, with defaults.
Config config_from_env();

class Server {
public:
  explicit Server(Config config);
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  /// Binds the socket. Port 0 picks a free port. Returns false on failure.
  bool bind();
  /// Port actually bound, valid after bind().
  int port() const;
  /// Serves until stop(). Blocks.
  bool serve();
  void stop();
  /// Blocks until the server is accepting connections.
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace design_tutor::service
