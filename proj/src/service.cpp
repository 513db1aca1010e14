#include "design_tutor/service.hpp"

#include "design_tutor/lint.hpp"

// httplib's default backlog of 5 drops bursts of connections.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace design_tutor::service {

using json = nlohmann::json;

namespace {

Response error(int status, std::string_view message) {
  json j;
  j["error"] = message;
  return {status, "application/json", j.dump()};
}

} // namespace

Response handle_lint(std::string_view body) {
  json request = json::parse(body, nullptr, false);
  if (request.is_discarded() || !request.is_object())
    return error(400, "request body must be a JSON object");
  auto lang_it = request.find("language");
  auto src_it = request.find("source");
  if (lang_it == request.end() || !lang_it->is_string())
    return error(400, "missing string field 'language'");
  if (src_it == request.end() || !src_it->is_string())
    return error(400, "missing string field 'source'");
  auto lang = parse_language(lang_it->get_ref<const std::string &>());
  if (!lang)
    return error(400, "unsupported language");
  const auto &source = src_it->get_ref<const std::string &>();
  if (source.size() > kMaxSourceBytes)
    return error(413, "source exceeds 256 KiB");
  auto report = lint(source, *lang, {}, "submission");
  return {200, "application/json", render_json(report)};
}

Response handle_rules(std::optional<std::string_view> lang) {
  std::optional<Language> filter;
  if (lang) {
    filter = parse_language(*lang);
    if (!filter)
      return error(400, "unsupported language");
  }
  return {200, "application/json", catalog_json(filter)};
}

Response handle_health() { return {200, "text/plain", "ok"}; }

Config parse_listen_address(std::string_view addr) {
  if (addr.empty())
    throw std::invalid_argument("empty listen address");
  Config c;
  auto colon = addr.rfind(':');
  std::string_view host = addr;
  if (colon != std::string_view::npos) {
    host = addr.substr(0, colon);
    auto port_text = addr.substr(colon + 1);
    int port = -1;
    auto [ptr, ec] = std::from_chars(port_text.data(),
                                     port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() ||
        port < 0 || port > 65535)
      throw std::invalid_argument("invalid port in address '" +
                                  std::string(addr) + "'");
    c.port = port;
  }
  if (!host.empty())
    c.host = std::string(host);
  return c;
}

Config config_from_env() {
  Config c;
  if (const char *addr = std::getenv("DESIGN_TUTOR_ADDR"); addr && *addr)
    c = parse_listen_address(addr);
  if (const char *root = std::getenv("DESIGN_TUTOR_WEB_ROOT"); root && *root)
    c.web_root = root;
  return c;
}

struct Server::Impl {
  Config config;
  httplib::Server http;
  int port = -1;
};

namespace {

void reply(httplib::Response &res, const Response &r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

} // namespace

Server::Server(Config config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto &http = impl_->http;
  // Room above the source limit so oversized sources get our own 413.
  http.set_payload_max_length(4 * kMaxSourceBytes);
  // No SO_REUSEPORT: a second instance must fail to bind, not share the port.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});
  http.Post("/api/lint", [](const httplib::Request &req, httplib::Response &res) {
    reply(res, handle_lint(req.body));
  });
  http.Get("/api/rules", [](const httplib::Request &req, httplib::Response &res) {
    std::optional<std::string_view> lang;
    if (req.has_param("lang"))
      lang = req.get_param_value("lang");
    reply(res, handle_rules(lang));
  });
  http.Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
    reply(res, handle_health());
  });
  http.Options(R"(/.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });
  if (impl_->config.web_root &&
      std::filesystem::is_directory(*impl_->config.web_root))
    http.set_mount_point("/", impl_->config.web_root->string());
}

Server::~Server() { stop(); }

bool Server::bind() {
  auto &c = impl_->config;
  if (c.port == 0)
    impl_->port = impl_->http.bind_to_any_port(c.host);
  else
    impl_->port = impl_->http.bind_to_port(c.host, c.port) ? c.port : -1;
  return impl_->port > 0;
}

int Server::port() const { return impl_->port; }

bool Server::serve() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running())
    impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

} // namespace design_tutor::service
