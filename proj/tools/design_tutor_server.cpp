#include "design_tutor/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {
design_tutor::service::Server *g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr)
    g_server->stop();
}
} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Design feedback HTTP service. Listens on $DESIGN_TUTOR_ADDR "
               "(default 127.0.0.1:8080) and serves $DESIGN_TUTOR_WEB_ROOT if set"};
  CLI11_PARSE(app, argc, argv);

  design_tutor::service::Config config;
  try {
    config = design_tutor::service::config_from_env();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  design_tutor::service::Server server(config);
  if (!server.bind()) {
    std::cerr << "error: cannot listen on " << config.host << ':' << config.port
              << '\n';
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << config.host << ':' << server.port() << '\n';
  return server.serve() ? 0 : 1;
}
