#include "vetrank/http.hpp"

#include <httplib.h>

namespace vetrank::http {

namespace {

void forward(const service::Service& service, const httplib::Request& req, httplib::Response& res) {
  service::Request request;
  request.method = req.method;
  request.path = req.path;
  for (const auto& [key, value] : req.params) request.query.emplace(key, value);
  request.body = req.body;
  const auto response = service.handle(request);
  res.status = response.status;
  res.set_content(response.body, "application/json");
}

}  // namespace

Server::Server(const service::Service& service, std::filesystem::path static_dir)
    : server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    forward(service, req, res);
  };
  s.Get(R"(/api/.*)", handler);
  s.Post(R"(/api/.*)", handler);
  if (!static_dir.empty()) s.set_mount_point("/", static_dir.string());
}

Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool Server::listen_after_bind() { return server_->listen_after_bind(); }

void Server::stop() { server_->stop(); }

void Server::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace vetrank::http
