#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "vetrank/service.hpp"

namespace httplib {
class Server;
}

namespace vetrank::http {

/// Binds a Service to an HTTP listener. Answers preflight requests and tags
/// every response with a permissive CORS origin. Static assets, if given, are
/// mounted at "/".
class Server {
 public:
  explicit Server(const service::Service& service, std::filesystem::path static_dir = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop() is called.
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace vetrank::http
