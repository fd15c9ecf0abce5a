// Copyright 2026 The parcur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include <thread>

#include "parcur/error.hpp"
#include "parcur/service.hpp"

namespace parcur::api {

namespace {

using nlohmann::json;

constexpr const char* kJson = "application/json; charset=utf-8";

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kFormat: return 400;
    case ErrorCode::kUnauthenticated: return 401;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kLeaseViolation: return 409;
    default: return 500;
  }
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

std::string bearer_token(const httplib::Request& req) {
  const std::string header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.size() <= prefix.size() || header.compare(0, prefix.size(), prefix) != 0) return {};
  return header.substr(prefix.size());
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "request body is not valid JSON");
  }
}

// Runs a handler and converts failures into JSON error responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      reply(res, http_status(e.code()),
            {{"error", std::string(to_string(e.code()))}, {"message", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  CurationService& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(CurationService& s) : service(s) {
    // httplib's default adds SO_REUSEPORT, which lets a second instance share the port.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    routes();
  }

  void routes() {
    server.Get("/v1/ping", guarded([](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, {{"status", "ok"}, {"time", format_rfc3339(now_utc())}});
    }));

    server.Post("/v1/auth/login", guarded([this](const httplib::Request& req,
                                                 httplib::Response& res) {
      const json body = parse_body(req);
      if (!body.is_object() || !body.contains("userId") || !body["userId"].is_string() ||
          !body.contains("password") || !body["password"].is_string()) {
        throw Error(ErrorCode::kInvalidArgument, "login needs userId and password strings");
      }
      const Session s = service.login(body["userId"].get<std::string>(),
                                      body["password"].get<std::string>());
      reply(res, 200,
            {{"token", s.token}, {"userId", s.userId}, {"expiresAt", format_rfc3339(s.expiresAt)}});
    }));

    server.Post("/v1/auth/logout", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const std::string token = bearer_token(req);
      service.authenticate(token);
      service.logout(token);
      res.status = 204;
    }));

    server.Get("/v1/me/workspace", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const std::string user = service.authenticate(bearer_token(req));
      reply(res, 200, service.workspace(user));
    }));

    server.Post("/v1/submissions", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
      const std::string user = service.authenticate(bearer_token(req));
      json body = parse_body(req);
      if (body.is_object() && body.contains("envelopes")) body = body["envelopes"];
      if (!body.is_array()) {
        throw Error(ErrorCode::kInvalidArgument, "expected an array of envelopes");
      }
      const std::vector<json> envelopes(body.begin(), body.end());
      json results = json::array();
      for (const auto& r : service.submit(user, envelopes)) results.push_back(r.to_json());
      reply(res, 200, {{"results", std::move(results)}});
    }));

    server.Get("/v1/config/languages", guarded([this](const httplib::Request& req,
                                                      httplib::Response& res) {
      std::optional<std::string> tag;
      if (req.has_param("tag")) tag = req.get_param_value("tag");
      reply(res, 200, service.language_directions(tag));
    }));
  }
};

HttpServer::HttpServer(CurationService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  if (impl_->thread.joinable()) throw Error(ErrorCode::kPrecondition, "server already running");
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_ || !impl_->thread.joinable()) return;
  impl_->server.stop();
  impl_->thread.join();
}

}  // namespace parcur::api
