// Copyright 2026 The Sommelier Authors.
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

#include "sommelier/service.hpp"

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "sommelier/error.hpp"

namespace sommelier {
namespace {

using nlohmann::json;

HttpResponse error_response(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump(-1, ' ', false, json::error_handler_t::replace)};
}

}  // namespace

std::string recommendation_to_json(const RecommendationList& list) {
  json recommendations = json::array();
  for (const auto& e : list.entries) {
    recommendations.push_back({{"algorithm", e.algorithm}, {"score", e.score}});
  }
  json doc{{"title", list.title},
           {"description", list.description},
           {"matched_keywords", list.matched.terms},
           {"fallback_used", list.matched.fallback_used()},
           {"recommendations", std::move(recommendations)}};
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

RecommendationService::RecommendationService(VectorStore vectors, KnowledgeBase kb)
    : vectors_(std::move(vectors)), kb_(std::move(kb)), recommender_(vectors_, kb_) {}

RecommendationService::~RecommendationService() = default;

HttpResponse RecommendationService::handle_recommend(std::string_view body) const {
  json request = json::parse(body.begin(), body.end(), nullptr, false);
  if (request.is_discarded() || !request.is_object()) {
    return error_response(400, "request body must be a JSON object");
  }
  auto text = [&](const char* key, std::string& out) {
    auto it = request.find(key);
    if (it == request.end() || it->is_null()) return true;
    if (!it->is_string()) return false;
    out = it->get<std::string>();
    return true;
  };
  std::string title, description;
  if (!text("title", title) || !text("description", description)) {
    return error_response(400, "title and description must be strings");
  }
  std::size_t top_k = 10;
  if (auto it = request.find("top_k"); it != request.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 1) {
      return error_response(400, "top_k must be a positive integer");
    }
    top_k = it->get<std::size_t>();
  }
  try {
    return {200, recommendation_to_json(recommender_.recommend(title, description, top_k))};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNoMatch) return error_response(422, "no keywords matched");
    if (e.kind() == ErrorKind::kInput) return error_response(400, e.what());
    spdlog::error("recommend failed: {}", e.what());
    return error_response(500, e.what());
  }
}

HttpResponse RecommendationService::handle_health() const {
  return {200, json{{"status", "ok"}, {"vocab_size", vectors_.size()}}.dump()};
}

void RecommendationService::serve(const std::string& host, int port,
                                  const std::function<void(int)>& on_ready) {
  server_ = std::make_unique<httplib::Server>();
  auto reply = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server_->Post("/recommend", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_recommend(req.body));
  });
  server_->Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
    reply(res, handle_health());
  });
  const int bound = port == 0 ? server_->bind_to_any_port(host) : port;
  if (bound < 0 || (port != 0 && !server_->bind_to_port(host, port))) {
    throw Error(ErrorKind::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  spdlog::info("serving {} algorithm terms on {}:{}", recommender_.algorithm_count(), host, bound);
  if (on_ready) on_ready(bound);
  server_->listen_after_bind();
}

void RecommendationService::stop() {
  if (server_) server_->stop();
}

}  // namespace sommelier
