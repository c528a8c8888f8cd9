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


#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "sommelier/embedding.hpp"
#include "sommelier/kb_builder.hpp"
#include "sommelier/recommender.hpp"

namespace httplib {
class Server;
}

namespace sommelier {

// {"title", "description", "matched_keywords", "fallback_used", "recommendations"}
std::string recommendation_to_json(const RecommendationList& list);

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON
};

// Owns the loaded artifacts for the lifetime of the process. Request handlers
// are const and may run concurrently.
class RecommendationService {
 public:
  RecommendationService(VectorStore vectors, KnowledgeBase kb);
  ~RecommendationService();
  RecommendationService(const RecommendationService&) = delete;
  RecommendationService& operator=(const RecommendationService&) = delete;

  // POST /recommend: 200, 400 for a malformed request, 422 when nothing matched.
  HttpResponse handle_recommend(std::string_view body) const;
  // GET /health
  HttpResponse handle_health() const;

  // Blocks until stop(). on_ready receives the bound port (useful with port 0).
  void serve(const std::string& host, int port,
             const std::function<void(int)>& on_ready = {});
  void stop();

 private:
  VectorStore vectors_;
  KnowledgeBase kb_;
  Recommender recommender_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace sommelier
