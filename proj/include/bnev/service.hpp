#pragma once

// HTTP facade for interactive evidence exploration. A session holds one
// network and the evidence entered so far; every response body uses the
// same structured renderers as the CLI.
//
//   GET    /networks
//   POST   /sessions                      {"network": name, "config": {...}} | {"document": {...}}
//   GET    /sessions/{id}/marginals?watch=a,b
//   PUT    /sessions/{id}/evidence        {"variable", "state"} | {"variable", "clear": true}
//   DELETE /sessions/{id}/evidence/{var}
//   POST   /sessions/{id}/what-if         {"evidence": {var: state}, "watch": [...]}
//   POST   /lr-report                     DNA inputs as JSON, or {} for the bundled case inputs

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <httplib.h>

#include "bnev/bundled.hpp"
#include "bnev/cli.hpp"
#include "bnev/dna_io.hpp"
#include "bnev/structured.hpp"

namespace bnev::service {

struct Response {
  int status = 200;
  std::string body;
};

struct Session {
  std::string id;
  NetworkDocument doc;
  Network net;
  EvidenceSet evidence;
  case_model::CaseConfig config;
  std::chrono::system_clock::time_point created;
  std::chrono::steady_clock::time_point last_used;
  std::mutex mutex;
};

struct Options {
  std::chrono::milliseconds idle_expiry{std::chrono::hours(1)};
  case_model::CaseConfig default_config;  // base for bundled case networks
};

class ApiService {
 public:
  explicit ApiService(Options options = {}) : options_(options), rng_(std::random_device{}()) {}

  Response list_networks() const {
    ojson j;
    j["networks"] = ojson::array();
    for (const auto& b : bundled_networks()) j["networks"].push_back({{"name", b.name}, {"description", b.description}});
    return {200, render(j)};
  }

  Response create_session(const std::string& body) {
    return guarded([&]() -> Response {
      const ojson req = body.empty() ? ojson::object() : bnev::detail::parse_json_text(body, "request");
      auto session = std::make_shared<Session>();
      session->config = options_.default_config;
      if (auto c = req.find("config"); c != req.end()) session->config = apply_config_overrides(session->config, *c);
      if (auto d = req.find("document"); d != req.end()) {
        session->doc = document_from_json(*d);
      } else {
        const auto name = bnev::detail::as_string(bnev::detail::field(req, "network", "request"), "request.network");
        auto doc = bundled_document(name, session->config);
        if (!doc) return {404, render(error_json(ErrorKind::invalid_input, "unknown network '" + name + "'"))};
        session->doc = std::move(*doc);
      }
      const auto report = validate_document(session->doc);
      if (!report.ok())
        return {422, render(error_json(ErrorKind::invalid_network, "network failed validation", &report))};
      session->net = flatten(session->doc);
      session->created = std::chrono::system_clock::now();
      session->last_used = std::chrono::steady_clock::now();

      std::lock_guard lock(mutex_);
      expire_locked();
      do session->id = new_id_locked();
      while (sessions_.count(session->id));
      sessions_[session->id] = session;
      ojson j;
      j["session"] = session->id;
      j["network"] = session->doc.metadata.name;
      j["evidence"] = ojson::object();
      return {201, render(j)};
    });
  }

  Response marginals(const std::string& id, const std::vector<std::string>& watch) {
    return with_session(id, [&](Session& s) { return Response{200, render(marginals_body(s, s.evidence, watch))}; });
  }

  Response set_evidence(const std::string& id, const std::string& body) {
    return with_session(id, [&](Session& s) -> Response {
      const ojson req = bnev::detail::parse_json_text(body, "request");
      const auto var = bnev::detail::as_string(bnev::detail::field(req, "variable", "request"), "request.variable");
      const auto watch = watch_of(req);
      if (req.value("clear", false)) {
        s.net.index_of(var);
        s.evidence.erase(var);
        return {200, render(marginals_body(s, s.evidence, watch))};
      }
      const auto state = bnev::detail::as_string(bnev::detail::field(req, "state", "request"), "request.state");
      EvidenceSet next = s.evidence;
      next.set(var, state);
      next.resolve(s.net);
      if (!(likelihood_of_evidence(s.net, next) > 0.0))
        return {409, render(error_json(ErrorKind::zero_probability,
                                       "setting " + var + "=" + state + " makes the evidence impossible"))};
      s.evidence = std::move(next);
      return {200, render(marginals_body(s, s.evidence, watch))};
    });
  }

  Response clear_evidence(const std::string& id, const std::string& var) {
    return with_session(id, [&](Session& s) {
      s.net.index_of(var);
      s.evidence.erase(var);
      return Response{200, render(marginals_body(s, s.evidence, {}))};
    });
  }

  Response what_if(const std::string& id, const std::string& body) {
    return with_session(id, [&](Session& s) -> Response {
      const ojson req = body.empty() ? ojson::object() : bnev::detail::parse_json_text(body, "request");
      EvidenceSet delta;
      if (auto e = req.find("evidence"); e != req.end()) {
        if (!e->is_object()) bnev::detail::schema_error("request.evidence", "expected an object");
        for (const auto& [k, v] : e->items()) delta.set(k, bnev::detail::as_string(v, "request.evidence." + k));
      }
      const EvidenceSet hypothetical = s.evidence.merged(delta);
      return {200, render(marginals_body(s, hypothetical, watch_of(req)))};
    });
  }

  Response lr_report(const std::string& body) {
    return guarded([&]() -> Response {
      const ojson req = body.empty() ? ojson::object() : bnev::detail::parse_json_text(body, "request");
      const auto inputs = req.empty() ? dna::case_inputs() : dna::inputs_from_json(req);
      return {200, render(lr_report_json(dna::lr_report(inputs)))};
    });
  }

  std::size_t session_count() {
    std::lock_guard lock(mutex_);
    expire_locked();
    return sessions_.size();
  }

  void mount(httplib::Server& server) {
    auto reply = [](httplib::Response& res, const Response& r) {
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Get("/networks", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, list_networks()); });
    server.Post("/sessions", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, create_session(req.body));
    });
    server.Get(R"(/sessions/([^/]+)/marginals)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      std::vector<std::string> watch;
      if (req.has_param("watch")) watch = cli::split_list(req.get_param_value("watch"));
      reply(res, marginals(req.matches[1], watch));
    });
    server.Put(R"(/sessions/([^/]+)/evidence)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, set_evidence(req.matches[1], req.body));
    });
    server.Delete(R"(/sessions/([^/]+)/evidence/([^/]+))",
                  [this, reply](const httplib::Request& req, httplib::Response& res) {
                    reply(res, clear_evidence(req.matches[1], req.matches[2]));
                  });
    server.Post(R"(/sessions/([^/]+)/what-if)", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, what_if(req.matches[1], req.body));
    });
    server.Post("/lr-report", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, lr_report(req.body));
    });
  }

 private:
  static int status_for(ErrorKind kind) {
    switch (kind) {
      case ErrorKind::zero_probability: return 409;
      case ErrorKind::invalid_network:
      case ErrorKind::invalid_template: return 422;
      case ErrorKind::state_space_overflow: return 500;
      default: return 400;
    }
  }

  template <typename Body>
  static Response guarded(Body&& body) {
    try {
      return body();
    } catch (const Error& e) {
      return {status_for(e.kind()), render(error_json(e.kind(), e.what()))};
    }
  }

  template <typename Body>
  Response with_session(const std::string& id, Body&& body) {
    std::shared_ptr<Session> session;
    {
      std::lock_guard lock(mutex_);
      expire_locked();
      auto it = sessions_.find(id);
      if (it == sessions_.end())
        return {404, render(error_json(ErrorKind::invalid_input, "unknown session '" + id + "'"))};
      session = it->second;
    }
    std::lock_guard lock(session->mutex);
    session->last_used = std::chrono::steady_clock::now();
    return guarded([&] { return body(*session); });
  }

  static std::vector<std::string> watch_of(const ojson& req) {
    if (auto w = req.find("watch"); w != req.end()) return bnev::detail::as_strings(*w, "request.watch");
    return {};
  }

  static ojson marginals_body(const Session& s, const EvidenceSet& ev, const std::vector<std::string>& watch) {
    std::vector<Distribution> out;
    for (const auto& w : cli::resolve_watch(s.doc, s.net, watch)) out.push_back(posterior(s.net, ev, w));
    return marginals_json(ev, out);
  }

  void expire_locked() {
    const auto now = std::chrono::steady_clock::now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      const auto session = it->second;
      bool expired = false;
      {
        std::unique_lock busy(session->mutex, std::try_to_lock);
        expired = busy.owns_lock() && now - session->last_used > options_.idle_expiry;
      }
      it = expired ? sessions_.erase(it) : std::next(it);
    }
  }

  std::string new_id_locked() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id(16, '0');
    for (auto& c : id) c = hex[rng_() & 15];
    return id;
  }

  Options options_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mt19937_64 rng_;
};

}  // namespace bnev::service
