#pragma once

// cpp-httplib binding for api::Service.

#include <string>

#include <httplib.h>

#include "paci/api.hpp"

namespace paci::api {

inline void bind(httplib::Server& server, Service& service) {
    auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
        Query query;
        for (const auto& [k, v] : req.params) query[k] = v;
        const auto r = service.handle(req.method, req.path, req.body, query);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
        res.set_header("Access-Control-Allow-Origin", "*");
    };
    for (const char* path : {"/config", "/preview/scale", "/preview/weights", "/preview/aggregate", "/series",
                             "/envelope"}) {
        server.Get(path, dispatch);
        server.Put(path, dispatch);
        server.Post(path, dispatch);
    }
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

}  // namespace paci::api
