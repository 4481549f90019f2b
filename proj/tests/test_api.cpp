#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <thread>

#include "paci/http_server.hpp"
#include "support/fixtures.hpp"

using namespace paci;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using nlohmann::json;

namespace {

std::string file_text(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

api::Service service_with_input() {
    api::ServiceOptions opts;
    opts.input = compute_performances(fixtures::synthetic());
    return api::Service(default_config(), opts);
}

}  // namespace

TEST_CASE("GET and PUT /config", "[api]") {
    const auto dir = std::filesystem::temp_directory_path() / "paci_test_api";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "config.json").string();
    api::ServiceOptions opts;
    opts.config_path = path;
    api::Service svc(default_config(), opts);

    auto r = svc.handle("GET", "/config");
    REQUIRE(r.status == 200);
    CHECK(r.body["schema"] == "paci-config/1");

    json cfg = r.body;
    cfg["metadata"]["name"] = "edited";
    cfg["state_scale"]["hysteresis"] = 1.5;
    r = svc.handle("PUT", "/config", cfg.dump());
    REQUIRE(r.status == 200);
    CHECK(svc.config().metadata.name == "edited");
    CHECK(svc.handle("GET", "/config").body == r.body);
    CHECK(json_io::load_config_file(path).state_scale.hysteresis == 1.5);

    SECTION("rejected configs leave the old one in place") {
        cfg["weights"] = {0.2, 0.2, 0.2, 0.2, 0.1};
        const auto bad = svc.handle("PUT", "/config", cfg.dump());
        CHECK(bad.status == 400);
        CHECK(bad.body["error"]["code"] == "invalid-config");
        CHECK_THAT(bad.body.dump(), ContainsSubstring("weights must sum to 1"));
        CHECK(svc.config().metadata.name == "edited");
    }
    SECTION("malformed JSON") {
        const auto bad = svc.handle("PUT", "/config", "{");
        CHECK(bad.status == 400);
        CHECK(bad.body["error"]["code"] == "invalid-input");
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("POST /preview/weights", "[api]") {
    api::Service svc(default_config());
    const auto r = svc.handle("POST", "/preview/weights", file_text(fixtures::data("swing_ranking.json")));
    REQUIRE(r.status == 200);
    CHECK_THAT(r.body["weights"][0].get<double>(), WithinAbs(0.27451, 1e-5));
    CHECK_THAT(r.body["weights"][1].get<double>(), WithinAbs(0.13725, 1e-5));
    CHECK_THAT(r.body["weights"][2].get<double>(), WithinAbs(0.19608, 1e-5));
    const auto bad = svc.handle("POST", "/preview/weights", R"({"tiers":[[0],[1]],"tier_gaps":[0],"z":1})");
    CHECK(bad.status == 400);
    CHECK(bad.body["error"]["code"] == "invalid-judgements");
}

TEST_CASE("POST /preview/scale", "[api]") {
    api::Service svc(default_config());
    SECTION("full incidence judgements") {
        const auto r = svc.handle("POST", "/preview/scale", file_text(fixtures::data("judgements_incidence.json")));
        REQUIRE(r.status == 200);
        CHECK(r.body["unit_value"] == 4.0);
        CHECK(r.body["values"] == json::array({0, 4, 16, 36, 64, 100, 144, 200}));
        CHECK(r.body["function"]["cap"] == 180.0);
        CHECK(r.body["consistency"]["consistent"] == true);
    }
    SECTION("two levels without cards") {
        const auto r = svc.handle(
            "POST", "/preview/scale",
            R"({"levels":[0,10],"anchors":{"lo":{"index":0,"value":0},"hi":{"index":1,"value":100}},"gaps":[0]})");
        REQUIRE(r.status == 200);
        CHECK(r.body["values"] == json::array({0, 100}));
        CHECK(r.body["function"]["breakpoints"] == json::array({{0, 0}, {10, 100}}));
    }
    SECTION("inconsistent expert entries") {
        json doc = json::parse(file_text(fixtures::data("judgements_incidence.json")));
        doc["entries"] = json::parse(file_text(fixtures::data("pairwise_inconsistent.json")))["entries"];
        const auto r = svc.handle("POST", "/preview/scale", doc.dump());
        CHECK(r.status == 422);
        CHECK(r.body["error"]["code"] == "inconsistent-judgements");
        REQUIRE(r.body["error"]["violations"].size() == 1);
        CHECK(r.body["error"]["violations"][0] == "e(1,4) differs from e(1,3) + e(3,4) + 1 by 2");
        CHECK(r.body["error"]["consistency"]["violations"][0]["residual"] == 2);
    }
    SECTION("invalid judgements") {
        const auto r = svc.handle("POST", "/preview/scale", R"({"levels":[0,10],"gaps":[0]})");
        CHECK(r.status == 400);
        CHECK(r.body["error"]["code"] == "invalid-judgements");
    }
}

TEST_CASE("POST /preview/aggregate", "[api]") {
    api::Service svc(default_config());
    const auto r = svc.handle("POST", "/preview/aggregate", R"({"x":[12341,1.039,3.46,5375,742]})");
    REQUIRE(r.status == 200);
    CHECK(r.body["state"] == "break");
    CHECK_THAT(r.body["overall"].get<double>(), WithinAbs(163.81, 0.05));
    double sum = 0;
    for (const auto& [k, v] : r.body["contributions"].items()) sum += v.get<double>();
    CHECK_THAT(sum, WithinAbs(r.body["overall"].get<double>(), 1e-9));
    CHECK(svc.handle("POST", "/preview/aggregate", R"({"x":[1,2,3]})").status == 400);
    CHECK(svc.handle("POST", "/preview/aggregate", R"({"x":[0,0,0,0,0],"previous_state":"alert"})").status == 200);
}

TEST_CASE("GET /series and /envelope", "[api]") {
    auto svc = service_with_input();
    auto r = svc.handle("GET", "/series");
    REQUIRE(r.status == 200);
    CHECK(r.body["points"].size() == 120 - 27);
    CHECK(r.body["config_id"] == fingerprint(default_config()));

    r = svc.handle("GET", "/series", {}, {{"from", "2021-03-01"}, {"to", "2021-03-10"}});
    REQUIRE(r.status == 200);
    CHECK(r.body["points"].size() == 10);
    CHECK(r.body["points"][0]["date"] == "2021-03-01");

    CHECK(svc.handle("GET", "/series", {}, {{"from", "2030-01-01"}}).status == 400);
    CHECK(svc.handle("GET", "/series", {}, {{"from", "yesterday"}}).status == 400);

    r = svc.handle("GET", "/envelope", {}, {{"delta_weight", "0"}, {"delta_perf", "0"}, {"delta_value", "0"}});
    REQUIRE(r.status == 200);
    for (const auto& p : r.body["points"]) {
        CHECK_THAT(p["v_plus"].get<double>(), WithinAbs(p["v_nominal"].get<double>(), 1e-9));
    }
    r = svc.handle("GET", "/envelope");
    REQUIRE(r.status == 200);
    CHECK(r.body["mean_spread"].get<double>() > 0);

    api::Service empty(default_config());
    r = empty.handle("GET", "/series");
    CHECK(r.status == 400);
    CHECK(r.body["error"]["code"] == "invalid-input");
}

TEST_CASE("unknown routes and methods", "[api]") {
    api::Service svc(default_config());
    CHECK(svc.handle("GET", "/nope").status == 404);
    CHECK(svc.handle("DELETE", "/config").status == 405);
    CHECK(svc.handle("GET", "/preview/weights").status == 405);
    CHECK(svc.handle("POST", "/series").status == 405);
}

TEST_CASE("HTTP round trip", "[api][http]") {
    auto svc = service_with_input();
    httplib::Server server;
    api::bind(server, svc);
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/config");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    CHECK(json::parse(res->body)["schema"] == "paci-config/1");

    res = client.Post("/preview/weights", file_text(fixtures::data("swing_ranking.json")), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);

    res = client.Get("/series?from=2021-03-01&to=2021-03-02");
    REQUIRE(res);
    CHECK(json::parse(res->body)["points"].size() == 2);

    res = client.Put("/config", "{}", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    server.stop();
    t.join();
}
