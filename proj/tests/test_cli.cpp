#include "catch_amalgamated.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "infgen/cli.hpp"

using namespace infgen;

namespace {

const char* kLo2 = R"({
  "signature": {"relations": [{"name": "<", "arity": 2}], "constants": []},
  "structures": [
    {"id": "L1", "universe": ["0"], "relations": {"<": []}},
    {"id": "L2", "universe": ["0", "1"], "relations": {"<": [["0", "1"]]}}
  ],
  "extensions": "auto"
})";

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream(path) << content;
    }
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
    std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("force subcommand reports the verdict with exit 0") {
    TempFile f("infgen_lo2.json", kLo2);
    auto r = run_command({"force", "--class", f.str(), "--node", "L1", "--formula",
                          "E x. E y. x < y", "--trace", "--json"});
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    REQUIRE(j.at("verdict") == "not-forced");
    REQUIRE(j.contains("trace"));
}

TEST_CASE("check subcommand exits 0 on a passing suite") {
    TempFile f("infgen_lo2b.json", kLo2);
    auto r = run_command({"check", "--class", f.str(), "--suite", "geneq", "--budget", "7"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("pass") != std::string::npos);
}

TEST_CASE("property failures exit 1") {
    TempFile f("infgen_lo2c.json", kLo2);
    // L1 is not Sigma1-absolute into its cone
    auto r = run_command({"bfa", "--class", f.str(), "--node", "L1", "--budget", "5"});
    REQUIRE(r.exit_code == 1);
    auto rp = run_command({"modal", "--class", f.str(), "--node", "L1", "--principle",
                           "mp", "--budget", "5"});
    REQUIRE(rp.exit_code == 1);
}

TEST_CASE("usage and parse errors exit 2") {
    TempFile f("infgen_lo2d.json", kLo2);
    REQUIRE(run_command({"frobnicate"}).exit_code == 2);
    REQUIRE(run_command({"force", "--class", f.str(), "--node", "L1", "--formula",
                         "E x. x <"})
                .exit_code == 2);
    REQUIRE(run_command({"force", "--class", f.str(), "--node", "nope", "--formula",
                         "E x. x < x"})
                .exit_code == 2);
    REQUIRE(run_command({"eval", "--class", f.str(), "--node", "L1", "--formula",
                         "E y. #9 < y"})
                .exit_code == 2);
    TempFile bad("infgen_bad.json", "{\"signature\": 3}");
    REQUIRE(run_command({"generics", "--class", bad.str(), "--budget", "4"}).exit_code == 2);
}

TEST_CASE("resource exhaustion exits 3") {
    auto r = run_command({"cohen", "gen", "--families", "decide:100", "--depth", "16"});
    REQUIRE(r.exit_code == 3);
    TempFile f("infgen_lo2e.json", kLo2);
    auto r2 = run_command({"build-generic", "--class", f.str(), "--node", "L1",
                           "--budget", "6", "--cap", "0"});
    REQUIRE(r2.exit_code == 3);
}

TEST_CASE("amalgamation certificates are byte-identical across runs") {
    std::vector<std::string> argv{"cohen",    "amalgamate", "--k",    "2",
                                  "--families", "decide:0,0;pattern:1,11@0",
                                  "--depth",  "64",         "--seed", "7"};
    auto a = run_command(argv);
    auto b = run_command(argv);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE_FALSE(a.out.empty());
    auto j = json::parse(a.out);
    REQUIRE(j.at("k") == 2);
    REQUIRE(j.at("seed") == 7);
}

TEST_CASE("cohen verify round-trips a written certificate") {
    auto cert = run_command({"cohen", "amalgamate", "--k", "1", "--families",
                             "decide:0,0;pattern:1,11@0", "--depth", "32", "--seed", "5"});
    REQUIRE(cert.exit_code == 0);
    TempFile f("infgen_cert.json", cert.out);
    auto ok = run_command({"cohen", "verify", "--cert", f.str(), "--families",
                           "decide:0,0;pattern:1,11@0"});
    REQUIRE(ok.exit_code == 0);
    // tamper: flip a bit of d inside the chain
    auto broken = json::parse(cert.out);
    auto& chain = broken.at("p_chain").back();
    auto slice = chain.back().at("slice").get<uint32_t>();
    auto pos = chain.back().at("pos").get<uint32_t>();
    std::string d = broken.at("d")[slice].get<std::string>();
    d[pos] = d[pos] == '0' ? '1' : '0';
    broken.at("d")[slice] = d;
    TempFile g("infgen_cert_bad.json", broken.dump());
    auto bad = run_command({"cohen", "verify", "--cert", g.str(), "--families",
                            "decide:0,0;pattern:1,11@0"});
    REQUIRE(bad.exit_code == 1);
}

TEST_CASE("probe command reports directedness") {
    TempFile f("infgen_lo2f.json", kLo2);
    auto r = run_command({"probe", "--class", f.str(), "--length", "3", "--samples",
                          "16", "--seed", "3", "--json"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(json::parse(r.out).at("directed") == true);
}

TEST_CASE("json payloads are deterministic") {
    TempFile f("infgen_lo2g.json", kLo2);
    std::vector<std::string> argv{"generics", "--class", f.str(), "--budget", "6",
                                  "--json"};
    auto a = run_command(argv);
    auto b = run_command(argv);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
}

TEST_CASE("cohen gen reads explicit list families from disk") {
    TempFile lst("infgen_level2.json", R"(["00","01","10","11"])");
    auto r = run_command({"cohen", "gen", "--families",
                          "list:" + lst.str() + ";pattern:11@1", "--depth", "12"});
    REQUIRE(r.exit_code == 0);
    // meet gives "00", then the word goes one past the end: positions 3-4
    REQUIRE(r.out == "000110000000\n");
    TempFile bad("infgen_notdense.json", R"(["00","01"])");
    auto rb = run_command({"cohen", "gen", "--families", "list:" + bad.str(),
                           "--depth", "12"});
    REQUIRE(rb.exit_code == 2); // fails density validation at load
}

TEST_CASE("parse and eval subcommands") {
    TempFile f("infgen_lo2h.json", kLo2);
    auto p = run_command({"parse", "--class", f.str(), "--formula", "A x. E y. x < y",
                          "--json"});
    REQUIRE(p.exit_code == 0);
    auto j = json::parse(p.out);
    REQUIRE(j.at("class") == "Pi2");
    auto e = run_command({"eval", "--class", f.str(), "--node", "L2", "--formula",
                          "E x. E y. x < y"});
    REQUIRE(e.exit_code == 0);
    REQUIRE(e.out == "true\n");
}
