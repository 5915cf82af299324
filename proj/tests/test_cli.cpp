#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "unimass/cli_app.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"unimass"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code =
        unimass::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("mass command", "[cli]") {
    const CliResult table = run_cli({"mass", "--disc", "-4", "--gram", "identity:1"});
    REQUIRE(table.code == 0);
    REQUIRE(table.out.find("mass = 1/4") != std::string::npos);

    const CliResult js =
        run_cli({"mass", "--disc", "-4", "--gram", "identity:1", "--format", "json"});
    REQUIRE(js.code == 0);
    const json doc = json::parse(js.out);
    REQUIRE(doc["command"] == "mass");
    REQUIRE(doc["inputs"]["m"] == "-1");
    REQUIRE(doc["inputs"]["disc"] == "-4");
    REQUIRE(doc["results"]["mass"] == "1/4");
    REQUIRE(doc["factors"]["kappa"]["2"] == "1");

    const CliResult e3 = run_cli({"mass", "--m", "-3", "--gram", "identity:2", "--format", "json"});
    REQUIRE(json::parse(e3.out)["results"]["mass"] == "1/72");
}

TEST_CASE("basic-locus command and deterministic output", "[cli]") {
    const std::vector<std::string> args = {"basic-locus", "--disc", "-4",  "--gram",
                                           "identity:3",  "--signature", "1,2", "--prime",
                                           "7",           "--level",     "3",   "--format",
                                           "json"};
    const CliResult a = run_cli(args);
    REQUIRE(a.code == 0);
    const json doc = json::parse(a.out);
    REQUIRE(doc["factors"]["lambda_e"] == "43");
    REQUIRE(doc["results"]["irreducible_components"] == "126");
    REQUIRE(doc["results"]["e_stratum_points"] == "5418");
    REQUIRE(doc["results"]["superbasic"] == false);
    REQUIRE(doc["inputs"]["behavior"] == "inert");

    const CliResult b = run_cli(args);
    REQUIRE(a.out == b.out); // byte-identical reruns

    const CliResult table = run_cli({"basic-locus", "--disc", "-4", "--gram", "identity:3",
                                     "--signature", "1,2", "--prime", "7", "--level", "3"});
    REQUIRE(table.out.find("lambda_e = 43") != std::string::npos);
}

TEST_CASE("fermat command and enumeration budget", "[cli]") {
    const CliResult table = run_cli({"fermat", "--q", "2", "--n", "2"});
    REQUIRE(table.code == 0);
    REQUIRE(table.out.find("points = 9") != std::string::npos);

    const json doc =
        json::parse(run_cli({"fermat", "--q", "2", "--n", "2", "--format", "json"}).out);
    REQUIRE(doc["results"]["points"] == "9");
    REQUIRE(doc["results"]["enumerated_points"] == "9");

    const json capped =
        json::parse(run_cli({"fermat", "--q", "2", "--n", "2", "--format", "json", "--cap", "0"}).out);
    REQUIRE(!capped["results"].contains("enumerated_points"));

    // enumeration over any sane budget is skipped, the closed form stays
    const json big =
        json::parse(run_cli({"fermat", "--q", "16", "--n", "3", "--format", "json"}).out);
    REQUIRE(big["results"].contains("points"));
    REQUIRE(!big["results"].contains("enumerated_points"));
}

TEST_CASE("gram sources", "[cli]") {
    const CliResult inline_json = run_cli({"mass", "--m", "-1", "--gram",
                                           R"({"m":"-1","n":1,"entries":[[[1,0]]]})",
                                           "--format", "json"});
    REQUIRE(inline_json.code == 0);
    REQUIRE(json::parse(inline_json.out)["results"]["mass"] == "1/4");

    const std::string path = "tmp_cli_gram.json";
    {
        std::ofstream f(path);
        f << R"({"m":"-1","n":2,"entries":[[[0,0],[1,0]],[[1,0],[0,0]]]})";
    }
    const CliResult from_file = run_cli({"mass", "--m", "-1", "--gram", path, "--format", "json"});
    std::remove(path.c_str());
    REQUIRE(from_file.code == 0);
    REQUIRE(json::parse(from_file.out)["results"]["mass"] == "1/48");

    const CliResult mismatch = run_cli({"mass", "--m", "-3", "--gram",
                                        R"({"m":"-1","n":1,"entries":[[[1,0]]]})"});
    REQUIRE(mismatch.code == 2);
    REQUIRE(mismatch.err.find("different field") != std::string::npos);

    const CliResult missing = run_cli({"mass", "--m", "-1", "--gram", "no_such_file.json"});
    REQUIRE(missing.code == 2);
}

TEST_CASE("exit codes", "[cli]") {
    REQUIRE(run_cli({"mass", "--m", "-4", "--gram", "identity:1"}).code == 2); // not squarefree
    REQUIRE(run_cli({"mass", "--gram", "identity:1"}).code == 2);              // no field
    REQUIRE(run_cli({"mass", "--m", "-1", "--disc", "-4", "--gram", "identity:1"}).code == 2);
    REQUIRE(run_cli({"mass", "--m", "-1"}).code == 2);                         // no gram
    REQUIRE(run_cli({"mass", "--m", "-1", "--gram", "identity:1", "--bogus"}).code == 2);
    REQUIRE(run_cli({}).code == 2);                                            // no command
    REQUIRE(run_cli({"fermat", "--q", "6", "--n", "2"}).code == 2);            // not a prime power
    REQUIRE(run_cli({"basic-locus", "--disc", "-4", "--gram", "identity:2", "--signature",
                     "1,1", "--prime", "3", "--level", "8"})
                .code == 3); // level meets the discriminant
    const CliResult help = run_cli({"--help"});
    REQUIRE(help.code == 0);
    REQUIRE(help.out.find("basic-locus") != std::string::npos);

    const CliResult named_error =
        run_cli({"inner-mass", "--m", "-1", "--gram", "identity:2", "--signature", "1,1",
                 "--prime", "5", "--t", "1"});
    REQUIRE(named_error.code == 2);
    REQUIRE(named_error.err.find("inert") != std::string::npos);
}

TEST_CASE("inner-mass command", "[cli]") {
    const json doc = json::parse(run_cli({"inner-mass", "--m", "-1", "--gram", "identity:1",
                                          "--signature", "0,1", "--prime", "3", "--format",
                                          "json"})
                                     .out);
    REQUIRE(doc["results"]["inner_mass"] == "1/4");
    REQUIRE(doc["factors"]["tau"] == "1");
    REQUIRE(doc["factors"]["lambda"] == "1");

    const json split = json::parse(run_cli({"inner-mass", "--m", "-1", "--gram", "identity:2",
                                            "--signature", "1,1", "--prime", "5", "--format",
                                            "json"})
                                       .out);
    REQUIRE(split["inputs"]["behavior"] == "split");
}

TEST_CASE("eo-strata command", "[cli]") {
    const std::vector<std::string> base = {"eo-strata", "--disc", "-4", "--gram", "identity:3",
                                           "--signature", "1,2", "--prime", "7", "--level", "3"};
    auto with_t = [&](const char* t) {
        std::vector<std::string> args = base;
        args.insert(args.end(), {"--t", t, "--format", "json"});
        return run_cli(args);
    };
    const json top = json::parse(with_t("3").out);
    REQUIRE(top["results"]["closure_count"] == "126");
    REQUIRE(top["factors"]["lambda_t"] == "1");
    const json bottom = json::parse(with_t("1").out);
    REQUIRE(bottom["results"]["closure_count"] == "5418");
    REQUIRE(with_t("2").code == 2);
}

TEST_CASE("pi0 command", "[cli]") {
    const json odd = json::parse(run_cli({"pi0", "--m", "-5", "--gram", "identity:3",
                                          "--signature", "1,2", "--prime", "3", "--level", "7",
                                          "--format", "json"})
                                     .out);
    REQUIRE(odd["results"]["pi0_shimura"] == "2");
    const json locus = json::parse(run_cli({"basic-locus", "--m", "-5", "--gram", "identity:3",
                                            "--signature", "1,2", "--prime", "3", "--level",
                                            "7", "--format", "json"})
                                       .out);
    REQUIRE(locus["results"]["superbasic"] == true); // split prime, coprime signature
    REQUIRE(odd["results"]["pi0_basic"] == locus["results"]["irreducible_components"]);

    const json principal =
        json::parse(run_cli({"pi0", "--m", "-3", "--gram", "identity:3", "--signature", "1,2",
                             "--prime", "5", "--level", "7", "--level-kind", "principal",
                             "--norm-index", "6", "--format", "json"})
                        .out);
    REQUIRE(principal["results"]["pi0_shimura"] == "1");
    REQUIRE(run_cli({"pi0", "--m", "-3", "--gram", "identity:3", "--signature", "1,2",
                     "--prime", "5", "--level", "7", "--level-kind", "principal"})
                .code == 2);
}

TEST_CASE("adlv command", "[cli]") {
    const json inert = json::parse(
        run_cli({"adlv", "--behavior", "inert", "--n", "4", "--r", "2", "--format", "json"}).out);
    REQUIRE(inert["results"]["orbits"] == "2");
    REQUIRE(inert["factors"]["enumerated"] == "2");

    const json split = json::parse(
        run_cli({"adlv", "--behavior", "split", "--n", "4", "--r", "2", "--format", "json"}).out);
    REQUIRE(split["results"]["orbits"] == "1");
    REQUIRE(!split["factors"].contains("enumerated"));

    REQUIRE(run_cli({"adlv", "--behavior", "inert", "--r", "2"}).code == 2);
}

TEST_CASE("hecke-bound command", "[cli]") {
    const json doc = json::parse(run_cli({"hecke-bound", "--m", "-1", "--gram", "identity:1",
                                          "--signature", "0,1", "--prime", "3", "--level", "5",
                                          "--format", "json"})
                                     .out);
    REQUIRE(doc["results"]["bound"] == "32");
    REQUIRE(doc["factors"]["nu"] == "8");
    REQUIRE(doc["factors"]["e_stratum_points"] == "4");
}

TEST_CASE("local-density command", "[cli]") {
    const json doc = json::parse(run_cli({"local-density", "--m", "-1", "--gram", "H", "--ell",
                                          "2", "--precision", "3", "--format", "json"})
                                     .out);
    REQUIRE(doc["results"]["density"] == "3/1");
    REQUIRE(doc["results"]["enumerated_density"] == "3/1");
    REQUIRE(doc["factors"]["norm_type"] == "subnormal");
    REQUIRE(doc["factors"]["det_matches_sign"] == true);

    const json plain = json::parse(
        run_cli({"local-density", "--m", "-1", "--gram", "identity:2", "--ell", "3", "--format",
                 "json"})
            .out);
    REQUIRE(plain["results"]["density"] == "32/27");
    REQUIRE(!plain["results"].contains("enumerated_density"));
}

TEST_CASE("verify command", "[cli]") {
    const CliResult skipped = run_cli({"verify", "--cap", "0"});
    REQUIRE(skipped.code == 0);
    REQUIRE(skipped.out.find("PASS") == std::string::npos);
    REQUIRE(skipped.out.find("0 failed") != std::string::npos);

    const CliResult small = run_cli({"verify", "--cap", "100000"});
    REQUIRE(small.code == 0);
    REQUIRE(small.out.find("PASS  class numbers against L-values") != std::string::npos);
    REQUIRE(small.out.find("SKIP  finite group orders by enumeration") != std::string::npos);
    REQUIRE(small.out.find("0 failed") != std::string::npos);

    const CliResult fails = run_cli({"verify", "--cap", "100000", "--inject-mismatch"});
    REQUIRE(fails.code == 4);
    REQUIRE(fails.out.find("FAIL") != std::string::npos);
    REQUIRE(fails.out.find("class number mismatch") != std::string::npos);

    const json doc =
        json::parse(run_cli({"verify", "--cap", "100000", "--format", "json"}).out);
    REQUIRE(doc["failed"] == 0);
    REQUIRE(doc["passed"].get<int>() >= 5);
}

TEST_CASE("enumeration cap from the environment", "[cli]") {
    setenv("UNIMASS_ENUM_CAP", "0", 1);
    const json capped =
        json::parse(run_cli({"fermat", "--q", "2", "--n", "2", "--format", "json"}).out);
    REQUIRE(!capped["results"].contains("enumerated_points"));

    setenv("UNIMASS_ENUM_CAP", "not-a-number", 1);
    REQUIRE(run_cli({"fermat", "--q", "2", "--n", "2"}).code == 2);
    unsetenv("UNIMASS_ENUM_CAP");

    const json normal =
        json::parse(run_cli({"fermat", "--q", "2", "--n", "2", "--format", "json"}).out);
    REQUIRE(normal["results"]["enumerated_points"] == "9");
}
