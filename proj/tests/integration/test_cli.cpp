#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = AMPCDF_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("gen then classify: csv and iq encodings agree") {
    REQUIRE(run("gen --format QAM16 --osnr 22 --samples 10000 --seed 5 --out cli_block.csv") == 0);
    REQUIRE(run("gen --format QAM16 --osnr 22 --samples 10000 --seed 5 --out cli_block.iq") == 0);
    REQUIRE(run("classify cli_block.csv --osnr 22 --out cli_csv.json") == 0);
    REQUIRE(run("classify cli_block.iq --osnr 22 --out cli_iq.json") == 0);
    const auto a = nlohmann::json::parse(slurp("cli_csv.json"));
    const auto b = nlohmann::json::parse(slurp("cli_iq.json"));
    CHECK(a == b);
    CHECK(a["decision"] == "QAM16");
    CHECK(a["config"]["k_samples"] == 10000);
    CHECK(a["distances"].size() == 5);
}

TEST_CASE("noiseless QAM4 capture is classified with a wide margin") {
    REQUIRE(run("gen --format QAM4 --osnr inf --samples 10000 --out cli_qam4.iq") == 0);
    REQUIRE(run("classify cli_qam4.iq --osnr 40 --out cli_qam4.json") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_qam4.json"));
    CHECK(j["decision"] == "QAM4");
    CHECK(j["margin"].get<double>() > 0.1);
}

TEST_CASE("input data errors exit with 3") {
    { std::ofstream("cli_empty.csv"); }
    { std::ofstream("cli_empty.iq"); }
    { std::ofstream("cli_bad.csv") << "i,q\n1,2\nfoo,3\n"; }
    { std::ofstream("cli_short.iq") << std::string(20, 'x'); }
    CHECK(run("classify cli_empty.csv --osnr 20") == 3);
    CHECK(run("classify cli_empty.iq --osnr 20") == 3);
    CHECK(run("classify cli_bad.csv --osnr 20") == 3);
    CHECK(run("classify cli_short.iq --osnr 20") == 3);
    CHECK(run("classify does_not_exist.iq --osnr 20") == 3);
}

TEST_CASE("invalid arguments exit with 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("sweep-osnr --format QAM128 --osnr 10") == 2);
    CHECK(run("sweep-osnr --osnr 10 --bank magic") == 2);
    CHECK(run("sweep-osnr --osnr 10 --trials 0") == 2);
    CHECK(run("classify cli_block.csv --osnr 20 --baud -5") == 2);
    CHECK(run("classify cli_block.bin --osnr 20") == 2);
    CHECK(run("sweep-samples --format QAM4 QAM8 --osnr 10 11 12 --samples 100") == 2);
    CHECK(run("gen --format QAM4 --osnr 10 --samples 10") == 2);
    CHECK(run("--version") == 0);
}

TEST_CASE("reference-cdf emits the z,F table") {
    REQUIRE(run("reference-cdf --format QAM64 --osnr 30 --baud 12.5e9 --out cli_ref.csv") == 0);
    const auto text = slurp("cli_ref.csv");
    CHECK(text.rfind("z,F\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
    REQUIRE(run("reference-cdf --format QAM64 --osnr 30 --baud 12.5e9 --bank mc --nref 20000 --out cli_ref_mc.csv") ==
            0);
    CHECK(slurp("cli_ref_mc.csv") != text);
}

TEST_CASE("sweeps are byte-identical across runs") {
    const std::string args = "sweep-osnr --format QAM8 QAM32 --osnr 14 18 --samples 2000 --trials 30 --seed 9";
    REQUIRE(run(args + " --out cli_s1.csv") == 0);
    REQUIRE(run(args + " --out cli_s2.csv") == 0);
    REQUIRE(run(args + " --json --out cli_s1.json") == 0);
    CHECK(slurp("cli_s1.csv") == slurp("cli_s2.csv"));
    const auto j = nlohmann::json::parse(slurp("cli_s1.json"));
    CHECK(j["rows"].size() == 4);
    CHECK(j["metadata"]["spec"]["trials"] == 30);
}

TEST_CASE("required-osnr reports not achieved") {
    REQUIRE(run("required-osnr --format QAM32 --osnr-min 0 --osnr-max 4.5 --trials 50 --out cli_req.json") == 0);
    const auto j = nlohmann::json::parse(slurp("cli_req.json"));
    CHECK(j["required_osnr_db"] == "not achieved");
}
