#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shimr/output.hpp"
#include "shimr/rng.hpp"

using namespace shimr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "shimr_output_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    RngStream rng(4);
    for (int i = 0; i < 10000; ++i) {
        double v = (rng.next_uniform() * 2.0 - 1.0) * std::pow(10.0, double(i % 30) - 15.0);
        std::string s = format_double(v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc());
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.555) == "-0.555");
}

TEST_CASE("config files parse and apply with flag-style keys") {
    fs::path path = temp_dir() / "case.cfg";
    atomic_write(path,
                 "# comment\n"
                 "scenario = rational-controversy\n"
                 "agents=24\n"
                 "rounds = 30\n"
                 "beta_min = 0.05\n"
                 "consensus-threshold=0.5\n"
                 "seed = 1234567890123\n"
                 "influencer-opinions = -0.3, 0.3\n"
                 "\n"
                 "deviation-normalization=discussers\n");
    RunConfig cfg;
    for (const auto& [key, value] : parse_config_file(path)) {
        auto errors = apply_config_entry(cfg, key, value);
        CHECK(errors.empty());
    }
    CHECK(cfg.scenario == "rational-controversy");
    CHECK(cfg.agents == 24);
    CHECK(cfg.rounds == 30);
    CHECK(cfg.params.beta_min == 0.05);
    CHECK(cfg.params.consensus == 0.5);
    CHECK(cfg.master_seed == 1234567890123ULL);
    CHECK(cfg.influencer_opinions == std::vector<double>{-0.3, 0.3});
    CHECK(cfg.params.deviation_norm == DeviationNorm::Discussers);
}

TEST_CASE("config entries report unknown keys and bad values") {
    RunConfig cfg;
    CHECK(!apply_config_entry(cfg, "no-such-key", "1").empty());
    CHECK(!apply_config_entry(cfg, "agents", "many").empty());
    CHECK(!apply_config_entry(cfg, "rho", "0.5x").empty());
    CHECK(!apply_config_entry(cfg, "deviation-normalization", "mean").empty());
    CHECK(!apply_config_entry(cfg, "influencer-opinions", "0.1,oops").empty());
}

TEST_CASE("malformed config files raise i/o errors") {
    fs::path path = temp_dir() / "broken.cfg";
    atomic_write(path, "scenario radical\n");
    CHECK_THROWS_AS(parse_config_file(path), std::runtime_error);
    CHECK_THROWS_AS(parse_config_file(temp_dir() / "absent.cfg"), std::runtime_error);
}

TEST_CASE("canonical config echo reparses to the identical config") {
    RunConfig cfg;
    cfg.scenario = "unpaired-controversy";
    cfg.influencer_opinions = {-1.0, 0.3};
    cfg.agents = 57;
    cfg.master_seed = 0xDEADBEEFULL;
    cfg.params.eta = 0.30000000000000004;  // not representable as a short decimal
    cfg.params.deviation_norm = DeviationNorm::Discussers;

    fs::path path = temp_dir() / "echo.cfg";
    atomic_write(path, canonical_config(cfg));
    RunConfig back;
    for (const auto& [key, value] : parse_config_file(path))
        CHECK(apply_config_entry(back, key, value).empty());
    CHECK(canonical_config(back) == canonical_config(cfg));
    CHECK(back.params.eta == cfg.params.eta);
    CHECK(config_hash(back) == config_hash(cfg));
}

TEST_CASE("config hash separates configs and ignores nothing") {
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.params.xi = 0.8000000001;
    CHECK(config_hash(a) != config_hash(b));
    RunConfig c = a;
    c.master_seed += 1;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("atomic_write leaves no temporary behind and replaces content") {
    fs::path path = temp_dir() / "atomic.txt";
    atomic_write(path, "first");
    atomic_write(path, "second");
    CHECK(slurp(path) == "second");
    CHECK(!fs::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS(atomic_write(temp_dir() / "no_dir" / "x.txt", "y"), std::runtime_error);
}

TEST_CASE("meta files are loadable as configs") {
    RunConfig cfg;
    cfg.agents = 33;
    cfg.scenario = "radical-unipolar";
    cfg.influencer_opinions = {-1.0};
    fs::path path = temp_dir() / "meta.txt";
    write_meta(path, cfg, "montecarlo");

    RunConfig back;
    for (const auto& [key, value] : parse_config_file(path))
        CHECK(apply_config_entry(back, key, value).empty());
    CHECK(back.agents == 33);
    CHECK(back.scenario == "radical-unipolar");

    std::string text = slurp(path);
    CHECK(text.find("# command: montecarlo") != std::string::npos);
    CHECK(text.find(config_hash(cfg)) != std::string::npos);
}

TEST_CASE("csv files carry the config hash and seed banner") {
    RunConfig cfg;
    cfg.agents = 4;
    cfg.rounds = 2;
    cfg.scenario = "custom";
    cfg.influencer_opinions = {0.5};
    cfg.master_seed = 77;

    RunResult run = run_simulation(cfg, 0);
    fs::path dir = temp_dir();
    write_timeseries(dir / "ts.csv", run);
    write_final_opinions(dir / "fo.csv", run);
    write_final_weights(dir / "fw.csv", run);

    for (const char* name : {"ts.csv", "fo.csv", "fw.csv"}) {
        std::string text = slurp(dir / name);
        std::string banner = "# shimr v" + std::string(kVersion) +
                             " config=" + config_hash(cfg) + " seed=77 run=0\n";
        CHECK(text.rfind(banner, 0) == 0);
    }

    std::string weights = slurp(dir / "fw.csv");
    int lines = 0;
    for (char c : weights)
        if (c == '\n') ++lines;
    CHECK(lines == 2 + 4 * 3);  // banner + header + off-diagonal entries

    std::string opinions = slurp(dir / "fo.csv");
    CHECK(opinions.find("0,influencer,0.5") != std::string::npos);
    CHECK(opinions.find("1,normal,") != std::string::npos);
}

TEST_CASE("final-state dump re-ingestion reproduces the correlation exactly") {
    RunConfig cfg;
    cfg.agents = 18;
    cfg.rounds = 25;
    cfg.scenario = "radical-controversy";
    RunResult run = run_simulation(cfg, 1);

    fs::path dir = temp_dir();
    write_final_opinions(dir / "reload_o.csv", run);
    write_final_weights(dir / "reload_w.csv", run);

    std::vector<double> opinions(cfg.agents);
    WeightMatrix weights(cfg.agents);
    {
        std::ifstream in(dir / "reload_o.csv");
        std::string line;
        std::getline(in, line);  // banner
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            int id;
            char role[32];
            double o;
            REQUIRE(std::sscanf(line.c_str(), "%d,%31[^,],%lf", &id, role, &o) == 3);
            opinions[id] = o;
        }
    }
    {
        std::ifstream in(dir / "reload_w.csv");
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        while (std::getline(in, line)) {
            int m, n;
            double w;
            REQUIRE(std::sscanf(line.c_str(), "%d,%d,%lf", &m, &n, &w) == 3);
            weights.set(m, n, w);
        }
    }
    auto direct =
        weight_opinion_correlation(run.final_opinions, run.final_weights, 2);
    auto reloaded = weight_opinion_correlation(opinions, weights, 2);
    REQUIRE(direct.has_value());
    REQUIRE(reloaded.has_value());
    CHECK(*direct == *reloaded);  // bit-for-bit
}
