#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <map>

#include "git_fixture.hpp"
#include "scenario_fixtures.hpp"
#include "tokmine/analytics.hpp"
#include "tokmine/history.hpp"
#include "tokmine/pipeline.hpp"
#include "tokmine/subprocess.hpp"

using namespace tokmine;

namespace {

struct TempDb {
    std::string path;
    TempDb() {
        path = (std::filesystem::temp_directory_path() /
                ("tokmine-pl-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++) + ".sqlite"))
                   .string();
    }
    ~TempDb() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        std::filesystem::remove(path + "-wal", ec);
        std::filesystem::remove(path + "-shm", ec);
    }
    static int counter;
};
int TempDb::counter = 0;

}  // namespace

TEST_CASE("full pipeline on the mixed fixture repository") {
    fixtures::GitRepo repo;
    const auto truth = fixtures::populate_pipeline_repo(repo);

    TempDb db;
    RunConfig config;
    config.repo_path = repo.path();
    config.db_path = db.path;

    const PipelineSummary first = run_pipeline(config);
    CHECK(first.n_studied == truth.n_studied);
    CHECK(first.n_one_line == truth.n_one_line);
    CHECK(first.n_micro == truth.n_micro);
    CHECK(first.n_one_token == truth.n_one_token);
    CHECK(first.n_ingested == truth.n_studied);

    // re-running is idempotent and skips ingested commits
    const PipelineSummary second = run_pipeline(config);
    CHECK(second.n_studied == first.n_studied);
    CHECK(second.n_one_line == first.n_one_line);
    CHECK(second.n_micro == first.n_micro);
    CHECK(second.n_one_token == first.n_one_token);
    CHECK(second.n_ingested == 0);

    Store store(db.path);
    CHECK(store.audit().empty());
    CHECK(store.meta("run_config").has_value());
    // every micro commit carries a taxonomy label
    std::size_t op_labels = 0;
    for (const auto& [id, label] : store.all_labels("taxonomy"))
        if (label.rfind("operation:", 0) == 0) ++op_labels;
    CHECK(op_labels == truth.n_micro);
}

TEST_CASE("pipeline on an empty repository succeeds with zero commits") {
    fixtures::GitRepo repo;
    TempDb db;
    RunConfig config;
    config.repo_path = repo.path();
    config.db_path = db.path;
    const PipelineSummary summary = run_pipeline(config);
    CHECK(summary.n_studied == 0);
    CHECK(summary.n_micro == 0);
}

TEST_CASE("config validation") {
    RunConfig config;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.repo_path = "/tmp";
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.db_path = "/tmp/db.sqlite";
    config.detector.added_threshold = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("missing repository fails with a repo error") {
    TempDb db;
    RunConfig config;
    config.repo_path = "/nonexistent/missing";
    config.db_path = db.path;
    CHECK_THROWS_AS(run_pipeline(config), RepoError);
}

TEST_CASE("cli binary end to end") {
    fixtures::GitRepo repo;
    fixtures::populate_pipeline_repo(repo);
    TempDb db;

    const std::string cli = TOKMINE_CLI_PATH;
    auto result = run_command({cli, "run", "--repo", repo.path(), "--db", db.path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"n_studied\": 10") != std::string::npos);
    CHECK(result.output.find("\"n_micro\": 6") != std::string::npos);
    CHECK(result.output.find("\"n_one_line\": 3") != std::string::npos);
    CHECK(result.output.find("\"n_one_token\": 2") != std::string::npos);

    // rerun: same summary, nothing newly ingested
    result = run_command({cli, "run", "--repo", repo.path(), "--db", db.path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"n_ingested\": 0") != std::string::npos);
    CHECK(result.output.find("\"n_micro\": 6") != std::string::npos);

    result = run_command({cli, "report", "--db", db.path, "--table", "intersection"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("n_intersect") != std::string::npos);

    result = run_command({cli, "report", "--db", db.path, "--table", "heatmap",
                          "--population", "one_line", "--format", "json"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"population\": \"one_line\"") != std::string::npos);

    result = run_command({cli, "stats", "samplesize", "150967", "95", "5"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("383") != std::string::npos);

    result = run_command({cli, "audit", "--db", db.path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("consistent") != std::string::npos);

    result = run_command({cli, "export", "--db", db.path, "--table", "commits"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("commit_id") != std::string::npos);
}

TEST_CASE("cli exit codes") {
    const std::string cli = TOKMINE_CLI_PATH;
    // config error: no db path anywhere
    auto result = run_command({cli, "detect"});
    CHECK(result.status == 2);
    // repo error
    TempDb db;
    result = run_command({cli, "run", "--repo", "/nonexistent/missing", "--db", db.path});
    CHECK(result.status == 3);
    // unknown table is a config error
    Store store(db.path);  // create a valid db
    result = run_command({cli, "report", "--db", db.path, "--table", "bogus"});
    CHECK(result.status == 2);
    // storage error: database path in a missing directory
    fixtures::GitRepo repo;
    repo.write("a.c", "int a;\n");
    repo.commit("seed");
    result = run_command(
        {cli, "run", "--repo", repo.path(), "--db", "/nonexistent/dir/db.sqlite"});
    CHECK(result.status == 4);
}

TEST_CASE("cli staged flow matches the all-in-one run") {
    fixtures::GitRepo repo;
    const auto truth = fixtures::populate_pipeline_repo(repo);
    TempDb db;
    const std::string cli = TOKMINE_CLI_PATH;

    auto result = run_command({cli, "ingest", "--repo", repo.path(), "--db", db.path});
    REQUIRE(result.status == 0);
    result = run_command({cli, "detect", "--db", db.path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"n_micro\": " + std::to_string(truth.n_micro)) !=
          std::string::npos);
    result = run_command({cli, "classify", "maintenance", "--db", db.path});
    REQUIRE(result.status == 0);
    result = run_command({cli, "classify", "taxonomy", "--db", db.path});
    REQUIRE(result.status == 0);
    result = run_command({cli, "report", "--db", db.path, "--table", "corrective"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("micro,") != std::string::npos);
}

TEST_CASE("run accepts a config file with flag overrides") {
    fixtures::GitRepo repo;
    fixtures::populate_pipeline_repo(repo);
    TempDb db;
    const std::string cli = TOKMINE_CLI_PATH;
    const std::string config_path = "/tmp/tokmine_run_config.toml";
    {
        std::ofstream out(config_path);
        out << "# pipeline settings\n";
        out << "repo = \"" << repo.path() << "\"\n";
        out << "db = \"" << db.path << "\"\n";
        out << "threshold = 5\n";
        out << "jobs = 2\n";
    }
    auto result = run_command({cli, "run", "--config", config_path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"n_micro\": 6") != std::string::npos);

    // a flag wins over the file: threshold 1 shrinks the micro set to the
    // four commits that add/remove at most one token
    TempDb db2;
    result = run_command({cli, "run", "--config", config_path, "--db", db2.path,
                          "--threshold", "1"});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("\"n_micro\": 4") != std::string::npos);
}

TEST_CASE("stats kappa subcommand") {
    const std::string path = "/tmp/tokmine_cli_matrix.csv";
    {
        std::ofstream out(path);
        out << "2,1\n0,3\n";
    }
    const auto result = run_command({TOKMINE_CLI_PATH, "stats", "kappa", "--matrix", path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("0.25") != std::string::npos);
    CHECK(result.output.find("fair agreement") != std::string::npos);
}

TEST_CASE("taxonomy gold comparison through the cli") {
    fixtures::GitRepo repo;
    fixtures::populate_scenario_repo(repo);
    TempDb db;
    const std::string cli = TOKMINE_CLI_PATH;
    auto result = run_command({cli, "run", "--repo", repo.path(), "--db", db.path});
    REQUIRE(result.status == 0);

    // build a gold file straight from the stored labels, then require 100%
    Store store(db.path);
    const std::string gold_path = "/tmp/tokmine_cli_gold.csv";
    {
        std::ofstream out(gold_path);
        out << "commit_id,operation,target\n";
        std::map<std::string, std::pair<std::string, std::string>> by_commit;
        for (const auto& [id, label] : store.all_labels("taxonomy")) {
            if (label.rfind("operation:", 0) == 0) by_commit[id].first = label.substr(10);
            if (label.rfind("target:", 0) == 0) by_commit[id].second = label.substr(7);
        }
        for (const auto& [id, pair] : by_commit)
            out << id << "," << pair.first << ",\"" << pair.second << "\"\n";
    }
    result = run_command({cli, "classify", "taxonomy", "--db", db.path, "--gold", gold_path});
    REQUIRE(result.status == 0);
    CHECK(result.output.find("(100.0%)") != std::string::npos);
}
