#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "stixdesk/error.hpp"
#include "stixdesk/fixture.hpp"
#include "stixdesk/share.hpp"
#include "support.hpp"

using namespace stixdesk;
using testsupport::base_time;
using testsupport::json;

namespace {

struct Run {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string quoted(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the CLI against a database in `dir` with cheap password hashing.
Run stixdesk_cli(const testsupport::TempDir& dir, const std::vector<std::string>& args) {
    std::string cmd = "PASSWORD_HASHING=fast " + quoted(STIXDESK_CLI) + " --db " + quoted((dir.path() / "desk.db").string()) +
                      " --catalog-dir " + quoted(testsupport::catalog_dir().string());
    for (const auto& a : args) cmd += " " + quoted(a);
    const auto err_file = dir.path() / "stderr.txt";
    cmd += " 2>" + quoted(err_file.string());
    Run run;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return run;
    char buf[4096];
    while (const auto n = std::fread(buf, 1, sizeof buf, pipe)) run.out.append(buf, n);
    const int status = pclose(pipe);
    run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    run.err = slurp(err_file);
    return run;
}

std::unique_ptr<WorkspaceStore> file_store(const testsupport::TempDir& dir) {
    ServiceConfig cfg;
    cfg.database = (dir.path() / "desk.db").string();
    cfg.hashing = PasswordHashing::Fast;
    return std::make_unique<WorkspaceStore>(cfg.store_config(), testsupport::shipped_catalog());
}

std::set<std::string> lines_of(const std::string& text) {
    std::set<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.insert(line);
    return out;
}

}  // namespace

TEST(Cli, ValidateExitCodesAndFindings) {
    testsupport::TempDir dir;
    const auto& cat = *testsupport::shipped_catalog();
    DeskFixture fx;
    Session s;
    std::string clean, incomplete;
    {
        auto store = file_store(dir);
        fx = seed_desk_fixture(*store, cat, base_time(), 5);
        s = store->authenticate(fx.users[0].username, fx.users[0].password, fx.finished_at);
        clean = preview_model_json(s, fx.clean_model_id, cat, *store, fx.finished_at);
        incomplete = preview_model_json(s, fx.incomplete_model_id, cat, *store, fx.finished_at);
    }
    std::ofstream(dir.path() / "clean.json") << clean;
    std::ofstream(dir.path() / "incomplete.json") << incomplete;

    auto r = stixdesk_cli(dir, {"validate", (dir.path() / "clean.json").string()});
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, "");

    r = stixdesk_cli(dir, {"validate", (dir.path() / "incomplete.json").string()});
    EXPECT_EQ(r.exit_code, 1) << r.err;
    std::set<std::string> expected;
    for (const auto& [id, prop, problem] :
         testsupport::brute_force_missing_bundle(testsupport::raw_definitions(), json::parse(incomplete)))
        expected.insert(id + " " + prop + " " + problem);
    EXPECT_EQ(lines_of(r.out), expected);

    r = stixdesk_cli(dir, {"validate", (dir.path() / "absent.json").string()});
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("FileUnreadable"), std::string::npos) << r.err;

    std::ofstream(dir.path() / "broken.json") << "{\"type\": \"bundle\"";
    EXPECT_EQ(stixdesk_cli(dir, {"validate", (dir.path() / "broken.json").string()}).exit_code, 2);
}

TEST(Cli, ValidateReportsVocabularyButPasses) {
    testsupport::TempDir dir;
    const auto& cat = *testsupport::shipped_catalog();
    auto actor = set_property(new_object(cat, "threat-actor", base_time()), cat, "name", "x", base_time()).object;
    actor = set_property(actor, cat, "threat_actor_types", std::vector<std::string>{"alien"}, base_time()).object;
    const std::vector<StixObject> objects{actor};
    std::ofstream(dir.path() / "b.json") << serialize_bundle(objects, StixIdentifier::generate("bundle"));
    const auto r = stixdesk_cli(dir, {"validate", (dir.path() / "b.json").string()});
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(r.out, actor.id.str() + " threat_actor_types not-in-vocabulary\n");
}

TEST(Cli, ExportOfEmptyModelIsEmptyBundle) {
    testsupport::TempDir dir;
    std::string model_id;
    {
        auto store = file_store(dir);
        store->register_user("alice", "alice-password", Profile::Analysts, Role::User, base_time());
        const auto s = store->authenticate("alice", "alice-password", base_time());
        model_id = store->create_model(s, "empty", base_time()).model_id;
    }
    const auto out = dir.path() / "out.json";
    const auto r = stixdesk_cli(
        dir, {"export", "--user", "alice", "--password", "alice-password", "--model", model_id, "--out", out.string()});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto bundle = json::parse(slurp(out));
    EXPECT_EQ(bundle.at("type"), "bundle");
    EXPECT_TRUE(bundle.at("objects").is_array());
    EXPECT_TRUE(bundle.at("objects").empty());

    // Unknown model: refused without output.
    const auto bad = stixdesk_cli(dir, {"export", "--user", "alice", "--password", "alice-password", "--model",
                                        std::string(32, '0'), "--out", "-"});
    EXPECT_EQ(bad.exit_code, 2);
    EXPECT_EQ(bad.out, "");
}

TEST(Cli, SecondBootstrapRefuses) {
    testsupport::TempDir dir;
    auto first = stixdesk_cli(dir, {"bootstrap-admin", "--user", "root", "--password", "root-password"});
    EXPECT_EQ(first.exit_code, 0) << first.err;
    auto second = stixdesk_cli(dir, {"bootstrap-admin", "--user", "root2", "--password", "root-password"});
    EXPECT_EQ(second.exit_code, 2);
    EXPECT_NE(second.err.find("AdministratorExists"), std::string::npos) << second.err;
    auto store = file_store(dir);
    EXPECT_NO_THROW(store->authenticate("root", "root-password", system_now()));
    EXPECT_THROW(store->authenticate("root2", "root-password", system_now()), Error);
}

TEST(Cli, TimelineMatchesLibrary) {
    testsupport::TempDir dir;
    DeskFixture fx;
    {
        auto store = file_store(dir);
        fx = seed_desk_fixture(*store, *testsupport::shipped_catalog(), base_time(), 9);
    }
    const auto& user = fx.users[0];
    const auto r = stixdesk_cli(dir, {"timeline", "--user", user.username, "--password", user.password});
    ASSERT_EQ(r.exit_code, 0) << r.err;

    auto store = file_store(dir);
    const auto s = store->authenticate(user.username, user.password, system_now());
    json expected = json::array();
    for (const auto& e : build_timeline(s, *store, system_now())) expected.push_back(to_json(e));
    ASSERT_FALSE(expected.empty());
    EXPECT_EQ(json::parse(r.out), expected);

    const auto wrong = stixdesk_cli(dir, {"timeline", "--user", user.username, "--password", "wrong-password"});
    EXPECT_EQ(wrong.exit_code, 2);
    EXPECT_NE(wrong.err.find("BadCredentials"), std::string::npos);
}

TEST(Cli, SeedSummary) {
    testsupport::TempDir dir;
    const auto r = stixdesk_cli(dir, {"seed", "--seed", "4"});
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto summary = json::parse(r.out);
    EXPECT_EQ(summary.at("models"), 25);
    EXPECT_FALSE(summary.at("users").empty());
    EXPECT_NE(stixdesk_cli(dir, {}).exit_code, 0);
}
