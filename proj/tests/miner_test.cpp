#include "msmine/classify.hpp"
#include "msmine/errors.hpp"
#include "msmine/git_miner.hpp"
#include "msmine/identity.hpp"
#include "msmine/language_map.hpp"
#include "msmine/manifest.hpp"
#include "msmine/touches.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <fstream>

using namespace msmine;
using msmine::test::FixtureRepo;
using msmine::test::TempDir;
using msmine::test::day;
using msmine::test::write_manifest;

TEST_SUITE_BEGIN("miner");

TEST_CASE("manifest paths are normalized")
{
    TempDir dir;
    auto path = write_manifest(dir.path() / "m.json", "p", "/tmp/nowhere",
                               {"svc-a/", "svc-b", "nested//svc//c/", "./svc-d"}, "2025-06-01");
    auto m = load_manifest(path);
    CHECK(m.microservice_paths ==
          std::vector<std::string>{"svc-a", "svc-b", "nested/svc/c", "svc-d"});
    CHECK(m.as_of == "2025-06-01");

    CHECK(normalize_repo_path("win\\style\\dir\\") == "win/style/dir");
    CHECK(normalize_repo_path("./a//b/") == "a/b");
}

TEST_CASE("manifest validation failures")
{
    TempDir dir;
    SUBCASE("empty microservice list")
    {
        auto path = write_manifest(dir.path() / "m.json", "p", "/r", {}, "2025-06-01");
        CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("empty microservice list"),
                             ConfigError);
    }
    SUBCASE("duplicate after normalization")
    {
        auto path =
            write_manifest(dir.path() / "m.json", "p", "/r", {"svc-a/", "svc-a"}, "2025-06-01");
        CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("duplicate"), ConfigError);
    }
    SUBCASE("absolute path rejected")
    {
        auto path =
            write_manifest(dir.path() / "m.json", "p", "/r", {"/abs/svc"}, "2025-06-01");
        CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("absolute"), ConfigError);
    }
    SUBCASE("empty name")
    {
        auto path = write_manifest(dir.path() / "m.json", " ", "/r", {"svc"}, "2025-06-01");
        CHECK_THROWS_AS(load_manifest(path), ConfigError);
    }
    SUBCASE("malformed json")
    {
        std::ofstream(dir.path() / "bad.json") << "{not json";
        CHECK_THROWS_WITH_AS(load_manifest((dir.path() / "bad.json").string()),
                             doctest::Contains("parse error"), ConfigError);
    }
    SUBCASE("bad as_of date")
    {
        auto path = write_manifest(dir.path() / "m.json", "p", "/r", {"svc"}, "06/01/2025");
        CHECK_THROWS_AS(load_manifest(path), ConfigError);
    }
    SUBCASE("missing file")
    {
        CHECK_THROWS_AS(load_manifest((dir.path() / "absent.json").string()), ConfigError);
    }
}

TEST_CASE("a manifest listing 11 services keeps all 11")
{
    TempDir dir;
    std::vector<std::string> services;
    for (int i = 0; i < 11; ++i)
        services.push_back("modules/svc-" + std::to_string(i));
    auto path = write_manifest(dir.path() / "m.json", "geoserver-cloud", "/r", services, "2025-06-01");
    CHECK(load_manifest(path).microservice_paths.size() == 11);
}

TEST_CASE("utc date parsing")
{
    CHECK(parse_utc_date("1970-01-01") == 0);
    CHECK(parse_utc_date("2025-01-01") == msmine::test::kEpoch2025);
    CHECK_THROWS_AS(parse_utc_date("2025-13-01"), ConfigError);
    CHECK_THROWS_AS(parse_utc_date("2025-1-1"), ConfigError);
}

TEST_CASE("identity resolution")
{
    CHECK(resolve_identity("Ada L.", "Ada@Example.COM").canonical_key == "ada@example.com");
    CHECK(resolve_identity("Ada L.", "Ada@Example.COM").display_name == "Ada L.");
    CHECK(resolve_identity("ada", "").canonical_key == "ada");
    CHECK(resolve_identity("", "  X@Y.Z  ").canonical_key == "x@y.z");
    CHECK(resolve_identity("", "x@y.z").display_name == "x@y.z");
    CHECK_THROWS_AS(resolve_identity("", "  "), MiningError);

    AliasMap aliases;
    aliases.add("b@y", "a@x");
    CHECK(resolve_identity("ada", "a@x", aliases).canonical_key == "b@y");
    CHECK(resolve_identity("ada", "other@x", aliases).canonical_key == "other@x");
}

TEST_CASE("alias file parsing")
{
    TempDir dir;
    auto path = dir.path() / "aliases.txt";
    std::ofstream(path) << "# comment\n"
                        << "b@y\ta@x\n"
                        << "\n"
                        << "Team@Corp\tTEAM-BOT@corp\n";
    auto aliases = AliasMap::load(path.string());
    CHECK(aliases.size() == 2);
    CHECK(aliases.resolve("a@x") == "b@y");
    CHECK(aliases.resolve("team-bot@corp") == "team@corp");

    std::ofstream(dir.path() / "bad.txt") << "no-tab-here\n";
    CHECK_THROWS_AS(AliasMap::load((dir.path() / "bad.txt").string()), ConfigError);
}

TEST_CASE("file classification")
{
    CHECK(classify_file("svc-a/src/main.c") == FileKind::Source);
    CHECK(classify_file("README.md") == FileKind::Documentation);
    CHECK(classify_file("docs/guide.rst") == FileKind::Documentation);
    CHECK(classify_file("LICENSE") == FileKind::Documentation);
    CHECK(classify_file("svc-a/.gitignore") == FileKind::Setup);
    CHECK(classify_file(".travis.yml") == FileKind::Setup);
    CHECK(classify_file(".circleci/config.yml") == FileKind::Setup);
    CHECK(classify_file("Dockerfile") == FileKind::Source);
    CHECK(classify_file("svc-b/Makefile") == FileKind::Source);
    CHECK(classify_file("data/blob.bin") == FileKind::Other);
    CHECK(classify_file("noextension") == FileKind::Other);
}

TEST_CASE("ci config yaml is setup even though yaml is a mapped language")
{
    // independent precondition for the precedence rule
    REQUIRE(LanguageMap::defaults().lookup(".github/workflows/ci.yml") == std::string("YAML"));
    CHECK(classify_file(".github/workflows/ci.yml") == FileKind::Setup);
    // outside the setup trees the same extension is source
    CHECK(classify_file("svc-a/deploy.yml") == FileKind::Source);
}

TEST_CASE("language map defaults")
{
    const auto& map = LanguageMap::defaults();
    CHECK(map.languages().size() == 33);
    CHECK(map.lookup("a/b.c") == std::string("C"));
    CHECK(map.lookup("x.ipynb") == std::string("Jupyter NB"));
    CHECK(map.lookup("sub/Dockerfile") == std::string("Dockerfile"));
    CHECK(map.lookup("CMakeLists.txt") == std::string("CMake"));
    CHECK(!map.lookup("x.weirdext"));
    CHECK(map.lookup_or_others("x.weirdext") == "Others");
    CHECK(map.contains_language("Others"));
    CHECK(map.contains_language("Vue"));
    CHECK(!map.contains_language("COBOL"));
}

TEST_CASE("language map override file")
{
    TempDir dir;
    auto path = (dir.path() / "langs.json").string();
    std::ofstream(path) << R"({"extensions": {"c": "C", "f90": "Fortran"},
                               "basenames": {"Justfile": "Just"}})";
    auto map = LanguageMap::from_json(path);
    CHECK(map.lookup("x.f90") == std::string("Fortran"));
    CHECK(map.lookup("tools/Justfile") == std::string("Just"));
    CHECK(!map.lookup("y.py")); // overrides replace, not extend
    CHECK(map.languages() == std::vector<std::string>{"C", "Fortran", "Just", "Others"});

    std::ofstream(dir.path() / "empty.json") << "{}";
    CHECK_THROWS_AS(LanguageMap::from_json((dir.path() / "empty.json").string()), ConfigError);
}

TEST_CASE("basename and extension helpers")
{
    CHECK(path_basename("a/b/c.txt") == "c.txt");
    CHECK(path_basename("plain") == "plain");
    CHECK(path_extension("a/b.C") == "c");
    CHECK(path_extension("a/.gitignore") == "");
    CHECK(path_extension("noext") == "");
    CHECK(path_extension("trailing.") == "");
}

namespace {

ProjectManifest repo_manifest(const FixtureRepo& repo, std::vector<std::string> services,
                              const std::string& as_of = "2025-06-01")
{
    ProjectManifest m;
    m.name = "fixture";
    m.repo_path = repo.root().string();
    m.microservice_paths = std::move(services);
    m.as_of = as_of;
    validate_manifest(m);
    return m;
}

} // namespace

TEST_CASE("enumerate_commits on a scripted three-commit repo")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    repo.write("svc-a/one.c");
    repo.commit("first", "Ada", "ada@x.io", day(1));
    repo.write("svc-b/two.py");
    repo.commit("second", "Bob", "bob@x.io", day(2));
    repo.write("svc-a/three.go");
    repo.commit("third", "Ada", "ADA@X.IO", day(3));

    auto commits = enumerate_commits(repo_manifest(repo, {"svc-a", "svc-b"}));
    REQUIRE(commits.size() == 3);
    CHECK(commits[0].files == std::vector<std::string>{"svc-a/one.c"});
    CHECK(commits[1].files == std::vector<std::string>{"svc-b/two.py"});
    CHECK(commits[2].files == std::vector<std::string>{"svc-a/three.go"});
    CHECK(commits[0].timestamp == day(1));
    CHECK(commits[0].author.canonical_key == "ada@x.io");
    CHECK(commits[2].author.canonical_key == "ada@x.io"); // case-folded
    CHECK(commits[1].author.display_name == "Bob");
    for (const auto& c : commits) {
        CHECK(c.sha.size() == 40);
        CHECK_FALSE(c.is_merge);
    }
}

TEST_CASE("enumerate_commits of an empty repository")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    CHECK(enumerate_commits(repo_manifest(repo, {"svc-a"})).empty());
}

TEST_CASE("merge commits are excluded")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    repo.write("svc-a/base.c");
    repo.commit("base", "Ada", "ada@x.io", day(1));
    repo.branch("side");
    repo.write("svc-b/side.py");
    repo.commit("side work", "Bob", "bob@x.io", day(2));
    repo.checkout("main");
    repo.write("svc-a/main.c");
    repo.commit("main work", "Ada", "ada@x.io", day(3));
    repo.merge("side", day(4));

    auto commits = enumerate_commits(repo_manifest(repo, {"svc-a", "svc-b"}));
    // first-parent non-merge history: base + main work
    REQUIRE(commits.size() == 2);
    CHECK(commits[0].files == std::vector<std::string>{"svc-a/base.c"});
    CHECK(commits[1].files == std::vector<std::string>{"svc-a/main.c"});
}

TEST_CASE("enumeration is deterministic across runs")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    msmine::test::populate_one_dev_all_ms(repo);
    auto manifest = repo_manifest(repo, {"svc-a", "svc-b", "svc-c"});

    auto first = enumerate_commits(manifest);
    auto second = enumerate_commits(manifest);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(commit_record_to_json(first[i]) == commit_record_to_json(second[i]));
    }
}

TEST_CASE("shallow clones are refused")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    repo.write("svc-a/a.c");
    repo.commit("one", "Ada", "ada@x.io", day(1));
    repo.write("svc-a/b.c");
    repo.commit("two", "Ada", "ada@x.io", day(2));
    repo.shallow_clone(dir.path() / "shallow");

    ProjectManifest m;
    m.name = "shallow";
    m.repo_path = (dir.path() / "shallow").string();
    m.microservice_paths = {"svc-a"};
    m.as_of = "2025-06-01";
    CHECK_THROWS_WITH_AS(enumerate_commits(m), doctest::Contains("shallow"), MiningError);
}

TEST_CASE("unreadable repository is an error")
{
    ProjectManifest m;
    m.name = "gone";
    m.repo_path = "/nonexistent/really-not-here";
    m.microservice_paths = {"svc-a"};
    m.as_of = "2025-06-01";
    CHECK_THROWS_AS(enumerate_commits(m), MiningError);

    TempDir dir; // exists but is not a repository
    m.repo_path = dir.str();
    CHECK_THROWS_WITH_AS(enumerate_commits(m), doctest::Contains("not a git repository"),
                         MiningError);
}

TEST_CASE("commit cache round trip and alias re-resolution")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    repo.write("svc-a/a.c");
    repo.commit("one", "Ada", "old@x.io", day(1));
    auto manifest = repo_manifest(repo, {"svc-a"});

    CommitCache cache((dir.path() / "cache").string());
    bool fresh = false;
    auto mined = mine_commits(manifest, {}, &cache, &fresh);
    CHECK(fresh);
    REQUIRE(mined.size() == 1);
    CHECK(mined[0].author.canonical_key == "old@x.io");

    // warm load, and the alias table is applied at load time
    AliasMap aliases;
    aliases.add("new@x.io", "old@x.io");
    auto warm = mine_commits(manifest, aliases, &cache, &fresh);
    CHECK_FALSE(fresh);
    REQUIRE(warm.size() == 1);
    CHECK(warm[0].author.canonical_key == "new@x.io");
    CHECK(warm[0].sha == mined[0].sha);
}

TEST_CASE("commit record json round trip")
{
    CommitRecord rec;
    rec.sha = std::string(40, 'a');
    rec.timestamp = 123456;
    rec.raw_name = "Ada";
    rec.raw_email = "ada@x.io";
    rec.author = resolve_identity(rec.raw_name, rec.raw_email);
    rec.files = {"svc-a/x.c", "docs/readme.md"};
    auto back = commit_record_from_json(commit_record_to_json(rec));
    CHECK(back.sha == rec.sha);
    CHECK(back.timestamp == rec.timestamp);
    CHECK(back.files == rec.files);
    CHECK(back.author == rec.author);
}

TEST_CASE("path_under respects component boundaries")
{
    CHECK(path_under("svc-1/f.c", "svc-1"));
    CHECK_FALSE(path_under("svc-10/f.c", "svc-1"));
    CHECK_FALSE(path_under("svc-1", "svc-1")); // the directory itself is not under itself
    CHECK(path_under("a/b/f.c", "a/b"));
    CHECK(path_under("a/b/f.c", "a"));
    CHECK_FALSE(path_under("ab/f.c", "a"));
}

namespace {

CommitRecord make_commit(const std::string& sha_seed, std::int64_t ts,
                         std::vector<std::string> files)
{
    CommitRecord c;
    c.sha = sha_seed + std::string(40 - sha_seed.size(), '0');
    c.timestamp = ts;
    c.raw_name = "Ada";
    c.raw_email = "ada@x.io";
    c.author = resolve_identity(c.raw_name, c.raw_email);
    c.files = std::move(files);
    return c;
}

ProjectManifest bare_manifest(std::vector<std::string> services)
{
    ProjectManifest m;
    m.name = "synthetic";
    m.repo_path = "/unused";
    m.microservice_paths = std::move(services);
    m.as_of = "2025-06-01";
    return m;
}

} // namespace

TEST_CASE("attribute_touches dedupes within a commit")
{
    auto manifest = bare_manifest({"svc-a", "svc-b"});
    auto touches = attribute_touches(manifest, {make_commit("1", 100, {"svc-a/x.go", "svc-a/y.go"})});
    REQUIRE(touches.size() == 1);
    CHECK(touches[0].microservice == "svc-a");
    CHECK(touches[0].file_kind == FileKind::Source);
}

TEST_CASE("attribute_touches emits one event per microservice")
{
    auto manifest = bare_manifest({"svc-a", "svc-b"});
    auto touches = attribute_touches(manifest, {make_commit("1", 100, {"svc-a/x.go", "svc-b/z.go"})});
    REQUIRE(touches.size() == 2);
    CHECK(touches[0].microservice == "svc-a"); // name tie-break at equal timestamps
    CHECK(touches[1].microservice == "svc-b");
    CHECK(touches[0].timestamp == touches[1].timestamp);
}

TEST_CASE("attribute_touches ignores unmatched files")
{
    auto manifest = bare_manifest({"svc-a"});
    CHECK(attribute_touches(manifest, {make_commit("1", 100, {"docs/guide.md"})}).empty());
}

TEST_CASE("nested microservice paths use the longest prefix")
{
    auto manifest = bare_manifest({"a", "a/b"});
    auto touches = attribute_touches(manifest, {make_commit("1", 100, {"a/b/f.c"})});
    REQUIRE(touches.size() == 1);
    CHECK(touches[0].microservice == "a/b");

    touches = attribute_touches(manifest, {make_commit("2", 101, {"a/top.c", "a/b/f.c"})});
    REQUIRE(touches.size() == 2); // one per service
}

TEST_CASE("component boundary prevents false attribution")
{
    auto manifest = bare_manifest({"svc-1"});
    CHECK(attribute_touches(manifest, {make_commit("1", 100, {"svc-10/f.c"})}).empty());
}

TEST_CASE("event kind is the strongest kind among matched files")
{
    auto manifest = bare_manifest({"svc-a"});
    auto touches =
        attribute_touches(manifest, {make_commit("1", 100, {"svc-a/notes.md", "svc-a/x.c"})});
    REQUIRE(touches.size() == 1);
    CHECK(touches[0].file_kind == FileKind::Source);

    touches = attribute_touches(manifest, {make_commit("2", 101, {"svc-a/notes.md"})});
    REQUIRE(touches.size() == 1);
    CHECK(touches[0].file_kind == FileKind::Documentation);
}

TEST_CASE("touch attribution soundness and completeness on a mined fixture")
{
    TempDir dir;
    FixtureRepo repo(dir.path() / "repo");
    msmine::test::populate_one_dev_all_ms(repo);
    auto manifest = repo_manifest(repo, {"svc-a", "svc-b", "svc-c"});
    auto commits = enumerate_commits(manifest);
    auto touches = attribute_touches(manifest, commits);

    std::map<std::string, const CommitRecord*> by_sha;
    for (const auto& c : commits)
        by_sha[c.sha] = &c;

    for (const auto& t : touches) {
        REQUIRE(by_sha.count(t.sha));
        bool any = false;
        for (const auto& f : by_sha[t.sha]->files)
            any = any || path_under(f, t.microservice);
        CHECK(any); // soundness
    }
    for (const auto& c : commits) {
        bool has_service_file = false;
        for (const auto& f : c.files)
            for (const auto& ms : manifest.microservice_paths)
                has_service_file = has_service_file || path_under(f, ms);
        if (!has_service_file)
            continue;
        bool has_event = false;
        for (const auto& t : touches)
            has_event = has_event || t.sha == c.sha;
        CHECK(has_event); // completeness
    }
}

TEST_SUITE_END();
