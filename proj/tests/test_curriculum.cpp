#include "doctest.h"

#include <memory>
#include <set>

#include "evoforge/curriculum.hpp"

using namespace evoforge;

namespace {

std::shared_ptr<const EnvDefinition> paint() {
    static std::shared_ptr<const EnvDefinition> env =
        std::make_shared<EnvDefinition>(EnvDefinition::load("fixtures/paint-lite.env"));
    return env;
}

std::vector<std::string> start_captions() {
    const EnvDefinition& env = *paint();
    EnvState s = env.reset(env.tasks().front());
    std::vector<std::string> out;
    for (const auto& w : env.observe(s).widgets)
        out.push_back("button '" + w.label + "' on the home screen");
    return out;
}

}  // namespace

TEST_CASE("init_tasks seeds one single-condition task per start-screen widget") {
    ScriptedCurriculumBackend backend(paint());
    auto [guidebook, taskset] = init_tasks(start_captions(), backend);

    CHECK(guidebook.version == 0);
    CHECK(guidebook.entries.size() == start_captions().size());
    CHECK(guidebook.entries[0].feature == paint()->observe(
        paint()->reset(paint()->tasks().front())).widgets[0].label);

    CHECK(taskset.phase == 0);
    REQUIRE(!taskset.tasks.empty());
    std::set<std::string> ids;
    for (const auto& t : taskset.tasks) {
        CHECK(t.difficulty_tier == 0);
        CHECK(paint()->task(t.id).goal.conditions() == 1);
        CHECK(ids.insert(t.id).second);
    }
}

TEST_CASE("init_tasks rejects an empty caption list") {
    ScriptedCurriculumBackend backend(paint());
    CHECK_THROWS_AS(init_tasks({}, backend), EmptyCaptions);
}

TEST_CASE("evolve appends new features and fills with compositions") {
    ScriptedCurriculumBackend backend(paint());
    auto [g0, t0] = init_tasks(start_captions(), backend);

    PhaseFeedback fb;
    for (const auto& t : t0.tasks) fb.exam.push_back({t.id, true});
    fb.change_descriptions = {{"a", "b", "the shape list appeared"},
                              {"a", "b", "the shape list appeared"},  // duplicate
                              {"b", "c", "the color grid appeared"}};

    auto [g1, t1] = evolve(g0, t0, fb, backend, 10);

    CHECK(g1.version == 1);
    CHECK(g1.entries.size() == g0.entries.size() + 2);  // deduplicated
    CHECK(g1.entries[g0.entries.size()].discovered_phase == 1);
    // Append-only: the old entries survive in order.
    for (size_t i = 0; i < g0.entries.size(); ++i)
        CHECK(g1.entries[i].feature == g0.entries[i].feature);

    CHECK(t1.phase == 1);
    REQUIRE(t1.tasks.size() == 10);
    for (const auto& t : t1.tasks) {
        CHECK(t.difficulty_tier == 1);
        CHECK(t.id.rfind("p1_c", 0) == 0);
    }
}

TEST_CASE("evolve retries failed tasks verbatim") {
    ScriptedCurriculumBackend backend(paint());
    auto [g0, t0] = init_tasks(start_captions(), backend);
    REQUIRE(t0.tasks.size() >= 2);

    PhaseFeedback fb;
    fb.exam.push_back({t0.tasks[0].id, false});
    for (size_t i = 1; i < t0.tasks.size(); ++i) fb.exam.push_back({t0.tasks[i].id, true});

    auto [g1, t1] = evolve(g0, t0, fb, backend, 6);
    REQUIRE(!t1.tasks.empty());
    CHECK(t1.tasks[0].id == t0.tasks[0].id);
    CHECK(t1.tasks[0].text == t0.tasks[0].text);
    CHECK(t1.tasks[0].difficulty_tier == t0.tasks[0].difficulty_tier);
    CHECK(t1.tasks.size() == 6);
}

TEST_CASE("evolve rejects exam results for unknown tasks") {
    ScriptedCurriculumBackend backend(paint());
    auto [g0, t0] = init_tasks(start_captions(), backend);
    PhaseFeedback fb;
    fb.exam.push_back({"not_a_task", true});
    CHECK_THROWS_AS(evolve(g0, t0, fb, backend, 4), InconsistentFeedback);
}

TEST_CASE("cap_descriptions deduplicates then truncates") {
    std::vector<ChangeDescription> cds = {
        {"a", "b", "x"}, {"b", "c", "y"}, {"c", "d", "x"}, {"d", "e", "z"}, {"e", "f", "w"}};
    auto capped = cap_descriptions(cds, 3);
    REQUIRE(capped.size() == 3);
    CHECK(capped[0].description == "x");
    CHECK(capped[1].description == "y");
    CHECK(capped[2].description == "z");
    CHECK_THROWS_AS(cap_descriptions(cds, 0), ConfigError);
}

TEST_CASE("guidebook and task set round-trip through their text formats") {
    Guidebook g;
    g.version = 3;
    g.entries = {{"Shapes", "click the 'Shapes' button\nthen wait", 0},
                 {"Colors", "open the color grid", 2}};
    Guidebook back = guidebook_from_text(guidebook_to_text(g));
    CHECK(back.version == 3);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].feature == "Shapes");
    CHECK(back.entries[0].how_to == "click the 'Shapes' button\nthen wait");
    CHECK(back.entries[1].discovered_phase == 2);

    TaskSet ts;
    ts.phase = 2;
    ts.tasks = {{"t1", "do a thing", 1, 2}, {"t2", "do another", 2, 2}};
    TaskSet ts_back = taskset_from_json(taskset_to_json(ts));
    CHECK(ts_back.phase == 2);
    REQUIRE(ts_back.tasks.size() == 2);
    CHECK(ts_back.tasks[0].id == "t1");
    CHECK(ts_back.tasks[1].difficulty_tier == 2);
    CHECK_THROWS_AS(taskset_from_json("nope"), ConfigError);
}

TEST_CASE("scripted backend is deterministic") {
    ScriptedCurriculumBackend a(paint()), b(paint());
    auto ra = a.init_tasks(start_captions());
    auto rb = b.init_tasks(start_captions());
    CHECK(taskset_to_json(ra.second) == taskset_to_json(rb.second));
    CHECK(guidebook_to_text(ra.first) == guidebook_to_text(rb.first));

    PhaseFeedback fb;
    for (const auto& t : ra.second.tasks) fb.exam.push_back({t.id, false});
    auto ea = a.evolve(ra.first, ra.second, fb, 8);
    auto eb = b.evolve(rb.first, rb.second, fb, 8);
    CHECK(taskset_to_json(ea.second) == taskset_to_json(eb.second));
}
