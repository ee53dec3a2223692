#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spinspin/jobs.hpp"

using namespace spinspin;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::string prefix;
    explicit TempDir(const std::string& p) : prefix(p) {}
    std::string path(const std::string& name) const { return "/tmp/" + prefix + "_" + name; }
    void cleanup(const std::string& name) const {
        std::remove(path(name).c_str());
        std::remove((path(name) + ".manifest").c_str());
        std::remove((path(name) + ".log").c_str());
    }
};
}  // namespace

TEST_CASE("config parsing: sections, comments, overrides, errors") {
    const auto cfg = Config::parse(
        "# leading comment\n"
        "top = 1\n"
        "[compare]\n"
        "e = 0.06   # trailing comment\n"
        "lambda1 = 0.05\n"
        "\n"
        "[poincare]\n"
        "k-max = 2000\n",
        "test.cfg");
    CHECK(cfg.get("", "top", "") == "1");
    CHECK(cfg.get_double("compare", "e", 0.0) == 0.06);
    CHECK(cfg.get_double("compare", "lambda1", 0.0) == 0.05);
    CHECK(cfg.get_int("poincare", "k-max", 0) == 2000);
    CHECK(cfg.get("compare", "missing", "fallback") == "fallback");

    CHECK_THROWS_WITH_AS(Config::parse("a = 1\nbroken line\n", "bad.cfg"),
                         "bad.cfg:2: expected key = value", std::runtime_error);
    CHECK_THROWS_WITH_AS(Config::parse("[unterminated\n", "bad.cfg"),
                         "bad.cfg:1: unterminated section header", std::runtime_error);
}

TEST_CASE("17-significant-digit printing round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-300, -42.0}) {
        const auto s = num17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("ring relation classification") {
    CHECK(classify_ring_relation(0.92, 1.08, 0.95, 1.05) == "separated");  // nested
    CHECK(classify_ring_relation(0.9, 0.95, 1.0, 1.05) == "separated");    // disjoint
    CHECK(classify_ring_relation(0.92, 1.08, 0.925, 1.073) == "merged");
    CHECK(classify_ring_relation(0.9, 1.0, 0.95, 1.2) == "partial");
}

TEST_CASE("stability scan job: uniqueness cells and deterministic output") {
    TempDir tmp("spinspin_scan");
    StabilityScanJob job;
    job.m = 3;
    job.e_min = 0.02;
    job.e_max = 0.3;
    job.e_steps = 3;
    job.lambda_min = -0.8;
    job.lambda_max = 0.8;
    job.lambda_steps = 3;
    job.gamma_steps = 120;
    job.workers = 2;
    job.output = tmp.path("stab.csv");
    tmp.cleanup("stab.csv");

    std::vector<StabilityCellRecord> recs;
    CHECK(run_stability_scan(job, &recs) == 0);
    CHECK(recs.size() == 9);  // one solution per cell in the uniqueness region
    for (const auto& r : recs) {
        CHECK(r.solutions == 1);
        CHECK((r.cls == "Elliptic" || r.cls == "Hyperbolic" || r.cls == "ParabolicBand"));
    }
    const auto once = slurp(job.output);

    // byte-identical across worker counts
    tmp.cleanup("stab.csv");
    job.workers = 1;
    CHECK(run_stability_scan(job) == 0);
    CHECK(slurp(job.output) == once);

    // resume from the completed-cell manifest reproduces the same file
    std::remove(job.output.c_str());
    job.resume = true;
    job.workers = 4;
    CHECK(run_stability_scan(job) == 0);
    CHECK(slurp(job.output) == once);
    tmp.cleanup("stab.csv");
}

TEST_CASE("comparison grid job: determinism and resume") {
    TempDir tmp("spinspin_grid");
    CompareGridJob job;
    job.lambda_min = 1e-4;
    job.lambda_max = 1e-2;
    job.lambda_steps = 2;
    job.sigma_min = 1e-4;
    job.sigma_max = 1e-3;
    job.sigma_steps = 2;
    job.spec = make_default_compare_spec();
    job.horizon_revs = 2;
    job.samples_per_rev = 16;
    job.workers = 2;
    job.output = tmp.path("grid.csv");
    tmp.cleanup("grid.csv");

    CHECK(run_compare_grid(job) == 0);
    const auto once = slurp(job.output);
    CHECK(once.find("lambda,sigma,status") == 0);

    tmp.cleanup("grid.csv");
    job.workers = 1;
    CHECK(run_compare_grid(job) == 0);
    CHECK(slurp(job.output) == once);

    std::remove(job.output.c_str());
    job.resume = true;
    CHECK(run_compare_grid(job) == 0);
    CHECK(slurp(job.output) == once);
    tmp.cleanup("grid.csv");
}

TEST_CASE("solution records: CSV schema and JSON round trip") {
    DimensionlessParams p;
    p.e = 0.06;
    p.lambda1 = 0.05;
    ResonanceSpec spec;
    spec.order = {3, 2, 0, 0};
    spec.flavor = ResonanceFlavor::Balanced;
    const auto sol = shoot_balanced(p, spec, {1.5}, ModelKind::KeplerianSpinOrbit);
    REQUIRE(sol.converged);

    TempDir tmp("spinspin_sol");
    const auto path = tmp.path("sol.csv");
    CHECK(write_solutions_csv(path, {sol}) == 0);
    const auto text = slurp(path);
    CHECK(text.find("flavor,m1,n1,m2,n2,alpha,beta1,beta2,") == 0);
    CHECK(text.find("balanced,3,2,0,0,") != std::string::npos);
    std::remove(path.c_str());

    const auto json = solution_json(sol);
    CHECK(json.find("\"converged\": true") != std::string::npos);
    CHECK(json.find("\"m1\": 3") != std::string::npos);
}

TEST_CASE("sync sweep job emits one classified row per sigma") {
    TempDir tmp("spinspin_sync");
    SyncSweepJob job;
    job.base.e = 0.06;
    job.base.lambda1 = job.base.lambda2 = 0.05;
    job.base.qhat1 = job.base.qhat2 = 0.001;
    job.initial.theta1 = job.initial.theta2 = 0.0;
    job.initial.p1 = job.base.C1 * 0.92;
    job.initial.p2 = 0.0;  // set per sigma below via C2; C2 = 0.5 here
    job.initial.p2 = job.base.C2() * 1.05;
    job.sigmas = {1e-3, 0.3};
    job.k_max = 400;
    job.output = tmp.path("sync.csv");

    std::vector<SyncSweepRecord> recs;
    CHECK(run_sync_sweep(job, &recs) == 0);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        CHECK(r.max1 > r.min1);
        CHECK(r.max2 > r.min2);
        CHECK((r.relation == "separated" || r.relation == "merged" || r.relation == "partial"));
    }
    std::remove(job.output.c_str());
}
