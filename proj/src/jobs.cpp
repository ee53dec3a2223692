#include "spinspin/jobs.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace spinspin {

namespace {
constexpr double TWO_PI = 6.283185307179586476925286766559;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string cls_name(StabilityClass c) {
    switch (c) {
        case StabilityClass::Elliptic: return "Elliptic";
        case StabilityClass::Hyperbolic: return "Hyperbolic";
        case StabilityClass::ParabolicBand: return "ParabolicBand";
    }
    return "?";
}

ModelKind parse_model(const std::string& s) {
    if (s == "spin-orbit") return ModelKind::KeplerianSpinOrbit;
    if (s == "spherical-companion") return ModelKind::SphericalCompanion;
    if (s == "spin-spin") return ModelKind::KeplerianSpinSpin;
    throw std::runtime_error("unknown model '" + s + "'");
}

std::vector<double> axis(double lo, double hi, int steps, bool log_scale) {
    std::vector<double> v;
    if (steps <= 1) {
        v.push_back(lo);
        return v;
    }
    for (int i = 0; i < steps; ++i) {
        const double s = static_cast<double>(i) / (steps - 1);
        v.push_back(log_scale ? std::exp(std::log(lo) + s * (std::log(hi) - std::log(lo)))
                              : lo + s * (hi - lo));
    }
    return v;
}

// completed-cell manifest: one line per cell, "<idx>;<row>;<row>;..."
std::map<std::size_t, std::vector<std::string>> load_manifest(const std::string& path) {
    std::map<std::size_t, std::vector<std::string>> done;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        if (!std::getline(ss, field, ';')) continue;
        std::vector<std::string> rows;
        std::size_t idx = 0;
        try {
            idx = std::stoull(field);
        } catch (...) {
            continue;
        }
        while (std::getline(ss, field, ';')) rows.push_back(field);
        done[idx] = std::move(rows);
    }
    return done;
}

class ManifestWriter {
  public:
    explicit ManifestWriter(const std::string& path) : out_(path, std::ios::app) {}
    void record(std::size_t idx, const std::vector<std::string>& rows) {
        std::lock_guard<std::mutex> lock(mu_);
        out_ << idx;
        for (const auto& r : rows) out_ << ';' << r;
        out_ << '\n';
        out_.flush();
    }

  private:
    std::ofstream out_;
    std::mutex mu_;
};

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    return std::stod(get(section, key, ""));
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    return std::stoi(get(section, key, ""));
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for_cells(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 0) workers = default_workers();
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------

int run_stability_scan(const StabilityScanJob& job, std::vector<StabilityCellRecord>* out) {
    const auto es = axis(job.e_min, job.e_max, job.e_steps, false);
    const auto ls = axis(job.lambda_min, job.lambda_max, job.lambda_steps, false);
    const ModelKind kind = parse_model(job.model);

    ResonanceSpec spec;
    spec.order = {job.m, 2, 0, 0};
    spec.flavor = ResonanceFlavor::Balanced;
    spec.validate();
    auto grange = default_gamma_range(spec);
    if (job.gamma_min) grange.first = *job.gamma_min;
    if (job.gamma_max) grange.second = *job.gamma_max;

    const std::size_t n_cells = es.size() * ls.size();
    std::vector<std::vector<std::string>> rows(n_cells);
    std::vector<std::vector<StabilityCellRecord>> recs(n_cells);
    std::atomic<int> failures{0};

    std::map<std::size_t, std::vector<std::string>> done;
    if (job.resume) done = load_manifest(job.output + ".manifest");
    ManifestWriter manifest(job.output + ".manifest");
    std::ofstream log(job.output + ".log", std::ios::app);
    std::mutex log_mu;

    auto cell_fn = [&](std::size_t idx) {
        if (const auto it = done.find(idx); it != done.end()) {
            rows[idx] = it->second;
            return;
        }
        const std::size_t ie = idx / ls.size();
        const std::size_t il = idx % ls.size();
        const double e = es[ie], lam = ls[il];

        DimensionlessParams p;
        p.e = e;
        p.C1 = 0.5;
        p.lambda1 = lam;
        p.lambda2 = 0.0;
        p.sigma1 = job.sigma;
        p.qhat1 = job.qhat;
        p.qhat2 = 0.0;

        std::vector<std::string> cell_rows;
        std::vector<StabilityCellRecord> cell_recs;
        try {
            ShootOptions opt;
            opt.integ = job.integ;
            auto sols = enumerate_solutions(p, spec, kind, grange.first, grange.second,
                                            job.gamma_steps, opt);
            if (sols.empty()) {
                StabilityCellRecord r{e, lam, 0, 0, 0.0, 0.0, 0.0, "None"};
                std::ostringstream os;
                os << num17(e) << ',' << num17(lam) << ",0,0,0,0,0,None";
                cell_rows.push_back(os.str());
                cell_recs.push_back(r);
            }
            int branch = 0;
            for (const auto& sol : sols) {
                double trace;
                if (kind == ModelKind::KeplerianSpinSpin) {
                    SpinSystem sys(p, kind);
                    SpinState s0;
                    s0.theta1 = spec.type.beta1;
                    s0.theta2 = 0.0;
                    s0.p1 = p.C1 * sol.v0[0];
                    s0.p2 = 0.0;
                    const auto mono = monodromy_lph(sys, s0, TWO_PI, job.integ);
                    trace = mono.matrix(0, 0) + mono.matrix(2, 2);  // body-1 block
                } else {
                    SingleSpinSystem sys(p, 1, kind == ModelKind::SphericalCompanion);
                    const auto mono =
                        monodromy_hill(sys, spec.type.beta1, sol.v0[0], 0.0, TWO_PI, job.integ);
                    trace = mono.matrix.trace();
                }
                // velocity at t = pi recovered for the diagram's third axis
                StabilityCellRecord r;
                r.e = e;
                r.lambda = lam;
                r.branch = branch;
                r.solutions = static_cast<int>(sols.size());
                r.v0 = sol.v0[0];
                r.gamma = 0.0;
                r.trace = trace;
                r.cls = cls_name(classify_hill_trace(trace));
                if (kind == ModelKind::KeplerianSpinSpin) {
                    SpinSystem sys(p, kind);
                    std::vector<double> y = {spec.type.beta1, 0.0, p.C1 * sol.v0[0], 0.0};
                    if (integrate_final(sys.rhs_fn(), y, 0.0, 3.14159265358979323846, job.integ) ==
                        IntegrationStatus::Ok)
                        r.gamma = y[2] / p.C1;
                } else {
                    SingleSpinSystem sys(p, 1, kind == ModelKind::SphericalCompanion);
                    std::vector<double> y = {spec.type.beta1, sys.C() * sol.v0[0]};
                    if (integrate_final(sys.rhs_fn(), y, 0.0, 3.14159265358979323846, job.integ) ==
                        IntegrationStatus::Ok)
                        r.gamma = y[1] / sys.C();
                }
                std::ostringstream os;
                os << num17(e) << ',' << num17(lam) << ',' << branch << ',' << sols.size() << ','
                   << num17(r.gamma) << ',' << num17(r.v0) << ',' << num17(trace) << ',' << r.cls;
                cell_rows.push_back(os.str());
                cell_recs.push_back(r);
                ++branch;
            }
        } catch (const std::exception& ex) {
            failures.fetch_add(1);
            std::lock_guard<std::mutex> lock(log_mu);
            log << "cell " << idx << " (e=" << e << ", lambda=" << lam << ") failed: " << ex.what()
                << '\n';
            std::ostringstream os;
            os << num17(e) << ',' << num17(lam) << ",0,0,0,0,0,Failed";
            cell_rows.push_back(os.str());
        }
        rows[idx] = cell_rows;
        recs[idx] = cell_recs;
        manifest.record(idx, cell_rows);
    };

    parallel_for_cells(n_cells, job.workers, cell_fn);

    std::ofstream csv(job.output);
    if (!csv) return 3;
    csv << "e,lambda1,branch,solutions,gamma,v0,trace,class\n";
    for (const auto& cell : rows)
        for (const auto& r : cell) csv << r << '\n';
    log << "stability scan complete: " << n_cells << " cells, " << failures.load()
        << " failures\n";

    if (out) {
        out->clear();
        for (auto& cr : recs)
            for (auto& r : cr) out->push_back(r);
    }
    return failures.load() == 0 ? 0 : 2;
}

int run_poincare(const PoincareJob& job) {
    const ModelKind kind = parse_model(job.model);
    if (job.initials.empty()) return 3;
    int failures = 0;
    for (std::size_t i = 0; i < job.initials.size(); ++i) {
        std::string path = job.output;
        if (job.initials.size() > 1) {
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "_%03zu", i);
            const auto dot = path.rfind('.');
            path = dot == std::string::npos ? path + suffix
                                            : path.substr(0, dot) + suffix + path.substr(dot);
        }
        const auto [o1, o2] = poincare_map(job.params, kind, job.initials[i], job.k_max,
                                           job.integ, job.mod_pi);
        if (o1.truncated) ++failures;
        std::ofstream csv(path);
        if (!csv) return 3;
        csv << "k,body,theta_wrapped,theta_dot\n";
        for (std::size_t k = 0; k < o1.points.size(); ++k)
            csv << k << ",1," << num17(o1.points[k].first) << ',' << num17(o1.points[k].second)
                << '\n';
        for (std::size_t k = 0; k < o2.points.size(); ++k)
            csv << k << ",2," << num17(o2.points[k].first) << ',' << num17(o2.points[k].second)
                << '\n';
    }
    return failures == 0 ? 0 : 2;
}

ResonanceSpec make_default_compare_spec() {
    ResonanceSpec spec;
    spec.order = {2, 2, 3, 2};  // (1:1, 3:2) stated as a balanced (2:2, 3:2)
    spec.flavor = ResonanceFlavor::Balanced;
    spec.type = {0.0, 0.0, 0.0};
    return spec;
}

int run_compare_grid(const CompareGridJob& job, ComparisonGridResult* out) {
    const auto lambdas = axis(job.lambda_min, job.lambda_max, job.lambda_steps, true);
    const auto sigmas = axis(job.sigma_min, job.sigma_max, job.sigma_steps, true);

    ComparisonConfig cfg;
    cfg.integ = job.integ;
    cfg.samples_per_rev = job.samples_per_rev;

    const std::size_t n_cells = lambdas.size() * sigmas.size();
    std::vector<std::string> rows(n_cells);
    std::vector<ComparisonGridCell> cells(n_cells);
    std::atomic<int> failures{0};

    std::map<std::size_t, std::vector<std::string>> done;
    if (job.resume) done = load_manifest(job.output + ".manifest");
    ManifestWriter manifest(job.output + ".manifest");
    std::ofstream log(job.output + ".log", std::ios::app);
    std::mutex log_mu;

    auto cell_fn = [&](std::size_t idx) {
        if (const auto it = done.find(idx); it != done.end() && !it->second.empty()) {
            rows[idx] = it->second.front();
            return;
        }
        const std::size_t is = idx / lambdas.size();
        const std::size_t il = idx % lambdas.size();
        auto cell = compare_grid_cell(lambdas[il], sigmas[is], job.spec, job.horizon_revs, cfg);
        std::ostringstream os;
        os << num17(cell.lambda) << ',' << num17(cell.sigma) << ',';
        switch (cell.status) {
            case GridCellStatus::Ok:
                os << "ok," << num17(cell.log10_max_abs_delta_e) << ','
                   << num17(cell.log10_max_abs_delta_a) << ',';
                break;
            case GridCellStatus::Collision:
                os << "collision,,," << num17(cell.collision_time);
                break;
            case GridCellStatus::Failed:
                os << "failed,,,";
                failures.fetch_add(1);
                {
                    std::lock_guard<std::mutex> lock(log_mu);
                    log << "cell " << idx << " failed: " << cell.error << '\n';
                }
                break;
        }
        rows[idx] = os.str();
        cells[idx] = std::move(cell);
        manifest.record(idx, {rows[idx]});
    };

    parallel_for_cells(n_cells, job.workers, cell_fn);

    std::ofstream csv(job.output);
    if (!csv) return 3;
    csv << "lambda,sigma,status,log10_max_abs_delta_e,log10_max_abs_delta_a,collision_time\n";
    for (const auto& r : rows) csv << r << '\n';
    log << "comparison grid complete: " << n_cells << " cells, " << failures.load()
        << " failures\n";

    if (out) {
        out->lambdas = lambdas;
        out->sigmas = sigmas;
        out->cells = std::move(cells);
    }
    return failures.load() == 0 ? 0 : 2;
}

std::string classify_ring_relation(double min1, double max1, double min2, double max2) {
    const double merge_tol = 0.02, gap = 0.01;
    if (std::abs(min1 - min2) <= merge_tol && std::abs(max1 - max2) <= merge_tol)
        return "merged";
    const bool disjoint = max2 < min1 || max1 < min2;
    const bool nested_21 = min2 > min1 + gap && max2 < max1 - gap;
    const bool nested_12 = min1 > min2 + gap && max1 < max2 - gap;
    if (disjoint || nested_21 || nested_12) return "separated";
    return "partial";
}

int run_sync_sweep(const SyncSweepJob& job, std::vector<SyncSweepRecord>* out) {
    std::ofstream csv(job.output);
    if (!csv) return 3;
    csv << "sigma,theta_dot_min_1,theta_dot_max_1,theta_dot_min_2,theta_dot_max_2,relation\n";
    int failures = 0;
    std::vector<SyncSweepRecord> recs;
    for (double s : job.sigmas) {
        DimensionlessParams p = job.base;
        p.sigma1 = s;
        try {
            const auto [o1, o2] = poincare_map(p, ModelKind::KeplerianSpinSpin, job.initial,
                                               job.k_max, job.integ, false);
            const auto [lo1, hi1] = ring_extent(o1);
            const auto [lo2, hi2] = ring_extent(o2);
            SyncSweepRecord r{s, lo1, hi1, lo2, hi2,
                              classify_ring_relation(lo1, hi1, lo2, hi2)};
            recs.push_back(r);
            csv << num17(s) << ',' << num17(lo1) << ',' << num17(hi1) << ',' << num17(lo2) << ','
                << num17(hi2) << ',' << r.relation << '\n';
        } catch (const std::exception&) {
            ++failures;
            csv << num17(s) << ",,,,,failed\n";
        }
    }
    if (out) *out = std::move(recs);
    return failures == 0 ? 0 : 2;
}

namespace {
std::string spec_csv_fields(const ResonanceSpec& s) {
    std::ostringstream os;
    os << (s.flavor == ResonanceFlavor::Balanced ? "balanced" : "standard") << ',' << s.order.m1
       << ',' << s.order.n1 << ',' << s.order.m2 << ',' << s.order.n2 << ',' << num17(s.type.alpha)
       << ',' << num17(s.type.beta1) << ',' << num17(s.type.beta2);
    return os.str();
}
}  // namespace

int write_solutions_csv(const std::string& path, const std::vector<ResonanceSolution>& sols) {
    std::ofstream csv(path);
    if (!csv) return 3;
    csv << "flavor,m1,n1,m2,n2,alpha,beta1,beta2,"
           "e,C1,lambda1,lambda2,sigma1,qhat1,qhat2,v0_1,v0_2,residual,converged\n";
    for (const auto& s : sols) {
        const auto& p = s.params;
        csv << spec_csv_fields(s.spec) << ',' << num17(p.e) << ',' << num17(p.C1) << ','
            << num17(p.lambda1) << ',' << num17(p.lambda2) << ',' << num17(p.sigma1) << ','
            << num17(p.qhat1) << ',' << num17(p.qhat2) << ',' << num17(s.v0[0]) << ','
            << (s.v0.size() > 1 ? num17(s.v0[1]) : "") << ',' << num17(s.residual) << ','
            << (s.converged ? 1 : 0) << '\n';
    }
    return 0;
}

std::string solution_json(const ResonanceSolution& sol) {
    nlohmann::json j;
    j["spec"] = {{"flavor", sol.spec.flavor == ResonanceFlavor::Balanced ? "balanced" : "standard"},
                 {"m1", sol.spec.order.m1},
                 {"n1", sol.spec.order.n1},
                 {"m2", sol.spec.order.m2},
                 {"n2", sol.spec.order.n2},
                 {"alpha", sol.spec.type.alpha},
                 {"beta1", sol.spec.type.beta1},
                 {"beta2", sol.spec.type.beta2}};
    j["params"] = {{"e", sol.params.e},         {"C1", sol.params.C1},
                   {"lambda1", sol.params.lambda1}, {"lambda2", sol.params.lambda2},
                   {"sigma1", sol.params.sigma1},   {"qhat1", sol.params.qhat1},
                   {"qhat2", sol.params.qhat2}};
    j["v0"] = sol.v0;
    j["residual"] = sol.residual;
    j["converged"] = sol.converged;
    j["at_bifurcation"] = sol.at_bifurcation;
    return j.dump(2);
}

int write_floquet_csv(const std::string& path, const FloquetComparison& fc) {
    std::ofstream csv(path);
    if (!csv) return 3;
    csv << "block,re,im,modulus,argument\n";
    auto emit = [&](const char* block, const std::vector<std::complex<double>>& ms) {
        for (const auto& m : ms)
            csv << block << ',' << num17(m.real()) << ',' << num17(m.imag()) << ','
                << num17(std::abs(m)) << ',' << num17(std::arg(m)) << '\n';
    };
    emit("keplerian_spin", fc.keplerian_spin.multipliers);
    emit("keplerian_orbit", fc.keplerian_orbit);
    emit("full", fc.full.multipliers);
    return 0;
}

}  // namespace spinspin
