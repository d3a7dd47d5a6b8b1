// aahbath — experiment runner: spectrum scans, kernel evolution, bath
// snapshots, observables, oracle cross-checks, and figure presets producing
// plot-ready data tables.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aahbath/bath_field.hpp"
#include "aahbath/config.hpp"
#include "aahbath/green.hpp"
#include "aahbath/io.hpp"
#include "aahbath/model.hpp"
#include "aahbath/observables.hpp"
#include "aahbath/oracle.hpp"
#include "aahbath/propagator.hpp"
#include "aahbath/spectrum.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace aahbath;
using cxd = std::complex<double>;

namespace {

struct RunContext {
    ParsedConfig parsed;
    std::string out_dir;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, double>> timings;   // phase, ms

    const ModelConfig& cfg() const { return parsed.model; }
    std::string hash() const { return config_hash_hex(parsed.model); }

    double extra_num(const std::string& key, double fallback) const {
        auto it = parsed.extra.find(key);
        return it == parsed.extra.end() ? fallback : std::stod(it->second);
    }
    int extra_int(const std::string& key, int fallback) const {
        auto it = parsed.extra.find(key);
        return it == parsed.extra.end() ? fallback : std::stoi(it->second);
    }
    std::string extra_str(const std::string& key, const std::string& fallback) const {
        auto it = parsed.extra.find(key);
        return it == parsed.extra.end() ? fallback : it->second;
    }
    std::vector<double> extra_list(const std::string& key) const {
        std::vector<double> out;
        auto it = parsed.extra.find(key);
        if (it == parsed.extra.end()) return out;
        std::istringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    }
};

class PhaseTimer {
public:
    PhaseTimer(RunContext& ctx, std::string name)
        : ctx_(ctx), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        const auto ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start_).count();
        ctx_.timings.emplace_back(name_, ms);
    }
private:
    RunContext& ctx_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

void emit(RunContext& ctx, const io::Table& t, const std::string& name) {
    const std::string path = ctx.out_dir + "/" + name;
    io::export_table(t, ctx.cfg(), path);
    ctx.outputs.push_back(path);
}

void write_manifest(const RunContext& ctx, const std::string& command) {
    std::ostringstream os;
    os << "command = " << command << "\n";
    os << "cfg_hash = " << ctx.hash() << "\n";
    os << "config:\n" << canonical_config(ctx.cfg());
    os << "outputs:\n";
    for (const auto& o : ctx.outputs) os << "  " << o << "\n";
    os << "timings_ms:\n";
    for (const auto& [k, v] : ctx.timings) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        os << "  " << k << " = " << buf << "\n";
    }
    io::write_file_atomic(ctx.out_dir + "/manifest.txt", os.str());
}

// ---------------------------------------------------------------------------

int run_spectrum(RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg();
    const int grid_re = ctx.extra_int("grid_re", 400);
    const int grid_im = ctx.extra_int("grid_im", 200);
    const double im_lo = ctx.extra_num("scan_im_lo", -0.5);
    spectrum::SpectrumResult res;
    {
        PhaseTimer t(ctx, "scan");
        const double margin = 1e-3;
        spectrum::ScanRegion region{-cfg.d + margin, cfg.d - margin, im_lo, 0.0};
        res = spectrum::scan_complex_roots(cfg, region, grid_re, grid_im);
    }
    {
        PhaseTimer t(ctx, "bound_states");
        const double outer = cfg.d + std::abs(cfg.Delta) + 2.0 * std::abs(cfg.lambda) + 1.0;
        auto lo = spectrum::find_bound_states(cfg, -outer, -cfg.d - 1e-3);
        auto hi = spectrum::find_bound_states(cfg, cfg.d + 1e-3, outer);
        res.bound_states = std::move(lo);
        res.bound_states.insert(res.bound_states.end(), hi.begin(), hi.end());
    }
    io::Table t;
    t.columns = {"e_re", "e_im", "class", "residual", "overlap1", "overlap2", "overlap3"};
    t.meta = {"class: 0 = bound state, 1 = resonance",
              "region Re [" + std::to_string(-cfg.d) + "," + std::to_string(cfg.d) +
                  "] Im [" + std::to_string(im_lo) + ",0] grid " + std::to_string(grid_re) +
                  "x" + std::to_string(grid_im)};
    auto top3 = [](const Eigen::VectorXd& ov) {
        Eigen::VectorXd s = ov;
        std::array<double, 3> out{0.0, 0.0, 0.0};
        for (int k = 0; k < 3 && k < s.size(); ++k) {
            int best = 0;
            for (int q = 1; q < s.size(); ++q)
                if (s(q) > s(best)) best = q;
            out[k] = s(best);
            s(best) = -1.0;
        }
        return out;
    };
    for (const auto& b : res.bound_states) {
        const auto o = top3(b.overlaps);
        t.rows.push_back({b.e, 0.0, 0.0, b.residual, o[0], o[1], o[2]});
    }
    for (const auto& r : res.resonances) {
        const auto o = top3(r.overlaps);
        t.rows.push_back({r.e.real(), r.e.imag(), 1.0, r.residual, o[0], o[1], o[2]});
    }
    emit(ctx, t, "spectrum_" + ctx.hash() + ".dat");

    io::Table u;
    u.columns = {"e_re", "e_im", "det_abs", "cr_defect"};
    u.meta = {"unresolved scan candidates (no accepted root)"};
    for (const auto& c : res.unresolved)
        u.rows.push_back({c.center.real(), c.center.imag(), c.det_abs, c.cr_defect});
    emit(ctx, u, "spectrum_unresolved_" + ctx.hash() + ".dat");
    return 0;
}

prop::Trajectory evolve_trajectory(RunContext& ctx) {
    const int n0 = ctx.extra_int("n0", 1);
    PhaseTimer t(ctx, "propagate");
    return prop::propagate_site(ctx.cfg(), n0);
}

void export_trajectory(RunContext& ctx, const prop::Trajectory& traj, const std::string& name) {
    io::Table t;
    t.columns = {"t"};
    for (int n = 1; n <= traj.cfg.N_s; ++n) {
        t.columns.push_back("re_a" + std::to_string(n));
        t.columns.push_back("im_a" + std::to_string(n));
    }
    t.meta = {"n0=" + std::to_string(ctx.extra_int("n0", 1))};
    for (int i = 0; i <= traj.steps(); ++i) {
        std::vector<double> row{traj.times(i)};
        for (int n = 0; n < traj.cfg.N_s; ++n) {
            row.push_back(traj.amps(i, n).real());
            row.push_back(traj.amps(i, n).imag());
        }
        t.rows.push_back(std::move(row));
    }
    emit(ctx, t, name);
}

int run_evolve(RunContext& ctx) {
    const auto traj = evolve_trajectory(ctx);
    export_trajectory(ctx, traj, "trajectory_" + ctx.hash() + ".dat");
    if (ctx.extra_str("check_dt", "no") == "yes") {
        PhaseTimer t(ctx, "dt_probe");
        const double drift =
            prop::dt_convergence_probe(ctx.cfg(), ctx.extra_int("n0", 1),
                                       std::min(20.0, ctx.cfg().t_max));
        if (drift > 1e-4) {
            std::cerr << "error: dt too large (halving changes final norm by " << drift << ")\n";
            return 1;
        }
    }
    return 0;
}

int run_bath(RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg();
    auto traj = evolve_trajectory(ctx);
    std::vector<double> times = ctx.extra_list("snapshot_times");
    if (times.empty()) times = {cfg.t_max};
    const std::string method_s = ctx.extra_str("method", "auto");
    bath::SnapshotMethod method = bath::SnapshotMethod::automatic;
    if (method_s == "direct") method = bath::SnapshotMethod::direct;
    else if (method_s == "spectral") method = bath::SnapshotMethod::spectral;

    std::vector<bath::BathSnapshot> snaps;
    for (double t : times) {
        // snap to the trajectory grid
        const double tg = std::round(t / cfg.dt) * cfg.dt;
        PhaseTimer pt(ctx, "snapshot_t" + std::to_string(tg));
        snaps.push_back(bath::bath_snapshot_full(tg, traj, method));

        if (ctx.extra_str("diagonal_profile", "no") != "yes") {
            io::Table st;
            st.columns = {};
            for (int q = 0; q < cfg.d; ++q)
                st.columns.push_back(std::string(1, static_cast<char>('x' + q)));
            st.columns.push_back("absq");
            char tb[32];
            std::snprintf(tb, sizeof(tb), "%.6f", tg);
            st.meta = {"t=" + std::string(tb),
                       "region full bath box, half extent " + std::to_string((cfg.N_b - 1) / 2)};
            const auto& s = snaps.back();
            int ext[3] = {1, 1, 1};
            for (int q = 0; q < cfg.d; ++q) ext[q] = s.hi[q] - s.lo[q] + 1;
            for (size_t idx = 0; idx < s.field.size(); ++idx) {
                std::vector<double> row;
                size_t rem = idx;
                int coords[3];
                for (int q = cfg.d - 1; q >= 0; --q) {
                    coords[q] = s.lo[q] + static_cast<int>(rem % ext[q]);
                    rem /= ext[q];
                }
                for (int q = 0; q < cfg.d; ++q) row.push_back(coords[q]);
                row.push_back(std::norm(s.field[idx]));
                st.rows.push_back(std::move(row));
            }
            std::snprintf(tb, sizeof(tb), "%g", tg);
            emit(ctx, st, "snapshot_t" + std::string(tb) + "_" + ctx.hash() + ".dat");
        } else {
            // body-diagonal profile r = x (1,..,1)
            io::Table st;
            st.columns = {"x", "absq"};
            char tb[32];
            std::snprintf(tb, sizeof(tb), "%.6f", tg);
            st.meta = {"t=" + std::string(tb), "body-diagonal profile"};
            const int half = (cfg.N_b - 1) / 2;
            for (int x = -half; x <= half; ++x) {
                const cxd v = bath::beta_r(std::vector<int>(cfg.d, x), tg, traj);
                st.rows.push_back({static_cast<double>(x), std::norm(v)});
            }
            std::snprintf(tb, sizeof(tb), "%g", tg);
            emit(ctx, st, "diagonal_t" + std::string(tb) + "_" + ctx.hash() + ".dat");
        }
    }
    if (ctx.extra_str("variance_fit", "no") == "yes") {
        PhaseTimer pt(ctx, "variance_fit");
        const double wlo = ctx.extra_num("fit_window_lo", 5.0);
        const double whi = ctx.extra_num("fit_window_hi", cfg.d == 3 ? 30.0 : 100.0);
        const auto bv = obs::bath_variance(snaps, cfg, wlo, whi);
        io::Table vt;
        vt.columns = {"t", "var_x"};
        char b[160];
        std::snprintf(b, sizeof(b), "fit: nu=%.6f intercept=%.6f r2=%.6f window=[%g,%g]",
                      bv.nu_fit.slope, bv.nu_fit.intercept, bv.nu_fit.r_squared, wlo, whi);
        vt.meta = {b};
        for (size_t i = 0; i < bv.t.size(); ++i) vt.rows.push_back({bv.t[i], bv.var[i]});
        emit(ctx, vt, "bath_variance_" + ctx.hash() + ".dat");
    }
    return 0;
}

int run_observe(RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg();
    const int n0 = ctx.extra_int("n0", 1);
    const auto traj = evolve_trajectory(ctx);
    PhaseTimer t(ctx, "observables");

    auto series_table = [&](const Eigen::VectorXd& v, const std::string& label,
                            const std::vector<std::string>& extra_meta = {}) {
        io::Table tt;
        tt.columns = {"t", "value"};
        tt.meta = {"observable=" + label + " n0=" + std::to_string(n0)};
        for (const auto& m : extra_meta) tt.meta.push_back(m);
        for (int i = 0; i <= traj.steps(); ++i) tt.rows.push_back({traj.times(i), v(i)});
        emit(ctx, tt, label + "_" + ctx.hash() + ".dat");
    };

    const auto rev = obs::revival_probability(traj, n0);
    const double wlo = ctx.extra_num("fit_window_lo", 5.0);
    const double whi = ctx.extra_num("fit_window_hi", std::min(100.0, cfg.t_max));
    const auto cls = obs::decay_shape(traj.times, rev, wlo, whi);
    char fb[200];
    std::snprintf(fb, sizeof(fb), "decay: class=%s slope=%.8f r2=%.6f window=[%g,%g]",
                  obs::to_string(cls.shape), cls.fit.slope, cls.fit.r_squared, wlo, whi);
    series_table(rev, "revival", {fb});
    series_table(obs::ipr(traj), "ipr");
    series_table(obs::ipr_normalized(traj), "ipr_normalized");
    series_table(obs::position_variance(traj), "position_variance");

    io::Table pk;
    pk.columns = {"n", "dist", "p_f", "tau_f"};
    bool fit_ok = true;
    try {
        const auto wf = obs::wavefront_fit(traj, n0);
        std::snprintf(fb, sizeof(fb), "wavefront fit: slope=%.8f velocity=%.6f r2=%.6f",
                      wf.slope, 1.0 / wf.slope, wf.r_squared);
        pk.meta = {fb};
    } catch (const std::exception&) {
        pk.meta = {"wavefront fit: unavailable (too few reached sites)"};
        fit_ok = false;
    }
    (void)fit_ok;
    for (int n = 1; n <= cfg.N_s; ++n) {
        const auto p = obs::first_peak(traj, n);
        if (!p) continue;
        pk.rows.push_back({static_cast<double>(n), static_cast<double>(std::abs(n - n0)),
                           p->p_f, p->tau_f});
    }
    emit(ctx, pk, "first_peak_" + ctx.hash() + ".dat");
    return 0;
}

int run_oracle_check(RunContext& ctx) {
    const ModelConfig& cfg = ctx.cfg();
    const int n0 = ctx.extra_int("n0", 1);
    const double horizon =
        std::min({cfg.t_max, ctx.extra_num("t_compare", 80.0),
                  0.8 * oracle::recurrence_time(cfg)});

    ModelConfig run_cfg = cfg;
    run_cfg.t_max = horizon;
    prop::Trajectory traj;
    {
        PhaseTimer t(ctx, "kernel_propagation");
        traj = prop::propagate_site(run_cfg, n0);
    }
    std::vector<double> times;
    for (double t = 0.0; t <= horizon + 1e-9; t += 1.0) times.push_back(t);
    std::vector<Eigen::VectorXcd> exact;
    oracle::FullHamiltonian H;
    {
        PhaseTimer t(ctx, "oracle_propagation");
        H = oracle::build_full(run_cfg);
        exact = oracle::exact_propagate(H, oracle::chain_site_state(H, n0), times);
    }
    double worst = 0.0;
    io::Table t;
    t.columns = {"t", "max_dev"};
    for (size_t k = 0; k < times.size(); ++k) {
        const int idx = static_cast<int>(times[k] / cfg.dt + 0.5);
        double dev = 0.0;
        for (int n = 0; n < cfg.N_s; ++n)
            dev = std::max(dev, std::abs(traj.amps(idx, n) - exact[k](n)));
        worst = std::max(worst, dev);
        t.rows.push_back({times[k], dev});
    }
    char fb[120];
    std::snprintf(fb, sizeof(fb), "method=oracle max_deviation=%.3e horizon=%g n0=%d",
                  worst, horizon, n0);
    t.meta = {fb};
    emit(ctx, t, "oracle_check_" + ctx.hash() + ".dat");
    std::cout << "oracle-check: max deviation " << worst << " over t <= " << horizon << "\n";
    if (worst >= 1e-3) {
        std::cerr << "error: kernel propagation deviates from the exact oracle by " << worst
                  << "\n";
        return 1;
    }
    return 0;
}

int dispatch(const std::string& command, RunContext& ctx) {
    if (command == "spectrum") return run_spectrum(ctx);
    if (command == "evolve") return run_evolve(ctx);
    if (command == "bath") return run_bath(ctx);
    if (command == "observe") return run_observe(ctx);
    if (command == "oracle-check") return run_oracle_check(ctx);
    throw std::invalid_argument("unknown command: " + command);
}

int run_figure(const std::string& fig, const std::string& presets_dir,
               const std::string& out_dir, double dt_override, double tmax_override) {
    const fs::path dir = fs::path(presets_dir) / fig;
    if (!fs::is_directory(dir)) {
        std::cerr << "error: no presets for " << fig << " under " << presets_dir << "\n";
        return 2;
    }
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".cfg") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "error: empty preset directory " << dir << "\n";
        return 2;
    }
    int failures = 0;
    for (const auto& f : files) {
        RunContext ctx;
        try {
            ctx.parsed = load_config_file(f.string());
            if (dt_override > 0) ctx.parsed.model.dt = dt_override;
            if (tmax_override > 0) ctx.parsed.model.t_max = tmax_override;
            ctx.out_dir = (fs::path(out_dir) / fig / f.stem().string()).string();
            fs::create_directories(ctx.out_dir);
            const std::string cmd = ctx.extra_str("command", "");
            if (cmd.empty()) throw std::invalid_argument("preset lacks a command key");
            const int rc = dispatch(cmd, ctx);
            write_manifest(ctx, cmd);
            if (rc != 0) ++failures;
            std::cout << fig << "/" << f.stem().string() << ": "
                      << (rc == 0 ? "ok" : "FAILED") << "\n";
        } catch (const std::exception& ex) {
            ++failures;
            std::cerr << fig << "/" << f.stem().string() << ": error: " << ex.what() << "\n";
            io::write_file_atomic((fs::path(out_dir) / fig / (f.stem().string() + ".error")).string(),
                                  std::string("error = ") + ex.what() + "\n");
        }
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-excitation open dynamics of an AAH chain in a d-dimensional lattice bath"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", presets_dir = "presets", figure_name;
    int threads = 0;
    double dt_override = -1.0, tmax_override = -1.0;

    app.add_option("--threads", threads, "worker thread count (0 = library default)");

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "flat key-value config file");
        if (need_config) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--dt", dt_override, "override time step");
        sub->add_option("--tmax", tmax_override, "override horizon");
    };
    for (const char* name : {"spectrum", "evolve", "bath", "observe", "oracle-check"})
        add_common(app.add_subcommand(name, name), true);
    auto* figc = app.add_subcommand("figure", "run a figure preset set");
    figc->add_option("name", figure_name, "figure name, e.g. fig2")->required();
    figc->add_option("--presets", presets_dir, "preset directory");
    figc->add_option("--out", out_dir, "output directory");
    figc->add_option("--dt", dt_override, "override time step");
    figc->add_option("--tmax", tmax_override, "override horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "figure") return run_figure(figure_name, presets_dir, out_dir, dt_override, tmax_override);
        RunContext ctx;
        ctx.parsed = load_config_file(config_path);
        if (dt_override > 0) ctx.parsed.model.dt = dt_override;
        if (tmax_override > 0) ctx.parsed.model.t_max = tmax_override;
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);
        const int rc = dispatch(cmd, ctx);
        write_manifest(ctx, cmd);
        return rc;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
