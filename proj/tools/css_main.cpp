#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "css/io.hpp"
#include "css/summaries.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    css::RunConfig cfg;
};

void add_common(CLI::App* sub, CommonOpts* opts) {
    sub->add_option("--config", opts->config_path, "key=value run configuration file");
    sub->add_option("--out", opts->out_dir, "output directory (default: config out.dir)");
    sub->add_option("--grid-n", opts->cfg.grid_n, "grid size")->capture_default_str();
    sub->add_option("--grid-rmax", opts->cfg.grid_r_max, "domain truncation radius")
        ->capture_default_str();
    sub->add_option("--grid-kind", opts->cfg.grid_kind, "log | uniform")->capture_default_str();
    sub->add_option("--q-re", opts->cfg.q_re, "Re q")->capture_default_str();
    sub->add_option("--q-im", opts->cfg.q_im, "Im q")->capture_default_str();
    sub->add_option("--nu-re", opts->cfg.nu_re, "Re nu")->capture_default_str();
    sub->add_option("--nu-im", opts->cfg.nu_im, "Im nu")->capture_default_str();
    sub->add_option("--tau", opts->cfg.tau, "reference (negative) time")->capture_default_str();
    sub->add_option("--window", opts->cfg.window, "evolution window")->capture_default_str();
    sub->add_option("--dt-max", opts->cfg.dt_max, "time step cap")->capture_default_str();
    sub->add_option("--c-cfl", opts->cfg.c_cfl, "step-rule constant")->capture_default_str();
}

int finish(const css::Json& summary, const CommonOpts& opts, const std::string& name) {
    std::string dir = opts.out_dir.empty() ? opts.cfg.out_dir : opts.out_dir;
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    css::write_text_atomic(dir + "/" + name + "_summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << std::endl;
    return summary.value("pass", false) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for radial self-dual Chern-Simons-Schrodinger blow-up"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string verb;
    std::vector<double> t_ladder;
    int n_monitor = 64;

    auto* soliton = app.add_subcommand("soliton-check", "vortex/linearization residual table");
    add_common(soliton, &opts);
    auto* specfun = app.add_subcommand("specfun-check", "connection formula residual table");
    add_common(specfun, &opts);
    auto* radiation = app.add_subcommand("radiation-build", "build z(t) and residual reports");
    add_common(radiation, &opts);
    radiation->add_option("--t-ladder", t_ladder, "negative times for the build");
    auto* modode = app.add_subcommand("mod-ode", "modulation ODE vs closed-form rates");
    add_common(modode, &opts);
    auto* decomp = app.add_subcommand("decompose", "decomposition recovery checks");
    add_common(decomp, &opts);
    auto* evolve = app.add_subcommand("evolve", "conservation run");
    add_common(evolve, &opts);
    auto* blowup = app.add_subcommand("blowup-verify", "bootstrap-band tracking run");
    add_common(blowup, &opts);
    blowup->add_option("--monitors", n_monitor, "number of monitor rows")->capture_default_str();
    auto* transform = app.add_subcommand("transform", "Hankel and pseudoconformal transforms");
    add_common(transform, &opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!opts.config_path.empty()) {
            // file overrides defaults; explicit flags already parsed into cfg
            css::RunConfig file_cfg = css::RunConfig::from_file(opts.config_path);
            css::RunConfig flag_cfg = opts.cfg;
            opts.cfg = file_cfg;
            // re-apply flags the user set explicitly
            for (CLI::App* sub : app.get_subcommands()) {
                for (const CLI::Option* o : sub->get_options()) {
                    if (o->count() == 0) continue;
                    const std::string n = o->get_name();
                    if (n == "--grid-n") opts.cfg.grid_n = flag_cfg.grid_n;
                    else if (n == "--grid-rmax") opts.cfg.grid_r_max = flag_cfg.grid_r_max;
                    else if (n == "--grid-kind") opts.cfg.grid_kind = flag_cfg.grid_kind;
                    else if (n == "--q-re") opts.cfg.q_re = flag_cfg.q_re;
                    else if (n == "--q-im") opts.cfg.q_im = flag_cfg.q_im;
                    else if (n == "--nu-re") opts.cfg.nu_re = flag_cfg.nu_re;
                    else if (n == "--nu-im") opts.cfg.nu_im = flag_cfg.nu_im;
                    else if (n == "--tau") opts.cfg.tau = flag_cfg.tau;
                    else if (n == "--window") opts.cfg.window = flag_cfg.window;
                    else if (n == "--dt-max") opts.cfg.dt_max = flag_cfg.dt_max;
                    else if (n == "--c-cfl") opts.cfg.c_cfl = flag_cfg.c_cfl;
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::string dir = opts.out_dir.empty() ? opts.cfg.out_dir : opts.out_dir;
    if (dir.empty()) dir = ".";
    try {
        fs::create_directories(dir);
        if (soliton->parsed()) return finish(css::run_soliton_check(opts.cfg, dir), opts, "soliton_check");
        if (specfun->parsed()) return finish(css::run_specfun_check(opts.cfg, dir), opts, "specfun_check");
        if (radiation->parsed()) {
            if (t_ladder.empty()) t_ladder = {-1e-2, -1e-3, -1e-4};
            return finish(css::run_radiation_build(opts.cfg, dir, t_ladder), opts,
                          "radiation_build");
        }
        if (modode->parsed()) return finish(css::run_mod_ode(opts.cfg, dir), opts, "mod_ode");
        if (decomp->parsed()) return finish(css::run_decompose(opts.cfg, dir), opts, "decompose");
        if (evolve->parsed()) return finish(css::run_evolve(opts.cfg, dir), opts, "evolve");
        if (blowup->parsed())
            return finish(css::run_blowup_verify(opts.cfg, dir, n_monitor), opts, "blowup_verify");
        if (transform->parsed()) return finish(css::run_transform(opts.cfg, dir), opts, "transform");
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
