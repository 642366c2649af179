// kgflow command-line driver.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <kgflow/kgflow.hpp>

namespace {

using namespace kgflow;

struct run_config {
    std::string hamiltonian;
    std::string hamiltonian_file;
    int order = 12;
    int grid = 0; // 0: per-subcommand default
    double t = 0.0;
    std::string mode = "rational";
    unsigned threads = 0;
    double eps_blowup = default_eps_blowup;
    double log_base = 0.0; // 0: natural log
    std::string output;
    double t_min = -1.0;
    double t_max = 0.0; // 0: per-subcommand default
    int samples_s = 50;
    int samples_t = 201;
    double coarse_step = 0.005;
    double tol = 1e-4;
    double x0 = 0.25;
    double y0 = 0.25;
    int steps = 100;
    std::string which = "z";
    std::string direction = "pos";
    std::string csv;
};

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string hamiltonian_text(const run_config &c)
{
    if (!c.hamiltonian_file.empty()) {
        std::ifstream is(c.hamiltonian_file);
        if (!is) {
            throw error(error_kind::invalid_argument, "cannot read " + c.hamiltonian_file);
        }
        std::stringstream ss;
        ss << is.rdbuf();
        return trim(ss.str());
    }
    return trim(c.hamiltonian);
}

eval_mode parse_mode(const std::string &m) { return m == "polynomial" ? eval_mode::polynomial : eval_mode::rational; }

void emit(const run_config &c, const std::string &content)
{
    if (c.output.empty() || c.output == "-") {
        std::cout << content;
    } else {
        write_file_atomic(c.output, content);
    }
}

run_metadata base_meta(const run_config &c, const std::string &h)
{
    run_metadata m;
    m.hamiltonian = h;
    m.order = c.order;
    m.threads = resolve_threads(c.threads);
    return m;
}

conformal_series conformal_for(const run_config &c, const std::string &h)
{
    return build_conformal_series(parse_hamiltonian(h), c.order, h);
}

int run_expand(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto p = parse_hamiltonian(h);
    emit(c, format_real_trig_poly(p) + "\n");
    return 0;
}

int run_series(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto which = c.which == "zbar" ? coordinate::zbar : coordinate::z;
    const auto s = build_lie_series(parse_hamiltonian(h), which, c.order);
    auto m = base_meta(c, h);
    m.extra.emplace_back("coordinate", to_string(which));
    m.extra.emplace_back("format", "m n re im pi_power per term, coefficient of exp(i*pi*(m*x + n*y))");
    std::string out = metadata_header(m);
    for (int k = 1; k <= s.order; ++k) {
        out += "w " + std::to_string(k) + "\n" + to_debug_text(s.term(k));
    }
    emit(c, out);
    return 0;
}

int grid_or(const run_config &c, int fallback) { return c.grid > 0 ? c.grid : fallback; }

int run_field(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto cs = conformal_for(c, h);
    const int g = grid_or(c, 50);
    const auto mode = parse_mode(c.mode);
    const auto fg = evaluate_field(cs, g, c.t, mode, c.threads, c.eps_blowup);
    auto m = base_meta(c, h);
    m.grid = g;
    m.t = c.t;
    m.mode = mode;
    m.eps_blowup = c.eps_blowup;
    emit(c, field_csv(fg, m));
    return 0;
}

int run_signmap(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto cs = conformal_for(c, h);
    const int g = grid_or(c, 50);
    const auto mode = parse_mode(c.mode);
    const auto sm = classify_signs(evaluate_field(cs, g, c.t, mode, c.threads, c.eps_blowup));
    auto m = base_meta(c, h);
    m.grid = g;
    m.t = c.t;
    m.mode = mode;
    m.eps_blowup = c.eps_blowup;
    emit(c, sign_map_pgm(sm, m));
    if (!c.csv.empty()) {
        write_file_atomic(c.csv, sign_map_csv(sm, m));
    }
    return 0;
}

int run_errmap(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto cs = conformal_for(c, h);
    const double base = c.log_base > 0 ? c.log_base : std::exp(1.0);
    const double t_max = c.t_max != 0.0 ? c.t_max : 1.0;
    const auto rows = diagonal_errmap(cs, c.samples_s, c.t_min, t_max, c.samples_t, base);
    auto m = base_meta(c, h);
    m.extra.emplace_back("log_base", c.log_base > 0 ? format_double(c.log_base) : "e");
    m.extra.emplace_back("sampling", "x = y = s");
    emit(c, errmap_csv(rows, m));
    return 0;
}

int run_critical(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const auto cs = conformal_for(c, h);
    critical_time_options opt;
    opt.grid = grid_or(c, 200);
    opt.t_max = c.t_max != 0.0 ? c.t_max : 0.5;
    opt.coarse_step = c.coarse_step;
    opt.tol = c.tol;
    opt.threads = c.threads;
    opt.eps_blowup = c.eps_blowup;
    const auto dir = c.direction == "neg" ? time_direction::negative : time_direction::positive;
    const auto tc = critical_time(cs, dir, opt);
    if (!tc) {
        std::cout << "no degeneration in range\n";
        return 0;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f\n", *tc);
    std::cout << buf;
    return 0;
}

int run_flow(const run_config &c)
{
    const auto h = hamiltonian_text(c);
    const hamiltonian_flow flow(parse_hamiltonian(h));
    if (c.steps < 1) {
        throw error(error_kind::invalid_argument, "--steps must be >= 1");
    }
    auto m = base_meta(c, h);
    m.t = c.t;
    m.extra.emplace_back("start", format_double(c.x0) + " " + format_double(c.y0));
    std::ostringstream os;
    os << metadata_header(m) << "t,x,y,energy\n";
    for (int s = 0; s <= c.steps; ++s) {
        const double ts = c.t * s / c.steps;
        const auto p = flow(c.x0, c.y0, ts);
        os << format_double(ts) << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
           << format_double(flow.energy(p.x, p.y)) << '\n';
    }
    emit(c, os.str());
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    run_config c;
    CLI::App app{"Kahler geodesic approximation on the flat torus via truncated Lie series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; explicit flags take precedence");

    auto *ham = app.add_option("--hamiltonian", c.hamiltonian, "Hamiltonian expression in x, y");
    auto *hamf = app.add_option("--hamiltonian-file", c.hamiltonian_file, "File holding the Hamiltonian expression");
    ham->excludes(hamf);
    app.add_option("--order", c.order, "Lie series order N")->check(CLI::PositiveNumber);
    app.add_option("--grid", c.grid, "Lattice size G (default 50, 200 for critical)")->check(CLI::Range(2, 1 << 16));
    app.add_option("--t", c.t, "Time");
    app.add_option("--mode", c.mode, "Evaluation mode")->check(CLI::IsMember({"rational", "polynomial"}));
    auto *threads_opt = app.add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    app.add_option("--eps-blowup", c.eps_blowup, "Blow-up threshold on |D|")->check(CLI::PositiveNumber);
    app.add_option("--log-base", c.log_base, "Logarithm base for the error indicator")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", c.output, "Output file (default stdout)");
    app.add_option("--t-min", c.t_min, "errmap: smallest t");
    app.add_option("--t-max", c.t_max, "errmap: largest t (1); critical: scan limit (0.5)");
    app.add_option("--samples-s", c.samples_s, "errmap: samples along the diagonal")->check(CLI::PositiveNumber);
    app.add_option("--samples-t", c.samples_t, "errmap: samples in t")->check(CLI::PositiveNumber);
    app.add_option("--coarse-step", c.coarse_step, "critical: scan step")->check(CLI::PositiveNumber);
    app.add_option("--tol", c.tol, "critical: bisection tolerance")->check(CLI::PositiveNumber);
    app.add_option("--x0", c.x0, "flow: start x");
    app.add_option("--y0", c.y0, "flow: start y");
    app.add_option("--steps", c.steps, "flow: trajectory samples");
    app.add_option("--which", c.which, "series: coordinate")->check(CLI::IsMember({"z", "zbar"}));
    app.add_option("--direction", c.direction, "critical: time direction")->check(CLI::IsMember({"pos", "neg"}));
    app.add_option("--csv", c.csv, "signmap: also write a CSV copy here");

    struct sub {
        const char *name;
        const char *help;
        int (*fn)(const run_config &);
    };
    const sub subs[] = {
        {"expand", "Print the canonical Fourier form of H", run_expand},
        {"series", "Dump w_1..w_N", run_series},
        {"field", "CSV of the conformal factor at one t", run_field},
        {"signmap", "PGM sign map at one t", run_signmap},
        {"errmap", "Error indicator along the diagonal", run_errmap},
        {"critical", "First degeneration time", run_critical},
        {"flow", "Real-time flow trajectory from the ODE oracle", run_flow},
    };
    int (*chosen)(const run_config &) = nullptr;
    for (const auto &s : subs) {
        auto *cmd = app.add_subcommand(s.name, s.help);
        cmd->fallthrough();
        cmd->callback([&chosen, fn = s.fn] { chosen = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    if (threads_opt->count() == 0) {
        if (const char *env = std::getenv("KGF_THREADS")) {
            try {
                c.threads = static_cast<unsigned>(std::stoul(env));
            } catch (const std::exception &) {
                std::cerr << "kgflow: ignoring invalid KGF_THREADS=" << env << "\n";
            }
        }
    }
    if (c.hamiltonian.empty() && c.hamiltonian_file.empty()) {
        std::cerr << "kgflow: --hamiltonian or --hamiltonian-file is required\n";
        return 2;
    }

    try {
        return chosen(c);
    } catch (const error &e) {
        std::cerr << "kgflow: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "kgflow: " << e.what() << "\n";
        return 1;
    }
}
