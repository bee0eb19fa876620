#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hopath/hopath.hpp"

namespace hopath::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kDefaultSteps = 256;

std::vector<std::string> split_colon(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    return parts;
}

double parse_real(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) throw InvalidArgument("bad number '" + s + "' in " + what);
    return v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || s.front() == '-') throw InvalidArgument("bad integer '" + s + "' in " + what);
    return static_cast<std::size_t>(v);
}

Cell real(double v) { return Cell{v}; }
Cell integer(long long v) { return Cell{static_cast<std::int64_t>(v)}; }

std::vector<std::string> with_params(std::vector<std::string> tail) {
    std::vector<std::string> cols = {"command", "mass", "omega", "hbar", "T", "xi", "xf"};
    cols.insert(cols.end(), tail.begin(), tail.end());
    return cols;
}

std::vector<Cell> param_cells(const std::string& command, const OscillatorConfig& c) {
    return {Cell{command}, real(c.mass),     real(c.omega),  real(c.hbar),
            real(c.time),  real(c.x_initial), real(c.x_final)};
}

void append(std::vector<Cell>& row, std::initializer_list<Cell> cells) { row.insert(row.end(), cells); }

std::size_t steps_or_default(const RunConfig& run) {
    const std::size_t n = run.steps.value_or(kDefaultSteps);
    if (n < 2) throw InvalidArgument("--N must be at least 2");
    return n;
}

GaussianPacket packet_of(const RunConfig& run) {
    const OscillatorConfig& c = run.oscillator;
    double width = 1.0;
    if (run.packet_width) width = *run.packet_width;
    else if (c.omega > 0.0) width = std::sqrt(c.hbar / (c.mass * c.omega));
    return GaussianPacket(run.packet_center, width, run.packet_momentum);
}

}  // namespace

std::vector<double> RealRange::points() const {
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

std::vector<std::size_t> StepLadder::points() const {
    std::vector<std::size_t> out;
    for (std::size_t n = first; n <= last; n *= factor) {
        out.push_back(n);
        if (n > std::numeric_limits<std::size_t>::max() / factor) break;
    }
    return out;
}

RealRange parse_range(const std::string& text) {
    const auto parts = split_colon(text);
    if (parts.size() != 3) throw InvalidArgument("range must look like a:b:step, got '" + text + "'");
    RealRange r{parse_real(parts[0], "range"), parse_real(parts[1], "range"), parse_real(parts[2], "range")};
    if (!(r.step > 0.0)) throw InvalidArgument("range step must be positive");
    if (r.stop < r.start) throw InvalidArgument("range is empty: stop < start");
    if ((r.stop - r.start) / r.step > 1e7) throw InvalidArgument("range has more than 1e7 points");
    return r;
}

StepLadder parse_ladder(const std::string& text) {
    const auto parts = split_colon(text);
    if (parts.size() != 3) throw InvalidArgument("ladder must look like n0:n1:factor, got '" + text + "'");
    StepLadder l{parse_count(parts[0], "ladder"), parse_count(parts[1], "ladder"), parse_count(parts[2], "ladder")};
    if (l.first < 2) throw InvalidArgument("ladder must start at N >= 2");
    if (l.factor < 2) throw InvalidArgument("ladder factor must be at least 2");
    if (l.last < l.first) throw InvalidArgument("ladder is empty: n1 < n0");
    return l;
}

Table cmd_kernel(const RunConfig& run) {
    const OscillatorConfig& c = run.oscillator;
    c.validate();
    const std::size_t n = steps_or_default(run);
    Table t(with_params({"N", "seed", "omegaT_over_pi", "type", "M", "L", "at_caustic", "parity", "closed_magnitude",
                         "closed_phase", "closed_maslov_phase", "discrete_magnitude", "discrete_phase",
                         "discrete_maslov_phase", "negative_count", "abs_difference"}));
    const Discretization disc(c, n);
    const Spectrum spectrum = analyze(c, disc);
    auto row = param_cells("kernel", c);
    append(row, {integer(static_cast<long long>(n)), integer(static_cast<long long>(run.seed)), real(c.omega_time() / kPi)});

    if (const auto delta = routed_caustic(c)) {
        append(row, {Cell{std::string("caustic_delta")}, integer(delta->m_index), integer(delta->m_index - 1), Cell{true},
                     integer(delta->parity), real(std::numeric_limits<double>::infinity()), real(delta->maslov_phase),
                     real(delta->maslov_phase), real(kNaN), real(kNaN), real(kNaN), integer(spectrum.negative_count),
                     real(kNaN)});
        t.add_row(std::move(row));
        return t;
    }
    const TimeClass tc = classify_time(c);
    const auto closed = std::get<RegularKernel>(closed_form_kernel(c));
    const auto discrete = std::get<RegularKernel>(discrete_kernel(c, disc));
    append(row, {Cell{std::string(c.omega == 0.0 ? "free_particle" : "regular")}, integer(tc.m_index),
                 integer(tc.maslov_l), Cell{false}, integer(0), real(closed.magnitude), real(closed.phase),
                 real(closed.maslov_phase), real(discrete.magnitude), real(discrete.phase),
                 real(discrete.maslov_phase), integer(spectrum.negative_count),
                 real(std::abs(discrete.amplitude - closed.amplitude))});
    t.add_row(std::move(row));
    return t;
}

Table cmd_spectrum(const RunConfig& run) {
    const OscillatorConfig& c = run.oscillator;
    c.validate();
    const std::size_t n = steps_or_default(run);
    const Discretization disc(c, n);
    const Spectrum s = analyze(c, disc);
    std::vector<double> numeric;
    if (n <= 2048) numeric = eigenvalues_numeric(build_action(c, disc));
    const std::size_t stable = minimal_stable_steps(c);
    const double x0 = s.zero_crossing.value_or(kNaN);

    Table t(with_params({"N", "k", "eigenvalue", "eigenvalue_sturm", "M", "L", "at_caustic", "negative_count", "x0N",
                         "counts_consistent", "minimal_stable_N"}));
    for (std::size_t k = 1; k < n; ++k) {
        auto row = param_cells("spectrum", c);
        append(row, {integer(static_cast<long long>(n)), integer(static_cast<long long>(k)), real(s.eigenvalues[k - 1]),
                     real(numeric.empty() ? kNaN : numeric[k - 1]), integer(s.m_index), integer(s.maslov_l),
                     Cell{s.at_caustic}, integer(s.negative_count), real(x0), Cell{s.counts_consistent},
                     integer(static_cast<long long>(stable))});
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_scan(const RunConfig& run) {
    run.oscillator.validate();
    if (!run.time_range) throw InvalidArgument("scan needs --T-range a:b:step");
    const std::size_t n = steps_or_default(run);
    const std::vector<double> times = run.time_range->points();
    if (times.front() <= 0.0) throw InvalidArgument("scan times must be positive");

    std::vector<std::vector<Cell>> rows(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        const OscillatorConfig c = run.oscillator.with_time(times[i]);
        const Spectrum s = analyze(c, Discretization(c, n));
        int m = 0, l = 0;
        bool caustic = false;
        double phase = 0, maslov = 0, magnitude = 0;
        if (const auto delta = routed_caustic(c)) {
            m = delta->m_index;
            l = m - 1;
            caustic = true;
            phase = maslov = delta->maslov_phase;
            magnitude = std::numeric_limits<double>::infinity();
        } else {
            const TimeClass tc = classify_time(c);
            const auto k = std::get<RegularKernel>(closed_form_kernel(c));
            m = tc.m_index;
            l = tc.maslov_l;
            phase = k.phase;
            maslov = k.maslov_phase;
            magnitude = k.magnitude;
        }
        auto row = param_cells("scan", c);
        append(row, {integer(static_cast<long long>(n)), real(c.omega_time() / kPi), integer(m), integer(l),
                     Cell{caustic}, real(phase), real(maslov), real(magnitude), real(s.zero_crossing.value_or(kNaN)),
                     integer(s.negative_count)});
        rows[i] = std::move(row);
    });

    Table t(with_params({"N", "omegaT_over_pi", "M", "L", "caustic", "phase", "maslov_phase", "magnitude", "x0N",
                         "negative_count"}));
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

Table cmd_converge(const RunConfig& run) {
    const OscillatorConfig& c = run.oscillator;
    c.validate();
    const StepLadder ladder = run.ladder.value_or(StepLadder{64, 4096, 2});
    if (near_caustic(c))
        throw InvalidArgument("omega T is at a caustic, where the kernel is a distribution; use the smear subcommand");
    const std::vector<std::size_t> points = ladder.points();
    const ConvergenceStudy study = convergence_study(c, points);

    Table t(with_params({"N", "abs_error", "rel_error", "local_order", "fitted_slope"}));
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        const auto& r = study.rows[i];
        auto row = param_cells("converge", c);
        append(row, {integer(static_cast<long long>(r.steps)), real(r.abs_error), real(r.rel_error),
                     real(r.local_order), real(i + 1 == study.rows.size() ? study.fitted_slope : kNaN)});
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_smear(const RunConfig& run) {
    const OscillatorConfig& c = run.oscillator;
    c.validate();
    const GaussianPacket f = packet_of(run);
    const double xf = c.x_final;
    std::vector<std::size_t> points = run.ladder ? run.ladder->points() : std::vector<std::size_t>{steps_or_default(run)};

    const auto delta = routed_caustic(c);
    const double tol = delta ? 1e-6 : kCausticTolerance;
    const std::complex<double> reference =
        delta ? delta_limit_reference(c, f, xf, tol) : smeared_kernel(c, f, xf, ClosedKernel{}, tol);
    std::complex<double> expansion{kNaN, kNaN};
    double tail = kNaN;
    if (c.omega > 0.0) {
        const ExpansionResult e =
            eigenfunction_expansion_kernel(c, run.n_max, f, xf, std::numeric_limits<double>::infinity());
        expansion = e.value;
        tail = e.tail_estimate;
    }

    std::vector<std::complex<double>> values(points.size());
    parallel_for(points.size(), [&](std::size_t i) { values[i] = smeared_kernel(c, f, xf, LatticeKernel{points[i]}, tol); });

    Table t(with_params({"packet_center", "packet_width", "packet_momentum", "n_max", "N", "omegaT_over_pi", "M",
                         "caustic", "smeared_re", "smeared_im", "reference_re", "reference_im", "deviation",
                         "expansion_re", "expansion_im", "expansion_deviation", "expansion_tail"}));
    const int m = delta ? delta->m_index : classify_time(c).m_index;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto row = param_cells("smear", c);
        append(row, {real(f.center()), real(f.width()), real(f.momentum()), integer(static_cast<long long>(run.n_max)),
                     integer(static_cast<long long>(points[i])), real(c.omega_time() / kPi), integer(m),
                     Cell{delta.has_value()}, real(values[i].real()), real(values[i].imag()), real(reference.real()),
                     real(reference.imag()), real(std::abs(values[i] - reference)), real(expansion.real()),
                     real(expansion.imag()), real(std::abs(values[i] - expansion)), real(tail)});
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_oracle_compare(const RunConfig& run) {
    run.oscillator.validate();
    std::vector<std::size_t> steps = {2, 3, 4};
    if (run.steps) {
        if (*run.steps < 2 || *run.steps > 4) throw InvalidArgument("oracle-compare supports --N 2, 3 or 4");
        steps = {*run.steps};
    }
    std::vector<OscillatorConfig> tuples;
    if (run.tuples == 0) {
        tuples.push_back(run.oscillator);
    } else {
        std::mt19937_64 rng(run.seed);
        std::uniform_real_distribution<double> frac(0.1, 0.9), endpoint(-1.0, 1.0), free_time(0.5, 3.0);
        std::uniform_int_distribution<int> period(0, 3);
        for (std::size_t i = 0; i < run.tuples; ++i) {
            OscillatorConfig c = run.oscillator;
            if (c.omega > 0.0) c.time = (period(rng) + frac(rng)) * kPi / c.omega;
            else c.time = free_time(rng);
            c.x_initial = endpoint(rng);
            c.x_final = endpoint(rng);
            tuples.push_back(c);
        }
    }

    Table t(with_params({"seed", "N", "fresnel_re", "fresnel_im", "discrete_re", "discrete_im", "assembled_re",
                         "assembled_im", "rel_fresnel_discrete", "rel_assembled_discrete", "extrapolation_residual"}));
    for (const auto& c : tuples) {
        for (std::size_t n : steps) {
            const Discretization disc(c, n);
            const std::complex<double> discrete = amplitude_of(discrete_kernel(c, disc));
            const FresnelResult fresnel = brute_force_fresnel(c, disc);
            const std::complex<double> assembled = assembled_kernel(c, disc).amplitude;
            auto row = param_cells("oracle-compare", c);
            append(row, {integer(static_cast<long long>(run.seed)), integer(static_cast<long long>(n)),
                         real(fresnel.value.real()), real(fresnel.value.imag()), real(discrete.real()),
                         real(discrete.imag()), real(assembled.real()), real(assembled.imag()),
                         real(std::abs(fresnel.value - discrete) / std::abs(discrete)),
                         real(std::abs(assembled - discrete) / std::abs(discrete)),
                         real(fresnel.extrapolation_residual / std::abs(fresnel.value))});
            t.add_row(std::move(row));
        }
    }
    return t;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time path integral of the harmonic oscillator"};
    app.require_subcommand(1);
    RunConfig rc;
    std::string range_text, ladder_text;
    std::size_t steps = 0;
    double width = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--mass", rc.oscillator.mass, "particle mass")->capture_default_str();
        sub->add_option("--omega", rc.oscillator.omega, "angular frequency")->capture_default_str();
        sub->add_option("--hbar", rc.oscillator.hbar, "reduced Planck constant")->capture_default_str();
        sub->add_option("--T", rc.oscillator.time, "propagation time")->capture_default_str();
        sub->add_option("--T-range", range_text, "time scan a:b:step");
        sub->add_option("--N", steps, "number of time steps");
        sub->add_option("--N-ladder", ladder_text, "step ladder n0:n1:factor");
        sub->add_option("--xi", rc.oscillator.x_initial, "initial position")->capture_default_str();
        sub->add_option("--xf", rc.oscillator.x_final, "final position")->capture_default_str();
        sub->add_option("--packet-center", rc.packet_center, "test packet center")->capture_default_str();
        sub->add_option("--packet-width", width, "test packet width (default: coherent width)");
        sub->add_option("--packet-momentum", rc.packet_momentum, "test packet momentum")->capture_default_str();
        sub->add_option("--n-max", rc.n_max, "eigenfunction expansion order")->capture_default_str();
        sub->add_option("--tuples", rc.tuples, "random parameter tuples for oracle-compare")->capture_default_str();
        sub->add_option("--format", rc.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        sub->add_option("--out", rc.out_path, "output file (default: stdout)");
        sub->add_option("--seed", rc.seed, "random seed")->capture_default_str();
    };

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"kernel", "discrete and closed-form kernel at one time"},
        {"spectrum", "fluctuation eigenvalues and sign count"},
        {"scan", "Maslov index and phase over a time range"},
        {"converge", "kernel error over an N ladder"},
        {"smear", "kernel smeared against a Gaussian packet"},
        {"oracle-compare", "brute-force integral against the recursion, N = 2..4"}};
    for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kInvalidArguments;
    }

    try {
        const CLI::App* sub = app.get_subcommands().front();
        rc.subcommand = sub->get_name();
        if (sub->count("--N")) rc.steps = steps;
        if (sub->count("--packet-width")) rc.packet_width = width;
        if (!range_text.empty()) rc.time_range = parse_range(range_text);
        if (!ladder_text.empty()) rc.ladder = parse_ladder(ladder_text);
        if (rc.packet_width && !(*rc.packet_width > 0.0)) throw InvalidArgument("--packet-width must be positive");

        Table table = rc.subcommand == "kernel"     ? cmd_kernel(rc)
                      : rc.subcommand == "spectrum" ? cmd_spectrum(rc)
                      : rc.subcommand == "scan"     ? cmd_scan(rc)
                      : rc.subcommand == "converge" ? cmd_converge(rc)
                      : rc.subcommand == "smear"    ? cmd_smear(rc)
                                                    : cmd_oracle_compare(rc);

        std::ofstream file;
        if (!rc.out_path.empty()) {
            file.open(rc.out_path);
            if (!file) throw InvalidArgument("cannot open output file " + rc.out_path);
        }
        std::ostream& sink = rc.out_path.empty() ? out : file;
        if (rc.format == "json") table.write_json(sink);
        else table.write_csv(sink);
        return kSuccess;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidArguments;
    } catch (const StepsTooSmall& e) {
        err << "numerical failure: " << e.what() << " (minimal stable N = " << e.minimal_steps() << ")\n";
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace hopath::cli
