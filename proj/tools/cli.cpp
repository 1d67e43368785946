#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddgeo/planner.hpp"
#include "ddgeo/rewriter.hpp"
#include "ddgeo/smooth.hpp"
#include "ddgeo/typing.hpp"
#include "document.hpp"
#include "svg.hpp"

namespace ddgeo::cli {

using nlohmann::json;

namespace {

struct Options {
    std::optional<int> params_n;
    std::optional<double> ell;
    std::uint64_t seed = 1;
    std::size_t budget = 10000;
    std::string out;
    std::string svg;
    std::string file;
    std::vector<double> from;
    std::vector<double> to;
    std::vector<int> n_list{8, 16, 32, 64, 128, 360};
    std::string word;
    std::vector<double> lengths;
    bool oracle = false;
    bool no_replan = false;
};

/// Input the user got wrong; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Command {
public:
    Command(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    int validate() {
        const PathDocument doc = load_document(o_.file);
        const Params params = resolve(doc);
        const DiscretePath path = path_of(doc);
        try {
            check_invariants(path, params);
        } catch (const GeometryError& e) {
            out_ << "infeasible: " << e.what() << "\n";
            return kInfeasible;
        } catch (const PreconditionError& e) {
            out_ << "infeasible: " << e.what() << "\n";
            return kInfeasible;
        }
        const auto violations = ddgeo::validate(path, params);
        if (violations.empty()) {
            out_ << "feasible\n";
            return kOk;
        }
        for (const Violation& v : violations) out_ << describe(v) << "\n";
        out_ << "infeasible (" << violations.size() << " violations)\n";
        return kInfeasible;
    }

    int classify() {
        PathDocument doc = load_document(o_.file);
        const Params params = resolve(doc);
        const DiscretePath path = path_of(doc);
        if (const auto bad = infeasible(path, params)) return *bad;
        doc.structure = structure_json(path, params);
        note() << "type " << (*doc.structure)["type"].get<std::string>() << "\n";
        emit_document(doc);
        emit_svg(path, params, nullptr);
        return kOk;
    }

    int plan() {
        const Query q = query(true);
        const Configuration& u = q.u;
        const Configuration& v = q.v;
        const Params params = *q.params;
        const PlanResult r = ddgeo::plan(u, v, params);
        PathDocument doc;
        set_params(doc, params);
        set_path(doc, r.path);
        doc.structure = structure_json(r.path, params);
        note() << "length " << fmt(r.length) << " type " << r.type_word << " candidates " << r.candidates
               << " solved " << r.solved << "\n";
        if (o_.oracle) {
            OracleOptions oo;
            oo.seed = o_.seed;
            const OracleResult orc = oracle_search(u, v, params, oo);
            note() << "oracle " << fmt(orc.length) << "\n";
        }
        emit_document(doc);
        emit_svg(r.path, params, nullptr);
        return kOk;
    }

    int shorten() {
        PathDocument doc = load_document(o_.file);
        const Params params = resolve(doc);
        const DiscretePath path = path_of(doc);
        if (const auto bad = infeasible(path, params)) return *bad;
        RewriteOptions ro;
        ro.budget = o_.budget;
        ro.allow_replan = !o_.no_replan;
        const ShortenResult r = ddgeo::shorten(path, params, ro);
        json trace = json::array();
        for (const RewriteStep& s : r.trace.steps) {
            trace.push_back({{"rule", to_string(s.rule)},
                             {"location", json::array({s.location.first, s.location.second})},
                             {"step", s.step},
                             {"length_before", s.length_before},
                             {"length_after", s.length_after},
                             {"type_before", s.type_before},
                             {"type_after", s.type_after}});
        }
        set_path(doc, r.path);
        doc.trace = std::move(trace);
        doc.structure = structure_json(r.path, params);
        note() << "length " << fmt(path_length(path)) << " -> " << fmt(path_length(r.path)) << " steps "
               << r.trace.steps.size() << " type " << (*doc.structure)["type"].get<std::string>()
               << (r.trace.budget_exhausted ? " (budget exhausted)" : "") << "\n";
        emit_document(doc);
        emit_svg(r.path, params, nullptr);
        return kOk;
    }

    int discretize() {
        if (!o_.params_n) throw UsageError("discretize: --params-n is required");
        if (o_.from.empty()) throw UsageError("discretize: --from is required");
        const Configuration u = pose(o_.from);
        SmoothPath g;
        if (!o_.word.empty()) {
            if (o_.word.size() != o_.lengths.size())
                throw UsageError("discretize: --lengths needs one value per letter of --word");
            g.start = u;
            for (std::size_t i = 0; i < o_.word.size(); ++i) {
                const char c = o_.word[i];
                if (c != 'L' && c != 'R' && c != 'S') throw UsageError("discretize: --word letters are L, R, S");
                if (!(o_.lengths[i] >= 0.0)) throw UsageError("discretize: lengths must be nonnegative");
                g.push(c == 'L' ? SegmentKind::Left : c == 'R' ? SegmentKind::Right : SegmentKind::Straight,
                       o_.lengths[i]);
            }
        } else if (!o_.to.empty()) {
            g = dubins_solve(u, pose(o_.to), 1.0);
        } else {
            throw UsageError("discretize: give --word and --lengths, or --to");
        }
        const double theta = kTwoPi / *o_.params_n;
        const DiscretePath path = ddgeo::discretize(g, theta);
        const Params params = discretization_params(g, theta);
        PathDocument doc;
        set_params(doc, params);
        set_path(doc, path);
        note() << "word " << word_of(g) << " smooth " << fmt(g.length()) << " discrete " << fmt(path_length(path))
               << "\n";
        emit_document(doc);
        emit_svg(path, params, &g);
        return kOk;
    }

    int dubins() {
        const auto [u, v, params] = query(false);
        const SmoothPath g = dubins_solve(u, v, 1.0);
        json segs = json::array();
        for (const Segment& s : g.segments) segs.push_back({{"kind", std::string(1, to_char(s.kind))}, {"length", s.length}});
        json j = {{"word", word_of(g)}, {"radius", 1.0}, {"length", g.length()}, {"segments", segs}};
        std::optional<DiscretePath> disc;
        if (params) {
            disc = ddgeo::discretize(g, params->theta);
            j["discretized_length"] = path_length(*disc);
        }
        note() << "word " << word_of(g) << " length " << fmt(g.length()) << "\n";
        emit_text(j.dump(2) + "\n");
        if (!o_.svg.empty()) {
            if (!disc) throw UsageError("dubins: --svg needs --params-n");
            emit_svg(*disc, discretization_params(g, params->theta), &g);
        }
        return kOk;
    }

    int converge() {
        const Query q = query(false);
        const Configuration& u = q.u;
        const Configuration& v = q.v;
        const auto rows = convergence_experiment(u, v, o_.n_list);
        bool sandwich = true;
        json table = json::array();
        std::ostream& text = out_;
        char line[160];
        std::snprintf(line, sizeof line, "%6s %12s %12s %16s %16s %16s %12s\n", "n", "theta", "ell", "L_plan",
                      "L_discretized", "L_dubins", "rel_gap");
        text << line;
        for (const ConvergenceRow& r : rows) {
            const bool ok = r.plan_length <= r.discretized_length + 1e-9 && r.discretized_length <= r.dubins_length + 1e-9;
            sandwich = sandwich && ok;
            const double gap = (r.dubins_length - r.plan_length) / r.dubins_length;
            std::snprintf(line, sizeof line, "%6d %12.6g %12.6g %16.10f %16.10f %16.10f %12.3e%s\n", r.n, r.theta,
                          r.ell, r.plan_length, r.discretized_length, r.dubins_length, gap, ok ? "" : "  !");
            text << line;
            table.push_back({{"n", r.n},
                             {"theta", r.theta},
                             {"ell", r.ell},
                             {"plan_length", r.plan_length},
                             {"discretized_length", r.discretized_length},
                             {"dubins_length", r.dubins_length},
                             {"sandwich", ok}});
        }
        text << "sandwich " << (sandwich ? "holds" : "violated") << "\n";
        if (!o_.out.empty()) {
            const json j = {{"start", {{"point", {u.point.x, u.point.y}}, {"heading_degrees", to_record(u).heading_degrees}}},
                            {"end", {{"point", {v.point.x, v.point.y}}, {"heading_degrees", to_record(v).heading_degrees}}},
                            {"rows", table},
                            {"sandwich", sandwich}};
            write_file(o_.out, j.dump(2) + "\n");
        }
        if (!o_.svg.empty() && !rows.empty()) {
            const int n = rows.back().n;
            const Params p = Params::from_sides(n, 2.0 * std::sin(kPi / n));
            const SmoothPath g = dubins_solve(u, v, 1.0);
            emit_svg(ddgeo::plan(u, v, p).path, p, &g);
        }
        return sandwich ? kOk : kInternal;
    }

    int render() {
        const PathDocument doc = load_document(o_.file);
        const Params params = resolve(doc);
        const DiscretePath path = path_of(doc);
        if (path.vertices.size() < 2) throw UsageError("render: document has no path");
        const std::string svg = render_svg(path, params);
        const std::string target = !o_.svg.empty() ? o_.svg : o_.out;
        if (target.empty()) out_ << svg;
        else write_file(target, svg);
        return kOk;
    }

private:
    struct Query {
        Configuration u;
        Configuration v;
        std::optional<Params> params;
    };

    std::ostream& note() { return o_.out.empty() ? err_ : out_; }

    static std::string fmt(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return buf;
    }

    static Configuration pose(const std::vector<double>& xs) {
        return Configuration::from_angle({xs[0], xs[1]}, xs[2] * kPi / 180.0);
    }

    Params resolve(const PathDocument& doc) const {
        PathDocument d = doc;
        if (o_.params_n) {
            d.n_sides = *o_.params_n;
            d.theta_degrees.reset();
        }
        if (o_.ell) d.ell = *o_.ell;
        return params_of(d);
    }

    /// Endpoints and parameters from a document or from --from/--to/--params-n.
    Query query(bool need_params) const {
        Query q;
        if (!o_.file.empty()) {
            const PathDocument doc = load_document(o_.file);
            q.u = to_configuration(doc.start);
            q.v = to_configuration(doc.end);
            q.params = resolve(doc);
            return q;
        }
        if (o_.from.empty() || o_.to.empty()) throw UsageError("need a document or both --from and --to");
        q.u = pose(o_.from);
        q.v = pose(o_.to);
        if (o_.params_n) q.params = Params::from_sides(*o_.params_n, o_.ell.value_or(1.0));
        else if (need_params) throw UsageError("need --params-n");
        return q;
    }

    std::optional<int> infeasible(const DiscretePath& path, const Params& params) {
        try {
            check_invariants(path, params);
            const auto vs = ddgeo::validate(path, params);
            if (vs.empty()) return std::nullopt;
            err_ << "input path is infeasible: " << describe(vs.front()) << "\n";
        } catch (const GeometryError& e) {
            err_ << "input path is infeasible: " << e.what() << "\n";
        } catch (const PreconditionError& e) {
            err_ << "input path is infeasible: " << e.what() << "\n";
        }
        return kInfeasible;
    }

    static void write_file(const std::string& file, const std::string& text) {
        std::ofstream f(file);
        if (!f) throw UsageError(file + ": cannot write");
        f << text;
    }

    void emit_text(const std::string& text) {
        if (o_.out.empty()) out_ << text;
        else write_file(o_.out, text);
    }

    void emit_document(const PathDocument& doc) { emit_text(dump_document(doc)); }

    void emit_svg(const DiscretePath& path, const Params& params, const SmoothPath* overlay) {
        if (o_.svg.empty()) return;
        write_file(o_.svg, render_svg(path, params, overlay));
    }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Discrete curvature-constrained paths: validation, typing, shortening and planning", "ddgeo"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--params-n", o.params_n, "Number of sides n; theta = 360/n degrees")->check(CLI::Range(4, 1 << 20));
    app.add_option("--ell", o.ell, "Edge length ell")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Seed for randomized searches");
    app.add_option("--budget", o.budget, "Rewrite step budget");
    app.add_option("--out", o.out, "Output file (default: standard output)");
    app.add_option("--svg", o.svg, "Also write an SVG drawing");

    auto pose_option = [&](CLI::App* sub, const char* name, std::vector<double>& target, const char* help) {
        sub->add_option(name, target, help)->delimiter(',')->expected(3);
    };

    CLI::App* validate = app.add_subcommand("validate", "Check a path against the constraints");
    validate->add_option("file", o.file, "Path document")->required();
    CLI::App* classify = app.add_subcommand("classify", "Add the arc/bridge structure of a feasible path");
    classify->add_option("file", o.file, "Path document")->required();
    CLI::App* plan = app.add_subcommand("plan", "Shortest path between two configurations");
    plan->add_option("file", o.file, "Document holding start, end and params");
    pose_option(plan, "--from", o.from, "Start x,y,heading_degrees");
    pose_option(plan, "--to", o.to, "End x,y,heading_degrees");
    plan->add_flag("--oracle", o.oracle, "Also run the randomized reference search");
    CLI::App* shorten = app.add_subcommand("shorten", "Apply local shortening moves until none applies");
    shorten->add_option("file", o.file, "Path document")->required();
    shorten->add_flag("--no-replan", o.no_replan, "Disable subpath replanning");
    CLI::App* discretize = app.add_subcommand("discretize", "Polygonal discretization of a unit-radius curve");
    pose_option(discretize, "--from", o.from, "Start x,y,heading_degrees");
    pose_option(discretize, "--to", o.to, "Discretize the smooth shortest path to this configuration");
    discretize->add_option("--word", o.word, "Segment letters, e.g. LSR");
    discretize->add_option("--lengths", o.lengths, "Segment arclengths")->delimiter(',');
    CLI::App* dubins = app.add_subcommand("dubins", "Smooth shortest path with unit turning radius");
    dubins->add_option("file", o.file, "Document holding start and end");
    pose_option(dubins, "--from", o.from, "Start x,y,heading_degrees");
    pose_option(dubins, "--to", o.to, "End x,y,heading_degrees");
    CLI::App* converge = app.add_subcommand("converge", "Discrete optimum against the smooth one for growing n");
    converge->add_option("file", o.file, "Document holding start and end");
    pose_option(converge, "--from", o.from, "Start x,y,heading_degrees");
    pose_option(converge, "--to", o.to, "End x,y,heading_degrees");
    converge->add_option("--n", o.n_list, "Comma-separated n values")->delimiter(',');
    CLI::App* render = app.add_subcommand("render", "Draw a path document as SVG");
    render->add_option("file", o.file, "Path document")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    Command cmd(o, out, err);
    try {
        if (validate->parsed()) return cmd.validate();
        if (classify->parsed()) return cmd.classify();
        if (plan->parsed()) return cmd.plan();
        if (shorten->parsed()) return cmd.shorten();
        if (discretize->parsed()) return cmd.discretize();
        if (dubins->parsed()) return cmd.dubins();
        if (converge->parsed()) return cmd.converge();
        if (render->parsed()) return cmd.render();
    } catch (const DocumentError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace ddgeo::cli
