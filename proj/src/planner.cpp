#include "ddgeo/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "chain.hpp"
#include "ddgeo/log.hpp"
#include "ddgeo/smooth.hpp"

namespace ddgeo {

namespace {

using Item = CandidateSpec::Item;
using ItemKind = CandidateSpec::ItemKind;
using EdgeRole = CandidateSpec::EdgeRole;

constexpr int kMaxRuns = 3;
constexpr int kMaxFreeEdges = 2;
constexpr int kMaxItems = 6;

detail::Chain to_chain(const CandidateSpec& spec, const Params& params) {
    detail::Chain c;
    int normals = 0;
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        const Item& it = spec.items[i];
        detail::Op op;
        op.sign = sign_of(it.orientation);
        if (it.kind == ItemKind::Free) {
            op.kind = detail::Op::FreeTurn;
            op.index = c.free_turns++;
        } else if (it.kind == ItemKind::Run) {
            op.kind = detail::Op::Run;
            op.count = it.count;
            normals += it.count - 1;
        } else {
            op.kind = detail::Op::Corner;
            ++c.corners;
        }
        c.ops.push_back(op);
        detail::Op edge;
        if (spec.edges[i] == EdgeRole::Free) {
            edge.kind = detail::Op::FreeEdge;
            edge.index = c.free_edges++;
        } else {
            edge.kind = detail::Op::NormalEdge;
            ++normals;
        }
        c.ops.push_back(edge);
    }
    c.end_sign = spec.flush_end ? sign_of(*spec.flush_end) : 0;
    c.fixed_length = normals * params.ell;
    return c;
}

double fixed_length_units(const CandidateSpec& spec) {
    int normals = 0;
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        if (spec.items[i].kind == ItemKind::Run) normals += spec.items[i].count - 1;
        if (spec.edges[i] == EdgeRole::Normal) ++normals;
    }
    return normals;
}

/// Whether closure leaves between 0 and max_driving parameters with closed-form dependents.
bool solvable_shape(const CandidateSpec& s, int max_driving) {
    const int a = s.free_turns();
    const int linear = s.free_edges() + 2 * s.corners();
    if (linear > 2) return false;
    const int flush = s.flush_end ? 1 : 0;
    if (flush == 1 && a == 0) return false;
    const int pool = a - flush;
    if (pool < std::max(0, 2 - linear)) return false;
    const int d = s.driving_dims();
    return d >= 0 && d <= max_driving;
}

/// All item/edge sequences whose closure is solvable in closed form.
std::vector<CandidateSpec> skeletons(int max_driving) {
    std::vector<CandidateSpec> out;
    CandidateSpec cur;
    auto emit = [&]() {
        for (int end = 0; end < 3; ++end) {
            if (end == 0) cur.flush_end.reset();
            else cur.flush_end = end == 1 ? Orientation::Left : Orientation::Right;
            if (solvable_shape(cur, max_driving)) out.push_back(cur);
        }
        cur.flush_end.reset();
    };
    auto rec = [&](auto&& self) -> void {
        if (!cur.items.empty()) emit();
        if (static_cast<int>(cur.items.size()) == kMaxItems) return;
        const int a = cur.free_turns();
        const int linear = cur.free_edges() + 2 * cur.corners();
        // Each extra unknown beyond closure is a search dimension (+1 for a flush end).
        const int room = max_driving + 3 - a - linear;
        for (int kind = 0; kind < 5; ++kind) {
            Item it;
            if (kind == 0) {
                it.kind = ItemKind::Free;
            } else if (kind <= 2) {
                it.kind = ItemKind::Run;
                it.orientation = kind == 1 ? Orientation::Left : Orientation::Right;
                if (cur.runs() >= kMaxRuns) continue;
            } else {
                it.kind = ItemKind::Corner;
                it.orientation = kind == 3 ? Orientation::Left : Orientation::Right;
                if (linear + 2 > kMaxFreeEdges) continue;
            }
            for (int e = 0; e < 2; ++e) {
                const EdgeRole role = e == 0 ? EdgeRole::Normal : EdgeRole::Free;
                const int added = (it.kind == ItemKind::Corner ? 2 : 0) + (role == EdgeRole::Free ? 1 : 0);
                if (linear + added > kMaxFreeEdges) continue;
                if (added + (it.kind == ItemKind::Free ? 1 : 0) > room) continue;
                // A corner edge is short: its neighbours must not be free edges.
                if (it.kind == ItemKind::Corner && role == EdgeRole::Free) continue;
                if (!cur.items.empty()) {
                    const Item& prev = cur.items.back();
                    const EdgeRole prev_edge = cur.edges.back();
                    if (it.kind == ItemKind::Corner && prev_edge == EdgeRole::Free) continue;
                    // Same-orientation runs joined by a normal edge are one run.
                    if (it.kind == ItemKind::Run && prev.kind == ItemKind::Run &&
                        prev.orientation == it.orientation && prev_edge == EdgeRole::Normal)
                        continue;
                }
                cur.items.push_back(it);
                cur.edges.push_back(role);
                self(self);
                cur.items.pop_back();
                cur.edges.pop_back();
            }
        }
    };
    rec(rec);
    return out;
}

struct ArcHint {
    int sign = 1;
    double count = 0.0;
};

/// Arc sequences of the smooth solutions that are not much longer than the best.
std::vector<std::vector<ArcHint>> smooth_hints(const Configuration& u, const Configuration& v, const Params& params) {
    const double rho = params.radius();
    std::vector<std::pair<double, std::vector<ArcHint>>> words;
    for (const DubinsWord w : kDubinsWords) {
        const auto g = dubins_word(u, v, w, rho);
        if (!g) continue;
        std::vector<ArcHint> arcs;
        for (const Segment& s : g->segments) {
            if (s.kind == SegmentKind::Straight) continue;
            arcs.push_back({s.kind == SegmentKind::Left ? 1 : -1, s.length / rho / params.theta});
        }
        words.emplace_back(g->length(), std::move(arcs));
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : words) best = std::min(best, w.first);
    std::vector<std::vector<ArcHint>> out;
    for (auto& w : words) {
        if (w.first <= best + 4.0 * params.ell) out.push_back(std::move(w.second));
    }
    return out;
}

struct CountRange {
    int lo = 1;
    int hi = 1;
};

/// Run-count boxes compatible with a skeleton, one per matching smooth hint.
std::vector<std::vector<CountRange>> windowed_ranges(const CandidateSpec& sk,
                                                     const std::vector<std::vector<ArcHint>>& hints, int window) {
    std::vector<int> signs;
    for (const Item& it : sk.items) {
        if (it.kind == ItemKind::Run) signs.push_back(sign_of(it.orientation));
    }
    std::vector<std::vector<CountRange>> out;
    for (const auto& arcs : hints) {
        const std::size_t m = arcs.size();
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            std::vector<CountRange> ranges;
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                const bool keep = (mask >> i) & 1u;
                if (keep) {
                    const int c = static_cast<int>(std::lround(arcs[i].count));
                    ranges.push_back({std::max(1, c - window), std::max(1, c + window)});
                    if (ranges.size() > signs.size() || signs[ranges.size() - 1] != arcs[i].sign) ok = false;
                } else if (arcs[i].count > window + 0.5) {
                    ok = false;
                }
            }
            if (ok && ranges.size() == signs.size()) out.push_back(std::move(ranges));
        }
    }
    return out;
}

double heading_gap(double total, double delta) {
    return std::abs(wrap_angle(delta - total));
}

}  // namespace

int CandidateSpec::free_turns() const {
    return static_cast<int>(std::count_if(items.begin(), items.end(),
                                          [](const Item& it) { return it.kind == ItemKind::Free; }));
}

int CandidateSpec::free_edges() const {
    return static_cast<int>(std::count(edges.begin(), edges.end(), EdgeRole::Free));
}

int CandidateSpec::corners() const {
    return static_cast<int>(std::count_if(items.begin(), items.end(),
                                          [](const Item& it) { return it.kind == ItemKind::Corner; }));
}

int CandidateSpec::runs() const {
    return static_cast<int>(std::count_if(items.begin(), items.end(),
                                          [](const Item& it) { return it.kind == ItemKind::Run; }));
}

int CandidateSpec::driving_dims() const {
    return free_turns() + free_edges() + 2 * corners() - 2 - (flush_end ? 1 : 0);
}

std::string CandidateSpec::describe() const {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!s.empty()) s += ' ';
        const char* o = items[i].orientation == Orientation::Left ? "L" : "R";
        if (items[i].kind == ItemKind::Free) s += 'F';
        else if (items[i].kind == ItemKind::Run) s += o + std::to_string(items[i].count);
        else s += std::string("C") + o;
        s += edges[i] == EdgeRole::Free ? " f" : " n";
    }
    if (flush_end) s += *flush_end == Orientation::Left ? " |L" : " |R";
    return s;
}

ForwardResult forward_construct(const CandidateSpec& spec, const CandidateUnknowns& unknowns,
                                const Configuration& u, const Configuration& v, const Params& params) {
    if (spec.items.size() != spec.edges.size() || spec.items.empty())
        throw PreconditionError("forward_construct: malformed spec");
    if (static_cast<int>(unknowns.turns.size()) != spec.free_turns() ||
        static_cast<int>(unknowns.lengths.size()) != spec.free_edges() ||
        static_cast<int>(unknowns.corners.size()) != spec.corners())
        throw PreconditionError("forward_construct: unknown count mismatch");
    std::vector<double> turns;
    std::vector<double> lengths;
    std::size_t ti = 0;
    std::size_t li = 0;
    std::size_t ci = 0;
    double heading = heading_angle(u.heading);
    for (std::size_t i = 0; i < spec.items.size(); ++i) {
        const Item& it = spec.items[i];
        const double s = sign_of(it.orientation) * params.theta;
        if (it.kind == ItemKind::Free) {
            turns.push_back(unknowns.turns[ti++]);
            heading += turns.back();
        } else if (it.kind == ItemKind::Run) {
            for (int k = 0; k < it.count; ++k) {
                turns.push_back(s);
                if (k + 1 < it.count) lengths.push_back(params.ell);
            }
            heading += it.count * s;
        } else {
            const Vec2 e = unknowns.corners[ci++];
            const double t = wrap_angle(heading_angle(e) - heading);
            turns.push_back(t);
            lengths.push_back(norm(e));
            turns.push_back(s - t);
            heading += s;
        }
        lengths.push_back(spec.edges[i] == EdgeRole::Free ? unknowns.lengths[li++] : params.ell);
    }
    ForwardResult r;
    const double needed = wrap_angle(heading_angle(v.heading) - heading);
    r.final_turn = spec.flush_end ? sign_of(*spec.flush_end) * params.theta : needed;
    r.heading_residual = std::abs(wrap_angle(needed - r.final_turn));
    turns.push_back(r.final_turn);
    r.path = shoot(u, turns, lengths);
    r.position_residual = distance(r.path.vertices.back(), v.point);
    r.path.end = Configuration{r.path.vertices.back(), v.heading};
    return r;
}

std::optional<DiscretePath> solve_candidate(const CandidateSpec& spec, const Configuration& u,
                                            const Configuration& v, const Params& params) {
    const auto sol = detail::solve_chain(to_chain(spec, params), u, v, params);
    if (!sol) return std::nullopt;
    DiscretePath p = detail::realize(*sol, u, v);
    if (!is_feasible(p, params)) return std::nullopt;
    return p;
}

int vertex_bound(double bound, const Params& params) {
    return static_cast<int>(std::ceil(2.0 * bound / params.ell)) + 3;
}

PlanResult plan(const Configuration& u, const Configuration& v, const Params& params,
                const PlannerOptions& options) {
    PlanResult result;
    const SmoothPath smooth = dubins_solve(u, v, params.radius());
    const DiscretePath seed = discretize(smooth, params.theta);
    const double bound = path_length(seed) * (1.0 + 1e-12) + params.tol_len();
    result.upper_bound = path_length(seed);
    const double delta = heading_angle(v.heading) - heading_angle(u.heading);
    const double slack = 1e-9;
    const bool full = params.n_sides <= options.full_enumeration_max_n;
    const auto hints = full ? std::vector<std::vector<ArcHint>>{} : smooth_hints(u, v, params);
    const double budget_units = bound / params.ell + 1e-9;
    // A run of more than n theta-turns closes a loop that can be cut out.
    const int kmax = std::min(static_cast<int>(std::floor(budget_units)) + 1, params.n_sides);
    detail::ChainSearch search;
    search.max_driving = options.max_driving;
    search.grid = options.grid;

    std::vector<CandidateSpec> specs;
    std::vector<detail::Chain> chains;
    std::vector<double> bounds;
    std::size_t enumerated = 0;
    for (const CandidateSpec& sk : skeletons(options.max_driving)) {
        const int free_angles = sk.free_turns() + (sk.flush_end ? 0 : 1);
        const double margin = free_angles * params.theta + slack;
        double fixed_turn = sk.flush_end ? sign_of(*sk.flush_end) * params.theta : 0.0;
        for (const Item& it : sk.items) {
            if (it.kind == ItemKind::Corner) fixed_turn += sign_of(it.orientation) * params.theta;
        }
        std::vector<std::vector<CountRange>> boxes;
        std::vector<std::size_t> run_pos;
        for (std::size_t i = 0; i < sk.items.size(); ++i) {
            if (sk.items[i].kind == ItemKind::Run) run_pos.push_back(i);
        }
        if (full) boxes.push_back(std::vector<CountRange>(run_pos.size(), CountRange{1, kmax}));
        else boxes = windowed_ranges(sk, hints, options.window);
        CandidateSpec spec = sk;
        std::set<std::vector<int>> seen;
        std::vector<int> counts(run_pos.size());
        for (const auto& box : boxes) {
            auto rec = [&](auto&& self, std::size_t r, double units, double turn) -> void {
                if (units > budget_units) return;
                if (r == run_pos.size()) {
                    if (heading_gap(turn, delta) > margin || !seen.insert(counts).second) return;
                    ++enumerated;
                    detail::Chain chain = to_chain(spec, params);
                    const double lb = detail::lower_bound(chain, u, v, params);
                    if (lb > bound) return;
                    specs.push_back(spec);
                    chains.push_back(std::move(chain));
                    bounds.push_back(lb);
                    return;
                }
                Item& it = spec.items[run_pos[r]];
                const double s = sign_of(it.orientation) * params.theta;
                for (int k = box[r].lo; k <= std::min(box[r].hi, kmax); ++k) {
                    it.count = k;
                    counts[r] = k;
                    const double nu = units + (k - 1);
                    if (nu > budget_units) break;
                    self(self, r + 1, nu, turn + k * s);
                }
            };
            rec(rec, 0, fixed_length_units(sk), fixed_turn);
        }
    }
    result.candidates = enumerated;
    log_debug("plan: " + std::to_string(enumerated) + " candidates, " + std::to_string(specs.size()) +
              " within bound " + std::to_string(bound));

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lengths(specs.size(), inf);
    // Candidates in order of their lower bound, solved in fixed-size batches; the
    // cutoff only changes between batches, so the result does not depend on threads.
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < specs.size(); ++i) work.push_back(i);
    std::stable_sort(work.begin(), work.end(), [&](std::size_t a, std::size_t b) {
        const bool da = specs[a].driving_dims() == 2;
        const bool db = specs[b].driving_dims() == 2;
        if (da != db) return db;
        return bounds[a] < bounds[b];
    });
    double incumbent = bound;
    std::size_t attempted = 0;
    constexpr std::size_t batch = 64;
    for (std::size_t start = 0; start < work.size(); start += batch) {
        const std::size_t stop = std::min(work.size(), start + batch);
        const double cutoff = incumbent * (1.0 + 1e-9) + params.tol_len();
        std::vector<std::size_t> todo;
        for (std::size_t j = start; j < stop; ++j) {
            if (bounds[work[j]] <= cutoff) todo.push_back(work[j]);
        }
        attempted += todo.size();
        const auto count = static_cast<std::ptrdiff_t>(todo.size());
        auto solve_one = [&](std::ptrdiff_t j) {
            const std::size_t i = todo[static_cast<std::size_t>(j)];
            const auto sol = detail::solve_chain(chains[i], u, v, params, search);
            if (sol) lengths[i] = sol->length;
        };
        if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t j = 0; j < count; ++j) solve_one(j);
        } else {
            for (std::ptrdiff_t j = 0; j < count; ++j) solve_one(j);
        }
        for (const std::size_t i : todo) incumbent = std::min(incumbent, lengths[i]);
    }
    result.attempted = attempted;
    log_debug("plan: attempted " + std::to_string(attempted));

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (std::isfinite(lengths[i])) order.push_back(i);
    }
    result.solved = order.size();
    result.infeasible = attempted - order.size();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

    struct Finalist {
        DiscretePath path;
        double length;
        std::string word;
        bool true_type;
        double residual;
        std::size_t index;
    };
    std::vector<Finalist> finalists;
    double best_valid = std::numeric_limits<double>::infinity();
    for (const std::size_t i : order) {
        const double window = 1e-9 * std::max(1.0, lengths[i]);
        if (lengths[i] > best_valid + window) break;
        const auto sol = detail::solve_chain(to_chain(specs[i], params), u, v, params, search);
        if (!sol) continue;
        DiscretePath p = detail::realize(*sol, u, v);
        CandidateDiagnostic diag{specs[i].describe(), sol->length, "", false};
        if (is_feasible(p, params)) {
            diag.valid = true;
            diag.type_word = type_string(p, params);
            best_valid = std::min(best_valid, sol->length);
            finalists.push_back({std::move(p), sol->length, diag.type_word, is_true_type(diag.type_word), sol->residual, i});
        }
        result.finalists.push_back(std::move(diag));
    }
    if (finalists.empty()) throw PlannerError("plan: no candidate produced a feasible path");
    const double best = best_valid;
    const double window = 1e-9 * std::max(1.0, best);
    const Finalist* pick = nullptr;
    for (const Finalist& f : finalists) {
        if (f.length > best + window) continue;
        auto key = [](const Finalist& x) { return std::make_tuple(!x.true_type, x.word.size(), x.word, x.length, x.index); };
        if (pick == nullptr || key(f) < key(*pick)) pick = &f;
    }
    result.path = pick->path;
    result.length = path_length(result.path);
    result.type_word = pick->word;
    result.residual = pick->residual;
    return result;
}

}  // namespace ddgeo
