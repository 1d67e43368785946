#include "chain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ddgeo::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSlots = 8;
constexpr int kMaxRecords = 2;

/// A non-normal edge of the chain, for the length and turn-over-length checks.
struct EdgeRecord {
    int seq = 0;
    double length = 0.0;
    double before = 0.0;
    double after = 0.0;
    bool corner = false;
};

struct ShootState {
    std::array<double, kMaxSlots> turns{};
    Point2 end{};
    double heading = 0.0;
    double final_turn = 0.0;
    double corner_turn = 0.0;
    bool degenerate = false;
    std::array<Vec2, 2> dir{};
    std::array<Point2, kMaxSlots> pivot{};
    std::array<EdgeRecord, kMaxRecords> records{};
    int record_count = 0;
};

/// Displacement of the normal edges inside a run, in the frame of its first edge.
Vec2 run_displacement(int count, int sign, double theta, double ell) {
    Vec2 d{};
    for (int i = 0; i + 1 < count; ++i) d += ell * unit_from_angle(sign * i * theta);
    return d;
}

/// Solutions x of |base + x d|^2 = rr^2 for a unit vector d.
std::array<double, 2> line_circle(const Vec2& base, const Vec2& d, double rr, bool& ok) {
    const double b = dot(base, d);
    const double disc = b * b - dot(base, base) + rr * rr;
    ok = disc >= 0.0;
    const double root = ok ? std::sqrt(disc) : 0.0;
    return {-b - root, -b + root};
}

class Evaluator {
public:
    Evaluator(const Chain& c, const Configuration& u, const Configuration& v, const Params& p,
              const ChainSearch& s)
        : chain_(c), u_(u), v_(v), params_(p), search_(s) {
        hu_ = heading_angle(u.heading);
        hv_ = heading_angle(v.heading);
        compensate_ = c.end_sign != 0;
        double fixed_turn = 0.0;
        for (std::size_t i = 0; i < c.ops.size(); ++i) {
            const Op& op = c.ops[i];
            run_disp_.push_back(op.kind == Op::Run ? run_displacement(op.count, op.sign, p.theta, p.ell) : Vec2{});
            if (op.kind == Op::Run) fixed_turn += op.sign * op.count * p.theta;
            if (op.kind == Op::Corner) fixed_turn += op.sign * p.theta;
            if (op.kind == Op::FreeTurn) slot_pos_[op.index] = static_cast<int>(i);
            if (op.kind == Op::FreeEdge && op.index == 0) edge_pos_ = static_cast<int>(i);
        }
        heading_target_ = hv_ - hu_ - fixed_turn - c.end_sign * p.theta;
        const int a = c.free_turns;
        std::vector<int> pool;
        for (int i = 0; i < a; ++i) pool.push_back(i);
        if (compensate_) {
            if (a == 0) return;
            heading_slot_ = a - 1;
            pool.pop_back();
        }
        linear_ = c.free_edges + 2 * c.corners;
        const int needed = linear_ >= 2 ? 0 : 2 - linear_;
        if (static_cast<int>(pool.size()) < needed) return;
        dependent_.assign(pool.end() - needed, pool.end());
        driving_.assign(pool.begin(), pool.end() - needed);
        valid_ = true;
    }

    std::optional<ChainSolution> run() {
        if (!valid_) return std::nullopt;
        std::array<double, kMaxSlots> turns{};
        search_level(0, turns);
        if (!(best_length_ < kInf)) return std::nullopt;
        return best_;
    }

private:
    void shoot(const std::array<double, kMaxSlots>& turns_in, const std::array<double, 2>& x, const Vec2& e,
               ShootState& st) const {
        st.turns = turns_in;
        if (heading_slot_ >= 0) {
            double others = 0.0;
            for (int i = 0; i < chain_.free_turns; ++i) {
                if (i != heading_slot_) others += st.turns[i];
            }
            st.turns[heading_slot_] = wrap_angle(heading_target_ - others);
        }
        st.record_count = 0;
        st.degenerate = false;
        double a = hu_;
        Point2 p = u_.point;
        double last_turn = 0.0;
        int pending = -1;
        int seq = 0;
        auto turn = [&](double t) {
            a += t;
            last_turn = t;
            if (pending >= 0) {
                st.records[pending].after = t;
                pending = -1;
            }
        };
        for (std::size_t i = 0; i < chain_.ops.size(); ++i) {
            const Op& op = chain_.ops[i];
            switch (op.kind) {
                case Op::FreeTurn:
                    st.pivot[op.index] = p;
                    turn(st.turns[op.index]);
                    break;
                case Op::NormalEdge:
                    p += params_.ell * unit_from_angle(a);
                    ++seq;
                    break;
                case Op::FreeEdge: {
                    const Vec2 d = unit_from_angle(a);
                    st.dir[op.index] = d;
                    pending = st.record_count++;
                    st.records[pending] = {seq++, x[op.index], last_turn, 0.0, false};
                    p += x[op.index] * d;
                    break;
                }
                case Op::Run: {
                    const double t = op.sign * params_.theta;
                    turn(t);
                    p += rotate(run_disp_[i], a);
                    a += (op.count - 1) * t;
                    seq += op.count - 1;
                    break;
                }
                case Op::Corner: {
                    const double start = a;
                    const double len = norm(e);
                    double tp = 0.0;
                    if (len > 0.0) tp = wrap_angle(heading_angle(e) - a);
                    else st.degenerate = true;
                    st.corner_turn = tp;
                    turn(tp);
                    pending = st.record_count++;
                    st.records[pending] = {seq++, len, tp, 0.0, true};
                    p += e;
                    turn(op.sign * params_.theta - tp);
                    a = start + op.sign * params_.theta;
                    break;
                }
            }
        }
        st.end = p;
        st.heading = a;
        st.final_turn = chain_.end_sign != 0 ? chain_.end_sign * params_.theta : wrap_angle(hv_ - a);
        if (pending >= 0) st.records[pending].after = st.final_turn;
    }

    /// Length if the shot state is feasible, +inf otherwise.
    double check(const ShootState& st) const {
        const double th = params_.theta;
        const double slack = 1e-12;
        if (st.degenerate) return kInf;
        for (int i = 0; i < chain_.free_turns; ++i) {
            if (std::abs(st.turns[i]) > th + slack) return kInf;
        }
        if (chain_.end_sign != 0) {
            if (std::abs(wrap_angle(hv_ - st.heading - st.final_turn)) > 1e-9) return kInf;
        } else if (std::abs(st.final_turn) > th + slack) {
            return kInf;
        }
        double total = chain_.fixed_length;
        const double short_limit = params_.ell - params_.tol_len();
        for (int r = 0; r < st.record_count; ++r) {
            const EdgeRecord& rec = st.records[r];
            if (!(rec.length > 1e-9 * params_.ell)) return kInf;
            total += rec.length;
            if (rec.corner) {
                if (std::abs(rec.before) > th + slack || std::abs(rec.after) > th + slack) return kInf;
                continue;
            }
            if (rec.length < short_limit && turn_sign(rec.before) * turn_sign(rec.after) >= 0 &&
                std::abs(rec.before + rec.after) > th + slack)
                return kInf;
        }
        for (int r = 0; r + 1 < st.record_count; ++r) {
            const EdgeRecord& a = st.records[r];
            const EdgeRecord& b = st.records[r + 1];
            if (b.seq == a.seq + 1 && a.length < short_limit && b.length < short_limit) return kInf;
        }
        return total;
    }

    void record(double len, const std::array<double, 2>& x, const Vec2& e, const ShootState& st) {
        if (!(len < best_length_)) return;
        best_length_ = len;
        ChainSolution s;
        s.length = len;
        s.residual = distance(st.end, v_.point);
        for (const Op& op : chain_.ops) {
            switch (op.kind) {
                case Op::FreeTurn: s.turns.push_back(st.turns[op.index]); break;
                case Op::NormalEdge: s.lengths.push_back(params_.ell); break;
                case Op::FreeEdge: s.lengths.push_back(x[op.index]); break;
                case Op::Run:
                    for (int k = 0; k < op.count; ++k) {
                        s.turns.push_back(op.sign * params_.theta);
                        if (k + 1 < op.count) s.lengths.push_back(params_.ell);
                    }
                    break;
                case Op::Corner:
                    s.turns.push_back(st.corner_turn);
                    s.lengths.push_back(norm(e));
                    s.turns.push_back(op.sign * params_.theta - st.corner_turn);
                    break;
            }
        }
        s.turns.push_back(st.final_turn);
        best_ = std::move(s);
    }

    double accept(const std::array<double, kMaxSlots>& turns, const std::array<double, 2>& x, const Vec2& e) {
        ShootState st;
        shoot(turns, x, e, st);
        const double scale = std::max(1.0, norm(v_.point - u_.point));
        if (distance(st.end, v_.point) > 1e-9 * scale) return kInf;
        const double len = check(st);
        record(len, x, e, st);
        return len;
    }

    /// Best feasible length with the driving turns fixed; the two remaining
    /// unknowns follow from closure in closed form.
    double evaluate(std::array<double, kMaxSlots>& turns) {
        std::array<double, 2> x{};
        Vec2 e{};
        ShootState st;
        const double range = params_.theta + 1e-12;
        if (linear_ >= 2) {
            shoot(turns, x, e, st);
            const Vec2 r = v_.point - st.end;
            if (chain_.corners > 0) return accept(turns, x, r);
            const double det = cross(st.dir[0], st.dir[1]);
            if (std::abs(det) < 1e-13) return kInf;
            x[0] = cross(r, st.dir[1]) / det;
            x[1] = cross(st.dir[0], r) / det;
            return accept(turns, x, e);
        }
        double best = kInf;
        if (linear_ == 1) {
            // End = w + R(a) M + T, with x entering w, M or T along a fixed direction.
            const int q = dependent_[0];
            turns[q] = 0.0;
            shoot(turns, x, e, st);
            const Point2 w = st.pivot[q];
            const Point2 split = heading_slot_ >= 0 ? st.pivot[heading_slot_] : st.end;
            const Vec2 m = split - w;
            const Vec2 t = st.end - split;
            const Vec2 d = st.dir[0];
            const int qpos = slot_pos_[q];
            const int lpos = heading_slot_ >= 0 ? slot_pos_[heading_slot_] : std::numeric_limits<int>::max();
            const bool inside = edge_pos_ > qpos && edge_pos_ < lpos;
            bool ok = false;
            if (inside) {
                const Vec2 r = v_.point - w - t;
                const auto roots = line_circle(m, d, norm(r), ok);
                if (!ok) return kInf;
                for (const double xe : roots) {
                    if (!(xe > 0.0)) continue;
                    const double a = wrap_angle(heading_angle(r) - heading_angle(m + xe * d));
                    if (std::abs(a) > range) continue;
                    turns[q] = a;
                    x[0] = xe;
                    best = std::min(best, accept(turns, x, e));
                }
                return best;
            }
            if (norm(m) < 1e-14) return kInf;
            const Vec2 r = v_.point - w - t;
            const auto roots = line_circle(-1.0 * r, d, norm(m), ok);
            if (!ok) return kInf;
            for (const double xe : roots) {
                if (!(xe > 0.0)) continue;
                const double a = wrap_angle(heading_angle(r - xe * d) - heading_angle(m));
                if (std::abs(a) > range) continue;
                turns[q] = a;
                x[0] = xe;
                best = std::min(best, accept(turns, x, e));
            }
            return best;
        }
        // Two pivots and a rigid tail: a two-link closure.
        const int q1 = dependent_[0];
        const int q2 = dependent_[1];
        turns[q1] = 0.0;
        turns[q2] = 0.0;
        shoot(turns, x, e, st);
        const Point2 w1 = st.pivot[q1];
        const Point2 w2 = st.pivot[q2];
        const Point2 split = heading_slot_ >= 0 ? st.pivot[heading_slot_] : st.end;
        const Vec2 m1 = w2 - w1;
        const Vec2 m2 = split - w2;
        const Point2 target = v_.point - (st.end - split);
        const double r1 = norm(m1);
        const double r2 = norm(m2);
        const double dd = distance(w1, target);
        if (r1 < 1e-14 || r2 < 1e-14 || dd < 1e-14) return kInf;
        const double along = (dd * dd + r1 * r1 - r2 * r2) / (2.0 * dd);
        const double h2 = r1 * r1 - along * along;
        if (h2 < 0.0) return kInf;
        const Vec2 axis = (target - w1) / dd;
        const double h = std::sqrt(h2);
        for (const double sgn : {-1.0, 1.0}) {
            const Point2 w2n = w1 + along * axis + sgn * h * perp(axis);
            const double a = wrap_angle(heading_angle(w2n - w1) - heading_angle(m1));
            const double ab = wrap_angle(heading_angle(target - w2n) - heading_angle(m2));
            const double b = wrap_angle(ab - a);
            if (std::abs(a) > range || std::abs(b) > range) continue;
            turns[q1] = a;
            turns[q2] = b;
            best = std::min(best, accept(turns, x, e));
        }
        return best;
    }

    double search_level(std::size_t level, std::array<double, kMaxSlots>& turns) {
        if (level == driving_.size()) return evaluate(turns);
        const int slot = driving_[level];
        const double th = params_.theta;
        auto f = [&](double t) {
            turns[slot] = t;
            return search_level(level + 1, turns);
        };
        const int g = search_.grid;
        std::vector<double> xs(g + 1), fs(g + 1);
        for (int i = 0; i <= g; ++i) {
            xs[i] = -th + 2.0 * th * i / g;
            fs[i] = f(xs[i]);
        }
        std::vector<int> minima;
        for (int i = 0; i <= g; ++i) {
            if (!(fs[i] < kInf)) continue;
            const bool left = i == 0 || fs[i] <= fs[i - 1];
            const bool right = i == g || fs[i] <= fs[i + 1];
            if (left && right) minima.push_back(i);
        }
        std::sort(minima.begin(), minima.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        const auto keep = static_cast<std::size_t>(level == 0 ? search_.outer_minima : search_.inner_minima);
        if (minima.size() > keep) minima.resize(keep);
        double best = kInf;
        for (int i = 0; i <= g; ++i) best = std::min(best, fs[i]);
        constexpr double ratio = 0.6180339887498949;
        const double stop = 1e-11 * th;
        for (const int i : minima) {
            double a = xs[std::max(i - 1, 0)];
            double b = xs[std::min(i + 1, g)];
            double c = b - ratio * (b - a);
            double d = a + ratio * (b - a);
            double fc = f(c);
            double fd = f(d);
            for (int it = 0; it < search_.golden_iterations && b - a > stop; ++it) {
                if (fc <= fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - ratio * (b - a);
                    fc = f(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + ratio * (b - a);
                    fd = f(d);
                }
            }
            best = std::min({best, fc, fd});
        }
        return best;
    }

    const Chain& chain_;
    Configuration u_, v_;
    Params params_;
    ChainSearch search_;
    double hu_ = 0.0;
    double hv_ = 0.0;
    double heading_target_ = 0.0;
    bool compensate_ = false;
    bool valid_ = false;
    int heading_slot_ = -1;
    int linear_ = 0;
    int edge_pos_ = -1;
    std::array<int, kMaxSlots> slot_pos_{};
    std::vector<Vec2> run_disp_;
    std::vector<int> driving_;
    std::vector<int> dependent_;
    double best_length_ = kInf;
    ChainSolution best_;
};

}  // namespace

int driving_dims(const Chain& c) {
    return c.free_turns + c.free_edges + 2 * c.corners - 2 - (c.end_sign != 0 ? 1 : 0);
}

double lower_bound(const Chain& chain, const Configuration& u, const Configuration& v, const Params& params) {
    const double th = params.theta;
    const std::size_t m = chain.ops.size();
    // Heading interval before each op, forward from u and backward from v.
    constexpr std::size_t kMaxOps = 31;
    if (m > kMaxOps) throw PreconditionError("lower_bound: chain too long");
    std::array<double, kMaxOps + 1> flo{}, fhi{}, blo{}, bhi{};
    flo[0] = fhi[0] = heading_angle(u.heading);
    auto fixed_turn = [&](const Op& op) {
        if (op.kind == Op::Run) return op.sign * op.count * th;
        if (op.kind == Op::Corner) return op.sign * th;
        return 0.0;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const Op& op = chain.ops[i];
        const double width = op.kind == Op::FreeTurn ? th : 0.0;
        flo[i + 1] = flo[i] + fixed_turn(op) - width;
        fhi[i + 1] = fhi[i] + fixed_turn(op) + width;
    }
    const double centre = 0.5 * (flo[m] + fhi[m]);
    const double arrive = heading_angle(v.heading) - chain.end_sign * th;
    const double aligned = centre + wrap_angle(arrive - centre);
    const double end_width = chain.end_sign != 0 ? 0.0 : th;
    blo[m] = aligned - end_width;
    bhi[m] = aligned + end_width;
    for (std::size_t i = m; i-- > 0;) {
        const Op& op = chain.ops[i];
        const double width = op.kind == Op::FreeTurn ? th : 0.0;
        blo[i] = blo[i + 1] - fixed_turn(op) - width;
        bhi[i] = bhi[i + 1] - fixed_turn(op) + width;
    }
    const double eps = 1e-12;
    std::array<double, kMaxOps + 1> lo{}, hi{};
    for (std::size_t i = 0; i <= m; ++i) {
        lo[i] = std::max(flo[i], blo[i]);
        hi[i] = std::min(fhi[i], bhi[i]);
        if (lo[i] > hi[i] + eps) return kInf;
    }
    // Angular sectors: rigid displacements reach |d| along directions inside
    // their sector and the edge of the sector elsewhere; free edges contribute directions.
    struct Sector {
        Vec2 centre;
        Vec2 first;
        Vec2 last;
        double inner = -2.0;  // cos of the half width; -2 for full circles
        double scale = 0.0;
        // Largest projection of the sector onto w.
        [[nodiscard]] double reach(Vec2 w) const {
            if (dot(w, centre) >= inner) return scale;
            return scale * std::max(dot(w, first), dot(w, last));
        }
    };
    auto make_sector = [](double lo, double hi, double scale) {
        Sector s;
        const double half = 0.5 * (hi - lo);
        s.centre = unit_from_angle(0.5 * (lo + hi));
        s.first = unit_from_angle(lo);
        s.last = unit_from_angle(hi);
        s.inner = half >= kPi ? -2.0 : std::cos(half);
        s.scale = scale;
        return s;
    };
    std::vector<Sector> pieces;
    std::vector<Sector> free_dirs;
    pieces.reserve(m);
    free_dirs.reserve(4);
    for (std::size_t i = 0; i < m; ++i) {
        const Op& op = chain.ops[i];
        if (op.kind == Op::NormalEdge) pieces.push_back(make_sector(lo[i], hi[i], params.ell));
        if (op.kind == Op::FreeEdge) free_dirs.push_back(make_sector(lo[i], hi[i], 1.0));
        if (op.kind == Op::Corner) {
            free_dirs.push_back(make_sector(lo[i] + std::min(0, op.sign) * th, hi[i] + std::max(0, op.sign) * th, 1.0));
        }
        if (op.kind == Op::Run && op.count > 1) {
            const Vec2 d = rotate(run_displacement(op.count, op.sign, th, params.ell), op.sign * th);
            const double base = heading_angle(d);
            pieces.push_back(make_sector(lo[i] + base, hi[i] + base, norm(d)));
        }
    }
    const Vec2 gap = v.point - u.point;
    const double scale = std::max(1.0, norm(gap));
    double need_best = 0.0;
    constexpr int directions = 32;
    static const std::array<Vec2, directions> table = [] {
        std::array<Vec2, directions> t{};
        for (int k = 0; k < directions; ++k) t[k] = unit_from_angle(kTwoPi * k / directions);
        return t;
    }();
    for (int k = 0; k <= directions; ++k) {
        const Vec2 w = k < directions ? table[k] : (norm(gap) > 0.0 ? gap / norm(gap) : Vec2{1.0, 0.0});
        double reach = 0.0;
        for (const Sector& p : pieces) reach += p.reach(w);
        const double need = dot(gap, w) - reach;
        if (need <= 1e-9 * scale) continue;
        double c = -1.0;
        for (const Sector& f : free_dirs) c = std::max(c, f.reach(w));
        if (c <= 1e-12) return kInf;
        need_best = std::max(need_best, need / c);
    }
    return chain.fixed_length + need_best;
}

std::optional<ChainSolution> solve_chain(const Chain& chain, const Configuration& u, const Configuration& v,
                                         const Params& params, const ChainSearch& search) {
    const int d = driving_dims(chain);
    if (chain.free_edges + 2 * chain.corners > 2 || d < 0 || d > search.max_driving ||
        chain.free_turns > kMaxSlots)
        return std::nullopt;
    Evaluator ev(chain, u, v, params, search);
    return ev.run();
}

DiscretePath realize(const ChainSolution& s, const Configuration& u, const Configuration& v) {
    DiscretePath p = shoot(u, s.turns, s.lengths);
    p.vertices.back() = v.point;
    p.end = v;
    return p;
}

}  // namespace ddgeo::detail
