#include "ddgeo/rewriter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "ddgeo/planner.hpp"
#include "ddgeo/typing.hpp"

namespace ddgeo {

namespace {

constexpr std::array<const char*, kRuleCount> kRuleNames{
    "LongLongShortcut", "LongShortSlide",  "InflectionRotate", "InflectionSlide", "LongBreakSlide",
    "TwoInflectionSlide", "BridgeTranslate", "AabElim",        "AaaaToAaa",       "SubpathReplan",
};

constexpr std::array<RuleKind, kRuleCount> kPriority{
    RuleKind::LongLongShortcut,   RuleKind::LongShortSlide,  RuleKind::InflectionRotate, RuleKind::InflectionSlide,
    RuleKind::LongBreakSlide,     RuleKind::TwoInflectionSlide, RuleKind::BridgeTranslate, RuleKind::AabElim,
    RuleKind::AaaaToAaa,          RuleKind::SubpathReplan,
};

bool safe_feasible(const DiscretePath& p, const Params& params) {
    try {
        return is_feasible(p, params);
    } catch (const std::exception&) {
        return false;
    }
}

std::size_t type_length(const DiscretePath& p, const Params& params) { return type_string(p, params).size(); }

/// A path with the same geometry: straight vertices removed when that keeps it feasible.
DiscretePath tidy(const DiscretePath& p, const Params& params) {
    DiscretePath out = without_straight_vertices(p);
    if (out.vertices.size() != p.vertices.size() && safe_feasible(out, params)) return out;
    out = p;
    out.canonical = false;
    return out;
}

Vec2 unit(Vec2 v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : Vec2{0.0, 0.0};
}

std::optional<std::size_t> vertex_at(const DiscretePath& p, Point2 q, const Params& params) {
    const double tol = std::max(params.tol_dedup(), 1e-12);
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (distance(p.vertices[i], q) <= 1e3 * tol) return i;
    }
    return std::nullopt;
}

/// Drops vertices that coincide with their predecessor; the path ends stay.
DiscretePath merged(DiscretePath p, const Params& params) {
    const double tol = std::max(params.tol_dedup(), 1e-15);
    std::vector<Point2> out;
    out.reserve(p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const Point2 q = p.vertices[i];
        if (!out.empty() && distance(out.back(), q) <= tol) {
            if (i + 1 == p.vertices.size()) out.back() = q;
            continue;
        }
        out.push_back(q);
    }
    p.vertices = std::move(out);
    return p;
}

enum class Joint { Reconnect, BreakFixed, BreakMoving };

/// Translates vertices first..last by t; the two boundary edges either follow
/// the block or are broken into a normal edge and a remainder.
std::optional<DiscretePath> translate_block(const DiscretePath& p, std::size_t first, std::size_t last, Vec2 t,
                                            Joint entry, Joint exit, const Params& params) {
    const auto& v = p.vertices;
    if (first == 0 || last + 1 >= v.size() || first > last) return std::nullopt;
    DiscretePath out = p;
    out.canonical = false;
    out.vertices.clear();
    out.vertices.insert(out.vertices.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(first));
    const Vec2 in = v[first] - v[first - 1];
    if (entry != Joint::Reconnect) {
        if (norm(in) <= params.ell) return std::nullopt;
        const Vec2 d = unit(in);
        out.vertices.push_back(entry == Joint::BreakFixed ? v[first - 1] + params.ell * d
                                                          : v[first] - params.ell * d + t);
    }
    for (std::size_t i = first; i <= last; ++i) out.vertices.push_back(v[i] + t);
    const Vec2 outv = v[last + 1] - v[last];
    if (exit != Joint::Reconnect) {
        if (norm(outv) <= params.ell) return std::nullopt;
        const Vec2 d = unit(outv);
        out.vertices.push_back(exit == Joint::BreakFixed ? v[last + 1] - params.ell * d
                                                         : v[last] + params.ell * d + t);
    }
    out.vertices.insert(out.vertices.end(), v.begin() + static_cast<std::ptrdiff_t>(last + 1), v.end());
    return merged(std::move(out), params);
}

std::optional<DiscretePath> rotate_block(const DiscretePath& p, std::size_t first, std::size_t last,
                                         Point2 pivot, double angle) {
    if (first == 0 || last + 1 >= p.vertices.size() || first > last) return std::nullopt;
    DiscretePath out = p;
    out.canonical = false;
    for (std::size_t i = first; i <= last; ++i) out.vertices[i] = rotate_about(p.vertices[i], pivot, angle);
    return out;
}

/// Shared state for evaluating candidate moves on one working path.
class Rewriter {
public:
    Rewriter(const DiscretePath& path, const Params& params, const RewriteOptions& options)
        : work_(path), params_(params), options_(options) {
        length_ = path_length(work_);
        word_ = type_string(work_, params_);
        turns_ = vertex_turns(work_);
        lengths_ = edge_lengths(work_);
        for (std::size_t e = 0; e < lengths_.size(); ++e) {
            classes_.push_back(classify_edge(lengths_[e], params_));
            inflection_.push_back(is_inflection(work_, e));
        }
    }

    [[nodiscard]] std::vector<Location> locations(RuleKind kind);

    /// Result of the move starting at `step`, with the step that produced it.
    [[nodiscard]] std::optional<std::pair<DiscretePath, double>> attempt(RuleKind kind, Location loc, double step);
    /// Three-arc rotation that may also stop at a flush start instead of fewer arcs.
    [[nodiscard]] std::optional<std::pair<DiscretePath, double>> aaaa(Location loc, bool allow_flush = false) const;

private:
    using Generator = std::function<std::vector<DiscretePath>(double)>;

    [[nodiscard]] double eps() const { return options_.improve_eps * params_.ell; }
    [[nodiscard]] std::size_t edges() const { return lengths_.size(); }
    [[nodiscard]] bool is_long_plain(std::size_t e) const {
        return classes_[e] == EdgeClass::Long && !inflection_[e];
    }

    /// Shortest feasible candidate that improves by at least eps, or nullopt.
    [[nodiscard]] std::optional<DiscretePath> best_of(const std::vector<DiscretePath>& cands) const;
    [[nodiscard]] std::optional<std::pair<DiscretePath, double>> line_search(const Generator& gen, double step) const;

    [[nodiscard]] Generator vertex_slide(std::size_t vertex, std::size_t along_edge) const;
    [[nodiscard]] Generator pair_slide(std::size_t p, std::size_t q, bool along_p, bool along_q, bool break_p,
                                       bool break_q) const;
    [[nodiscard]] std::vector<std::size_t> bridge_edges() const;
    [[nodiscard]] std::optional<std::pair<DiscretePath, double>> replan(Location loc) const;
    [[nodiscard]] bool accepts_equal(const DiscretePath& cand) const;

    DiscretePath work_;
    Params params_;
    RewriteOptions options_;
    double length_ = 0.0;
    std::string word_;
    std::vector<double> turns_;
    std::vector<double> lengths_;
    std::vector<EdgeClass> classes_;
    std::vector<bool> inflection_;
};

std::optional<DiscretePath> Rewriter::best_of(const std::vector<DiscretePath>& cands) const {
    std::optional<DiscretePath> best;
    double best_len = length_ - eps();
    for (const DiscretePath& c : cands) {
        const double len = path_length(c);
        if (len > best_len) continue;
        if (!safe_feasible(c, params_)) continue;
        best = c;
        best_len = len;
    }
    return best;
}

std::optional<std::pair<DiscretePath, double>> Rewriter::line_search(const Generator& gen, double step) const {
    const double min_step = options_.min_step * params_.ell;
    const double max_step = options_.max_step * params_.ell;
    // The initial step, then larger ones (second-order gains can fall below
    // improve_eps at small steps), then the halving sequence.
    std::vector<double> order;
    for (double s = step; s <= max_step; s *= 2.0) order.push_back(s);
    for (double s = 0.5 * step; s >= min_step; s *= 0.5) order.push_back(s);
    for (double s : order) {
        auto hit = best_of(gen(s));
        if (!hit) continue;
        double used = s;
        double len = path_length(*hit);
        auto take = [&](std::optional<DiscretePath>& c, double at) {
            if (!c) return false;
            const double l = path_length(*c);
            if (l >= len) return false;
            hit = std::move(c);
            len = l;
            used = at;
            return true;
        };
        // Grow while the move keeps improving, then locate the first step that fails.
        double good = s;
        double bad = 0.0;
        for (double g = 2.0 * s; g <= max_step; g *= 2.0) {
            auto more = best_of(gen(g));
            if (!take(more, g)) {
                bad = g;
                break;
            }
            good = g;
        }
        if (bad > 0.0) {
            for (int it = 0; it < 40 && bad - good > min_step; ++it) {
                const double mid = 0.5 * (good + bad);
                auto more = best_of(gen(mid));
                if (take(more, mid)) good = mid;
                else bad = mid;
            }
        }
        return std::make_pair(std::move(*hit), used);
    }
    return std::nullopt;
}

Rewriter::Generator Rewriter::vertex_slide(std::size_t vertex, std::size_t along_edge) const {
    return [this, vertex, along_edge](double d) -> std::vector<DiscretePath> {
        const auto& v = work_.vertices;
        const std::size_t other = along_edge == vertex ? vertex + 1 : vertex - 1;
        const Vec2 dir = v[other] - v[vertex];
        // Sliding past the far end merges the vertex into it.
        const Vec2 t = d >= norm(dir) ? dir : d * unit(dir);
        auto moved = translate_block(work_, vertex, vertex, t, Joint::Reconnect, Joint::Reconnect, params_);
        if (!moved) return {};
        return {*moved};
    };
}

/// Moves the block between edges p < q along p (shortening p) or along q.
Rewriter::Generator Rewriter::pair_slide(std::size_t p, std::size_t q, bool along_p, bool along_q, bool break_p,
                                         bool break_q) const {
    return [=, this](double d) -> std::vector<DiscretePath> {
        const auto& v = work_.vertices;
        std::vector<DiscretePath> out;
        const std::size_t first = p + 1;
        const std::size_t last = q;
        auto joints = [](bool brk) {
            return brk ? std::vector<Joint>{Joint::BreakFixed, Joint::BreakMoving} : std::vector<Joint>{Joint::Reconnect};
        };
        if (along_q) {
            const Vec2 t = d >= lengths_[q] ? v[q + 1] - v[q] : d * unit(v[q + 1] - v[q]);
            for (Joint j : joints(break_p)) {
                if (auto c = translate_block(work_, first, last, t, j, Joint::Reconnect, params_)) out.push_back(*c);
            }
        }
        if (along_p) {
            const Vec2 t = d >= lengths_[p] ? v[p] - v[p + 1] : d * unit(v[p] - v[p + 1]);
            for (Joint j : joints(break_q)) {
                if (auto c = translate_block(work_, first, last, t, Joint::Reconnect, j, params_)) out.push_back(*c);
            }
        }
        return out;
    };
}

std::vector<std::size_t> Rewriter::bridge_edges() const {
    std::vector<std::size_t> out;
    try {
        const PathStructure st = analyze(work_, params_);
        for (const Bridge& b : st.bridges) {
            const auto s = vertex_at(work_, b.start_pt, params_);
            const auto e = vertex_at(work_, b.end_pt, params_);
            if (s && e && *e == *s + 1) out.push_back(*s);
        }
    } catch (const std::exception&) {
    }
    return out;
}

std::vector<Location> Rewriter::locations(RuleKind kind) {
    std::vector<Location> out;
    const std::size_t m = edges();
    const std::size_t n = work_.vertices.size();
    switch (kind) {
    case RuleKind::LongLongShortcut:
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (classes_[i - 1] == EdgeClass::Long && classes_[i] == EdgeClass::Long) out.push_back({i, i});
        }
        break;
    case RuleKind::LongShortSlide:
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const EdgeClass a = classes_[i - 1];
            const EdgeClass b = classes_[i];
            if ((a == EdgeClass::Long && b == EdgeClass::Short) || (a == EdgeClass::Short && b == EdgeClass::Long))
                out.push_back({i, i});
        }
        break;
    case RuleKind::InflectionRotate:
        for (std::size_t e = 0; e < m; ++e) {
            if (!inflection_[e]) continue;
            for (std::size_t nb : {e - 1, e + 1}) {
                if (nb >= m) continue;
                if (classes_[nb] != EdgeClass::Normal || inflection_[nb]) out.push_back({e, nb});
            }
        }
        break;
    case RuleKind::InflectionSlide:
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if ((inflection_[p] && is_long_plain(q)) || (is_long_plain(p) && inflection_[q])) out.push_back({p, q});
            }
        }
        break;
    case RuleKind::LongBreakSlide:
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if (is_long_plain(p) && is_long_plain(q)) out.push_back({p, q});
            }
        }
        break;
    case RuleKind::TwoInflectionSlide:
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if (!inflection_[p] || !inflection_[q]) continue;
                if (turn_sign(turns_[p]) != turn_sign(turns_[q])) continue;
                const Vec2 a = unit(work_.vertices[p + 1] - work_.vertices[p]);
                const Vec2 b = unit(work_.vertices[q + 1] - work_.vertices[q]);
                if (std::abs(cross(a, b)) <= kTolAng) continue;
                out.push_back({p, q});
            }
        }
        break;
    case RuleKind::BridgeTranslate: {
        const auto bridges = bridge_edges();
        std::vector<bool> is_bridge(m, false);
        for (std::size_t b : bridges) is_bridge[b] = true;
        for (std::size_t p = 0; p < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                if (!is_bridge[p] && !is_bridge[q]) continue;
                const std::size_t other = is_bridge[p] ? q : p;
                bool hit = inflection_[other] || classes_[other] == EdgeClass::Long;
                if (is_bridge[p] && is_bridge[q]) {
                    const Vec2 a = unit(work_.vertices[p + 1] - work_.vertices[p]);
                    const Vec2 b = unit(work_.vertices[q + 1] - work_.vertices[q]);
                    hit = !(std::abs(cross(a, b)) <= kTolAng && dot(a, b) > 0.0);
                }
                if (hit) out.push_back({p, q});
            }
        }
        break;
    }
    case RuleKind::AabElim: {
        PathStructure st;
        try {
            st = analyze(work_, params_);
        } catch (const std::exception&) {
            break;
        }
        const auto bridges = bridge_edges();
        auto bridge_from = [&](std::size_t v) {
            return std::find(bridges.begin(), bridges.end(), v) != bridges.end();
        };
        for (std::size_t k = 0; k + 1 < st.arcs.size(); ++k) {
            const auto w = vertex_at(work_, st.arcs[k].end_pt, params_);
            if (!w || distance(st.arcs[k].end_pt, st.arcs[k + 1].start_pt) > params_.tol_len()) continue;
            const auto e = vertex_at(work_, st.arcs[k + 1].end_pt, params_);
            if (e && *e > *w && *e + 1 < n && bridge_from(*e)) out.push_back({k + 1, *w});
            const auto s = vertex_at(work_, st.arcs[k].start_pt, params_);
            if (s && *s < *w && *s >= 1 && bridge_from(*s - 1)) out.push_back({k, *w});
        }
        break;
    }
    case RuleKind::AaaaToAaa: {
        PathStructure st;
        try {
            st = analyze(work_, params_);
        } catch (const std::exception&) {
            break;
        }
        for (std::size_t k = 0; k + 2 < st.arcs.size(); ++k) {
            bool ok = true;
            for (std::size_t j = k; j < k + 3; ++j) {
                if (!vertex_at(work_, st.arcs[j].start_pt, params_) || !vertex_at(work_, st.arcs[j].end_pt, params_))
                    ok = false;
                if (j > k && distance(st.arcs[j - 1].end_pt, st.arcs[j].start_pt) > params_.tol_len()) ok = false;
            }
            if (!ok) continue;
            out.push_back({k, 0});
            out.push_back({k, 1});
        }
        break;
    }
    case RuleKind::SubpathReplan: {
        if (!options_.allow_replan) break;
        const auto match = find_forbidden_subtype(word_);
        if (!match) break;
        PathStructure st;
        try {
            st = analyze(work_, params_);
        } catch (const std::exception&) {
            break;
        }
        std::vector<std::pair<double, double>> pieces;
        for (const Arc& a : st.arcs) pieces.emplace_back(a.start_s, a.end_s);
        for (const Bridge& b : st.bridges) pieces.emplace_back(b.start_s, b.end_s);
        std::sort(pieces.begin(), pieces.end());
        if (pieces.size() != word_.size()) break;
        const double s0 = pieces[match->position].first;
        const double s1 = pieces[match->position + match->factor.size() - 1].second;
        std::vector<double> at(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) at[i] = at[i - 1] + lengths_[i - 1];
        auto open_before = [&](std::size_t i) { return i == 0 || classes_[i - 1] != EdgeClass::Short; };
        auto open_after = [&](std::size_t j) { return j + 1 == n || classes_[j] != EdgeClass::Short; };
        std::vector<std::size_t> starts;
        std::vector<std::size_t> ends;
        for (std::size_t i = n; i-- > 0;) {
            if (at[i] <= s0 + params_.tol_len() && open_before(i)) starts.push_back(i);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (at[j] >= s1 - params_.tol_len() && open_after(j)) ends.push_back(j);
        }
        if (starts.empty() || ends.empty()) break;
        out.push_back({starts.front(), ends.front()});
        if (starts.size() > 1) out.push_back({starts[1], ends.front()});
        if (ends.size() > 1) out.push_back({starts.front(), ends[1]});
        if (starts.front() != 0 || ends.front() + 1 != n) out.push_back({0, n - 1});
        break;
    }
    }
    return out;
}

std::optional<std::pair<DiscretePath, double>> Rewriter::attempt(RuleKind kind, Location loc, double step) {
    const auto& v = work_.vertices;
    const std::size_t n = v.size();
    switch (kind) {
    case RuleKind::LongLongShortcut: {
        const std::size_t b = loc.first;
        if (b == 0 || b + 1 >= n) return std::nullopt;
        const Vec2 back = v[b - 1] - v[b];
        const Vec2 fwd = v[b + 1] - v[b];
        const double keep = std::min(norm(back), norm(fwd)) - params_.ell;
        Generator gen = [&, b, keep](double d) -> std::vector<DiscretePath> {
            if (keep <= 0.0) return {};
            d = std::min(d, keep);
            DiscretePath c = work_;
            c.canonical = false;
            c.vertices[b] = v[b] + d * unit(back);
            c.vertices.insert(c.vertices.begin() + static_cast<std::ptrdiff_t>(b) + 1, v[b] + d * unit(fwd));
            return {merged(std::move(c), params_)};
        };
        return line_search(gen, step);
    }
    case RuleKind::LongShortSlide: {
        const std::size_t b = loc.first;
        if (b == 0 || b + 1 >= n) return std::nullopt;
        const std::size_t along = classes_[b - 1] == EdgeClass::Long ? b - 1 : b;
        const Generator slide = vertex_slide(b, along);
        const double keep = lengths_[along] - params_.ell;
        Generator gen = [&, keep](double d) -> std::vector<DiscretePath> {
            if (keep <= 0.0) return {};
            return slide(std::min(d, keep));
        };
        return line_search(gen, step);
    }
    case RuleKind::InflectionRotate: {
        const std::size_t e = loc.first;
        const std::size_t nb = loc.second;
        if (e >= edges() || nb >= edges()) return std::nullopt;
        const std::size_t shared = nb > e ? e + 1 : e;
        if (inflection_[nb]) {
            DiscretePath c = work_;
            c.canonical = false;
            c.vertices.erase(c.vertices.begin() + static_cast<std::ptrdiff_t>(shared));
            c = merged(std::move(c), params_);
            if (auto hit = best_of({c})) return std::make_pair(std::move(*hit), 0.0);
        }
        if (classes_[nb] == EdgeClass::Normal) return std::nullopt;
        const Generator slide = vertex_slide(shared, nb);
        const bool is_long = classes_[nb] == EdgeClass::Long;
        const double limit = is_long ? lengths_[nb] - params_.ell : lengths_[nb];
        Generator gen = [&, limit](double d) -> std::vector<DiscretePath> {
            if (limit <= 0.0) return {};
            return slide(std::min(d, limit));
        };
        return line_search(gen, step);
    }
    case RuleKind::InflectionSlide: {
        const std::size_t p = loc.first;
        const std::size_t q = loc.second;
        if (p >= q || q >= edges()) return std::nullopt;
        const bool p_infl = inflection_[p];
        if (auto hit = line_search(pair_slide(p, q, p_infl, !p_infl, false, false), step)) return hit;
        return line_search(pair_slide(p, q, p_infl, !p_infl, !p_infl, p_infl), step);
    }
    case RuleKind::LongBreakSlide: {
        const std::size_t p = loc.first;
        const std::size_t q = loc.second;
        if (p >= q || q >= edges()) return std::nullopt;
        if (auto hit = line_search(pair_slide(p, q, true, true, false, false), step)) return hit;
        return line_search(pair_slide(p, q, true, true, true, true), step);
    }
    case RuleKind::TwoInflectionSlide: {
        const std::size_t p = loc.first;
        const std::size_t q = loc.second;
        if (p >= q || q >= edges()) return std::nullopt;
        return line_search(pair_slide(p, q, true, true, false, false), step);
    }
    case RuleKind::BridgeTranslate: {
        const std::size_t p = loc.first;
        const std::size_t q = loc.second;
        if (p >= q || q >= edges()) return std::nullopt;
        if (auto hit = line_search(pair_slide(p, q, true, true, false, false), step)) return hit;
        const bool long_p = classes_[p] == EdgeClass::Long;
        const bool long_q = classes_[q] == EdgeClass::Long;
        if (!long_p && !long_q) return std::nullopt;
        return line_search(pair_slide(p, q, long_q, long_p, long_p, long_q), step);
    }
    case RuleKind::AabElim: {
        const std::size_t w = loc.second;
        if (w == 0 || w + 1 >= n) return std::nullopt;
        PathStructure st;
        try {
            st = analyze(work_, params_);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (loc.first >= st.arcs.size()) return std::nullopt;
        const Arc& arc = st.arcs[loc.first];
        const auto s = vertex_at(work_, arc.start_pt, params_);
        const auto e = vertex_at(work_, arc.end_pt, params_);
        if (!s || !e) return std::nullopt;
        std::size_t first = 0;
        std::size_t last = 0;
        if (*s == w) {
            first = w + 1;
            last = *e;
        } else if (*e == w) {
            first = *s;
            last = w - 1;
        } else {
            return std::nullopt;
        }
        const Point2 pivot = v[w];
        Generator gen = [&, first, last, pivot](double d) -> std::vector<DiscretePath> {
            std::vector<DiscretePath> out;
            const double a = d / params_.ell;
            if (a > kPi / 2.0) return out;
            for (double sgn : {1.0, -1.0}) {
                if (auto c = rotate_block(work_, first, last, pivot, sgn * a)) out.push_back(*c);
            }
            return out;
        };
        return line_search(gen, step);
    }
    case RuleKind::AaaaToAaa:
        return aaaa(loc);
    case RuleKind::SubpathReplan:
        return replan(loc);
    }
    return std::nullopt;
}

bool Rewriter::accepts_equal(const DiscretePath& cand) const {
    const double len = path_length(cand);
    if (len > length_ + eps()) return false;
    if (!safe_feasible(cand, params_)) return false;
    if (len <= length_ - eps()) return true;
    return type_length(cand, params_) < word_.size();
}

/// Rigid rotations of three consecutive arcs u0-b, b-c, c-w that keep every edge
/// length: c turns about w, b stays on the circle about u0 through b.
std::optional<std::pair<DiscretePath, double>> Rewriter::aaaa(Location loc, bool allow_flush) const {
    PathStructure st;
    try {
        st = analyze(work_, params_);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (loc.first + 2 >= st.arcs.size()) return std::nullopt;
    const auto iu = vertex_at(work_, st.arcs[loc.first].start_pt, params_);
    const auto ib = vertex_at(work_, st.arcs[loc.first].end_pt, params_);
    const auto ic = vertex_at(work_, st.arcs[loc.first + 1].end_pt, params_);
    const auto iw = vertex_at(work_, st.arcs[loc.first + 2].end_pt, params_);
    if (!iu || !ib || !ic || !iw) return std::nullopt;
    if (!(*iu < *ib && *ib < *ic && *ic < *iw)) return std::nullopt;
    const bool from_end = loc.second == 0;
    const auto& v = work_.vertices;

    // Returns the deformed path for rotation eps, or nullopt if the circles miss.
    auto deform = [&](double eps) -> std::optional<DiscretePath> {
        // Roles are mirrored when pivoting at the start of the window.
        const std::size_t ip = from_end ? *iw : *iu;  // rotation pivot
        const std::size_t iq = from_end ? *iu : *iw;  // fixed circle centre
        const std::size_t inear = from_end ? *ic : *ib;
        const std::size_t ifar = from_end ? *ib : *ic;
        const Point2 near_new = rotate_about(v[inear], v[ip], eps);
        const double r1 = distance(v[iq], v[ifar]);
        const double r2 = distance(v[inear], v[ifar]);
        const Vec2 dq = near_new - v[iq];
        const double d = norm(dq);
        if (d <= 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) return std::nullopt;
        const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
        const double h2 = r1 * r1 - a * a;
        if (h2 < 0.0) return std::nullopt;
        const Point2 mid = v[iq] + (a / d) * dq;
        const Vec2 off = std::sqrt(h2) / d * perp(dq);
        const Point2 c1 = mid + off;
        const Point2 c2 = mid - off;
        const Point2 far_new = distance(c1, v[ifar]) <= distance(c2, v[ifar]) ? c1 : c2;
        const double turn_q = turn_angle(v[ifar] - v[iq], far_new - v[iq]);
        const double turn_m = turn_angle(v[inear] - v[ifar], near_new - far_new);
        DiscretePath out = work_;
        out.canonical = false;
        const std::size_t lo_q = std::min(iq, ifar);
        const std::size_t hi_q = std::max(iq, ifar);
        for (std::size_t i = lo_q + 1; i < hi_q; ++i) out.vertices[i] = rotate_about(v[i], v[iq], turn_q);
        out.vertices[ifar] = far_new;
        const std::size_t lo_m = std::min(ifar, inear);
        const std::size_t hi_m = std::max(ifar, inear);
        for (std::size_t i = lo_m + 1; i < hi_m; ++i) {
            out.vertices[i] = far_new + rotate(v[i] - v[ifar], turn_m);
        }
        out.vertices[inear] = near_new;
        const std::size_t lo_p = std::min(inear, ip);
        const std::size_t hi_p = std::max(inear, ip);
        for (std::size_t i = lo_p + 1; i < hi_p; ++i) out.vertices[i] = rotate_about(v[i], v[ip], eps);
        return out;
    };
    auto ok = [&](double eps) {
        const auto c = deform(eps);
        return c && safe_feasible(*c, params_);
    };
    std::optional<std::pair<DiscretePath, double>> best;
    std::size_t best_type = word_.size();
    for (double sgn : {1.0, -1.0}) {
        double good = 0.0;
        double bad = 0.0;
        double e = options_.initial_step;
        bool found_bad = false;
        while (e < kPi) {
            if (ok(sgn * e)) {
                good = e;
                e *= 2.0;
            } else {
                bad = e;
                found_bad = true;
                break;
            }
        }
        if (!found_bad) continue;
        for (int it = 0; it < 80 && bad - good > 1e-15; ++it) {
            const double mid = 0.5 * (good + bad);
            if (ok(sgn * mid)) good = mid;
            else bad = mid;
        }
        if (good == 0.0) continue;
        const auto cand = deform(sgn * good);
        if (!cand) continue;
        const bool flush = allow_flush && std::abs(path_length(*cand) - length_) <= eps() &&
                           std::abs(vertex_turns(*cand).front()) >= params_.theta - kTolAng &&
                           safe_feasible(*cand, params_);
        if (!flush && !accepts_equal(*cand)) continue;
        const std::size_t t = type_length(*cand, params_);
        if (t < best_type || (flush && !best)) {
            best_type = t;
            best = std::make_pair(*cand, good * params_.ell);
        }
    }
    return best;
}

std::optional<std::pair<DiscretePath, double>> Rewriter::replan(Location loc) const {
    const auto& v = work_.vertices;
    const std::size_t n = v.size();
    const std::size_t i = loc.first;
    const std::size_t j = loc.second;
    if (i >= j || j >= n) return std::nullopt;
    const Configuration a =
        i == 0 ? work_.start : Configuration{v[i], unit(v[i] - v[i - 1])};
    const Configuration b =
        j + 1 == n ? work_.end : Configuration{v[j], unit(v[j + 1] - v[j])};
    PlanResult sub;
    try {
        PlannerOptions po;
        po.parallel = false;
        sub = plan(a, b, params_, po);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    DiscretePath c = work_;
    c.canonical = false;
    c.vertices.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
    c.vertices.insert(c.vertices.end(), sub.path.vertices.begin(), sub.path.vertices.end());
    c.vertices.front() = v.front();
    c.vertices.insert(c.vertices.end(), v.begin() + static_cast<std::ptrdiff_t>(j) + 1, v.end());
    c.vertices.back() = v.back();
    if (!accepts_equal(c)) return std::nullopt;
    return std::make_pair(std::move(c), 0.0);
}

struct Found {
    Application application;
    DiscretePath result;
};

std::optional<Found> search(const DiscretePath& path, const Params& params, const RewriteOptions& options) {
    const DiscretePath work = working_form(path, params);
    Rewriter rw(work, params, options);
    const double start = options.initial_step * params.ell;
    for (RuleKind kind : kPriority) {
        for (const Location& loc : rw.locations(kind)) {
            auto hit = rw.attempt(kind, loc, start);
            if (!hit) continue;
            return Found{{{kind, hit->second}, loc}, tidy(hit->first, params)};
        }
    }
    return std::nullopt;
}

}  // namespace

const char* to_string(RuleKind k) { return kRuleNames[static_cast<std::size_t>(k)]; }

std::optional<RuleKind> rule_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kRuleCount; ++i) {
        if (s == kRuleNames[i]) return static_cast<RuleKind>(i);
    }
    return std::nullopt;
}

DiscretePath working_form(const DiscretePath& path, const Params& params) {
    try {
        return canonicalize(path, params);
    } catch (const PreconditionError&) {
        return path;
    }
}

std::optional<Application> find_applicable(const DiscretePath& path, const Params& params,
                                           const RewriteOptions& options) {
    if (!is_feasible(path, params)) throw PreconditionError("find_applicable: path is infeasible");
    const auto found = search(path, params, options);
    if (!found) return std::nullopt;
    return found->application;
}

DiscretePath apply(const DiscretePath& path, const Application& application, const Params& params,
                   const RewriteOptions& options) {
    if (!is_feasible(path, params)) throw PreconditionError("apply: path is infeasible");
    const DiscretePath work = working_form(path, params);
    Rewriter rw(work, params, options);
    const double start = application.rule.step > 0.0 ? application.rule.step : options.initial_step * params.ell;
    auto hit = rw.attempt(application.rule.kind, application.location, start);
    if (!hit) throw RewriteError(std::string("rule not applicable: ") + to_string(application.rule.kind));
    return tidy(hit->first, params);
}

std::optional<DiscretePath> three_arc_transform(const DiscretePath& path, const Params& params,
                                               const RewriteOptions& options) {
    if (!is_feasible(path, params)) throw PreconditionError("three_arc_transform: path is infeasible");
    const PathStructure st = analyze(path, params);
    if (st.type_word != "AAA" || st.arcs[1].orientation != st.arcs[0].orientation ||
        st.arcs[2].orientation != st.arcs[0].orientation)
        throw PreconditionError("three_arc_transform: expected three arcs of one orientation");
    if (std::abs(vertex_turns(path).front()) >= params.theta - kTolAng) return path;
    Rewriter rw(path, params, options);
    for (const std::size_t pivot : {0u, 1u}) {
        if (auto hit = rw.aaaa({0, pivot}, true)) return tidy(hit->first, params);
    }
    return std::nullopt;
}

ShortenResult shorten(const DiscretePath& path, const Params& params, const RewriteOptions& options) {
    if (!is_feasible(path, params)) throw PreconditionError("shorten: path is infeasible");
    ShortenResult r;
    r.path = path;
    std::string word = type_string(path, params);
    double length = path_length(path);
    for (std::size_t k = 0; k < options.budget; ++k) {
        auto found = search(r.path, params, options);
        if (!found) {
            r.trace.fixed_point = true;
            return r;
        }
        RewriteStep step;
        step.rule = found->application.rule.kind;
        step.location = found->application.location;
        step.step = found->application.rule.step;
        step.length_before = length;
        step.type_before = word;
        r.path = std::move(found->result);
        length = path_length(r.path);
        word = type_string(r.path, params);
        step.length_after = length;
        step.type_after = word;
        r.trace.steps.push_back(std::move(step));
    }
    r.trace.budget_exhausted = !search(r.path, params, options).has_value() ? false : true;
    r.trace.fixed_point = !r.trace.budget_exhausted;
    return r;
}

bool is_progress(const RewriteStep& step, const Params& params, const RewriteOptions& options) {
    const double eps = options.improve_eps * params.ell;
    if (step.length_after <= step.length_before - eps) return true;
    return step.length_after <= step.length_before + eps && step.type_after.size() < step.type_before.size();
}

}  // namespace ddgeo
