#include "ddgeo/typing.hpp"

#include <algorithm>

namespace ddgeo {

namespace {

/// The path with zero-turn internal vertices removed, plus bookkeeping.
struct Reduced {
    std::vector<Point2> pts;
    std::vector<std::size_t> index;  // original vertex index of each reduced vertex
    std::vector<double> s;           // arclength at each reduced vertex
    std::vector<double> turns;       // augmented turn at each reduced vertex
    std::vector<double> lengths;     // reduced edge lengths
    std::vector<EdgeClass> classes;
};

Reduced reduce(const DiscretePath& path, const Params& params) {
    Reduced r;
    const std::vector<double> turns = vertex_turns(path);
    const std::size_t n = path.vertices.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) s += distance(path.vertices[i - 1], path.vertices[i]);
        if (i == 0 || i + 1 == n || turn_sign(turns[i]) != 0) {
            r.pts.push_back(path.vertices[i]);
            r.index.push_back(i);
            r.s.push_back(s);
            r.turns.push_back(turns[i]);
        }
    }
    for (std::size_t j = 0; j + 1 < r.pts.size(); ++j) {
        r.lengths.push_back(r.s[j + 1] - r.s[j]);
        r.classes.push_back(classify_edge(r.lengths.back(), params));
    }
    return r;
}

Point2 point_at(const Reduced& r, double s) {
    if (r.pts.size() == 1) return r.pts.front();
    auto it = std::upper_bound(r.s.begin(), r.s.end(), s);
    std::size_t j = it == r.s.begin() ? 0 : static_cast<std::size_t>(it - r.s.begin()) - 1;
    j = std::min(j, r.pts.size() - 2);
    const double t = (s - r.s[j]) / r.lengths[j];
    return r.pts[j] + t * (r.pts[j + 1] - r.pts[j]);
}

Orientation orientation_from(int a, int b) {
    const int s = a != 0 ? a : b;
    return s < 0 ? Orientation::Right : Orientation::Left;
}

std::vector<Arc> arcs_of(const Reduced& r, const Params& params) {
    const std::size_t m = r.lengths.size();
    std::vector<Arc> cand;
    if (m == 0) return cand;
    const double ell = params.ell;
    const double tol = params.tol_len();
    auto is_theta = [&](std::size_t j) { return std::abs(r.turns[j]) >= params.theta - kTolAng; };

    for (std::size_t j = 1; j < m; ++j) {
        if (!is_theta(j)) continue;
        const int sg = turn_sign(r.turns[j]);
        std::size_t k = j;
        while (k + 1 < m && is_theta(k + 1) && turn_sign(r.turns[k + 1]) == sg &&
               r.classes[k] == EdgeClass::Normal) {
            ++k;
        }
        Arc a;
        a.start_s = r.s[j] - std::min(r.lengths[j - 1], ell);
        a.end_s = r.s[k] + std::min(r.lengths[k], ell);
        a.first_vertex = r.index[j];
        a.last_vertex = r.index[k];
        a.orientation = sg < 0 ? Orientation::Right : Orientation::Left;
        a.edge_count = k - j + 2;
        cand.push_back(a);
        j = k;
    }

    const bool flush_u = is_theta(0);
    const bool flush_v = is_theta(m);
    const double len0 = r.lengths.front();
    const double len_last = r.lengths.back();
    const bool normal0 = r.classes.front() == EdgeClass::Normal;
    const bool normal_last = r.classes.back() == EdgeClass::Normal;
    const double total = r.s.back();
    auto single = [&](double s0, double s1, int sa, int sb) {
        Arc a;
        a.start_s = s0;
        a.end_s = s1;
        a.orientation = orientation_from(sa, sb);
        a.edge_count = 1;
        cand.push_back(a);
    };
    if (len0 > ell + tol) {
        if (flush_u) single(0.0, ell, turn_sign(r.turns[0]), 0);
    } else if (flush_u || normal0 || (m == 1 && flush_v)) {
        single(0.0, len0, turn_sign(r.turns[0]), turn_sign(r.turns[1]));
    }
    if (len_last > ell + tol) {
        if (flush_v) single(total - ell, total, turn_sign(r.turns[m]), 0);
    } else if (flush_v || normal_last || (m == 1 && flush_u)) {
        single(total - len_last, total, turn_sign(r.turns[m]), turn_sign(r.turns[m - 1]));
    }
    for (std::size_t e = 1; e + 1 < m; ++e) {
        if (r.classes[e] == EdgeClass::Normal) {
            single(r.s[e], r.s[e + 1], turn_sign(r.turns[e]), turn_sign(r.turns[e + 1]));
        }
    }

    std::vector<Arc> out;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        bool contained = false;
        for (std::size_t k = 0; k < cand.size() && !contained; ++k) {
            if (k == i) continue;
            const bool inside = cand[k].start_s <= cand[i].start_s + tol && cand[i].end_s <= cand[k].end_s + tol;
            if (!inside) continue;
            const bool same = std::abs(cand[k].start_s - cand[i].start_s) <= tol &&
                              std::abs(cand[k].end_s - cand[i].end_s) <= tol;
            contained = !same || k < i;
        }
        if (!contained) out.push_back(cand[i]);
    }
    std::sort(out.begin(), out.end(), [](const Arc& a, const Arc& b) {
        return a.start_s != b.start_s ? a.start_s < b.start_s : a.end_s < b.end_s;
    });
    for (Arc& a : out) {
        a.start_pt = point_at(r, a.start_s);
        a.end_pt = point_at(r, a.end_s);
    }
    return out;
}

std::vector<Bridge> bridges_of(const DiscretePath& path, const Reduced& r, const std::vector<Arc>& arcs,
                               const Params& params) {
    std::vector<Bridge> out;
    if (r.lengths.empty()) return out;
    const double tol = params.tol_len();
    const double total = r.s.back();

    std::vector<std::pair<double, double>> gaps;
    double cursor = 0.0;
    std::vector<const Arc*> sorted;
    for (const Arc& a : arcs) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(), [](const Arc* a, const Arc* b) { return a->start_s < b->start_s; });
    for (const Arc* a : sorted) {
        if (a->start_s > cursor + tol) gaps.emplace_back(cursor, a->start_s);
        cursor = std::max(cursor, a->end_s);
    }
    if (total > cursor + tol) gaps.emplace_back(cursor, total);

    std::vector<double> orig_s{0.0};
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
        orig_s.push_back(orig_s.back() + distance(path.vertices[i], path.vertices[i + 1]));
    }
    auto host = [&](double s) {
        auto it = std::upper_bound(orig_s.begin(), orig_s.end(), s);
        std::size_t e = it == orig_s.begin() ? 0 : static_cast<std::size_t>(it - orig_s.begin()) - 1;
        return std::min(e, path.edge_count() - 1);
    };
    for (const auto& [a, b] : gaps) {
        double piece = a;
        auto emit = [&](double s0, double s1) {
            if (s1 - s0 <= tol) return;
            out.push_back({point_at(r, s0), point_at(r, s1), s0, s1, host(0.5 * (s0 + s1))});
        };
        for (std::size_t j = 1; j + 1 < r.pts.size(); ++j) {
            if (r.s[j] > a + tol && r.s[j] < b - tol) {
                emit(piece, r.s[j]);
                piece = r.s[j];
            }
        }
        emit(piece, b);
    }
    return out;
}

void require_feasible(const DiscretePath& path, const Params& params) {
    if (!validate(path, params).empty()) throw PreconditionError("path is not feasible");
}

}  // namespace

const char* to_string(Orientation o) { return o == Orientation::Left ? "Left" : "Right"; }

std::vector<Arc> extract_arcs(const DiscretePath& path, const Params& params) {
    require_feasible(path, params);
    return arcs_of(reduce(path, params), params);
}

std::vector<Bridge> extract_bridges(const DiscretePath& path, const std::vector<Arc>& arcs,
                                    const Params& params) {
    return bridges_of(path, reduce(path, params), arcs, params);
}

PathStructure analyze(const DiscretePath& path, const Params& params) {
    require_feasible(path, params);
    const Reduced r = reduce(path, params);
    PathStructure st;
    st.arcs = arcs_of(r, params);
    st.bridges = bridges_of(path, r, st.arcs, params);
    std::vector<std::pair<double, char>> items;
    for (const Arc& a : st.arcs) items.emplace_back(a.start_s, 'A');
    for (const Bridge& b : st.bridges) items.emplace_back(b.start_s, 'B');
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& it : items) st.type_word.push_back(it.second);
    return st;
}

std::string type_string(const DiscretePath& path, const Params& params) {
    return analyze(path, params).type_word;
}

DiscretePath canonicalize(const DiscretePath& path, const Params& params) {
    const PathStructure st = analyze(path, params);
    const double tol = params.tol_len();
    std::vector<double> cuts;
    for (const Bridge& b : st.bridges) {
        cuts.push_back(b.start_s);
        cuts.push_back(b.end_s);
    }
    std::sort(cuts.begin(), cuts.end());

    DiscretePath out = path;
    out.vertices.clear();
    out.canonical = true;
    std::size_t c = 0;
    double s = 0.0;
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        if (i > 0) {
            const Point2 a = path.vertices[i - 1];
            const Point2 b = path.vertices[i];
            const double len = distance(a, b);
            while (c < cuts.size() && cuts[c] < s + len - tol) {
                if (cuts[c] > s + tol) out.vertices.push_back(a + ((cuts[c] - s) / len) * (b - a));
                ++c;
            }
            s += len;
        }
        while (c < cuts.size() && cuts[c] <= s + tol) ++c;
        out.vertices.push_back(path.vertices[i]);
    }
    if (!validate(out, params).empty()) {
        throw PreconditionError("canonical form is infeasible: a Long edge neighbours a non-Normal edge");
    }
    return out;
}

std::optional<ForbiddenMatch> find_forbidden_subtype(std::string_view word) {
    for (std::size_t pos = 0; pos < word.size(); ++pos) {
        for (const std::string_view f : kForbiddenFactors) {
            if (word.substr(pos, f.size()) == f) return ForbiddenMatch{f, pos};
        }
    }
    return std::nullopt;
}

bool is_true_type(std::string_view word) {
    return std::find(kTrueTypes.begin(), kTrueTypes.end(), word) != kTrueTypes.end();
}

}  // namespace ddgeo
