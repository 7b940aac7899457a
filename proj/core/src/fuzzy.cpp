#include "powerloop/fuzzy.hpp"

#include "powerloop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace powerloop {

double triangular_membership(double x, const Term& term) {
    if (!(term.a <= term.peak) || !(term.peak <= term.c)) {
        throw ConfigError("malformed term: feet must straddle the peak");
    }
    switch (term.shoulder) {
    case Term::Shoulder::left:
        if (x <= term.peak) return 1.0;
        if (x >= term.c) return 0.0;
        return (term.c - x) / (term.c - term.peak);
    case Term::Shoulder::right:
        if (x >= term.peak) return 1.0;
        if (x <= term.a) return 0.0;
        return (x - term.a) / (term.peak - term.a);
    case Term::Shoulder::none:
        break;
    }
    if (x <= term.a || x >= term.c) return 0.0;
    if (x == term.peak) return 1.0;
    if (x < term.peak) return (x - term.a) / (term.peak - term.a);
    return (term.c - x) / (term.c - term.peak);
}

TermSet TermSet::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ConfigError("term set bounds must be finite with lo < hi");
    }
    std::array<double, kNumTerms> peaks{};
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        peaks[i] = lo + static_cast<double>(i) * (hi - lo) / 6.0;
    }
    // Guard against accumulated rounding at the top edge.
    peaks.back() = hi;
    return from_peaks(peaks);
}

TermSet TermSet::from_peaks(const std::array<double, kNumTerms>& peaks) {
    for (double p : peaks) {
        if (!std::isfinite(p)) throw ConfigError("term peak must be finite");
    }
    for (std::size_t i = 1; i < kNumTerms; ++i) {
        if (!(peaks[i - 1] < peaks[i])) {
            throw ConfigError("term peaks must be strictly increasing");
        }
    }
    const double span = peaks.back() - peaks.front();
    const double centre = 0.5 * (peaks.front() + peaks.back());
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        const double mirror = 2.0 * centre - peaks[kNumTerms - 1 - i];
        if (std::abs(peaks[i] - mirror) > 1e-9 * span) {
            throw ConfigError("term peaks must be symmetric about the universe centre");
        }
    }

    TermSet set;
    set.terms_[0] = Term{peaks[0], peaks[0], peaks[1], Term::Shoulder::left};
    for (std::size_t i = 1; i + 1 < kNumTerms; ++i) {
        set.terms_[i] = Term{peaks[i - 1], peaks[i], peaks[i + 1], Term::Shoulder::none};
    }
    set.terms_[kNumTerms - 1] =
        Term{peaks[kNumTerms - 2], peaks[kNumTerms - 1], peaks[kNumTerms - 1], Term::Shoulder::right};
    return set;
}

Activations TermSet::fuzzify(double x) const {
    const double clamped = std::clamp(x, lo(), hi());
    Activations deg{};
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        deg[i] = triangular_membership(clamped, terms_[i]);
    }
    return deg;
}

RuleTable RuleTable::defaults() {
    using enum TermId;
    return from_rows({{
        {NB, NB, NB, NB, NM, NS, Z},
        {NB, NB, NB, NM, NS, Z, PS},
        {NB, NB, NM, NS, Z, PS, PM},
        {NB, NM, NS, Z, PS, PM, PB},
        {NM, NS, Z, PS, PM, PB, PB},
        {NS, Z, PS, PM, PB, PB, PB},
        {Z, PS, PM, PB, PB, PB, PB},
    }});
}

RuleTable RuleTable::from_rows(const std::array<std::array<TermId, kNumTerms>, kNumTerms>& rows) {
    constexpr int last = static_cast<int>(kNumTerms) - 1;
    for (int i = 0; i <= last; ++i) {
        for (int j = 0; j <= last; ++j) {
            const int v = static_cast<int>(rows[i][j]);
            if (v < 0 || v > last) throw ConfigError("rule table entry out of range");
            if (j > 0 && static_cast<int>(rows[i][j - 1]) > v) {
                throw ConfigError("rule table rows must be non-decreasing");
            }
            if (i > 0 && static_cast<int>(rows[i - 1][j]) > v) {
                throw ConfigError("rule table columns must be non-decreasing");
            }
            const int mirror = static_cast<int>(rows[last - i][last - j]);
            if (v + mirror != last) {
                throw ConfigError("rule table must be odd-symmetric about its centre");
            }
        }
    }
    RuleTable t;
    t.rows_ = rows;
    return t;
}

Activations evaluate_rules(const Activations& e_deg, const Activations& de_deg,
                           const RuleTable& table) {
    Activations act{};
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        if (e_deg[i] <= 0.0) continue;
        for (std::size_t j = 0; j < kNumTerms; ++j) {
            const double w = std::min(e_deg[i], de_deg[j]);
            if (w <= 0.0) continue;
            auto& slot = act[static_cast<int>(table.at(i, j))];
            slot = std::max(slot, w);
        }
    }
    if (std::all_of(act.begin(), act.end(), [](double v) { return v <= 0.0; })) {
        throw InferenceError("no rule fired for the given degree vectors");
    }
    return act;
}

namespace {

// One linear stretch of a clipped term, y = y0..y1 over x = x0..x1.
struct Piece {
    double x0, x1, y0, y1;
    double slope() const { return (y1 - y0) / (x1 - x0); }
    double offset() const { return y0 - slope() * x0; }
};

void append_piece(std::vector<Piece>& out, double x0, double y0, double x1, double y1,
                  double eps) {
    if (x1 - x0 > eps) out.push_back(Piece{x0, x1, y0, y1});
}

// Vertices of a single term clipped at height h, as consecutive pieces.
void clipped_pieces(const Term& t, double h, double lo, double hi, double eps,
                    std::vector<Piece>& out) {
    switch (t.shoulder) {
    case Term::Shoulder::left: {
        const double xr = t.c - h * (t.c - t.peak);
        append_piece(out, lo, h, xr, h, eps);
        append_piece(out, xr, h, t.c, 0.0, eps);
        return;
    }
    case Term::Shoulder::right: {
        const double xl = t.a + h * (t.peak - t.a);
        append_piece(out, t.a, 0.0, xl, h, eps);
        append_piece(out, xl, h, hi, h, eps);
        return;
    }
    case Term::Shoulder::none: {
        const double xl = t.a + h * (t.peak - t.a);
        const double xr = t.c - h * (t.c - t.peak);
        append_piece(out, t.a, 0.0, xl, h, eps);
        append_piece(out, xl, h, xr, h, eps);
        append_piece(out, xr, h, t.c, 0.0, eps);
        return;
    }
    }
}

} // namespace

double defuzzify_centroid(const Activations& activations, const TermSet& out_set) {
    const double lo = out_set.lo();
    const double hi = out_set.hi();
    const double span = hi - lo;
    const double eps = 1e-12 * span;

    std::vector<Piece> pieces;
    pieces.reserve(3 * kNumTerms);
    bool any = false;
    for (std::size_t i = 0; i < kNumTerms; ++i) {
        const double h = activations[i];
        if (h <= 0.0) continue;
        if (h > 1.0 + 1e-12) throw InferenceError("activation above 1");
        any = true;
        clipped_pieces(out_set.term(i), std::min(h, 1.0), lo, hi, eps, pieces);
    }
    if (!any) throw InferenceError("cannot defuzzify an empty activation set");

    // The envelope max(min(act_i, term_i(x))) is linear between breakpoints as
    // long as every crossing of two pieces is itself a breakpoint.
    std::vector<double> knots;
    knots.reserve(4 * pieces.size());
    knots.push_back(lo);
    knots.push_back(hi);
    for (const Piece& p : pieces) {
        knots.push_back(p.x0);
        knots.push_back(p.x1);
    }
    for (std::size_t a = 0; a < pieces.size(); ++a) {
        for (std::size_t b = a + 1; b < pieces.size(); ++b) {
            const Piece& pa = pieces[a];
            const Piece& pb = pieces[b];
            const double left = std::max(pa.x0, pb.x0);
            const double right = std::min(pa.x1, pb.x1);
            if (right - left <= eps) continue;
            const double ma = pa.slope();
            const double mb = pb.slope();
            if (std::abs(ma - mb) <= 1e-15) continue;
            const double xi = (pb.offset() - pa.offset()) / (ma - mb);
            if (xi > left && xi < right) knots.push_back(xi);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [eps](double u, double v) { return v - u <= eps; }),
                knots.end());

    const auto envelope = [&](double x) {
        double y = 0.0;
        for (std::size_t i = 0; i < kNumTerms; ++i) {
            if (activations[i] <= 0.0) continue;
            y = std::max(y, std::min(activations[i],
                                     triangular_membership(x, out_set.term(i))));
        }
        return y;
    };

    double area = 0.0;
    double moment = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double xa = knots[k];
        const double xb = knots[k + 1];
        const double w = xb - xa;
        if (w <= eps) continue;
        const double ya = envelope(xa);
        const double yb = envelope(xb);
        area += 0.5 * (ya + yb) * w;
        // Exact first moment of a linear segment.
        moment += w / 6.0 * (xa * (2.0 * ya + yb) + xb * (ya + 2.0 * yb));
    }
    if (area <= eps) throw InferenceError("activation envelope has no area");
    return moment / area;
}

FuzzyEngine::FuzzyEngine(TermSet e_set, TermSet de_set, TermSet du_set, RuleTable table)
    : e_set_(e_set), de_set_(de_set), du_set_(du_set), table_(table) {}

double FuzzyEngine::step(double e, double de) const {
    const Activations e_deg = e_set_.fuzzify(e);
    const Activations de_deg = de_set_.fuzzify(de);
    const Activations act = evaluate_rules(e_deg, de_deg, table_);
    return defuzzify_centroid(act, du_set_);
}

} // namespace powerloop
