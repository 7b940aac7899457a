#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace powerloop {

// Seven-level linguistic scale used for all three fuzzy variables.
enum class TermId : int { NB = 0, NM, NS, Z, PS, PM, PB };

inline constexpr std::size_t kNumTerms = 7;

inline constexpr std::array<std::string_view, kNumTerms> kTermNames = {
    "NB", "NM", "NS", "Z", "PS", "PM", "PB"};

// Degree of membership per term, index order NB..PB.
using Activations = std::array<double, kNumTerms>;

// Triangular membership function. Shouldered variants hold membership 1 from
// the peak out to the universe edge and are used for the two extreme terms.
struct Term {
    enum class Shoulder { none, left, right };

    double a = 0.0;    // left foot
    double peak = 0.0; // apex (membership 1)
    double c = 0.0;    // right foot
    Shoulder shoulder = Shoulder::none;
};

// Membership of x in a single term. Throws ConfigError on malformed geometry
// (a > peak or peak > c).
double triangular_membership(double x, const Term& term);

// A complete 7-term partition of one universe of discourse. Peaks are strictly
// increasing and symmetric about the universe centre; interior triangles put
// their feet on the neighbouring peaks so adjacent terms cross at 0.5 and the
// whole universe is covered.
class TermSet {
public:
    // Evenly spaced peaks across [lo, hi] with shouldered extremes.
    static TermSet uniform(double lo, double hi);

    // Explicit peak placement, validated against the same invariants.
    static TermSet from_peaks(const std::array<double, kNumTerms>& peaks);

    double lo() const { return terms_.front().peak; }
    double hi() const { return terms_.back().peak; }
    const Term& term(TermId id) const { return terms_[static_cast<int>(id)]; }
    const Term& term(std::size_t i) const { return terms_[i]; }

    // Degrees of membership for all terms; the input is clamped to the
    // universe first, so at least one entry is always positive.
    Activations fuzzify(double x) const;

private:
    TermSet() = default;
    std::array<Term, kNumTerms> terms_{};
};

// 7x7 map from (error term, error-rate term) to an output term.
class RuleTable {
public:
    // The built-in rule base for incremental attenuation control: aggressive
    // correction in the corners, braking on the anti-diagonal.
    static RuleTable defaults();

    // Rows supplied as term ids, row index = error term NB..PB, column index =
    // error-rate term NB..PB. Validated for monotone rows/columns and odd
    // symmetry (cell(i,j) mirrors cell(6-i,6-j)).
    static RuleTable from_rows(const std::array<std::array<TermId, kNumTerms>, kNumTerms>& rows);

    TermId at(std::size_t erow, std::size_t decol) const { return rows_[erow][decol]; }

    bool operator==(const RuleTable&) const = default;

private:
    RuleTable() = default;
    std::array<std::array<TermId, kNumTerms>, kNumTerms> rows_{};
};

// Mamdani min/max inference: activation of each output term is the max over
// all rules mapping to it of min(e degree, de degree). Throws InferenceError
// if nothing fires (impossible for clamped inputs).
Activations evaluate_rules(const Activations& e_deg, const Activations& de_deg,
                           const RuleTable& table);

// Centroid of the max-envelope of the clipped output terms, integrated
// analytically over the piecewise-linear envelope. Throws InferenceError when
// every activation is zero.
double defuzzify_centroid(const Activations& activations, const TermSet& out_set);

// Bundles the three term sets and the rule table into the inference step used
// by the fuzzy-integral controller.
class FuzzyEngine {
public:
    FuzzyEngine(TermSet e_set, TermSet de_set, TermSet du_set, RuleTable table);

    // Full pipeline: fuzzify both inputs, fire the rule base, defuzzify.
    // Returns the commanded attenuation rate (dB/s).
    double step(double e, double de) const;

    const TermSet& e_set() const { return e_set_; }
    const TermSet& de_set() const { return de_set_; }
    const TermSet& du_set() const { return du_set_; }
    const RuleTable& table() const { return table_; }

private:
    TermSet e_set_;
    TermSet de_set_;
    TermSet du_set_;
    RuleTable table_;
};

} // namespace powerloop
