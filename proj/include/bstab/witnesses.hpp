#pragma once

#include "bstab/charges.hpp"
#include "bstab/chern.hpp"
#include "bstab/exceptional.hpp"

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bstab {

class BadParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedPair : public std::invalid_argument {
public:
    UnsupportedPair() : std::invalid_argument("no Hom data tabulated for this pair") {}
};

class EmptyCorpus : public std::invalid_argument {
public:
    EmptyCorpus() : std::invalid_argument("witness corpus is empty") {}
};

class PathThroughZero : public std::runtime_error {
public:
    PathThroughZero() : std::runtime_error("central charge vanishes along the path") {}
};

struct LineBundleKind {
    long d = 0;
};
struct SkyscraperKind {};
struct SteinerKind {
    long t = 1, r = 1;
};
struct SteinerDualTwistKind {
    long t = 1, r = 1;
};
struct SemiHomogKind {
    long p = 0, q = 1, r0 = 1;
};

using WitnessKind = std::variant<LineBundleKind, SkyscraperKind, SteinerKind, SteinerDualTwistKind, SemiHomogKind>;

/// A class with stability provenance. `v` is the class of the unshifted object.
struct WitnessObject {
    WitnessKind kind;
    ChernVector v;
    long shift = 0;
    std::string stable_hint;
    bool stable = true;  ///< whether the hint asserts stability

    std::string name() const;
    ChernVector shifted_class() const { return shift % 2 == 0 ? v : -v; }
};

WitnessObject make_witness(const WitnessKind& kind, long shift = 0);

/// Parses `kind:params[shift]`, e.g. `line:-1[1]`, `sky`, `steiner:1,2`,
/// `steiner_dual:1,2`, `semihomog:1,2,4`.
WitnessObject parse_witness(std::string_view text);

/// One witness per line; blank lines and `#` comments are skipped.
std::vector<WitnessObject> parse_corpus(std::istream& in);

/// Line bundles O(d) for d in [floor(beta) - 4, floor(beta) + 5] and O_x.
std::vector<WitnessObject> default_corpus(double beta);

struct HomFact {
    WitnessObject source, target;
    std::vector<int> degrees;  ///< i with Ext^i(source, target) != 0, shifts ignored
};

/// Line bundles and skyscrapers only; anything else raises UnsupportedPair.
HomFact hom_facts(const WitnessObject& a, const WitnessObject& b);

struct GldimResult {
    double lower_bound = 0.0;
    double max_gap = 0.0;
    bool found = false;
    std::string attaining_source, attaining_target;
    int attaining_degree = 0;
    std::vector<double> phases;  ///< phase of each corpus object (unshifted)
    std::vector<std::string> hints_used;
    long unsupported_pairs = 0;
};

/// Phase of the unshifted witness under sigma^{a,b}_{alpha,beta}, using the
/// double-tilted heart to fix the branch. Assumes the witness is nu-semistable.
double geometric_phase(const WitnessObject& w, double alpha, double beta, double a, double b);

/// Max of phi(B) + i - phi(A) over Hom facts between corpus members marked stable.
GldimResult gldim_scan(double alpha, double beta, double a, double b, const std::vector<WitnessObject>& corpus,
                       unsigned workers = 1);

/// The same scan at an algebraic datum: collection members get phases phi_j.
/// Every member must be a line-bundle class.
GldimResult gldim_scan_algebraic(const ExcCollection& coll, const AlgebraicDatum& datum);

struct MonotonicityResult {
    double min_derivative = 0.0;  ///< min of d(arg Z_t)/dt over the grid, radians
    bool matches_im_formula = false;
    double derivative_at_zero = 0.0;     ///< finite difference
    double im_formula_at_zero = 0.0;     ///< Im(Z' conj Z) / |Z|^2
    double phase_start = 0.0, phase_end = 0.0;  ///< tracked, in units of pi
};

/// Tracks Z^{a,b}_{alpha, beta - t c}(v) for t in [0, t_max].
MonotonicityResult phase_monotonicity(const ChernVector& v, double alpha, double beta, double a, double b, double c,
                                      double t_max, int steps = 1024);

struct WindowResult {
    double limit_phase = 0.0;
    double initial_phase = 0.0;
    double final_phase = 0.0;
    long initial_shift = 0;  ///< k with v[k] in the heart at small t
    double window_lo = 0.0, window_hi = 0.0;  ///< (lo, hi] containing the limit
};

/// Tracks the phase of Z_{t,beta}(v) (tilt charge) from small t to alpha_max.
WindowResult large_volume_window(const ChernVector& v, double beta, double alpha_max = 50.0, int steps = 1024);

}  // namespace bstab
