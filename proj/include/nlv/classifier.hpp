#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlv/core_types.hpp"
#include "nlv/spectral.hpp"
#include "nlv/steady_states.hpp"

namespace nlv {

enum class Regime {
    Extinction,
    Fixation1,
    Fixation2,
    Coexistence,
    Bistable,
    MarginalPure1Stable,
    MarginalPure2Stable,
    DegenerateMu,
};

const char* to_string(Regime r);

/// Long-time regime with the signed discriminants behind it.
struct RegimeReport {
    Regime regime;
    double d21;  // H2 mu11 - H1 mu21
    double d12;  // H1 mu22 - H2 mu12
    double H1;
    double H2;
    double tolerance_band;
};

/// Default sign band: 1e-6 * max(|H1 mu22|, |H2 mu11|, |H1 mu21|, |H2 mu12|).
double default_tolerance_band(double H1, double H2, const InteractionMatrix& mu);

/// Decision table over the signs of (H1, H2, d21, d12). Discriminants inside
/// (-eps, eps) count as zero. A negative eps selects the default band, and then
/// H1, H2 get their own band 1e-6 * max(|H1|, |H2|) so that rescaling mu
/// never changes the outcome. An explicit eps applies to all four.
///
/// Where both discriminants vanish the interaction matrix is singular, so
/// that case reports DegenerateMu as well.
RegimeReport classify(double H1, double H2, const InteractionMatrix& mu, double eps = -1.0);

/// Quantities of the basin certificate for the pure type-1 state.
struct StabilityCertificate {
    double C1;
    double C2;
    double C;      // 2 ((C1 + C2) max{1, mu21/mu11} + C1)
    double bound;  // min{H1 - lambda2^1, (mu21/mu11) H1 - H2}
    bool holds;    // C < bound
};

/// C1 = max_i ||g1(0) - steady1||_L2 ||I_i1||_L2, C2 = ||g2(0)||_L2 ||I12||_L2.
/// Requires H1 > 0 and H2 mu11 - H1 mu21 < 0; throws InvalidArgument naming
/// the failed hypothesis otherwise.
StabilityCertificate certify_basin(const Field& g10, const Field& g20, const Field& steady1,
                                   const DimorphicParams& params, const SpectralSummary& s1,
                                   const SpectralSummary& s2, const InteractionMatrix& mu);

/// One candidate long-time limit: the density pair and its masses.
struct LimitCandidate {
    std::string label;  // "extinct", "pure1", "pure2", "coexistence"
    double mass1;
    double mass2;
    std::optional<Field> g1;  // absent means identically zero
    std::optional<Field> g2;
};

/// Predicted limit(s). Single-limit regimes give one candidate; Bistable
/// gives both pure states followed by the unstable coexistence state;
/// the marginal regimes give both pure states, stable one first.
struct PredictedLimit {
    Regime regime;
    bool unique;
    std::vector<LimitCandidate> candidates;
};

/// Throws std::logic_error when the steady-state set lacks a state the
/// regime requires, and InvalidArgument for DegenerateMu.
PredictedLimit predicted_limit(const RegimeReport& report, const SteadyStateSet& states);

/// Same limit structure from masses alone (no spatial profiles).
PredictedLimit predicted_masses(const RegimeReport& report, const InteractionMatrix& mu);

}  // namespace nlv
