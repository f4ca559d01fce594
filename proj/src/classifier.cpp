#include "nlv/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlv/error.hpp"

namespace nlv {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Extinction: return "Extinction";
        case Regime::Fixation1: return "Fixation1";
        case Regime::Fixation2: return "Fixation2";
        case Regime::Coexistence: return "Coexistence";
        case Regime::Bistable: return "Bistable";
        case Regime::MarginalPure1Stable: return "MarginalPure1Stable";
        case Regime::MarginalPure2Stable: return "MarginalPure2Stable";
        case Regime::DegenerateMu: return "DegenerateMu";
    }
    return "Unknown";
}

double default_tolerance_band(double H1, double H2, const InteractionMatrix& mu) {
    return 1e-6 * std::max({std::abs(H1 * mu(2, 2)), std::abs(H2 * mu(1, 1)), std::abs(H1 * mu(2, 1)),
                            std::abs(H2 * mu(1, 2))});
}

namespace {

int sign(double v, double eps) {
    if (v >= eps && v > 0.0) return 1;
    if (v <= -eps && v < 0.0) return -1;
    return 0;
}

}  // namespace

RegimeReport classify(double H1, double H2, const InteractionMatrix& mu, double eps) {
    double eps_h = eps;
    if (eps < 0.0) {
        eps = default_tolerance_band(H1, H2, mu);
        eps_h = 1e-6 * std::max(std::abs(H1), std::abs(H2));
    }
    RegimeReport rep{Regime::DegenerateMu,
                     H2 * mu(1, 1) - H1 * mu(2, 1),
                     H1 * mu(2, 2) - H2 * mu(1, 2),
                     H1,
                     H2,
                     eps};
    if (mu.degenerate) return rep;

    const int h1 = sign(H1, eps_h);
    const int h2 = sign(H2, eps_h);
    const int s21 = sign(rep.d21, eps);
    const int s12 = sign(rep.d12, eps);

    // A type with H <= 0 cannot persist, whatever the discriminants say
    // (with nonnegative mu they agree outside the tolerance band anyway).
    if (h1 <= 0 && h2 <= 0) {
        rep.regime = Regime::Extinction;
    } else if (h2 <= 0) {
        rep.regime = Regime::Fixation1;
    } else if (h1 <= 0) {
        rep.regime = Regime::Fixation2;
    } else if (s21 <= 0 && s12 > 0) {
        rep.regime = Regime::Fixation1;
    } else if (s21 > 0 && s12 <= 0) {
        rep.regime = Regime::Fixation2;
    } else if (s21 > 0 && s12 > 0) {
        rep.regime = Regime::Coexistence;
    } else if (s21 < 0 && s12 < 0) {
        rep.regime = Regime::Bistable;
    } else if (s21 < 0) {
        rep.regime = Regime::MarginalPure1Stable;
    } else if (s12 < 0) {
        rep.regime = Regime::MarginalPure2Stable;
    } else {
        rep.regime = Regime::DegenerateMu;
    }
    return rep;
}

StabilityCertificate certify_basin(const Field& g10, const Field& g20, const Field& steady1,
                                   const DimorphicParams& params, const SpectralSummary& s1,
                                   const SpectralSummary& s2, const InteractionMatrix& mu) {
    const double H1 = s1.H;
    const double H2 = s2.H;
    if (!(H1 > 0.0)) throw InvalidArgument("certify_basin: requires H1 > 0");
    const double d21 = H2 * mu(1, 1) - H1 * mu(2, 1);
    if (!(d21 < 0.0)) throw InvalidArgument("certify_basin: requires H2*mu11 - H1*mu21 < 0");
    if (g10.min() < 0.0 || g20.min() < 0.0) throw InvalidArgument("certify_basin: initial densities must be nonnegative");

    const double dev = norm_l2(g10 - steady1);
    const double C1 = std::max(dev * norm_l2(params.kernel(1, 1)), dev * norm_l2(params.kernel(2, 1)));
    const double C2 = norm_l2(g20) * norm_l2(params.kernel(1, 2));
    const double ratio = mu(2, 1) / mu(1, 1);
    const double C = 2.0 * ((C1 + C2) * std::max(1.0, ratio) + C1);
    const double bound = std::min(H1 - s1.lambda2, ratio * H1 - H2);
    return StabilityCertificate{C1, C2, C, bound, C < bound};
}

namespace {

LimitCandidate extinct() { return {"extinct", 0.0, 0.0, std::nullopt, std::nullopt}; }

}  // namespace

PredictedLimit predicted_masses(const RegimeReport& report, const InteractionMatrix& mu) {
    const double m1 = report.H1 / mu(1, 1);
    const double m2 = report.H2 / mu(2, 2);
    const LimitCandidate p1{"pure1", m1, 0.0, std::nullopt, std::nullopt};
    const LimitCandidate p2{"pure2", 0.0, m2, std::nullopt, std::nullopt};
    auto coex = [&] {
        return LimitCandidate{"coexistence", report.d12 / mu.det, report.d21 / mu.det, std::nullopt, std::nullopt};
    };
    switch (report.regime) {
        case Regime::Extinction: return {report.regime, true, {extinct()}};
        case Regime::Fixation1: return {report.regime, true, {p1}};
        case Regime::Fixation2: return {report.regime, true, {p2}};
        case Regime::Coexistence: return {report.regime, true, {coex()}};
        case Regime::Bistable: return {report.regime, false, {p1, p2, coex()}};
        case Regime::MarginalPure1Stable: return {report.regime, false, {p1, p2}};
        case Regime::MarginalPure2Stable: return {report.regime, false, {p2, p1}};
        case Regime::DegenerateMu: break;
    }
    throw InvalidArgument("predicted limit undefined for a degenerate interaction matrix");
}

PredictedLimit predicted_limit(const RegimeReport& report, const SteadyStateSet& states) {
    auto pure1 = [&] {
        if (!states.pure1) throw std::logic_error("predicted_limit: pure type-1 state missing from the steady-state set");
        return LimitCandidate{"pure1", integrate(*states.pure1), 0.0, *states.pure1, std::nullopt};
    };
    auto pure2 = [&] {
        if (!states.pure2) throw std::logic_error("predicted_limit: pure type-2 state missing from the steady-state set");
        return LimitCandidate{"pure2", 0.0, integrate(*states.pure2), std::nullopt, *states.pure2};
    };
    auto coex = [&] {
        if (!states.coexistence || !states.r) {
            throw std::logic_error("predicted_limit: coexistence state missing from the steady-state set");
        }
        return LimitCandidate{"coexistence", states.r->first, states.r->second, states.coexistence->first,
                              states.coexistence->second};
    };
    switch (report.regime) {
        case Regime::Extinction: return {report.regime, true, {extinct()}};
        case Regime::Fixation1: return {report.regime, true, {pure1()}};
        case Regime::Fixation2: return {report.regime, true, {pure2()}};
        case Regime::Coexistence: return {report.regime, true, {coex()}};
        case Regime::Bistable: {
            PredictedLimit out{report.regime, false, {pure1(), pure2()}};
            if (states.coexistence) out.candidates.push_back(coex());
            return out;
        }
        case Regime::MarginalPure1Stable: return {report.regime, false, {pure1(), pure2()}};
        case Regime::MarginalPure2Stable: return {report.regime, false, {pure2(), pure1()}};
        case Regime::DegenerateMu: break;
    }
    throw InvalidArgument("predicted limit undefined for a degenerate interaction matrix");
}

}  // namespace nlv
