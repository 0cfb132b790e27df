#include "mrdcf/slot_model.hpp"

#include <algorithm>
#include <cassert>

namespace mrdcf {

double p_transmit(const TauVector& tau) {
    double idle = 1.0;
    for (double t : tau) idle *= (1.0 - t);
    return 1.0 - idle;
}

double p_success(const TauVector& tau, int s) {
    assert(s >= 0 && s < static_cast<int>(tau.size()));
    double p = tau[s];
    for (int j = 0; j < static_cast<int>(tau.size()); ++j) {
        if (j != s) p *= (1.0 - tau[j]);
    }
    return p;
}

ClassTransmitProbs class_transmit_probs(const TauVector& tau, const ClassPartition& part,
                                        int d) {
    assert(d >= 0 && d < part.n_classes());
    double silent_lower = 1.0;
    for (int i = 0; i < d; ++i) {
        for (int s : part.classes[i].members) silent_lower *= (1.0 - tau[s]);
    }
    double silent_higher = 1.0;
    for (int i = d + 1; i < part.n_classes(); ++i) {
        for (int s : part.classes[i].members) silent_higher *= (1.0 - tau[s]);
    }
    double silent_same = 1.0;
    for (int s : part.classes[d].members) silent_same *= (1.0 - tau[s]);
    return ClassTransmitProbs{1.0 - silent_lower, 1.0 - silent_higher, 1.0 - silent_same};
}

CollisionSplit p_collision_class(const TauVector& tau, const ClassPartition& part, int d) {
    const auto probs = class_transmit_probs(tau, part, d);
    const auto& members = part.classes[d].members;

    double exactly_one = 0.0;
    for (int s : members) {
        double term = tau[s];
        for (int j : members) {
            if (j != s) term *= (1.0 - tau[j]);
        }
        exactly_one += term;
    }
    // two or more same-class transmitters; clamp against cancellation noise
    const double multi_same = std::max(0.0, probs.same - exactly_one);

    CollisionSplit split;
    split.internal_ = (1.0 - probs.higher) * (1.0 - probs.lower) * multi_same;
    split.external_ = probs.same * probs.higher * (1.0 - probs.lower);
    split.total = split.internal_ + split.external_;
    return split;
}

SlotBreakdown expected_slot(const TauVector& tau, const Scenario& sc,
                            const ClassPartition& part) {
    assert(static_cast<int>(tau.size()) == sc.size());
    SlotBreakdown out;
    out.p_tr = p_transmit(tau);
    out.t_idle = (1.0 - out.p_tr) * sc.phy.sigma;

    out.p_succ.resize(tau.size());
    for (int s = 0; s < sc.size(); ++s) {
        out.p_succ[s] = p_success(tau, s);
        const auto fd = frame_durations(sc.stations[s], sc.phy);
        out.t_success += out.p_succ[s] * (1.0 - sc.stations[s].pe) * fd.t_success;
        out.t_error += out.p_succ[s] * sc.stations[s].pe * fd.t_error;
    }

    out.p_coll_class.resize(part.n_classes());
    for (int d = 0; d < part.n_classes(); ++d) {
        out.p_coll_class[d] = p_collision_class(tau, part, d);
        out.t_collision += out.p_coll_class[d].total * part.classes[d].t_collision;
    }

    out.t_av = out.t_idle + out.t_success + out.t_error + out.t_collision;
    return out;
}

double expected_slot_excluding(const TauVector& tau, const Scenario& sc, int t) {
    assert(t >= 0 && t < sc.size());
    if (sc.size() == 1) return sc.phy.sigma;

    Scenario reduced;
    reduced.phy = sc.phy;
    reduced.label = sc.label;
    TauVector reduced_tau;
    reduced.stations.reserve(sc.stations.size() - 1);
    reduced_tau.reserve(tau.size() - 1);
    for (int s = 0; s < sc.size(); ++s) {
        if (s == t) continue;
        auto st = sc.stations[s];
        st.id = static_cast<int>(reduced.stations.size()) + 1;
        reduced.stations.push_back(st);
        reduced_tau.push_back(tau[s]);
    }
    const auto part = derive_classes(reduced);
    return expected_slot(reduced_tau, reduced, part).t_av;
}

}  // namespace mrdcf
