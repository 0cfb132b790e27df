#ifndef MRDCF_SLOT_MODEL_HPP
#define MRDCF_SLOT_MODEL_HPP

#include <vector>

#include "mrdcf/scenario.hpp"

namespace mrdcf {

/// Per-station transmission probabilities for one network state. Entry s is
/// the chance station s starts transmitting in a randomly chosen virtual slot.
using TauVector = std::vector<double>;

/// Conditional transmit probabilities seen from duration class d:
/// lower  = at least one station of a slower class transmits,
/// higher = at least one station of a faster class transmits,
/// same   = at least one station of class d itself transmits.
struct ClassTransmitProbs {
    double lower;
    double higher;
    double same;
};

/// Collision mass attributed to one class, split into collisions entirely
/// inside the class and collisions involving a faster class.
struct CollisionSplit {
    double internal_;
    double external_;
    double total;
};

/// Per-slot event probabilities and expected slot-duration decomposition.
struct SlotBreakdown {
    double p_tr = 0.0;                        // any transmission in the slot
    std::vector<double> p_succ;               // per-station lone-transmitter mass
    std::vector<CollisionSplit> p_coll_class; // per-class collision mass
    double t_idle = 0.0;
    double t_success = 0.0;
    double t_error = 0.0;
    double t_collision = 0.0;
    double t_av = 0.0;                        // expected virtual-slot duration
};

/// P_TR = 1 - prod_s (1 - tau_s).
double p_transmit(const TauVector& tau);

/// Probability that station s is the only transmitter.
double p_success(const TauVector& tau, int s);

/// Evaluates the lower/higher/same transmit products for class position d
/// (0-based, 0 = slowest).
ClassTransmitProbs class_transmit_probs(const TauVector& tau, const ClassPartition& part,
                                        int d);

/// Collision mass of class d: internal (two or more same-class transmitters,
/// everyone else silent) plus external (class d together with a faster class,
/// no slower class involved). The internal bracket is clamped at zero against
/// cancellation error when all members have tiny tau.
CollisionSplit p_collision_class(const TauVector& tau, const ClassPartition& part, int d);

/// Full slot decomposition at tau. The event masses partition P_TR exactly:
/// sum_s p_succ + sum_d p_coll = p_tr.
SlotBreakdown expected_slot(const TauVector& tau, const Scenario& sc,
                            const ClassPartition& part);

/// Expected slot duration of the network with station t removed from every
/// product, sum, and class (classes rebuilt without t). An empty remainder
/// idles forever, so the result degenerates to sigma.
double expected_slot_excluding(const TauVector& tau, const Scenario& sc, int t);

}  // namespace mrdcf

#endif
