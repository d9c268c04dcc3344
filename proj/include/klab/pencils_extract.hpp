// Joint extraction of split divisors and their special subspaces: a divisor
// whose subspace fails the dim-3 certificate is discarded and the parameter
// walk continues.
#pragma once

#include <utility>
#include <vector>

#include "klab/pencils.hpp"

namespace klab {

struct PencilData {
    Pencil pencil;
    std::vector<Divisor> divisors;
    std::vector<Subspace> subspaces;
};

inline PencilData extract_special(const CanonicalModel& cm, const Pencil& p, std::size_t count, Rng& rng,
                                  std::size_t budget = 0) {
    if (!cm.sextic) throw UnsupportedModel("pencil extraction needs a sextic-built model");
    const NodalSexticModel& sm = *cm.sextic;
    const Field& F = *sm.F;
    PencilData out;
    out.pencil = p;
    const bool exhaustive = F.q() <= 4096;
    if (budget == 0) budget = exhaustive ? F.q() : 64 * count + 512;
    std::vector<std::uint64_t> order;
    if (exhaustive) order = rng.permutation(F.q());
    for (std::size_t draw = 0; draw < budget && out.divisors.size() < count; ++draw) {
        Fel t = exhaustive ? F.enumerate(order[draw % order.size()]) : F.element_from_rng(rng);
        bool dup = false;
        for (const Divisor& d : out.divisors)
            if (d.t == t) dup = true;
        if (dup) continue;
        auto cand = detail::divisor_candidate(sm, p, t);
        if (!cand) continue;
        try {
            Subspace w = special_subspace(cm, *cand);
            out.divisors.push_back(std::move(*cand));
            out.subspaces.push_back(std::move(w));
        } catch (const SpecialtyViolation&) {
            continue;
        }
    }
    if (out.divisors.size() < count)
        throw RetriesExhausted("pencil " + std::to_string(p.id) + ": only " +
                               std::to_string(out.divisors.size()) + " usable divisors; field too small");
    return out;
}

} // namespace klab
