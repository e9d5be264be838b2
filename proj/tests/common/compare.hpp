#ifndef SLPFO_TEST_COMPARE_HPP
#define SLPFO_TEST_COMPARE_HPP

#include <set>
#include <string>
#include <vector>

#include "slpfo/engine.hpp"
#include "slpfo/oracle.hpp"
#include "slpfo/query.hpp"
#include "slpfo/slp.hpp"

namespace slpfo::testing {

using RepTuple = std::vector<ARep>;

struct EngineRun {
    std::vector<RepTuple> tuples;
    std::size_t duplicates = 0;
};

inline EngineRun run_engine(Engine& engine, const Query& q) {
    EngineRun run;
    QueryEnumerator e(engine, q);
    std::set<RepTuple> seen;
    std::vector<LexRep> out;
    while (e.next(out)) {
        RepTuple t;
        for (const LexRep& l : out) t.push_back(resolve_rep(engine, l));
        if (!seen.insert(t).second) ++run.duplicates;
        run.tuples.push_back(std::move(t));
    }
    return run;
}

inline std::set<RepTuple> run_oracle(const Decompressed& d, const Query& q) {
    std::set<RepTuple> out;
    for (const auto& t : naive_eval(d.structure, q)) {
        RepTuple r;
        for (NodeId v : t) r.push_back(d.reps[v]);
        out.insert(std::move(r));
    }
    return out;
}

}  // namespace slpfo::testing

#endif
