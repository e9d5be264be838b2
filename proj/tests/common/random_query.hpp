#ifndef SLPFO_TEST_RANDOM_QUERY_HPP
#define SLPFO_TEST_RANDOM_QUERY_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace slpfo::testing {

struct RandomQueryParams {
    unsigned max_k = 2;
    unsigned max_r = 2;
    unsigned max_rank = 2;
    unsigned max_q = 2;
    unsigned max_sentence_r = 1;
    bool sentences = true;
};

// Random query text over r1/2, r2/2, p/1: a Boolean combination of local formulas with a
// shared tuple of free variables and, optionally, basic local sentences.
class RandomQuery {
public:
    RandomQuery(std::mt19937_64& rng, RandomQueryParams p) : rng_(rng), p_(p) {}

    std::string generate() {
        const unsigned k = pick(0, p_.max_k);
        std::vector<std::string> free;
        for (unsigned i = 0; i < k; ++i) free.push_back(i == 0 ? "x" : "y");
        const unsigned leaves = pick(1, 2);
        std::vector<std::string> parts;
        for (unsigned i = 0; i < leaves; ++i) {
            if (k == 0 || (p_.sentences && pick(0, 3) == 0))
                parts.push_back(sentence());
            else
                parts.push_back(local(free));
        }
        if (k > 0 && std::none_of(parts.begin(), parts.end(), [](const std::string& s) { return s.rfind("(local", 0) == 0; }))
            parts.push_back(local(free));
        return combine(parts);
    }

    std::string sentence() {
        std::vector<std::string> scope{"z"};
        std::string body = formula(pick(0, std::min(1u, p_.max_rank)), scope, {"z"});
        return "(scattered :q " + std::to_string(pick(1, p_.max_q)) + " :r " +
               std::to_string(pick(0, std::min(p_.max_sentence_r, p_.max_r))) + " " + body + ")";
    }

private:
    unsigned pick(unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng_); }

    std::string combine(const std::vector<std::string>& parts) {
        std::string s;
        if (parts.size() == 1) {
            s = parts[0];
        } else {
            s = std::string(pick(0, 1) ? "(and" : "(or");
            for (const auto& x : parts) s += " " + x;
            s += ")";
        }
        if (pick(0, 4) == 0) s = "(not " + s + ")";
        return s;
    }

    std::string local(const std::vector<std::string>& free) {
        std::string vars;
        for (const auto& v : free) vars += (vars.empty() ? "" : " ") + v;
        std::vector<std::string> scope = free;
        std::string body = formula(pick(0, p_.max_rank), scope, free);
        return "(local :r " + std::to_string(pick(0, p_.max_r)) + " :vars (" + vars + ") " + body + ")";
    }


    std::string atom(const std::vector<std::string>& scope) {
        const unsigned n = static_cast<unsigned>(scope.size());
        const std::string a = pick(0, 2) ? scope.back() : scope[pick(0, n - 1)];
        std::string b = scope[pick(0, n - 1)];
        if (b == a && n > 1 && pick(0, 3)) {
            std::vector<std::string> others;
            for (const auto& v : scope)
                if (v != a) others.push_back(v);
            if (!others.empty()) b = others[pick(0, static_cast<unsigned>(others.size() - 1))];
        }
        switch (pick(0, 4)) {
            case 0:
                return "(p " + a + ")";
            case 1:
                return "(= " + a + " " + b + ")";
            case 2:
                return pick(0, 1) ? "(r2 " + a + " " + b + ")" : "(r2 " + b + " " + a + ")";
            default:
                return pick(0, 1) ? "(r1 " + a + " " + b + ")" : "(r1 " + b + " " + a + ")";
        }
    }

    // A formula whose free variables are exactly `must` (when non-empty) within `scope`.
    std::string formula(unsigned rank, std::vector<std::string>& scope, const std::vector<std::string>& must) {
        std::string f = body(rank, scope);
        for (const auto& v : must) f = "(and " + f + " (or (= " + v + " " + v + ") (p " + v + ")))";
        return f;
    }

    std::string body(unsigned rank, std::vector<std::string>& scope) {
        if (scope.empty()) return pick(0, 1) ? "true" : "false";
        const unsigned choice = rank > 0 && pick(0, 1) ? pick(4, 5) : pick(0, rank > 0 ? 5 : 3);
        switch (choice) {
            case 0:
            case 1:
                return atom(scope);
            case 2:
                return "(not " + atom(scope) + ")";
            case 3:
                return std::string(pick(0, 1) ? "(and " : "(or ") + body(rank > 0 ? rank - 1 : 0, scope) + " " +
                       atom(scope) + ")";
            default: {
                const std::string v = "u" + std::to_string(scope.size());
                scope.push_back(v);
                std::string inner = body(rank - 1, scope);
                scope.pop_back();
                return std::string(choice == 4 ? "(exists " : "(forall ") + v + " " + inner + ")";
            }
        }
    }

    std::mt19937_64& rng_;
    RandomQueryParams p_;
};

}  // namespace slpfo::testing

#endif
