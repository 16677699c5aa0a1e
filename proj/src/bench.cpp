#include "plp/bench.hpp"

#include <sstream>

#include "plp/error.hpp"

namespace plp {

namespace {

constexpr const char *kMarkov = R"(% initial distribution
in ~ [a, b, c] @ 0.
% transition matrix and define walk
in ~ [[a, 0.9], [b, 0.05], [c, 0.05]] @ T+1 :- in=a @ T.
in ~ [[a, 0.7], [c, 0.3]] @ T+1 :- in=b @ T.
in ~ [[a, 0.8], [c, 0.2]] @ T+1 :- in=c @ T.
)";

constexpr const char *kHmm = R"(config(inst_sol, true).
config(show_info, false).
config(cautious_disjointing, true).
%% start_probability = {'Rainy': 0.6, 'Sunny': 0.4}
state ~ [[rainy, 0.6], [sunny, 0.4]] @ 0.

%% transition_probability = {
%%   'Rainy' : {'Rainy': 0.7, 'Sunny': 0.3},
%%   'Sunny' : {'Rainy': 0.4, 'Sunny': 0.6},
%% }

state ~ [[rainy, 0.7], [sunny, 0.3]] @ T+1 :- state=rainy @ T.
state ~ [[rainy, 0.4], [sunny, 0.6]] @ T+1 :- state=sunny @ T.

%% obs=R @ T : R is the accumulated amount of rain up to including day T
obs ~ [3..30] @ 0 :- state=rainy @ 0.
obs ~ [0..5] @ 0 :- state=sunny @ 0.

obs ~ [R+3..R+30] @ T :-
  state=rainy @ T,
  T > 0,
  obs=R @ T-1.

obs ~ [R..R+5] @ T :-
  state=sunny @ T,
  T > 0,
  obs=R @ T-1.
)";

constexpr int kMixed[] = {0, 4, 24, 34, 38, 38, 42};

void check_n(int n, int min) {
    if (n < min)
        throw Error(ErrorCode::Unsupported, "complexity must be at least " + std::to_string(min));
}

} // namespace

const std::vector<std::string> &bench_families() {
    static const std::vector<std::string> families{"markov-timesteps", "markov-specificity", "markov-timepoint",
                                                   "hmm-rainy",        "hmm-sunny",          "hmm-mixed"};
    return families;
}

std::vector<int> hmm_observations(const std::string &family, int n) {
    std::vector<int> obs;
    for (int k = 1; k <= n; ++k) {
        if (family == "hmm-rainy")
            obs.push_back(4 * k);
        else if (family == "hmm-sunny")
            obs.push_back(0);
        else if (family == "hmm-mixed")
            obs.push_back(k <= 7 ? kMixed[k - 1] : kMixed[6] + 4 * (k - 7));
        else
            throw Error(ErrorCode::Unsupported, "not an HMM family: " + family);
    }
    return obs;
}

std::string bench_generate(const std::string &family, int n) {
    std::ostringstream os;
    if (family.rfind("markov-", 0) == 0) {
        os << "% " << family.substr(7) << ": N=" << n << '\n' << kMarkov;
        if (family == "markov-timesteps") {
            check_n(n, 0);
            os << "config(eot, " << n << ").\n?-";
            for (int t = 0; t <= n; ++t)
                os << (t ? ",\n  " : "\n  ") << "in=a @ " << t;
        } else if (family == "markov-specificity") {
            check_n(n, 0);
            if (n > 9)
                throw Error(ErrorCode::Unsupported, "specificity ranges over 0..9");
            os << "config(eot, 8).\n?-";
            for (int t = 0; t <= 8; ++t)
                os << (t ? ",\n  " : "\n  ") << "in=" << (t < n ? "L" + std::to_string(t) : std::string("a"))
                   << " @ " << t;
        } else if (family == "markov-timepoint") {
            check_n(n, 0);
            os << "config(eot, " << n << ").\n?-\n  in=a @ " << n;
        } else {
            throw Error(ErrorCode::Unsupported, "unknown benchmark family: " + family);
        }
        os << ".\n";
        return os.str();
    }
    if (family.rfind("hmm-", 0) == 0) {
        check_n(n, 1);
        const auto obs = hmm_observations(family, n);
        os << "% " << family.substr(4) << ": N=" << n << '\n' << kHmm << "\nconfig(eot, " << n << ").\n?-\n  state=S @ "
           << n << "\n  |";
        for (int k = 1; k <= n; ++k)
            os << (k > 1 ? "," : "") << "\n  obs=" << obs[static_cast<std::size_t>(k - 1)] << " @ " << k;
        os << ".\n";
        return os.str();
    }
    throw Error(ErrorCode::Unsupported, "unknown benchmark family: " + family);
}

} // namespace plp
