#pragma once

#include <string>
#include <vector>

namespace plp {

/// Benchmark families: markov-timesteps, markov-specificity,
/// markov-timepoint, hmm-rainy, hmm-sunny, hmm-mixed.
const std::vector<std::string> &bench_families();

/// Program text plus one query at complexity `n`.
/// Throws Error(Unsupported) for an unknown family or negative `n`.
std::string bench_generate(const std::string &family, int n);

/// Observation sequence of the HMM families (times 1..n).
std::vector<int> hmm_observations(const std::string &family, int n);

} // namespace plp
