#include "helpers.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef PLP_CORPUS_DIR
#define PLP_CORPUS_DIR "corpus"
#endif

namespace testing {

std::string read_file(const std::string &path) {
    const std::string full = path.find('/') == std::string::npos ? std::string(PLP_CORPUS_DIR) + "/" + path : path;
    std::ifstream in(full, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + full);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace testing
