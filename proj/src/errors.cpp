#include "repdoe/errors.hpp"

namespace repdoe {

std::string describe_runs(const std::vector<std::size_t>& runs) {
    std::string out = runs.size() == 1 ? "run " : "runs ";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(runs[i] + 1);
    }
    return out;
}

}  // namespace repdoe
