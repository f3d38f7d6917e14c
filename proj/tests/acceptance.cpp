// One line per acceptance criterion; exit status 1 if any fails.
// Optional arguments select criteria by number.
#include <cstdlib>
#include <iostream>
#include <vector>

#include "checks.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
    if (ids.empty())
        for (int k = 1; k <= nlsg::checks::kCount; ++k) ids.push_back(k);
    int failed = 0;
    for (int id : ids) {
        const auto r = nlsg::checks::run(id);
        std::cout << nlsg::checks::format_line(r) << std::endl;
        if (!r.pass) ++failed;
    }
    std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
