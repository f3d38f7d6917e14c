#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nlsg::checks {

struct Result {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    double time_limit = 0;                               // seconds
    std::vector<std::pair<std::string, double>> values;  // measured quantities, in print order
    std::string note;                                    // failure reason, empty on success
};

constexpr int kCount = 10;

// Runs one acceptance criterion (1..10). Never throws; exceptions become a
// failed Result with the message in `note`.
Result run(int id);

// One line: "[PASS] 3 title (1.2 s / 30 s): key=value ..."
std::string format_line(const Result& r);

}  // namespace nlsg::checks
