#include "regionflow/partition_compare.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace regionflow {

namespace {

long double pairs(long double n) { return n * (n - 1) / 2; }

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("labelings differ in length");
    std::map<std::pair<int, int>, long long> joint;
    std::map<int, long long> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++joint[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    long double index = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, n] : joint) index += pairs(n);
    for (const auto& [key, n] : rows) sum_a += pairs(n);
    for (const auto& [key, n] : cols) sum_b += pairs(n);
    const long double total = pairs(static_cast<long double>(a.size()));
    if (total == 0) return 1.0;
    const long double expected = sum_a * sum_b / total;
    const long double maximum = (sum_a + sum_b) / 2;
    if (maximum == expected) return 1.0;
    return static_cast<double>((index - expected) / (maximum - expected));
}

double adjusted_rand_index(const ZonePartition& a, const ZonePartition& b) {
    std::vector<int> la, lb;
    for (const auto& [zone, label] : a) {
        auto it = b.find(zone);
        if (it == b.end()) continue;
        la.push_back(label);
        lb.push_back(it->second);
    }
    return adjusted_rand_index(la, lb);
}

}  // namespace regionflow
