#include "chancomp/modem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chancomp {

Quantizer::Quantizer(double lo_, double hi_, int q_) : lo(lo_), hi(hi_), q(q_) {
    if (!(lo < hi)) throw std::invalid_argument("quantizer needs lo < hi");
    if (q < 2) throw std::invalid_argument("quantizer needs q >= 2");
}

int Quantizer::quantize(double v) const {
    const double clamped = std::clamp(v, lo, hi);
    const long level = std::lround((clamped - lo) * static_cast<double>(q - 1) / (hi - lo));
    return static_cast<int>(std::clamp(level, 0l, static_cast<long>(q - 1)));
}

double Quantizer::dequantize(int level) const {
    if (level < 0 || level >= q) throw std::out_of_range("level outside [0, q)");
    return lo + static_cast<double>(level) * (hi - lo) / static_cast<double>(q - 1);
}

Encoder::Encoder(Eigen::VectorXcd symbols) : x(std::move(symbols)) {
    if (x.size() < 2) throw std::invalid_argument("encoder needs at least two symbols");
}

cxd Encoder::encode(int level) const {
    if (level < 0 || level >= q()) throw std::out_of_range("level outside [0, q)");
    return x(level);
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

DecoderTable DecoderTable::build(const Eigen::VectorXcd& x,
                                 const std::vector<MultisetClass>& classes,
                                 double epsilon) {
    if (epsilon <= 0) throw std::invalid_argument("merge tolerance must be positive");
    if (classes.empty()) throw std::invalid_argument("cannot build a table from zero classes");
    const double thresh = epsilon * std::sqrt(x.squaredNorm());

    const std::size_t n = classes.size();
    std::vector<cxd> raw(n);
    for (std::size_t c = 0; c < n; ++c) {
        cxd point(0, 0);
        for (int level = 0; level < static_cast<int>(x.size()); ++level)
            point += static_cast<double>(classes[c].counts[static_cast<std::size_t>(level)]) * x(level);
        raw[c] = point;
    }

    // Single-linkage merge of the raw class points, then keep merging any
    // clusters whose centroids still fall within the threshold until the
    // table satisfies its pairwise-separation invariant.
    DisjointSet ds(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(raw[i] - raw[j]) <= thresh) ds.unite(static_cast<int>(i), static_cast<int>(j));

    auto collect = [&]() {
        // Clusters ordered by their smallest member class index.
        std::vector<int> slot(n, -1);
        std::vector<std::vector<int>> members;
        for (std::size_t i = 0; i < n; ++i) {
            const int r = ds.find(static_cast<int>(i));
            if (slot[static_cast<std::size_t>(r)] < 0) {
                slot[static_cast<std::size_t>(r)] = static_cast<int>(members.size());
                members.emplace_back();
            }
            members[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(static_cast<int>(i));
        }
        return members;
    };

    std::vector<std::vector<int>> members = collect();
    auto centroid = [&](const std::vector<int>& ms) {
        cxd p(0, 0);
        for (int m : ms) p += raw[static_cast<std::size_t>(m)];
        return p / static_cast<double>(ms.size());
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<cxd> cents(members.size());
        for (std::size_t s = 0; s < members.size(); ++s) cents[s] = centroid(members[s]);
        for (std::size_t i = 0; i < members.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < members.size() && !changed; ++j)
                if (std::abs(cents[i] - cents[j]) <= thresh) {
                    ds.unite(members[i][0], members[j][0]);
                    changed = true;
                }
        if (changed) members = collect();
    }

    DecoderTable table;
    table.epsilon = epsilon;
    table.points.reserve(members.size());
    table.values.reserve(members.size());
    for (const std::vector<int>& ms : members) {
        double value = 0;
        for (int m : ms) value += classes[static_cast<std::size_t>(m)].value;
        table.points.push_back(centroid(ms));
        table.values.push_back(value / static_cast<double>(ms.size()));
    }
    return table;
}

DecodeResult decode(cxd y, const DecoderTable& table) {
    if (table.points.empty()) throw std::invalid_argument("decode on empty table");
    int best = 0;
    double bestDist = std::abs(y - table.points[0]);
    for (std::size_t i = 1; i < table.points.size(); ++i) {
        const double d = std::abs(y - table.points[i]);
        if (d < bestDist) {
            bestDist = d;
            best = static_cast<int>(i);
        }
    }
    return DecodeResult{table.values[static_cast<std::size_t>(best)], best, bestDist};
}

}  // namespace chancomp
