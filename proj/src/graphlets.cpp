#include "gig/graphlets.hpp"

#include "gig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gig {

namespace {

// |N(a) ∩ N(b)| for every edge.
std::vector<std::int64_t> edge_triangles(const Adjacency& adj) {
    std::vector<std::int64_t> tri(adj.edges.size(), 0);
    const auto m = static_cast<std::ptrdiff_t>(adj.edges.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t e = 0; e < m; ++e) {
        auto [a, b] = adj.edges[static_cast<std::size_t>(e)];
        auto na = adj.neighbors_of(a);
        auto nb = adj.neighbors_of(b);
        std::int64_t count = 0;
        auto i = na.begin();
        auto j = nb.begin();
        while (i != na.end() && j != nb.end()) {
            if (*i < *j) ++i;
            else if (*j < *i) ++j;
            else {
                ++count;
                ++i;
                ++j;
            }
        }
        tri[static_cast<std::size_t>(e)] = count;
    }
    return tri;
}

// Number of 4-cliques containing each node.
std::vector<std::int64_t> node_cliques(const Adjacency& adj) {
    std::vector<std::int64_t> k4(adj.n, 0);
    const auto n = static_cast<std::ptrdiff_t>(adj.n);
#pragma omp parallel
    {
        std::vector<std::uint32_t> common;
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t xi = 0; xi < n; ++xi) {
            auto x = static_cast<std::size_t>(xi);
            auto nx = adj.neighbors_of(x);
            std::int64_t count = 0;
            for (auto y : nx) {
                // common neighbors of x and y that come after y
                common.clear();
                auto ny = adj.neighbors_of(y);
                std::set_intersection(nx.begin(), nx.end(), std::upper_bound(ny.begin(), ny.end(), y), ny.end(),
                                      std::back_inserter(common));
                for (std::size_t i = 0; i < common.size(); ++i)
                    for (std::size_t j = i + 1; j < common.size(); ++j)
                        if (adj.adjacent(common[i], common[j])) ++count;
            }
            k4[x] = count;
        }
    }
    return k4;
}

} // namespace

std::vector<OrbitVector> count_orbits(const Adjacency& adj) {
    const auto tri = edge_triangles(adj);
    const auto k4 = node_cliques(adj);
    std::vector<OrbitVector> orbit(adj.n);
    const auto n = static_cast<std::ptrdiff_t>(adj.n);

#pragma omp parallel
    {
        // common[z]: paths x-y-z with z not adjacent to x, counted over middle nodes y
        std::vector<std::int64_t> common(adj.n, 0);
        std::vector<std::uint32_t> touched;
        std::vector<char> is_neighbor(adj.n, 0);

#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t xi = 0; xi < n; ++xi) {
            const auto x = static_cast<std::size_t>(xi);
            for (auto z : touched) common[z] = 0;
            touched.clear();
            const auto nx = adj.neighbors_of(x);
            const auto ex = adj.edges_of(x);
            for (auto y : nx) is_neighbor[y] = 1;
            const auto deg_x = static_cast<std::int64_t>(nx.size());

            std::int64_t f_12_14 = 0, f_10_13 = 0, f_13_14 = 0, f_11_13 = 0, f_7_11 = 0;
            std::int64_t f_5_8 = 0, f_6_9 = 0, f_9_12 = 0, f_4_8 = 0, f_8_12 = 0;
            const std::int64_t f_14 = k4[x];
            auto& o = orbit[x];
            o.fill(0);
            o[0] = deg_x;

            // x as a middle node
            for (std::size_t i = 0; i < nx.size(); ++i) {
                const auto y = nx[i];
                const auto ey = ex[i];
                const auto ny = adj.neighbors_of(y);
                const auto ey_list = adj.edges_of(y);
                const auto deg_y = static_cast<std::int64_t>(ny.size());
                for (std::size_t j = 0; j < ny.size(); ++j) {
                    const auto z = ny[j];
                    const auto ez = ey_list[j];
                    if (is_neighbor[z]) {
                        if (z < y) {
                            const auto deg_z = static_cast<std::int64_t>(adj.degree(z));
                            f_12_14 += tri[ez] - 1;
                            f_10_13 += (deg_y - 1 - tri[ez]) + (deg_z - 1 - tri[ez]);
                        }
                    } else if (z != x) {
                        if (common[z] == 0) touched.push_back(z);
                        ++common[z];
                    }
                }
                for (std::size_t j = i + 1; j < nx.size(); ++j) {
                    const auto z = nx[j];
                    const auto ez = ex[j];
                    if (adj.adjacent(y, z)) {
                        ++o[3];
                        f_13_14 += (tri[ey] - 1) + (tri[ez] - 1);
                        f_11_13 += (deg_x - 1 - tri[ey]) + (deg_x - 1 - tri[ez]);
                    } else {
                        ++o[2];
                        const auto deg_z = static_cast<std::int64_t>(adj.degree(z));
                        f_7_11 += (deg_x - 1 - tri[ey] - 1) + (deg_x - 1 - tri[ez] - 1);
                        f_5_8 += (deg_y - 1 - tri[ey]) + (deg_z - 1 - tri[ez]);
                    }
                }
            }

            // x as an end node
            for (std::size_t i = 0; i < nx.size(); ++i) {
                const auto y = nx[i];
                const auto ey = ex[i];
                const auto ny = adj.neighbors_of(y);
                const auto ey_list = adj.edges_of(y);
                const auto deg_y = static_cast<std::int64_t>(ny.size());
                for (std::size_t j = 0; j < ny.size(); ++j) {
                    const auto z = ny[j];
                    if (z == x || is_neighbor[z]) continue;
                    const auto ez = ey_list[j];
                    ++o[1];
                    f_6_9 += deg_y - 1 - tri[ey] - 1;
                    f_9_12 += tri[ez];
                    f_4_8 += static_cast<std::int64_t>(adj.degree(z)) - 1 - tri[ez];
                    f_8_12 += common[z] - 1;
                }
            }
            for (auto y : nx) is_neighbor[y] = 0;

            o[14] = f_14;
            o[13] = (f_13_14 - 6 * f_14) / 2;
            o[12] = f_12_14 - 3 * f_14;
            o[11] = (f_11_13 - f_13_14 + 6 * f_14) / 2;
            o[10] = f_10_13 - f_13_14 + 6 * f_14;
            o[9] = (f_9_12 - 2 * f_12_14 + 6 * f_14) / 2;
            o[8] = (f_8_12 - 2 * f_12_14 + 6 * f_14) / 2;
            o[7] = (f_13_14 + f_7_11 - f_11_13 - 6 * f_14) / 6;
            o[6] = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * f_14) / 2;
            o[5] = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * f_14;
            o[4] = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * f_14;
        }
    }
    return orbit;
}

std::vector<OrbitVector> count_orbits(const MolecularGraph& g) { return count_orbits(build_adjacency(g)); }

std::vector<OrbitVector> brute_force_orbits(const MolecularGraph& g, std::size_t node_cap) {
    const std::size_t n = g.node_count();
    if (n > node_cap)
        throw UsageError("brute-force orbit counting is capped at " + std::to_string(node_cap) + " nodes, graph has " +
                         std::to_string(n));
    std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
    for (const auto& e : g.edges()) {
        auto i = static_cast<std::size_t>(g.index_of(e.a));
        auto j = static_cast<std::size_t>(g.index_of(e.b));
        a[i][j] = a[j][i] = 1;
    }
    std::vector<OrbitVector> orbit(n, OrbitVector{});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) orbit[i][0] += a[i][j];

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            for (std::size_t r = q + 1; r < n; ++r) {
                const std::array<std::size_t, 3> v{p, q, r};
                std::array<int, 3> d{a[p][q] + a[p][r], a[p][q] + a[q][r], a[p][r] + a[q][r]};
                int edges = (d[0] + d[1] + d[2]) / 2;
                if (edges == 3) {
                    for (auto x : v) ++orbit[x][3];
                } else if (edges == 2) {
                    for (int k = 0; k < 3; ++k) ++orbit[v[k]][d[k] == 1 ? 1 : 2];
                }

                for (std::size_t s = r + 1; s < n; ++s) {
                    const std::array<std::size_t, 4> w{p, q, r, s};
                    std::array<int, 4> deg{};
                    for (int x = 0; x < 4; ++x)
                        for (int y = 0; y < 4; ++y) deg[x] += a[w[x]][w[y]];
                    int m = (deg[0] + deg[1] + deg[2] + deg[3]) / 2;
                    int max_deg = *std::max_element(deg.begin(), deg.end());
                    bool connected = std::none_of(deg.begin(), deg.end(), [](int x) { return x == 0; });
                    if (!connected || m < 3) continue;
                    for (int x = 0; x < 4; ++x) {
                        std::size_t id = 0;
                        switch (m) {
                        case 3:
                            if (max_deg == 3) id = deg[x] == 3 ? 7 : 6;      // claw
                            else id = deg[x] == 1 ? 4 : 5;                  // 4-path
                            break;
                        case 4:
                            if (max_deg == 2) id = 8;                       // 4-cycle
                            else id = deg[x] == 1 ? 9 : (deg[x] == 2 ? 10 : 11);  // tailed triangle
                            break;
                        case 5: id = deg[x] == 2 ? 12 : 13; break;          // diamond
                        default: id = 14;                                    // 4-clique
                        }
                        ++orbit[w[x]][id];
                    }
                }
            }
        }
    }
    return orbit;
}

std::map<GeneSymbol, OrbitVector> orbits_by_node(const MolecularGraph& g, const std::vector<OrbitVector>& counts) {
    std::map<GeneSymbol, OrbitVector> out;
    for (std::size_t i = 0; i < g.node_count() && i < counts.size(); ++i) out.emplace(g.nodes()[i], counts[i]);
    return out;
}

OrbitSignature graph_signature(const std::string& graph_id, const std::vector<OrbitVector>& orbits) {
    if (orbits.empty()) throw DataError("orbit signature of an empty graph (" + graph_id + ")");
    OrbitSignature sig;
    sig.graph_id = graph_id;
    for (std::size_t k = 0; k < orbit_count; ++k) {
        double sum = 0.0;
        for (const auto& o : orbits) sum += static_cast<double>(o[k]);
        sig.means[k] = sum / static_cast<double>(orbits.size());
    }
    return sig;
}

namespace {

std::map<std::string, std::vector<const OrbitSignature*>> group_signatures(
    const std::vector<OrbitSignature>& sigs, const std::map<std::string, std::string>& groups) {
    std::map<std::string, std::vector<const OrbitSignature*>> out;
    for (const auto& s : sigs) {
        auto it = groups.find(s.graph_id);
        if (it != groups.end()) out[it->second].push_back(&s);
    }
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    auto mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace

GroupZScores zscore_signatures(const std::vector<OrbitSignature>& sigs,
                               const std::map<std::string, std::string>& groups, double epsilon) {
    auto by_group = group_signatures(sigs, groups);
    if (by_group.size() < 2) throw DataError("z-scoring orbit signatures needs at least two groups");
    GroupZScores out;
    for (const auto& [name, members] : by_group) {
        std::array<double, orbit_count> mean{};
        for (const auto* s : members)
            for (std::size_t k = 0; k < orbit_count; ++k) mean[k] += s->means[k];
        for (auto& v : mean) v /= static_cast<double>(members.size());
        out.groups.push_back(name);
        out.group_means.push_back(mean);
    }
    const auto ng = static_cast<double>(out.groups.size());
    out.z.assign(out.groups.size(), {});
    for (std::size_t k = 0; k < orbit_count; ++k) {
        double mu = 0.0;
        for (const auto& m : out.group_means) mu += m[k];
        mu /= ng;
        double ss = 0.0;
        for (const auto& m : out.group_means) ss += (m[k] - mu) * (m[k] - mu);
        double denom = std::sqrt(ss / ng) + epsilon;
        for (std::size_t g = 0; g < out.groups.size(); ++g) out.z[g][k] = (out.group_means[g][k] - mu) / denom;
    }
    return out;
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw DataError("Mann-Whitney U needs two non-empty samples");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;
    std::vector<std::pair<double, bool>> pooled;
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, true);
    for (double v : b) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
        auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].second) rank_sum_a += avg_rank;
        i = j;
    }

    MannWhitneyResult r;
    const auto fa = static_cast<double>(na);
    const auto fb = static_cast<double>(nb);
    const auto fn = static_cast<double>(n);
    r.u = rank_sum_a - fa * (fa + 1.0) / 2.0;
    const double mu = fa * fb / 2.0;
    const double var = fa * fb / 12.0 * ((fn + 1.0) - (n > 1 ? tie_term / (fn * (fn - 1.0)) : 0.0));
    if (var <= 0.0) {
        r.z = 0.0;
        r.p_value = 1.0;
        return r;
    }
    double diff = std::max(std::fabs(r.u - mu) - 0.5, 0.0);
    r.z = std::copysign(diff / std::sqrt(var), r.u - mu);
    r.p_value = std::min(1.0, std::erfc(std::fabs(r.z) / std::sqrt(2.0)));
    return r;
}

std::vector<OrbitComparison> compare_groups(const std::vector<OrbitSignature>& sigs,
                                            const std::map<std::string, std::string>& labels) {
    auto by_group = group_signatures(sigs, labels);
    std::set<std::string> named;
    for (const auto& [graph, group] : labels) named.insert(group);
    if (named.size() != 2) throw DataError("orbit comparison needs exactly two groups");
    for (const auto& name : named) {
        if (!by_group.contains(name)) throw DataError("group '" + name + "' has no orbit signatures");
    }
    const auto& [name_a, members_a] = *by_group.begin();
    const auto& [name_b, members_b] = *std::next(by_group.begin());

    std::vector<OrbitComparison> rows;
    for (std::size_t k = 0; k < orbit_count; ++k) {
        std::vector<double> xa, xb;
        for (const auto* s : members_a) xa.push_back(s->means[k]);
        for (const auto* s : members_b) xb.push_back(s->means[k]);
        OrbitComparison row;
        row.orbit = k;
        row.a = {name_a, xa.size(), std::accumulate(xa.begin(), xa.end(), 0.0) / static_cast<double>(xa.size()),
                 median_of(xa)};
        row.b = {name_b, xb.size(), std::accumulate(xb.begin(), xb.end(), 0.0) / static_cast<double>(xb.size()),
                 median_of(xb)};
        row.test = mann_whitney_u(xa, xb);
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& x, const auto& y) { return x.test.p_value < y.test.p_value; });
    return rows;
}

} // namespace gig
