#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "cfstereo/evaluation.hpp"

namespace cfstereo {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

RankBallot parse_ballot(const std::string& line) {
    RankBallot ballot;
    std::stringstream ranks(line);
    std::string rank;
    while (std::getline(ranks, rank, ',')) {
        std::vector<std::string> group;
        std::stringstream tied(rank);
        std::string name;
        while (std::getline(tied, name, '=')) {
            name = trim(name);
            if (name.empty()) throw DataError("empty method name in ballot '" + line + "'");
            group.push_back(name);
        }
        if (group.empty()) throw DataError("empty rank in ballot '" + line + "'");
        ballot.order.push_back(std::move(group));
    }
    if (ballot.order.empty()) throw DataError("empty ballot");
    return ballot;
}

Ranking schulze_rank(const std::vector<RankBallot>& ballots, const std::vector<std::string>& candidates) {
    if (ballots.empty()) throw DataError("schulze_rank needs at least one ballot");
    const std::size_t n = candidates.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        if (!index.emplace(candidates[i], i).second) throw DataError("duplicate candidate '" + candidates[i] + "'");
    }

    // prefer[a][b]: ballots ranking a strictly above b.
    std::vector<std::vector<long>> prefer(n, std::vector<long>(n, 0));
    for (const auto& ballot : ballots) {
        // Unlisted candidates share the rank after the last listed group.
        std::vector<std::size_t> rank(n, ballot.order.size());
        std::set<std::size_t> seen;
        for (std::size_t r = 0; r < ballot.order.size(); ++r) {
            for (const auto& name : ballot.order[r]) {
                const auto it = index.find(name);
                if (it == index.end()) throw DataError("unknown method '" + name + "' in ballot");
                if (!seen.insert(it->second).second) throw DataError("method '" + name + "' listed twice in a ballot");
                rank[it->second] = r;
            }
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (rank[a] < rank[b]) ++prefer[a][b];
    }

    // Widest paths over the defeats.
    std::vector<std::vector<long>> strength(n, std::vector<long>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && prefer[a][b] > prefer[b][a]) strength[a][b] = prefer[a][b];
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && a != k && b != k)
                    strength[a][b] = std::max(strength[a][b], std::min(strength[a][k], strength[k][b]));

    // The beat relation is transitive, so win counts order the candidates and
    // equal counts mean neither beats the other.
    std::vector<std::size_t> wins(n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (strength[a][b] > strength[b][a]) ++wins[a];

    std::map<std::size_t, std::vector<std::string>, std::greater<>> by_wins;
    for (std::size_t a = 0; a < n; ++a) by_wins[wins[a]].push_back(candidates[a]);
    Ranking out;
    for (auto& [w, group] : by_wins) {
        std::sort(group.begin(), group.end());
        out.push_back(std::move(group));
    }
    return out;
}

Ranking schulze_rank(const std::vector<RankBallot>& ballots) {
    std::vector<std::string> candidates;
    std::set<std::string> seen;
    for (const auto& ballot : ballots)
        for (const auto& group : ballot.order)
            for (const auto& name : group)
                if (seen.insert(name).second) candidates.push_back(name);
    return schulze_rank(ballots, candidates);
}

}  // namespace cfstereo
