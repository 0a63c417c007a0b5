#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace coachstyle::similarity {

struct Key {
    std::string coach_id, team_id;

    bool operator==(const Key&) const = default;
    bool operator<(const Key& o) const {
        return coach_id != o.coach_id ? coach_id < o.coach_id : team_id < o.team_id;
    }
};

struct EncodingEntry {
    Key key;
    std::vector<double> encoding;
};

// Immutable encoding index; entries sorted by key, keys unique, all produced
// by the model identified by `fingerprint`.
class EncodingIndex {
public:
    EncodingIndex(std::vector<EncodingEntry> entries, std::string fingerprint);

    const std::vector<EncodingEntry>& entries() const { return entries_; }
    const std::string& fingerprint() const { return fingerprint_; }
    const EncodingEntry& at(const Key& key) const;
    bool contains(const Key& key) const;

private:
    std::vector<EncodingEntry> entries_;
    std::string fingerprint_;
};

double distance(std::span<const double> a, std::span<const double> b);

struct Neighbor {
    Key key;
    double dist;
};

// All other entries sorted ascending by distance (ties by key), top_n kept.
std::vector<Neighbor> nearest(const EncodingIndex& index, const Key& query, int top_n);

// Symmetric matrix in key order; diagonal zero.
std::vector<std::vector<double>> pairwise_matrix(const EncodingIndex& index);

void save_index(const EncodingIndex& index, const std::filesystem::path& path);
EncodingIndex load_index(const std::filesystem::path& path);

std::string pairwise_csv(const EncodingIndex& index);
// Aggregates (coach, team) entries per coach: entry distance averaged over
// the coaches' team pairs.
std::string pairwise_by_coach_csv(const EncodingIndex& index);
std::string nearest_csv(const EncodingIndex& index, const Key& query, int top_n);

}  // namespace coachstyle::similarity
