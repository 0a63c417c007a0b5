#include "coachstyle/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "coachstyle/errors.hpp"
#include "coachstyle/util.hpp"

namespace coachstyle::similarity {

EncodingIndex::EncodingIndex(std::vector<EncodingEntry> entries, std::string fingerprint)
    : entries_(std::move(entries)), fingerprint_(std::move(fingerprint)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const EncodingEntry& a, const EncodingEntry& b) { return a.key < b.key; });
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        if (entries_[i].key == entries_[i + 1].key) {
            throw Error("duplicate index key: " + entries_[i].key.coach_id + "/" +
                        entries_[i].key.team_id);
        }
    }
    for (const auto& e : entries_) {
        if (e.encoding.size() != entries_.front().encoding.size()) {
            throw DimensionMismatch("index entries disagree on encoding width");
        }
    }
}

const EncodingEntry& EncodingIndex::at(const Key& key) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const EncodingEntry& e, const Key& k) { return e.key < k; });
    if (it == entries_.end() || !(it->key == key)) {
        throw UnknownKey("no encoding for " + key.coach_id + "/" + key.team_id);
    }
    return *it;
}

bool EncodingIndex::contains(const Key& key) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), key,
        [](const EncodingEntry& e, const Key& k) { return e.key < k; });
    return it != entries_.end() && it->key == key;
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("distance requires equal lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<Neighbor> nearest(const EncodingIndex& index, const Key& query, int top_n) {
    if (top_n < 1) throw Error("top_n must be >= 1");
    const EncodingEntry& q = index.at(query);
    std::vector<Neighbor> out;
    out.reserve(index.entries().size());
    for (const auto& e : index.entries()) {
        if (e.key == query) continue;
        out.push_back({e.key, distance(q.encoding, e.encoding)});
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.key < b.key;
    });
    if (out.size() > static_cast<std::size_t>(top_n)) {
        out.resize(static_cast<std::size_t>(top_n));
    }
    return out;
}

std::vector<std::vector<double>> pairwise_matrix(const EncodingIndex& index) {
    if (index.entries().empty()) throw EmptyInput("pairwise_matrix requires entries");
    const auto& es = index.entries();
    const std::size_t n = es.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(es[i].encoding, es[j].encoding);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    return m;
}

void save_index(const EncodingIndex& index, const std::filesystem::path& path) {
    nlohmann::ordered_json rec;
    rec["format"] = "coachstyle.encodings";
    rec["version"] = 1;
    rec["model_fingerprint"] = index.fingerprint();
    auto& entries = rec["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : index.entries()) {
        nlohmann::ordered_json item;
        item["coach_id"] = e.key.coach_id;
        item["team_id"] = e.key.team_id;
        item["encoding"] = e.encoding;
        entries.push_back(std::move(item));
    }
    util::write_file(path, rec.dump(2) + "\n");
}

EncodingIndex load_index(const std::filesystem::path& path) {
    const auto rec = nlohmann::json::parse(util::read_file(path));
    if (rec.value("format", "") != "coachstyle.encodings") {
        throw IoError("not an encodings file: " + path.string());
    }
    std::vector<EncodingEntry> entries;
    for (const auto& item : rec.at("entries")) {
        EncodingEntry e;
        e.key.coach_id = item.at("coach_id").get<std::string>();
        e.key.team_id = item.at("team_id").get<std::string>();
        e.encoding = item.at("encoding").get<std::vector<double>>();
        entries.push_back(std::move(e));
    }
    return EncodingIndex(std::move(entries), rec.at("model_fingerprint").get<std::string>());
}

std::string pairwise_csv(const EncodingIndex& index) {
    const auto m = pairwise_matrix(index);
    const auto& es = index.entries();
    std::string out = "key";
    for (const auto& e : es) out += "," + util::csv_field(e.key.coach_id + "/" + e.key.team_id);
    out += '\n';
    for (std::size_t i = 0; i < es.size(); ++i) {
        out += util::csv_field(es[i].key.coach_id + "/" + es[i].key.team_id);
        for (std::size_t j = 0; j < es.size(); ++j) out += "," + util::fmt_double(m[i][j]);
        out += '\n';
    }
    return out;
}

std::string pairwise_by_coach_csv(const EncodingIndex& index) {
    const auto m = pairwise_matrix(index);
    const auto& es = index.entries();
    std::vector<std::string> coaches;
    for (const auto& e : es) {
        if (coaches.empty() || coaches.back() != e.key.coach_id) {
            coaches.push_back(e.key.coach_id);
        }
    }
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < es.size(); ++i) members[es[i].key.coach_id].push_back(i);

    std::string out = "coach";
    for (const auto& c : coaches) out += "," + util::csv_field(c);
    out += '\n';
    for (const auto& a : coaches) {
        out += util::csv_field(a);
        for (const auto& b : coaches) {
            double sum = 0.0;
            long count = 0;
            for (std::size_t i : members[a]) {
                for (std::size_t j : members[b]) {
                    if (i == j) continue;
                    sum += m[i][j];
                    ++count;
                }
            }
            out += "," + util::fmt_double(count > 0 ? sum / static_cast<double>(count) : 0.0);
        }
        out += '\n';
    }
    return out;
}

std::string nearest_csv(const EncodingIndex& index, const Key& query, int top_n) {
    std::string out = "rank,coach_id,team_id,distance\n";
    int rank = 1;
    for (const auto& nb : nearest(index, query, top_n)) {
        out += util::csv_row({std::to_string(rank++), nb.key.coach_id, nb.key.team_id,
                              util::fmt_double(nb.dist)});
    }
    return out;
}

}  // namespace coachstyle::similarity
