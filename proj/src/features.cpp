#include "coachstyle/features.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "coachstyle/util.hpp"

namespace coachstyle::features {

namespace {

constexpr const char* kFeatureNames[7] = {
    "duration", "avg_pass_length", "avg_y", "start_x",
    "speed_step_1", "speed_step_2", "speed_step_3",
};

// Path length traversed up to time tau along the piecewise-linear trajectory
// through event start positions. Zero-duration segments count once their
// timestamp is reached. Slot lengths are taken as differences of this
// function, so they sum exactly to the total path length.
double path_length_until(std::span<const model::Event> evs, std::span<const double> seg_len,
                         double tau) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < evs.size(); ++i) {
        const double t0 = evs[i].t;
        const double t1 = evs[i + 1].t;
        if (t1 <= tau) {
            total += seg_len[i];
        } else if (t0 < tau) {
            total += seg_len[i] * (tau - t0) / (t1 - t0);
        } else {
            break;
        }
    }
    return total;
}

}  // namespace

const char* FeatureVector::name(std::size_t i) { return kFeatureNames[i]; }

FeatureVector compute_features(const possession::Possession& p) {
    if (p.events.size() < 2 || !(p.end_t > p.start_t)) {
        throw DegeneratePossession("possession needs >= 2 events and positive duration");
    }
    FeatureVector f;
    f.duration = p.end_t - p.start_t;
    f.start_x = p.events.front().x;

    double pass_len_sum = 0.0;
    long pass_count = 0;
    double y_sum = 0.0;
    for (const model::Event& e : p.events) {
        y_sum += e.y;
        if (e.type == model::EventType::Pass && e.end_x && e.end_y) {
            pass_len_sum += meters(*e.end_x - e.x, *e.end_y - e.y);
            ++pass_count;
        }
    }
    f.avg_y = y_sum / static_cast<double>(p.events.size());
    f.avg_pass_length = pass_count > 0 ? pass_len_sum / static_cast<double>(pass_count) : 0.0;

    std::vector<double> seg_len(p.events.size() - 1);
    double total_len = 0.0;
    for (std::size_t i = 0; i + 1 < p.events.size(); ++i) {
        const auto& a = p.events[i];
        const auto& b = p.events[i + 1];
        seg_len[i] = meters(b.x - a.x, b.y - a.y);
        total_len += seg_len[i];
    }
    const double slot = f.duration / 3.0;
    const double c1 = path_length_until(p.events, seg_len, p.start_t + slot);
    const double c2 = path_length_until(p.events, seg_len, p.start_t + 2.0 * slot);
    f.speed_step_1 = c1 / slot;
    f.speed_step_2 = (c2 - c1) / slot;
    f.speed_step_3 = (total_len - c2) / slot;
    return f;
}

std::vector<FeatureVector> compute_features_batch(std::span<const possession::Possession> ps) {
    std::vector<FeatureVector> out(ps.size());
    const long long n = static_cast<long long>(ps.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = compute_features(ps[static_cast<std::size_t>(i)]);
    }
    return out;
}

ScalerParams fit_scaler(std::span<const FeatureVector> corpus) {
    if (corpus.empty()) throw EmptyCorpus("fit_scaler requires a non-empty corpus");
    ScalerParams s;
    s.corpus_size = static_cast<long>(corpus.size());
    const double n = static_cast<double>(corpus.size());
    for (std::size_t d = 0; d < 7; ++d) {
        const double sum =
            par::chunked_sum(corpus.size(), [&](std::size_t i) { return corpus[i].as_array()[d]; });
        const double mean = sum / n;
        const double sq = par::chunked_sum(corpus.size(), [&](std::size_t i) {
            const double diff = corpus[i].as_array()[d] - mean;
            return diff * diff;
        });
        s.mean[d] = mean;
        s.stddev[d] = std::sqrt(sq / n);
    }
    return s;
}

Vec7 apply_scaler(const FeatureVector& v, const ScalerParams& s) {
    Vec7 out{};
    const Vec7 raw = v.as_array();
    for (std::size_t d = 0; d < 7; ++d) {
        out[d] = s.stddev[d] > 0.0 ? (raw[d] - s.mean[d]) / s.stddev[d] : 0.0;
    }
    return out;
}

void save_scaler(const ScalerParams& s, const std::filesystem::path& path) {
    nlohmann::ordered_json rec;
    rec["format"] = "coachstyle.scaler";
    rec["version"] = 1;
    rec["corpus_size"] = s.corpus_size;
    rec["mean"] = s.mean;
    rec["stddev"] = s.stddev;
    util::write_file(path, rec.dump(2) + "\n");
}

ScalerParams load_scaler(const std::filesystem::path& path) {
    const auto rec = nlohmann::json::parse(util::read_file(path));
    if (rec.value("format", "") != "coachstyle.scaler") {
        throw IoError("not a scaler file: " + path.string());
    }
    ScalerParams s;
    s.corpus_size = rec.at("corpus_size").get<long>();
    for (std::size_t d = 0; d < 7; ++d) {
        s.mean[d] = rec.at("mean").at(d).get<double>();
        s.stddev[d] = rec.at("stddev").at(d).get<double>();
    }
    return s;
}

}  // namespace coachstyle::features
