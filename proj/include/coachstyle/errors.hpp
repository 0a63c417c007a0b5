#pragma once

#include <stdexcept>
#include <string>

namespace coachstyle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model
struct MalformedRecord : Error { using Error::Error; };
struct UnknownMatch : Error { using Error::Error; };
struct UnknownTeam : Error { using Error::Error; };

// possession
struct UnsortedInput : Error { using Error::Error; };
struct DegeneratePossession : Error { using Error::Error; };

// features / profiles / nn corpora
struct EmptyCorpus : Error { using Error::Error; };

// clustering
struct EmptyInput : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };

// profiles
struct NotAShot : Error { using Error::Error; };
struct NoMatches : Error { using Error::Error; };
struct ClusterCountMismatch : Error { using Error::Error; };

// nn
struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct StaleCache : Error { using Error::Error; };
struct NonFiniteLoss : Error { using Error::Error; };

// similarity
struct UnknownKey : Error { using Error::Error; };

// synth
struct InvalidConfig : Error { using Error::Error; };

// pipeline / io
struct IoError : Error { using Error::Error; };
struct StageError : Error {
    StageError(const std::string& stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_name(stage) {}
    std::string stage_name;
};

}  // namespace coachstyle
