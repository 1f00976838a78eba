#include "colibri/error.hpp"

namespace colibri {

const char* errc_name(errc code) {
    switch (code) {
    case errc::invalid_shape: return "InvalidShape";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::not_a_partition: return "NotAPartition";
    case errc::zero_mass: return "ZeroMass";
    case errc::label_mismatch: return "LabelMismatch";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::no_valid_candidate: return "NoValidCandidate";
    case errc::empty_cohort: return "EmptyCohort";
    case errc::zero_total: return "ZeroTotal";
    case errc::too_few_participants: return "TooFewParticipants";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::zero_norm: return "ZeroNorm";
    case errc::zero_variance: return "ZeroVariance";
    case errc::corrupt_model_file: return "CorruptModelFile";
    case errc::empty_image: return "EmptyImage";
    case errc::duplicate_id: return "DuplicateId";
    case errc::decode_failure: return "DecodeFailure";
    case errc::unknown_label: return "UnknownLabel";
    case errc::parse_error: return "ParseError";
    case errc::bad_config: return "BadConfig";
    }
    return "UnknownError";
}

} // namespace colibri
