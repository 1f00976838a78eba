#ifndef COLIBRI_ERROR_HPP
#define COLIBRI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace colibri {

enum class errc {
    invalid_shape,
    arity_mismatch,
    not_a_partition,
    zero_mass,
    label_mismatch,
    budget_exceeded,
    no_valid_candidate,
    empty_cohort,
    zero_total,
    too_few_participants,
    length_mismatch,
    zero_norm,
    zero_variance,
    corrupt_model_file,
    empty_image,
    duplicate_id,
    decode_failure,
    unknown_label,
    parse_error,
    bad_config,
};

const char* errc_name(errc code);

/// Library-wide exception carrying a machine-checkable error code.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace colibri

#endif
