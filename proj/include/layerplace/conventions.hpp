#ifndef LAYERPLACE_CONVENTIONS_HPP
#define LAYERPLACE_CONVENTIONS_HPP

// Evaluation conventions. The latency model has two published accounting
// styles and both are kept, selectable per problem:
//
//  - processing weight: `as_written` weighs layer j's compute by the
//    probability that layer j runs (reach_prob[j], every layer counted);
//    `next_layer_compat` weighs it by the probability the *next* layer runs
//    and drops the last layer, which is what the reference latency tables
//    for the bundled fixtures use.
//  - payload unit: `bits_exact` converts KB payloads at 8000 bits per KB;
//    `bytes_as_bits_compat` divides the byte count by the bit rate directly
//    (factor 1000), again matching the reference tables.
//  - include_processing: false drops compute time entirely, leaving the
//    transmission-only objective.

#include <string>
#include <string_view>

#include "layerplace/errors.hpp"

namespace layerplace {

enum class ProcessingWeight { as_written, next_layer_compat };
enum class PayloadUnit { bits_exact, bytes_as_bits_compat };

struct EvalConventions {
    ProcessingWeight processing_weight = ProcessingWeight::as_written;
    bool include_processing = true;
    PayloadUnit payload_unit = PayloadUnit::bits_exact;

    // The settings that reproduce the reference tables in one step.
    static EvalConventions compat() {
        return {ProcessingWeight::next_layer_compat, true, PayloadUnit::bytes_as_bits_compat};
    }

    bool operator==(const EvalConventions&) const = default;
};

inline std::string to_string(ProcessingWeight w) {
    return w == ProcessingWeight::as_written ? "as_written" : "next_layer_compat";
}

inline std::string to_string(PayloadUnit u) {
    return u == PayloadUnit::bits_exact ? "bits_exact" : "bytes_as_bits_compat";
}

inline ProcessingWeight processing_weight_from_string(std::string_view s) {
    if (s == "as_written") return ProcessingWeight::as_written;
    if (s == "next_layer_compat") return ProcessingWeight::next_layer_compat;
    throw Error("unknown processing_weight: " + std::string(s));
}

inline PayloadUnit payload_unit_from_string(std::string_view s) {
    if (s == "bits_exact") return PayloadUnit::bits_exact;
    if (s == "bytes_as_bits_compat") return PayloadUnit::bytes_as_bits_compat;
    throw Error("unknown payload_unit: " + std::string(s));
}

// Short tag used in report rows, e.g. "compat" / "as_written" / "no_proc".
std::string conventions_tag(const EvalConventions& ev);

} // namespace layerplace

#endif
