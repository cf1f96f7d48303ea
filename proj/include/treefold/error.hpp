#pragma once

#include <stdexcept>
#include <string>

namespace treefold {

// Every failure the library reports carries one of these codes so callers
// (and tests) can dispatch on the condition rather than parse messages.
enum class Errc {
    // blockdev
    bad_magic,
    geometry_invalid,
    truncated_image,
    out_of_range,
    null_block,
    // codec
    bad_type_tag,
    size_overflow,
    nonzero_padding,
    too_many_direct,
    trailing_garbage,
    empty_name,
    duplicate_name,
    bad_utf8,
    empty_element,
    name_contains_zero_byte,
    name_contains_slash,
    // alpha
    index_out_of_range,
    dangling_block_ref,
    short_block_list,
    // toolkit
    parse_error,
    orphan_declaration,
    duplicate_path,
    file_too_large,
    image_full,
    io_error,
};

const char* errc_name(Errc code);

class FsError : public std::runtime_error {
public:
    FsError(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

} // namespace treefold
