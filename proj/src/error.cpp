#include "treefold/error.hpp"

namespace treefold {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::bad_magic: return "BadMagic";
    case Errc::geometry_invalid: return "GeometryInvalid";
    case Errc::truncated_image: return "TruncatedImage";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::null_block: return "NullBlock";
    case Errc::bad_type_tag: return "BadTypeTag";
    case Errc::size_overflow: return "SizeOverflow";
    case Errc::nonzero_padding: return "NonZeroPadding";
    case Errc::too_many_direct: return "TooManyDirect";
    case Errc::trailing_garbage: return "TrailingGarbage";
    case Errc::empty_name: return "EmptyName";
    case Errc::duplicate_name: return "DuplicateName";
    case Errc::bad_utf8: return "BadUtf8";
    case Errc::empty_element: return "EmptyElement";
    case Errc::name_contains_zero_byte: return "NameContainsZeroByte";
    case Errc::name_contains_slash: return "NameContainsSlash";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::dangling_block_ref: return "DanglingBlockRef";
    case Errc::short_block_list: return "ShortBlockList";
    case Errc::parse_error: return "ParseError";
    case Errc::orphan_declaration: return "OrphanDeclaration";
    case Errc::duplicate_path: return "DuplicatePath";
    case Errc::file_too_large: return "FileTooLarge";
    case Errc::image_full: return "ImageFull";
    case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

FsError::FsError(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) {
    throw FsError(code, message);
}

} // namespace treefold
