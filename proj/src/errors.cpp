#include "uagan/errors.hpp"

namespace uagan {

const char* to_string(FormatErrorCode code) noexcept {
    switch (code) {
        case FormatErrorCode::bad_magic: return "bad magic";
        case FormatErrorCode::version_mismatch: return "version mismatch";
        case FormatErrorCode::checksum_mismatch: return "checksum mismatch";
        case FormatErrorCode::truncated: return "truncated";
        case FormatErrorCode::malformed: return "malformed";
        case FormatErrorCode::io: return "i/o failure";
    }
    return "format error";
}

}  // namespace uagan
