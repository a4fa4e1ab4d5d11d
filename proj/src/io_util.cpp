#include "reslab/io_util.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "reslab/error.hpp"

namespace reslab {

std::string format_fixed(double value, int decimals) {
    if (value == 0.0) value = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s(buf);
    // Values that round to zero from below keep their sign in printf.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ReserveError(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw ReserveError(ErrorCode::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ReserveError(ErrorCode::Io, "cannot rename onto " + path.string());
    }
}

}  // namespace reslab
