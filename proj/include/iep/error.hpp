#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iep
{

// Malformed user input: syntax, schema, out-of-range references.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public input_error
{
    std::size_t _pos;

public:
    parse_error( const std::string& what, std::size_t pos )
        : input_error( what + " at position " + std::to_string( pos ) ), _pos{ pos } {}

    [[nodiscard]] std::size_t position() const { return _pos; }
};

} // namespace iep
